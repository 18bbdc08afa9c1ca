use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pascal_sieve::arith::Integer;
use pascal_sieve::curve::CurveModel;
use pascal_sieve::diophantine::{check_equation, solve_small};
use pascal_sieve::jacobian::JacobianFp;

const PRIMES: [u64; 6] = [7, 11, 13, 17, 101, 997];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_multiplication_is_linear(pi in 0usize..PRIMES.len(), seed: u64, a in -500i64..500, b in -500i64..500) {
        let p = PRIMES[pi];
        let curve = CurveModel::pascal();
        let jac = JacobianFp::new(&curve, p).unwrap();
        let pts = curve.enumerate_points(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = jac.random_divisor(&pts, &mut rng);
        let e = jac.random_divisor(&pts, &mut rng);
        let (ia, ib) = (Integer::from(a), Integer::from(b));
        let lhs = jac.scalar_mul(&(&ia + &ib), &d).unwrap();
        let rhs = jac.add(&jac.scalar_mul(&ia, &d).unwrap(), &jac.scalar_mul(&ib, &d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = jac.scalar_mul(&ia, &jac.add(&d, &e).unwrap()).unwrap();
        let split = jac.add(&jac.scalar_mul(&ia, &d).unwrap(), &jac.scalar_mul(&ia, &e).unwrap()).unwrap();
        prop_assert_eq!(sum, split);
    }

    #[test]
    fn sums_stay_reduced(pi in 0usize..PRIMES.len(), seed: u64) {
        let p = PRIMES[pi];
        let curve = CurveModel::pascal();
        let jac = JacobianFp::new(&curve, p).unwrap();
        let pts = curve.enumerate_points(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = jac.random_divisor(&pts, &mut rng);
        let e = jac.random_divisor(&pts, &mut rng);
        let s = jac.add(&d, &e).unwrap();
        prop_assert!(jac.is_valid(&s));
        prop_assert!(s.weight() <= 2);
    }

    #[test]
    fn solve_small_agrees_with_the_equation(bound in 0i64..60) {
        let sols = solve_small(&Integer::from(bound));
        for s in &sols {
            prop_assert!(check_equation(&s.x, &s.y));
        }
        for x in -bound..=bound {
            let hits = sols.iter().filter(|s| s.x == Integer::from(x)).count();
            prop_assert!(hits == 0 || hits == 2);
        }
    }
}
