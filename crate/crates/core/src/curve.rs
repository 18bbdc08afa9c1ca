//! The genus-2 curve behind `60 y (y-1) = x (x-1)(x-2)(x-3)(x-4)` and
//! exhaustive point counts over F_p and F_{p^2}.
//!
//! Completing the square gives `(30y - 15)^2 = 15 x (x-1)(x-2)(x-3)(x-4) + 225`.
//! Scaling by `15^4` with `X = 15 x`, `Y = 225 (30 y - 15)` turns this into the
//! monic odd-degree model
//!
//! ```text
//! Y^2 = g(X) = X (X - 15)(X - 30)(X - 45)(X - 60) + 11390625
//! ```
//!
//! which has a single point at infinity.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{
    factorize, is_prime_u64, legendre, mul_mod, smallest_nonresidue, sqrt_mod, Fp, Integer, ModFloorU64,
    PolyFp,
};
use crate::diophantine::{solve_small, EquationSolution};

/// Default ceiling on `p` for the `O(p^2)` count over F_{p^2}.
pub const DEFAULT_EXT_CEILING: u64 = 3000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("{0} is a bad prime for this curve")]
    BadPrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the point-count ceiling {ceiling}")]
    CeilingExceeded { p: u64, ceiling: u64 },
    #[error("invalid curve model: {0}")]
    InvalidModel(String),
}

/// A curve `Y^2 = f(X)` with `f` a monic squarefree quintic over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    coeffs: Vec<Integer>,
    discriminant: Integer,
    bad_primes: Vec<Integer>,
}

/// Determinant of a square integer matrix (Bareiss elimination, exact).
fn determinant(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    let mut sign = Integer::one();
    let mut prev = Integer::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Integer::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two integer polynomials (ascending coefficients).
pub fn resultant(a: &[Integer], b: &[Integer]) -> Integer {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    let mut rows = Vec::with_capacity(n);
    for i in 0..db {
        let mut row = vec![Integer::zero(); n];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![Integer::zero(); n];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Discriminant of a polynomial of degree `n >= 1`:
/// `(-1)^(n(n-1)/2) res(f, f') / lc(f)`.
pub fn discriminant(f: &[Integer]) -> Integer {
    let n = f.len() - 1;
    let deriv: Vec<Integer> = f.iter().enumerate().skip(1).map(|(i, c)| c * Integer::from(i)).collect();
    let r = resultant(f, &deriv) / &f[n];
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

impl CurveModel {
    /// `g(X) = X (X-15)(X-30)(X-45)(X-60) + 11390625`; bad primes divide
    /// `2 * 3 * 5 * disc(g)`.
    pub fn pascal() -> Self {
        let mut coeffs = vec![Integer::one()];
        for root in [0i64, 15, 30, 45, 60] {
            // multiply by (X - root)
            let mut next = vec![Integer::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * Integer::from(root);
            }
            coeffs = next;
        }
        coeffs[0] += Integer::from(11_390_625u64);
        CurveModel::with_prefactor(coeffs, 30).expect("the Pascal quintic is squarefree")
    }

    /// A general monic squarefree quintic; bad primes divide `2 * disc(f)`.
    pub fn from_coeffs(coeffs: Vec<Integer>) -> Result<Self, CurveError> {
        CurveModel::with_prefactor(coeffs, 2)
    }

    fn with_prefactor(coeffs: Vec<Integer>, prefactor: u64) -> Result<Self, CurveError> {
        if coeffs.len() != 6 || !coeffs[5].is_one() {
            return Err(CurveError::InvalidModel("expected a monic quintic".into()));
        }
        let discriminant = discriminant(&coeffs);
        if discriminant.is_zero() {
            return Err(CurveError::InvalidModel("quintic is not squarefree".into()));
        }
        let bad = (&discriminant * Integer::from(prefactor)).abs();
        let bad_primes = factorize(&bad)
            .map_err(|e| CurveError::InvalidModel(e.to_string()))?
            .into_iter()
            .map(|(q, _)| q)
            .collect();
        Ok(CurveModel { coeffs, discriminant, bad_primes })
    }

    /// Coefficients of `g`, ascending degree.
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn discriminant(&self) -> &Integer {
        &self.discriminant
    }

    /// Ascending list of bad primes.
    pub fn bad_primes(&self) -> &[Integer] {
        &self.bad_primes
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        is_prime_u64(p) && !self.bad_primes.iter().any(|q| q == &Integer::from(p))
    }

    pub fn check_prime(&self, p: u64) -> Result<(), CurveError> {
        if !is_prime_u64(p) {
            return Err(CurveError::NotPrime(p));
        }
        if !self.is_good_prime(p) {
            return Err(CurveError::BadPrime(p));
        }
        Ok(())
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        self.coeffs.iter().rev().fold(Integer::zero(), |acc, c| acc * x + c)
    }

    /// Integer point test for `Y^2 = g(X)`.
    pub fn contains(&self, x: &Integer, y: &Integer) -> bool {
        y * y == self.eval(x)
    }

    /// `g` reduced modulo `p`.
    pub fn reduce(&self, p: u64) -> PolyFp {
        PolyFp::new(p, self.coeffs.iter().map(|c| c.mod_floor_u64(p)).collect())
    }

    /// All F_p-points: affine points by ascending `X` (smaller `Y` first), then
    /// the point at infinity.
    pub fn enumerate_points(&self, p: u64) -> Result<Vec<CurvePointFp>, CurveError> {
        self.check_prime(p)?;
        let g = self.reduce(p);
        let mut out = Vec::with_capacity(p as usize + 2);
        for x in 0..p {
            let r = g.eval_unchecked(x).value();
            if let Some(s) = sqrt_mod(r, p) {
                out.push(CurvePointFp::Affine { x: Fp::new(x, p), y: Fp::new(s, p) });
                if s != 0 {
                    out.push(CurvePointFp::Affine { x: Fp::new(x, p), y: Fp::new(p - s, p) });
                }
            }
        }
        out.push(CurvePointFp::Infinity);
        Ok(out)
    }

    /// `#C(F_p)` via the quadratic character, without listing points.
    pub fn count_points(&self, p: u64) -> Result<u64, CurveError> {
        self.check_prime(p)?;
        let g = self.reduce(p);
        let affine: i64 = (0..p).map(|x| 1 + legendre(g.eval_unchecked(x).value(), p) as i64).sum();
        Ok(affine as u64 + 1)
    }

    /// `#C(F_{p^2})`, with `F_{p^2} = F_p[t] / (t^2 - d)` for the smallest
    /// non-residue `d`.
    pub fn count_points_quadratic_ext(&self, p: u64, ceiling: u64) -> Result<u64, CurveError> {
        self.check_prime(p)?;
        if p > ceiling {
            return Err(CurveError::CeilingExceeded { p, ceiling });
        }
        let d = smallest_nonresidue(p);
        let g: Vec<u64> = self.reduce(p).coeffs().to_vec();
        let mut total: u64 = 1;
        for a in 0..p {
            for b in 0..p {
                // Horner in F_p[t]/(t^2 - d)
                let (mut ra, mut rb) = (0u64, 0u64);
                for &c in g.iter().rev() {
                    let na = (mul_mod(ra, a, p) + mul_mod(mul_mod(rb, b, p), d, p) + c) % p;
                    let nb = (mul_mod(ra, b, p) + mul_mod(rb, a, p)) % p;
                    ra = na;
                    rb = nb;
                }
                // z^((p^2-1)/2) = N(z)^((p-1)/2)
                let norm = (mul_mod(ra, ra, p) + p - mul_mod(d, mul_mod(rb, rb, p), p)) % p;
                total += if ra == 0 && rb == 0 {
                    1
                } else if legendre(norm, p) == 1 {
                    2
                } else {
                    0
                };
            }
        }
        Ok(total)
    }

    pub fn local_counts(&self, p: u64, ceiling: u64) -> Result<LocalCounts, CurveError> {
        Ok(LocalCounts {
            p,
            n1: self.count_points(p)?,
            n2: self.count_points_quadratic_ext(p, ceiling)?,
        })
    }
}

/// A point of `C(F_p)` on the odd-degree model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePointFp {
    Affine { x: Fp, y: Fp },
    Infinity,
}

impl CurvePointFp {
    pub fn on_curve(&self, g: &PolyFp) -> bool {
        match *self {
            CurvePointFp::Infinity => true,
            CurvePointFp::Affine { x, y } => y * y == g.eval_unchecked(x.value()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalCounts {
    pub p: u64,
    pub n1: u64,
    pub n2: u64,
}

impl LocalCounts {
    /// `|n1 - (p+1)| <= 4 sqrt(p)` and `|n2 - (p^2+1)| <= 4p`, exactly.
    pub fn satisfies_weil_bounds(&self) -> bool {
        let p = self.p as i128;
        let t1 = self.n1 as i128 - p - 1;
        let t2 = self.n2 as i128 - p * p - 1;
        t1 * t1 <= 16 * p && t2.abs() <= 4 * p
    }
}

/// `(x, y) -> (15 x, 225 (30 y - 15))`.
pub fn to_model(x: &Integer, y: &Integer) -> (Integer, Integer) {
    (x * 15u32, (y * 30u32 - 15u32) * 225u32)
}

/// Inverse of [`to_model`]; `None` unless `15 | X` and `6750 | Y + 3375`.
pub fn from_model(big_x: &Integer, big_y: &Integer) -> Option<(Integer, Integer)> {
    let fifteen = Integer::from(15);
    let step = Integer::from(6750);
    let shifted = big_y + 3375u32;
    if !(big_x % &fifteen).is_zero() || !(&shifted % &step).is_zero() {
        return None;
    }
    Some((big_x / fifteen, shifted / step))
}

/// The integral solutions with `|x| <= 25`, which are the ten known `x`
/// values with both `y` and `1 - y`.
pub fn known_solutions() -> Vec<EquationSolution> {
    solve_small(&Integer::from(25))
}

/// [`known_solutions`] mapped onto the model.
pub fn known_model_points() -> Vec<(Integer, Integer)> {
    known_solutions().iter().map(|s| to_model(&s.x, &s.y)).collect()
}

/// Good primes in `[lo, hi]` for `curve`.
pub fn good_primes(curve: &CurveModel, lo: u64, hi: u64) -> Vec<u64> {
    crate::arith::primes_up_to(hi).into_iter().filter(|&p| p >= lo && curve.is_good_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::check_equation;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn pascal_coefficients() {
        let c = CurveModel::pascal();
        let expected = [11_390_625i64, 1_215_000, -168_750, 7875, -150, 1];
        assert_eq!(c.coeffs(), expected.map(int).as_slice());
        assert_eq!(c.eval(&int(0)), int(3375 * 3375));
    }

    #[test]
    fn discriminant_and_bad_primes() {
        let c = CurveModel::pascal();
        // oracle: product of squared root differences is not available over Z,
        // so cross-check the resultant on a quadratic and a cubic first.
        assert_eq!(discriminant(&[int(-1), int(0), int(1)]), int(4));
        // x^3 - 2: disc = -27 * 4 = -108
        assert_eq!(discriminant(&[int(-2), int(0), int(0), int(1)]), int(-108));
        assert!(!c.discriminant().is_zero());
        assert_eq!(c.discriminant(), &"49080313491737572574615478515625".parse::<Integer>().unwrap());
        let bad: Vec<u64> = c.bad_primes().iter().map(|q| q.to_u64().unwrap()).collect();
        assert_eq!(bad, vec![2, 3, 5, 16_399_841]);
        assert!(!c.is_good_prime(2) && !c.is_good_prime(3) && !c.is_good_prime(5));
        assert!(c.is_good_prime(7));
        assert!(c.enumerate_points(5).is_err());
        assert_eq!(c.count_points(9), Err(CurveError::NotPrime(9)));
    }

    #[test]
    fn bad_primes_are_exactly_where_g_is_not_squarefree() {
        let c = CurveModel::pascal();
        for p in crate::arith::primes_up_to(400) {
            if p <= 5 {
                continue;
            }
            let g = c.reduce(p);
            let dg = PolyFp::new(p, (1..6).map(|i| (g.coeff(i) * Fp::new(i as u64, p)).value()).collect());
            let sqfree = g.gcd(&dg).unwrap().is_one();
            assert_eq!(sqfree, c.is_good_prime(p), "p = {p}");
        }
    }

    #[test]
    fn model_maps() {
        let c = CurveModel::pascal();
        assert_eq!(to_model(&int(15), &int(78)), (int(225), int(523_125)));
        assert!(c.contains(&int(225), &int(523_125)));
        assert_eq!(to_model(&int(0), &int(0)), (int(0), int(-3375)));
        assert_eq!(to_model(&int(19), &int(153)), (int(285), int(1_029_375)));
        assert!(c.contains(&int(285), &int(1_029_375)));
        assert_eq!(from_model(&int(285), &int(1_029_375)), Some((int(19), int(153))));
        assert_eq!(from_model(&int(286), &int(1_029_375)), None);
        assert_eq!(from_model(&int(285), &int(1_029_376)), None);
    }

    #[test]
    fn model_equivalence_random() {
        let c = CurveModel::pascal();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut sols = known_solutions();
        for _ in 0..10_000 {
            let x = int(rng.gen_range(-300..300));
            let y = int(rng.gen_range(-20_000..20_000));
            sols.push(crate::diophantine::EquationSolution { x, y });
        }
        for s in sols {
            let (mx, my) = to_model(&s.x, &s.y);
            assert_eq!(check_equation(&s.x, &s.y), c.contains(&mx, &my));
            assert_eq!(from_model(&mx, &my), Some((s.x.clone(), s.y.clone())));
        }
    }

    #[test]
    fn expansion_identity() {
        // Y^2 - g(X) = 15^5 * (60 (y^2 - y) - x(x-1)(x-2)(x-3)(x-4)) identically;
        // checked on enough points to pin a degree-5 polynomial in x per y.
        let c = CurveModel::pascal();
        for x in -8..8 {
            for y in -4..4 {
                let (mx, my) = to_model(&int(x), &int(y));
                let lhs = &my * &my - c.eval(&mx);
                let r: i64 = (0..5).map(|j| x - j).product();
                let rhs = int(15i64.pow(5)) * (int(60) * int(y * y - y) - int(r));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn p7_by_brute_force() {
        let c = CurveModel::pascal();
        // oracle: test every (X, Y) in F_7^2
        let g = c.reduce(7);
        let mut brute = 1; // infinity
        for x in 0..7 {
            for y in 0..7 {
                if mul_mod(y, y, 7) == g.eval_unchecked(x).value() {
                    brute += 1;
                }
            }
        }
        let pts = c.enumerate_points(7).unwrap();
        assert_eq!(pts.len(), brute);
        assert_eq!(c.count_points(7).unwrap(), brute as u64);
        assert_eq!(brute, N1_AT_7);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts.iter().all(|pt| pt.on_curve(&g)));
    }

    /// Frozen from the brute-force enumeration above.
    const N1_AT_7: usize = 14;

    #[test]
    fn p7_quadratic_extension_by_brute_force() {
        let c = CurveModel::pascal();
        // oracle: F_49 as pairs with t^2 = 3 (3 is the least non-residue mod 7),
        // testing every (X, Y) in F_49^2 directly.
        let p = 7u64;
        assert_eq!(smallest_nonresidue(p), 3);
        let mul = |(a, b): (u64, u64), (c2, d2): (u64, u64)| ((a * c2 + 3 * b * d2) % p, (a * d2 + b * c2) % p);
        let g = c.reduce(p);
        let eval = |x: (u64, u64)| {
            let mut acc = (0u64, 0u64);
            for &co in g.coeffs().iter().rev() {
                let m = mul(acc, x);
                acc = ((m.0 + co) % p, m.1);
            }
            acc
        };
        let mut brute = 1u64;
        for xa in 0..p {
            for xb in 0..p {
                let gx = eval((xa, xb));
                for ya in 0..p {
                    for yb in 0..p {
                        if mul((ya, yb), (ya, yb)) == gx {
                            brute += 1;
                        }
                    }
                }
            }
        }
        let n2 = c.count_points_quadratic_ext(p, DEFAULT_EXT_CEILING).unwrap();
        assert_eq!(n2, brute);
        assert!(n2 >= c.count_points(p).unwrap());
        assert_eq!(n2, N2_AT_7);
    }

    /// Frozen from the F_49 brute force above.
    const N2_AT_7: u64 = 58;

    #[test]
    fn ceiling_enforced() {
        let c = CurveModel::pascal();
        assert_eq!(
            c.count_points_quadratic_ext(3001, DEFAULT_EXT_CEILING),
            Err(CurveError::CeilingExceeded { p: 3001, ceiling: 3000 })
        );
    }

    #[test]
    fn enumeration_matches_character_sum_and_weil() {
        let c = CurveModel::pascal();
        for p in good_primes(&c, 7, 300) {
            let pts = c.enumerate_points(p).unwrap();
            assert_eq!(pts.len() as u64, c.count_points(p).unwrap());
            let g = c.reduce(p);
            let roots = (0..p).filter(|&x| g.eval_unchecked(x).is_zero()).count();
            let y_zero = pts
                .iter()
                .filter(|pt| matches!(pt, CurvePointFp::Affine { y, .. } if y.is_zero()))
                .count();
            assert_eq!(roots, y_zero);
            let lc = c.local_counts(p, DEFAULT_EXT_CEILING).unwrap();
            assert!(lc.satisfies_weil_bounds(), "{lc:?}");
            assert!(lc.n2 >= lc.n1);
        }
    }

    #[test]
    fn general_quintic_models() {
        let bad = CurveModel::from_coeffs(vec![int(0), int(0), int(0), int(0), int(0), int(1)]);
        assert!(matches!(bad, Err(CurveError::InvalidModel(_))));
        assert!(CurveModel::from_coeffs(vec![int(1), int(2)]).is_err());
        let c = CurveModel::from_coeffs(vec![int(1), int(-1), int(0), int(0), int(0), int(1)]).unwrap();
        assert!(c.bad_primes().contains(&int(2)));
    }
}
