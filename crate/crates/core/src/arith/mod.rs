//! Exact arithmetic substrate: big integers and rationals, prime fields,
//! polynomials over prime fields, and integer factorization.
//!
//! Nothing in here touches floating point. Prime-field elements use machine
//! words (moduli below 2^63, products formed in `u128`); everything that
//! can grow without bound is a [`num_bigint::BigInt`].

mod factor;
mod field;
mod poly;

pub use factor::{factorize, factorize_u64, is_prime_u64, primes_up_to};
pub use field::{legendre, mod_sqrt, mul_mod, pow_mod, smallest_nonresidue, sqrt_mod, Fp};
pub use poly::{poly_divmod, poly_eval, poly_gcd, poly_xgcd, PolyFp};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Exact rational, always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported modulus {0}")]
    UnsupportedModulus(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// The binomial coefficient C(n, k). Zero when `k > n`.
pub fn binomial(n: &Integer, k: &Integer) -> Result<Integer, ArithError> {
    if n.is_negative() || k.is_negative() {
        return Err(ArithError::Domain(format!("binomial({n}, {k}) needs n, k >= 0")));
    }
    if k > n {
        return Ok(Integer::zero());
    }
    let k_small = std::cmp::min(k.clone(), n - k);
    let k_small = k_small
        .to_u64()
        .ok_or_else(|| ArithError::Domain(format!("binomial({n}, {k}) is too large to expand")))?;
    let mut acc = Integer::one();
    // acc = C(n - k_small + i, i) after step i, always an integer.
    let base = n - Integer::from(k_small);
    for i in 1..=k_small {
        acc *= &base + Integer::from(i);
        acc /= Integer::from(i);
    }
    Ok(acc)
}

/// Convenience wrapper for small arguments.
pub fn binom(n: u64, k: u64) -> Integer {
    binomial(&Integer::from(n), &Integer::from(k)).expect("non-negative arguments")
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &Integer) -> Option<Integer> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Floor square root on `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = ((n as f64).sqrt() as u128).min(u64::MAX as u128);
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Primality test; deterministic below 3.3 * 10^24.
pub fn is_prime(n: &Integer) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => {
            let f = factorize(n).unwrap_or_default();
            f.len() == 1 && f[0].1 == 1
        }
    }
}

/// Reduce a rational modulo `p`. Fails when `p` divides the denominator.
pub fn reduce_rational(q: &Rational, p: u64) -> Option<Fp> {
    let den = q.denom().mod_floor_u64(p);
    if den == 0 {
        return None;
    }
    let num = q.numer().mod_floor_u64(p);
    Some(Fp::new(num, p) * Fp::new(den, p).inv().expect("nonzero denominator"))
}

/// Floor remainder of a big integer by a word modulus.
pub trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for Integer {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        let r = self % Integer::from(m);
        let r = if r.is_negative() { r + Integer::from(m) } else { r };
        r.to_u64().expect("remainder below modulus")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_known_values() {
        assert_eq!(binom(16, 2), Integer::from(120));
        assert_eq!(binom(10, 3), Integer::from(120));
        assert_eq!(binom(153, 2), Integer::from(11628));
        assert_eq!(binom(19, 5), Integer::from(11628));
        for n in 0..20 {
            assert_eq!(binom(n, 0), Integer::one());
        }
        assert_eq!(binom(3, 7), Integer::zero());
    }

    #[test]
    fn binomial_rejects_negative() {
        assert!(binomial(&Integer::from(-1), &Integer::from(0)).is_err());
        assert!(binomial(&Integer::from(5), &Integer::from(-2)).is_err());
    }

    proptest! {
        #[test]
        fn pascal_recurrence(n in 1u64..=60, k_frac in 0.0f64..1.0) {
            let k = ((n as f64) * k_frac) as u64;
            prop_assume!(k >= 1);
            prop_assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
        }
    }

    #[test]
    fn exact_sqrt_cases() {
        assert_eq!(exact_sqrt(&Integer::from(11390625)), Some(Integer::from(3375)));
        assert_eq!(exact_sqrt(&Integer::from(2)), None);
        assert_eq!(exact_sqrt(&Integer::from(-4)), None);
        assert_eq!(isqrt_u128(u128::MAX), u64::MAX as u128);
        assert_eq!(isqrt_u128(99), 9);
    }

    #[test]
    fn rational_reduction() {
        let q = Rational::new(Integer::from(3), Integer::from(4));
        let r = reduce_rational(&q, 7).unwrap();
        assert_eq!(r * Fp::new(4, 7), Fp::new(3, 7));
        let bad = Rational::new(Integer::from(1), Integer::from(14));
        assert!(reduce_rational(&bad, 7).is_none());
        let neg = Rational::from_integer(Integer::from(-3375));
        assert_eq!(reduce_rational(&neg, 7).unwrap().value(), (7 * 1000 - 3375) % 7);
    }
}
