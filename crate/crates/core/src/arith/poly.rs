use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{mul_mod, Fp};
use super::ArithError;

/// Dense univariate polynomial over F_p, coefficients in ascending degree.
///
/// Trailing zeros are never stored, so the zero polynomial has an empty
/// coefficient list and [`PolyFp::degree`] returns `None`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFp {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Self {
        let mut p = PolyFp { modulus, coeffs: coeffs.into_iter().map(|c| c % modulus).collect() };
        p.trim();
        p
    }

    pub fn from_i64s(modulus: u64, coeffs: &[i64]) -> Self {
        PolyFp::new(modulus, coeffs.iter().map(|&c| Fp::from_i64(c, modulus).value()).collect())
    }

    pub fn zero(modulus: u64) -> Self {
        PolyFp { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: u64) -> Self {
        PolyFp::constant(Fp::one(modulus))
    }

    pub fn constant(c: Fp) -> Self {
        PolyFp::new(c.modulus(), vec![c.value()])
    }

    /// The monic linear polynomial `T - root`.
    pub fn linear_root(root: Fp) -> Self {
        PolyFp::new(root.modulus(), vec![(-root).value(), 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `T^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Fp {
        Fp::new(self.coeffs.get(i).copied().unwrap_or(0), self.modulus)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> Fp {
        Fp::new(self.coeffs.last().copied().unwrap_or(0), self.modulus)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn scale(&self, c: Fp) -> Self {
        assert_eq!(c.modulus(), self.modulus, "prime field modulus mismatch");
        PolyFp::new(self.modulus, self.coeffs.iter().map(|&a| mul_mod(a, c.value(), self.modulus)).collect())
    }

    /// Scale to leading coefficient one. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.leading().inv().expect("nonzero leading coefficient"))
    }

    pub fn eval(&self, x: Fp) -> Result<Fp, ArithError> {
        if x.modulus() != self.modulus {
            return Err(ArithError::ModulusMismatch(self.modulus, x.modulus()));
        }
        Ok(self.eval_unchecked(x.value()))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: u64) -> Fp {
        let p = self.modulus;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, p) + c) % p;
        }
        Fp::new(acc, p)
    }

    fn check(&self, other: &PolyFp) -> Result<(), ArithError> {
        if self.modulus != other.modulus {
            return Err(ArithError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &PolyFp) -> Result<(PolyFp, PolyFp), ArithError> {
        self.check(divisor)?;
        let Some(db) = divisor.degree() else {
            return Err(ArithError::DivisionByZero);
        };
        let p = self.modulus;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((PolyFp::zero(p), self.clone()));
        }
        let inv_lead = divisor.leading().inv().expect("nonzero leading coefficient").value();
        let mut quot = vec![0u64; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = mul_mod(rem[i], inv_lead, p);
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(c, b, p);
                let slot = &mut rem[i - db + j];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
        }
        rem.truncate(db);
        Ok((PolyFp::new(p, quot), PolyFp::new(p, rem)))
    }

    /// Remainder modulo `divisor`. Panics on a zero or mismatched divisor.
    pub fn rem(&self, divisor: &PolyFp) -> PolyFp {
        self.divmod(divisor).expect("valid divisor").1
    }

    /// Quotient of a division known to be exact.
    pub fn div_exact(&self, divisor: &PolyFp) -> PolyFp {
        let (q, r) = self.divmod(divisor).expect("valid divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &PolyFp) -> Result<PolyFp, ArithError> {
        Ok(self.xgcd(other)?.0)
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &PolyFp) -> Result<(PolyFp, PolyFp, PolyFp), ArithError> {
        self.check(other)?;
        let p = self.modulus;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyFp::one(p), PolyFp::zero(p));
        let (mut t0, mut t1) = (PolyFp::zero(p), PolyFp::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let k = r0.leading().inv().expect("nonzero");
        Ok((r0.scale(k), s0.scale(k), t0.scale(k)))
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.modulus)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{c}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyFp {
    type Output = PolyFp;
    fn add(self, rhs: &PolyFp) -> PolyFp {
        self.check(rhs).expect("polynomial modulus mismatch");
        let p = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let s = self.coeffs.get(i).copied().unwrap_or(0) + rhs.coeffs.get(i).copied().unwrap_or(0);
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        PolyFp::new(p, c)
    }
}

impl Sub for &PolyFp {
    type Output = PolyFp;
    fn sub(self, rhs: &PolyFp) -> PolyFp {
        self + &(-rhs)
    }
}

impl Neg for &PolyFp {
    type Output = PolyFp;
    fn neg(self) -> PolyFp {
        let p = self.modulus;
        PolyFp { modulus: p, coeffs: self.coeffs.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect() }
    }
}

impl Mul for &PolyFp {
    type Output = PolyFp;
    fn mul(self, rhs: &PolyFp) -> PolyFp {
        self.check(rhs).expect("polynomial modulus mismatch");
        let p = self.modulus;
        if self.is_zero() || rhs.is_zero() {
            return PolyFp::zero(p);
        }
        let mut acc = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pp;
            }
        }
        PolyFp::new(p, acc.into_iter().map(|c| c as u64).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyFp {
            type Output = PolyFp;
            fn $m(self, rhs: PolyFp) -> PolyFp {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn poly_divmod(a: &PolyFp, b: &PolyFp) -> Result<(PolyFp, PolyFp), ArithError> {
    a.divmod(b)
}

pub fn poly_gcd(a: &PolyFp, b: &PolyFp) -> Result<PolyFp, ArithError> {
    a.gcd(b)
}

pub fn poly_xgcd(a: &PolyFp, b: &PolyFp) -> Result<(PolyFp, PolyFp, PolyFp), ArithError> {
    a.xgcd(b)
}

pub fn poly_eval(a: &PolyFp, x: Fp) -> Result<Fp, ArithError> {
    a.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, p: u64, max_deg: usize) -> PolyFp {
        let d = rng.gen_range(0..=max_deg);
        PolyFp::new(p, (0..=d).map(|_| rng.gen_range(0..p)).collect())
    }

    #[test]
    fn unit_divisor() {
        let a = PolyFp::from_i64s(7, &[1, 2, 3, 4]);
        let (q, r) = a.divmod(&PolyFp::one(7)).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let a = PolyFp::from_i64s(11, &[3, 0, 5]);
        assert_eq!(a.gcd(&PolyFp::zero(11)).unwrap(), a.monic());
        assert!(a.gcd(&PolyFp::zero(11)).unwrap().is_monic());
    }

    #[test]
    fn eval_t_squared_minus_one() {
        let a = PolyFp::from_i64s(7, &[-1, 0, 1]);
        assert_eq!(a.eval(Fp::new(4, 7)).unwrap(), Fp::new(1, 7));
    }

    #[test]
    fn errors() {
        let a = PolyFp::from_i64s(7, &[1, 1]);
        assert_eq!(a.divmod(&PolyFp::zero(7)), Err(ArithError::DivisionByZero));
        assert_eq!(a.divmod(&PolyFp::one(11)), Err(ArithError::ModulusMismatch(7, 11)));
        assert!(a.eval(Fp::new(1, 5)).is_err());
        assert!(a.xgcd(&PolyFp::one(5)).is_err());
        assert_eq!(PolyFp::zero(7).degree(), None);
        assert_eq!(PolyFp::from_i64s(7, &[1, 0, 0, 7]).degree(), Some(0));
    }

    #[test]
    fn divmod_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 5, 7, 11, 13] {
            for _ in 0..1000 {
                let a = random_poly(&mut rng, p, 9);
                let b = random_poly(&mut rng, p, 5);
                if b.is_zero() {
                    continue;
                }
                let (q, r) = a.divmod(&b).unwrap();
                assert_eq!(&(&q * &b) + &r, a);
                assert!(r.degree() < b.degree());
            }
        }
    }

    #[test]
    fn xgcd_bezout_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [3u64, 7, 101] {
            for _ in 0..300 {
                let a = random_poly(&mut rng, p, 6);
                let b = random_poly(&mut rng, p, 6);
                let (g, s, t) = a.xgcd(&b).unwrap();
                assert_eq!(&(&s * &a) + &(&t * &b), g);
                if !g.is_zero() {
                    assert!(g.is_monic());
                    assert!(a.rem(&g).is_zero());
                    assert!(b.rem(&g).is_zero());
                }
            }
        }
    }
}
