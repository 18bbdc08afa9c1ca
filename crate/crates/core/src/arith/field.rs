use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ArithError;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Legendre symbol (a | p) for odd prime `p`: 0, 1 or -1.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&d| legendre(d, p) == -1).expect("odd prime has a non-residue")
}

/// Square root modulo an odd prime by Tonelli-Shanks.
///
/// Returns the smaller of the two roots (as an integer in `[0, p)`), or
/// `None` when `a` is a non-residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = smallest_nonresidue(p);
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            // least i with t^(2^i) = 1
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = mul_mod(b, b, p);
            }
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(r.min(p - r))
}

/// Element of the prime field Z/pZ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2 && modulus < (1 << 63), "modulus out of range");
        Fp { value: value % modulus, modulus }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        Fp::new(((value as i128 % m + m) % m) as u64, modulus)
    }

    pub fn zero(modulus: u64) -> Self {
        Fp::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Fp::new(1, modulus)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Self {
        Fp { value: pow_mod(self.value, exp, self.modulus), modulus: self.modulus }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus is not prime");
        let m = self.modulus as i128;
        Some(Fp { value: ((t0 % m + m) % m) as u64, modulus: self.modulus })
    }

    fn check(self, other: Fp) {
        assert_eq!(self.modulus, other.modulus, "prime field modulus mismatch");
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let s = self.value + rhs.value;
        Fp { value: if s >= self.modulus { s - self.modulus } else { s }, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        Fp { value, modulus: self.modulus }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        self.check(rhs);
        Fp { value: mul_mod(self.value, rhs.value, self.modulus), modulus: self.modulus }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp { value: if self.value == 0 { 0 } else { self.modulus - self.value }, modulus: self.modulus }
    }
}

/// Square root of a field element, see [`sqrt_mod`].
pub fn mod_sqrt(a: Fp) -> Result<Option<Fp>, ArithError> {
    if a.modulus() == 2 {
        return Err(ArithError::UnsupportedModulus(2));
    }
    Ok(sqrt_mod(a.value(), a.modulus()).map(|r| Fp::new(r, a.modulus())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_mod_seven_by_enumeration() {
        // Oracle: all squares of residues 0..6.
        let squares: Vec<u64> = (0..7).map(|r| r * r % 7).collect();
        for a in 0..7u64 {
            let expected = (0..7).filter(|&r| squares[r as usize] == a).min();
            assert_eq!(sqrt_mod(a, 7), expected, "a = {a}");
        }
        assert_eq!(mod_sqrt(Fp::new(2, 7)).unwrap(), Some(Fp::new(3, 7)));
        assert_eq!(mod_sqrt(Fp::new(3, 7)).unwrap(), None);
    }

    #[test]
    fn sqrt_of_four_is_two() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 65537, 1_000_003] {
            let r = mod_sqrt(Fp::new(4, p)).unwrap().unwrap().value();
            assert_eq!(r, 2.min(p - 2) % p);
        }
    }

    #[test]
    fn mod_two_is_rejected() {
        assert_eq!(mod_sqrt(Fp::new(1, 2)), Err(ArithError::UnsupportedModulus(2)));
    }

    #[test]
    fn inverse_and_ops() {
        let p = 1_000_000_007;
        let a = Fp::new(123_456_789, p);
        assert_eq!(a * a.inv().unwrap(), Fp::one(p));
        assert_eq!(a - a, Fp::zero(p));
        assert_eq!(a + (-a), Fp::zero(p));
        assert_eq!(Fp::from_i64(-1, p).value(), p - 1);
        assert!(Fp::zero(p).inv().is_none());
    }

    proptest! {
        // p ≡ 1 mod 8 primes exercise the full Tonelli-Shanks loop.
        #[test]
        fn sqrt_squares_back(a in 0u64..1_000_000, pi in 0usize..6) {
            let p = [17u64, 41, 73, 97, 7681, 998_244_353][pi];
            let eu = pow_mod(a % p, (p - 1) / 2, p);
            match sqrt_mod(a, p) {
                Some(r) => {
                    prop_assert_eq!(mul_mod(r, r, p), a % p);
                    prop_assert!(r <= p - r || r == 0);
                    prop_assert!(eu != p - 1);
                }
                None => prop_assert_eq!(eu, p - 1),
            }
        }
    }
}
