//! Short Weierstrass curves `y^2 = x^3 + a x + b` over Q and over F_p, used
//! for the rank-one demo where generators can be found by naive search.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{exact_sqrt, legendre, reduce_rational, sqrt_mod, Fp, Integer, ModFloorU64, Rational};
use crate::group::FiniteGroup;

use super::SieveError;

/// Search bound for the torsion check: no rational torsion point has order
/// above 12.
const MAZUR_BOUND: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl RationalPoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        RationalPoint::Affine { x, y }
    }

    pub fn from_integers(x: i64, y: i64) -> Self {
        RationalPoint::Affine { x: Rational::from_integer(x.into()), y: Rational::from_integer(y.into()) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    pub fn is_integral(&self) -> bool {
        match self {
            RationalPoint::Infinity => false,
            RationalPoint::Affine { x, y } => x.is_integer() && y.is_integer(),
        }
    }

    /// Denominator of `x`, or 1 at infinity.
    pub fn x_denominator(&self) -> Integer {
        match self {
            RationalPoint::Infinity => Integer::one(),
            RationalPoint::Affine { x, .. } => x.denom().clone(),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => f.write_str("O"),
            RationalPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: Integer,
    b: Integer,
    discriminant: Integer,
}

impl WeierstrassCurve {
    pub fn new(a: Integer, b: Integer) -> Result<Self, SieveError> {
        let discriminant = -Integer::from(16) * (Integer::from(4) * &a * &a * &a + Integer::from(27) * &b * &b);
        if discriminant.is_zero() {
            return Err(SieveError::SingularCurve);
        }
        Ok(WeierstrassCurve { a, b, discriminant })
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    /// `-16 (4 a^3 + 27 b^2)`.
    pub fn discriminant(&self) -> &Integer {
        &self.discriminant
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        crate::arith::is_prime_u64(p) && self.discriminant.mod_floor_u64(p) != 0
    }

    fn rhs(&self, x: &Rational) -> Rational {
        x * x * x + Rational::from_integer(self.a.clone()) * x + Rational::from_integer(self.b.clone())
    }

    pub fn contains(&self, pt: &RationalPoint) -> bool {
        match pt {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    pub fn negate(&self, pt: &RationalPoint) -> RationalPoint {
        match pt {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => RationalPoint::Affine { x: x.clone(), y: -y },
        }
    }

    /// Chord-tangent addition.
    pub fn point_add(&self, p1: &RationalPoint, p2: &RationalPoint) -> RationalPoint {
        let (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) = (p1, p2) else {
            return if p1.is_infinity() { p2.clone() } else { p1.clone() };
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return RationalPoint::Infinity;
            }
            let three = Rational::from_integer(3.into());
            (three * x1 * x1 + Rational::from_integer(self.a.clone())) / (y1 * Rational::from_integer(2.into()))
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        RationalPoint::Affine { x: x3, y: y3 }
    }

    pub fn scalar_mul(&self, n: &Integer, pt: &RationalPoint) -> RationalPoint {
        let base = if n.is_negative() { self.negate(pt) } else { pt.clone() };
        let mut acc = RationalPoint::Infinity;
        let mut k = n.abs();
        let mut pow = base;
        while !k.is_zero() {
            if k.bit(0) {
                acc = self.point_add(&acc, &pow);
            }
            k >>= 1;
            if !k.is_zero() {
                pow = self.point_add(&pow, &pow);
            }
        }
        acc
    }

    /// True when some `k <= 12` kills the point.
    pub fn is_torsion(&self, pt: &RationalPoint) -> bool {
        let mut acc = pt.clone();
        for _ in 1..MAZUR_BOUND {
            if acc.is_infinity() {
                return true;
            }
            acc = self.point_add(&acc, pt);
        }
        acc.is_infinity()
    }

    /// Integral affine points with `|x| <= x_bound`, ascending `x`, then `y`.
    pub fn integral_points(&self, x_bound: u64) -> Vec<RationalPoint> {
        let bound = x_bound as i64;
        let mut out = Vec::new();
        for x in -bound..=bound {
            let xi = Integer::from(x);
            let r = &xi * &xi * &xi + &self.a * &xi + &self.b;
            if let Some(s) = exact_sqrt(&r) {
                let q = |v: Integer| Rational::from_integer(v);
                if s.is_zero() {
                    out.push(RationalPoint::affine(q(xi), q(s)));
                } else {
                    out.push(RationalPoint::affine(q(xi.clone()), q(-s.clone())));
                    out.push(RationalPoint::affine(q(xi), q(s)));
                }
            }
        }
        out
    }

    /// First non-torsion integral point by increasing `|x|` (negative `x`
    /// first on ties), taking the positive `y`.
    pub fn naive_generator(&self, x_bound: u64) -> Option<RationalPoint> {
        let mut pts: Vec<RationalPoint> = self
            .integral_points(x_bound)
            .into_iter()
            .filter(|p| matches!(p, RationalPoint::Affine { y, .. } if !y.is_negative()))
            .collect();
        pts.sort_by_key(|p| match p {
            RationalPoint::Affine { x, .. } => {
                let xi = x.to_integer().to_i64().expect("bounded");
                (xi.abs(), xi)
            }
            RationalPoint::Infinity => unreachable!(),
        });
        pts.into_iter().find(|p| !self.is_torsion(p))
    }

    pub fn reduce(&self, p: u64) -> Result<EllipticFp, SieveError> {
        if !self.is_good_prime(p) {
            return Err(SieveError::BadPrime(p));
        }
        Ok(EllipticFp { p, a: self.a.mod_floor_u64(p), b: self.b.mod_floor_u64(p) })
    }
}

/// A point of `E(F_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EcPointFp {
    Infinity,
    Affine { x: u64, y: u64 },
}

/// `E(F_p)` for a good prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticFp {
    p: u64,
    a: u64,
    b: u64,
}

impl EllipticFp {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn rhs(&self, x: u64) -> Fp {
        let (x, p) = (Fp::new(x, self.p), self.p);
        x * x * x + Fp::new(self.a, p) * x + Fp::new(self.b, p)
    }

    pub fn contains(&self, pt: &EcPointFp) -> bool {
        match *pt {
            EcPointFp::Infinity => true,
            EcPointFp::Affine { x, y } => {
                let y = Fp::new(y, self.p);
                y * y == self.rhs(x)
            }
        }
    }

    /// `#E(F_p) = p + 1 + sum_x (x^3 + a x + b | p)`.
    pub fn order(&self) -> u64 {
        let s: i64 = (0..self.p).map(|x| legendre(self.rhs(x).value(), self.p) as i64).sum();
        (self.p as i64 + 1 + s) as u64
    }

    /// The affine points with abscissa `x`, smaller `y` first.
    pub fn points_over(&self, x: u64) -> Vec<EcPointFp> {
        let x = x % self.p;
        match sqrt_mod(self.rhs(x).value(), self.p) {
            None => Vec::new(),
            Some(0) => vec![EcPointFp::Affine { x, y: 0 }],
            Some(s) => vec![EcPointFp::Affine { x, y: s }, EcPointFp::Affine { x, y: self.p - s }],
        }
    }

    pub fn reduce_point(&self, pt: &RationalPoint) -> Result<EcPointFp, SieveError> {
        match pt {
            RationalPoint::Infinity => Ok(EcPointFp::Infinity),
            RationalPoint::Affine { x, y } => {
                let bad = || SieveError::BadDenominator(self.p);
                let x = reduce_rational(x, self.p).ok_or_else(bad)?.value();
                let y = reduce_rational(y, self.p).ok_or_else(bad)?.value();
                Ok(EcPointFp::Affine { x, y })
            }
        }
    }

    fn add(&self, p1: &EcPointFp, p2: &EcPointFp) -> EcPointFp {
        let (EcPointFp::Affine { x: x1, y: y1 }, EcPointFp::Affine { x: x2, y: y2 }) = (*p1, *p2) else {
            return if *p1 == EcPointFp::Infinity { *p2 } else { *p1 };
        };
        let p = self.p;
        let (fx1, fy1, fx2, fy2) = (Fp::new(x1, p), Fp::new(y1, p), Fp::new(x2, p), Fp::new(y2, p));
        let slope = if x1 == x2 {
            if (fy1 + fy2).is_zero() {
                return EcPointFp::Infinity;
            }
            (Fp::new(3, p) * fx1 * fx1 + Fp::new(self.a, p)) * (fy1 + fy1).inv().expect("nonzero")
        } else {
            (fy2 - fy1) * (fx2 - fx1).inv().expect("distinct abscissae")
        };
        let x3 = slope * slope - fx1 - fx2;
        let y3 = slope * (fx1 - x3) - fy1;
        EcPointFp::Affine { x: x3.value(), y: y3.value() }
    }
}

impl FiniteGroup for EllipticFp {
    type Elem = EcPointFp;

    fn identity(&self) -> EcPointFp {
        EcPointFp::Infinity
    }

    fn op(&self, a: &EcPointFp, b: &EcPointFp) -> EcPointFp {
        self.add(a, b)
    }

    fn inverse(&self, a: &EcPointFp) -> EcPointFp {
        match *a {
            EcPointFp::Infinity => EcPointFp::Infinity,
            EcPointFp::Affine { x, y } => EcPointFp::Affine { x, y: (self.p - y) % self.p },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> WeierstrassCurve {
        WeierstrassCurve::new(0.into(), (-2).into()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn demo_generator_and_doubling() {
        let e = demo();
        let g = RationalPoint::from_integers(3, 5);
        assert!(e.contains(&g));
        assert_eq!(e.naive_generator(100), Some(g.clone()));
        let two = e.point_add(&g, &g);
        assert_eq!(two, RationalPoint::affine(q(129, 100), q(-383, 1000)));
        assert!(e.point_add(&g, &e.negate(&g)).is_infinity());
        assert_eq!(e.scalar_mul(&1.into(), &g), g);
        assert!(e.scalar_mul(&0.into(), &g).is_infinity());
        assert_eq!(e.scalar_mul(&(-2).into(), &g), e.negate(&two));
        let mut prev = Integer::one();
        for n in 2..=6 {
            let pt = e.scalar_mul(&Integer::from(n), &g);
            assert!(e.contains(&pt));
            let d = pt.x_denominator();
            assert!(d > prev, "n = {n}");
            prev = d;
        }
        assert_eq!(e.integral_points(100), vec![RationalPoint::from_integers(3, -5), RationalPoint::from_integers(3, 5)]);
    }

    #[test]
    fn associativity_over_q() {
        let e = demo();
        let g = RationalPoint::from_integers(3, 5);
        let a = e.scalar_mul(&2.into(), &g);
        let b = e.scalar_mul(&3.into(), &g);
        assert_eq!(e.point_add(&e.point_add(&g, &a), &b), e.point_add(&g, &e.point_add(&a, &b)));
        assert_eq!(e.point_add(&a, &b), e.scalar_mul(&5.into(), &g));
    }

    #[test]
    fn singular_rejected_and_torsion_detected() {
        assert_eq!(WeierstrassCurve::new((-3).into(), 2.into()), Err(SieveError::SingularCurve));
        // y^2 = x^3 + 1 has (2, 3) of order 6
        let e = WeierstrassCurve::new(0.into(), 1.into()).unwrap();
        let t = RationalPoint::from_integers(2, 3);
        assert!(e.is_torsion(&t));
        assert_eq!(e.naive_generator(50), None);
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let e = demo();
        let g = RationalPoint::from_integers(3, 5);
        for p in [5u64, 7, 11, 13, 101, 383] {
            let ep = e.reduce(p).unwrap();
            let gp = ep.reduce_point(&g).unwrap();
            for n in 1..8 {
                let big = e.scalar_mul(&Integer::from(n), &g);
                match ep.reduce_point(&big) {
                    Ok(red) => assert_eq!(red, ep.times(n as u64, &gp), "p = {p}, n = {n}"),
                    Err(SieveError::BadDenominator(_)) => assert!(ep.times(n as u64, &gp) == EcPointFp::Infinity),
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(e.reduce(3).is_err());
        assert!(e.reduce(2).is_err());
    }

    #[test]
    fn order_matches_enumeration() {
        let e = demo();
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ep = e.reduce(p).unwrap();
            let mut count = 1;
            for x in 0..p {
                count += ep.points_over(x).len() as u64;
            }
            assert_eq!(count, ep.order());
            for x in 0..p {
                for pt in ep.points_over(x) {
                    assert!(ep.contains(&pt));
                    assert_eq!(ep.times(ep.order(), &pt), EcPointFp::Infinity);
                }
            }
        }
    }
}
