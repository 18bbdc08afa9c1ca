//! Jacobian of the genus-2 curve over F_p in Mumford representation.
//!
//! An element is a pair `(u, v)` with `u` monic of degree at most 2,
//! `deg v < deg u` and `u | v^2 - g`. The group law is Cantor's algorithm:
//! composition through two extended gcds, then reduction
//! `u <- (g - v^2) / u`, `v <- -v mod u` until `deg u <= 2`.

use std::fmt;

use num_bigint::Sign;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::arith::{reduce_rational, Fp, Integer, PolyFp, Rational};
use crate::curve::{to_model, CurveError, CurveModel, CurvePointFp, LocalCounts};
use crate::diophantine::check_equation;
use crate::group::FiniteGroup;

/// Largest `p` accepted by [`enumerate_group`].
pub const ENUMERATION_LIMIT: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("divisor lives mod {found}, group is mod {expected}")]
    ModulusMismatch { expected: u64, found: u64 },
    #[error("invalid Mumford pair: {0}")]
    InvalidDivisor(String),
    #[error("a denominator is divisible by {0}")]
    BadDenominator(u64),
    #[error("p = {p} is above the enumeration limit {limit}")]
    ResourceLimit { p: u64, limit: u64 },
    #[error("point counts at p = {0} give a non-integral L-polynomial")]
    CountParity(u64),
    #[error("({0}, {1}) is not a solution with |x| >= 2")]
    NotASolution(Integer, Integer),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MumfordDivisor {
    u: PolyFp,
    v: PolyFp,
}

impl MumfordDivisor {
    pub fn identity(p: u64) -> Self {
        MumfordDivisor { u: PolyFp::one(p), v: PolyFp::zero(p) }
    }

    pub fn u(&self) -> &PolyFp {
        &self.u
    }

    pub fn v(&self) -> &PolyFp {
        &self.v
    }

    pub fn modulus(&self) -> u64 {
        self.u.modulus()
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }

    /// Weight of the divisor, `deg u`.
    pub fn weight(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }
}

impl fmt::Debug for MumfordDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}> (mod {})", self.u, self.v, self.modulus())
    }
}

impl fmt::Display for MumfordDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.u, self.v)
    }
}

/// `J(F_p)` for the reduction of a curve model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianFp {
    p: u64,
    g: PolyFp,
}

impl JacobianFp {
    pub fn new(curve: &CurveModel, p: u64) -> Result<Self, JacobianError> {
        curve.check_prime(p)?;
        Ok(JacobianFp { p, g: curve.reduce(p) })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The quintic mod `p`.
    pub fn quintic(&self) -> &PolyFp {
        &self.g
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor::identity(self.p)
    }

    /// Build and validate a Mumford pair.
    pub fn divisor(&self, u: PolyFp, v: PolyFp) -> Result<MumfordDivisor, JacobianError> {
        let d = MumfordDivisor { u, v };
        self.validate(&d)?;
        Ok(d)
    }

    pub fn validate(&self, d: &MumfordDivisor) -> Result<(), JacobianError> {
        if d.modulus() != self.p || d.v.modulus() != self.p {
            return Err(JacobianError::ModulusMismatch { expected: self.p, found: d.modulus() });
        }
        let du = d.u.degree().ok_or_else(|| JacobianError::InvalidDivisor("u = 0".into()))?;
        if !d.u.is_monic() || du > 2 {
            return Err(JacobianError::InvalidDivisor(format!("u = {} must be monic of degree <= 2", d.u)));
        }
        if d.v.degree().is_some_and(|dv| dv >= du) {
            return Err(JacobianError::InvalidDivisor(format!("deg v >= deg u for {d:?}")));
        }
        if !(&(&d.v * &d.v) - &self.g).rem(&d.u).is_zero() {
            return Err(JacobianError::InvalidDivisor(format!("u does not divide v^2 - g for {d:?}")));
        }
        Ok(())
    }

    pub fn is_valid(&self, d: &MumfordDivisor) -> bool {
        self.validate(d).is_ok()
    }

    fn check(&self, d: &MumfordDivisor) -> Result<(), JacobianError> {
        if d.modulus() != self.p {
            return Err(JacobianError::ModulusMismatch { expected: self.p, found: d.modulus() });
        }
        Ok(())
    }

    /// `iota_p`: affine `(X, Y)` goes to `(T - X, Y)`, infinity to the identity.
    pub fn embed(&self, pt: &CurvePointFp) -> MumfordDivisor {
        match *pt {
            CurvePointFp::Infinity => self.identity(),
            CurvePointFp::Affine { x, y } => {
                assert_eq!(x.modulus(), self.p, "point from another field");
                MumfordDivisor { u: PolyFp::linear_root(x), v: PolyFp::constant(y) }
            }
        }
    }

    pub fn add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor, JacobianError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn negate(&self, a: &MumfordDivisor) -> Result<MumfordDivisor, JacobianError> {
        self.check(a)?;
        Ok(self.negate_unchecked(a))
    }

    pub fn scalar_mul(&self, n: &Integer, a: &MumfordDivisor) -> Result<MumfordDivisor, JacobianError> {
        self.check(a)?;
        let base = if n.sign() == Sign::Minus { self.negate_unchecked(a) } else { a.clone() };
        let mut acc = self.identity();
        let (_, digits) = n.abs().to_u64_digits();
        for limb in digits.iter().rev() {
            for bit in (0..64).rev() {
                acc = self.add_unchecked(&acc, &acc);
                if limb >> bit & 1 == 1 {
                    acc = self.add_unchecked(&acc, &base);
                }
            }
        }
        Ok(acc)
    }

    fn negate_unchecked(&self, a: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor { u: a.u.clone(), v: (-&a.v).rem(&a.u) }
    }

    pub(crate) fn add_unchecked(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
        if a.is_identity() {
            return b.clone();
        }
        if b.is_identity() {
            return a.clone();
        }
        let (u, v) = self.compose(a, b);
        self.reduce(u, v)
    }

    /// Cantor composition; the result may have `deg u` up to 4.
    fn compose(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> (PolyFp, PolyFp) {
        let (d1, e1, e2) = a.u.xgcd(&b.u).expect("same modulus");
        let vsum = &a.v + &b.v;
        let (d, c1, c2) = d1.xgcd(&vsum).expect("same modulus");
        let s1 = &c1 * &e1;
        let s2 = &c1 * &e2;
        let u = (&a.u * &b.u).div_exact(&(&d * &d));
        let num = &(&(&s1 * &a.u) * &b.v) + &(&(&s2 * &b.u) * &a.v);
        let num = &num + &(&c2 * &(&(&a.v * &b.v) + &self.g));
        let v = num.div_exact(&d).rem(&u);
        (u, v)
    }

    fn reduce(&self, mut u: PolyFp, mut v: PolyFp) -> MumfordDivisor {
        while u.degree().unwrap_or(0) > 2 {
            let u2 = (&self.g - &(&v * &v)).div_exact(&u).monic();
            v = (-&v).rem(&u2);
            u = u2;
        }
        let u = u.monic();
        let v = v.rem(&u);
        MumfordDivisor { u, v }
    }

    /// A random element: the sum of three random embedded points with signs.
    pub fn random_divisor<R: Rng + ?Sized>(&self, points: &[CurvePointFp], rng: &mut R) -> MumfordDivisor {
        let mut acc = self.identity();
        for _ in 0..3 {
            let d = self.embed(&points[rng.gen_range(0..points.len())]);
            let d = if rng.gen_bool(0.5) { self.negate_unchecked(&d) } else { d };
            acc = self.add_unchecked(&acc, &d);
        }
        acc
    }
}

impl FiniteGroup for JacobianFp {
    type Elem = MumfordDivisor;

    fn identity(&self) -> MumfordDivisor {
        JacobianFp::identity(self)
    }

    fn op(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
        self.add_unchecked(a, b)
    }

    fn inverse(&self, a: &MumfordDivisor) -> MumfordDivisor {
        self.negate_unchecked(a)
    }
}

/// `#J(F_p)` and the L-polynomial `1 + c1 T + c2 T^2 + p c1 T^3 + p^2 T^4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobianLocal {
    pub p: u64,
    pub order: u64,
    pub c1: i64,
    pub c2: i64,
    pub counts: LocalCounts,
}

impl JacobianLocal {
    pub fn from_counts(counts: LocalCounts) -> Result<Self, JacobianError> {
        let p = counts.p as i128;
        let c1 = counts.n1 as i128 - p - 1;
        let twice_c2 = c1 * c1 + counts.n2 as i128 - p * p - 1;
        if twice_c2 % 2 != 0 {
            return Err(JacobianError::CountParity(counts.p));
        }
        let c2 = twice_c2 / 2;
        let order = 1 + c1 + c2 + p * c1 + p * p;
        Ok(JacobianLocal {
            p: counts.p,
            order: u64::try_from(order).map_err(|_| JacobianError::CountParity(counts.p))?,
            c1: c1 as i64,
            c2: c2 as i64,
            counts,
        })
    }

    /// `(sqrt p - 1)^4 <= N <= (sqrt p + 1)^4`, tested in integers.
    pub fn within_weil_interval(&self) -> bool {
        let p = self.p as i128;
        let n = self.order as i128;
        // (sqrt p ± 1)^4 = p^2 + 6p + 1 ± 4 sqrt(p) (p + 1)
        let central = p * p + 6 * p + 1;
        let rad_sq = 16 * p * (p + 1) * (p + 1);
        let dev = n - central;
        dev * dev <= rad_sq
    }
}

/// Group order from the zeta function, with the `F_{p^2}` count capped at
/// `ceiling`.
pub fn group_order(curve: &CurveModel, p: u64, ceiling: u64) -> Result<JacobianLocal, JacobianError> {
    JacobianLocal::from_counts(curve.local_counts(p, ceiling)?)
}

/// Every element of `J(F_p)` by brute force, for `p <=` [`ENUMERATION_LIMIT`].
pub fn enumerate_group(curve: &CurveModel, p: u64) -> Result<Vec<MumfordDivisor>, JacobianError> {
    if p > ENUMERATION_LIMIT {
        return Err(JacobianError::ResourceLimit { p, limit: ENUMERATION_LIMIT });
    }
    let jac = JacobianFp::new(curve, p)?;
    let g = jac.quintic();
    let mut out = vec![jac.identity()];
    for x in 0..p {
        for y in 0..p {
            let (fx, fy) = (Fp::new(x, p), Fp::new(y, p));
            if fy * fy == g.eval_unchecked(x) {
                out.push(MumfordDivisor { u: PolyFp::linear_root(fx), v: PolyFp::constant(fy) });
            }
        }
    }
    for a in 0..p {
        for b in 0..p {
            let u = PolyFp::new(p, vec![b, a, 1]);
            // reduce g once, then test each v
            let g_mod_u = g.rem(&u);
            for c in 0..p {
                for d in 0..p {
                    let v = PolyFp::new(p, vec![d, c]);
                    if (&v * &v).rem(&u) == g_mod_u {
                        out.push(MumfordDivisor { u: u.clone(), v });
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// A Mumford pair with rational coefficients, used for generator data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalJacobianPoint {
    /// Monic, ascending coefficients, degree at most 2.
    pub u: Vec<Rational>,
    /// Ascending coefficients, degree below `deg u`.
    pub v: Vec<Rational>,
}

fn trim_q(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn mul_q(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_q(out)
}

/// Remainder of `a` by a monic `m`.
fn rem_monic_q(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = r.pop().expect("nonempty");
        let shift = r.len() - dm;
        for (j, mj) in m[..dm].iter().enumerate() {
            r[shift + j] -= &c * mj;
        }
    }
    trim_q(r)
}

impl RationalJacobianPoint {
    pub fn identity() -> Self {
        RationalJacobianPoint { u: vec![Rational::one()], v: Vec::new() }
    }

    /// The class of `P - infinity` for an affine rational point `P = (X, Y)`.
    pub fn from_point(x: &Rational, y: &Rational) -> Self {
        RationalJacobianPoint { u: vec![-x.clone(), Rational::one()], v: trim_q(vec![y.clone()]) }
    }

    /// The class of `P1 + P2 - 2 infinity` for distinct `X1 != X2`.
    pub fn from_two_points(p1: (&Rational, &Rational), p2: (&Rational, &Rational)) -> Option<Self> {
        let ((x1, y1), (x2, y2)) = (p1, p2);
        if x1 == x2 {
            return None;
        }
        let slope = (y2 - y1) / (x2 - x1);
        let intercept = y1 - &slope * x1;
        Some(RationalJacobianPoint {
            u: vec![x1 * x2, -(x1 + x2), Rational::one()],
            v: trim_q(vec![intercept, slope]),
        })
    }

    /// Mumford conditions over the rationals.
    pub fn validate(&self, curve: &CurveModel) -> Result<(), JacobianError> {
        let u = trim_q(self.u.clone());
        let v = trim_q(self.v.clone());
        if u.is_empty() || u.len() > 3 || !u.last().is_some_and(One::is_one) {
            return Err(JacobianError::InvalidDivisor("u must be monic of degree <= 2".into()));
        }
        if v.len() >= u.len() {
            return Err(JacobianError::InvalidDivisor("deg v must be below deg u".into()));
        }
        let g: Vec<Rational> = curve.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
        let mut diff = mul_q(&v, &v);
        diff.resize(diff.len().max(g.len()), Rational::zero());
        for (i, c) in g.iter().enumerate() {
            diff[i] -= c;
        }
        if !rem_monic_q(&trim_q(diff), &u).is_empty() {
            return Err(JacobianError::InvalidDivisor("u does not divide v^2 - g over Q".into()));
        }
        Ok(())
    }
}

/// Coefficient-wise reduction of a rational Mumford pair modulo `p`.
pub fn reduce_rational_point(pt: &RationalJacobianPoint, jac: &JacobianFp) -> Result<MumfordDivisor, JacobianError> {
    let p = jac.modulus();
    let red = |cs: &[Rational]| -> Result<PolyFp, JacobianError> {
        let vals = cs
            .iter()
            .map(|c| reduce_rational(c, p).map(Fp::value).ok_or(JacobianError::BadDenominator(p)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyFp::new(p, vals))
    };
    jac.divisor(red(&pt.u)?, red(&pt.v)?)
}

/// Naive height `log max(|X|, |Y|)` of the model point of a solution.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Height(pub f64);

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_significant(self.0, 15))
    }
}

/// Decimal rendering with `digits` significant digits.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let int_digits = v.abs().log10().floor() as i64 + 1;
    let decimals = (digits as i64 - int_digits).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Natural logarithm of a positive big integer.
pub fn ln_integer(n: &Integer) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: Integer = n >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn naive_height(x: &Integer, y: &Integer) -> Result<Height, JacobianError> {
    if !check_equation(x, y) || x.abs() < Integer::from(2) {
        return Err(JacobianError::NotASolution(x.clone(), y.clone()));
    }
    let (mx, my) = to_model(x, y);
    let m = std::cmp::max(mx.abs(), my.abs());
    Ok(Height(ln_integer(&m)))
}
