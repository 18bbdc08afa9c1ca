//! Per-prime data: generator images, exponent, target set and the test
//! `alpha_p(n) in T_p`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer as _;
use rand::Rng;

use crate::arith::{factorize_u64, Integer, ModFloorU64};
use crate::curve::DEFAULT_EXT_CEILING;
use crate::group::FiniteGroup;
use crate::jacobian::{group_order, reduce_rational_point, JacobianError, JacobianFp};

use super::elliptic::EllipticFp;
use super::{InstanceCurve, SieveError, SieveInstance};

/// Largest `m^r` for which the pass set is tabulated, by rank.
pub fn table_limit(rank: usize) -> u64 {
    if rank == 1 {
        1 << 20
    } else {
        1 << 16
    }
}

/// Fraction of `(Z/m)^r` passing the test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PassFraction {
    /// `passing / total`, counted over the whole table.
    Exact { passing: u64, total: u64 },
    /// `min(1, |T_p| / min(N, m^r))`, used when no table is built.
    Estimate(f64),
}

impl PassFraction {
    pub fn value(&self) -> f64 {
        match *self {
            PassFraction::Exact { passing, total } => passing as f64 / total as f64,
            PassFraction::Estimate(v) => v,
        }
    }

    pub fn is_informative(&self) -> bool {
        match *self {
            PassFraction::Exact { passing, total } => passing < total,
            PassFraction::Estimate(v) => v < 1.0,
        }
    }
}

impl std::fmt::Display for PassFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            PassFraction::Exact { passing, total } => {
                let g = passing.gcd(&total).max(1);
                write!(f, "{}/{}", passing / g, total / g)
            }
            PassFraction::Estimate(v) => write!(f, "~{v:.6}"),
        }
    }
}

#[derive(Debug, Clone)]
enum Evaluator<E> {
    /// Pass bits over `(Z/m)^r`, index `n_0 + m n_1 + m^2 n_2 + ...`.
    Table(Vec<bool>),
    /// `k * Q_j` for `0 <= k < m`.
    Multiples(Vec<Vec<E>>),
}

/// Local data at one prime for a group `G`.
#[derive(Debug, Clone)]
pub struct LocalData<G: FiniteGroup> {
    p: u64,
    group: G,
    images: Vec<G::Elem>,
    order: u64,
    exponent: u64,
    targets: BTreeSet<G::Elem>,
    eval: Evaluator<G::Elem>,
}

impl<G: FiniteGroup> LocalData<G> {
    /// `order` must be a multiple of the order of every image.
    pub fn new(p: u64, group: G, images: Vec<G::Elem>, order: u64, targets: BTreeSet<G::Elem>) -> Self {
        assert!(!images.is_empty(), "rank must be at least 1");
        let factors = factorize_u64(order);
        let exponent = images
            .iter()
            .map(|q| group.order_dividing(q, order, &factors))
            .fold(1u64, |acc, o| acc.lcm(&o));
        let r = images.len();
        let cells = (exponent as u128).checked_pow(r as u32).filter(|&c| c <= table_limit(r) as u128);
        let eval = match cells {
            Some(cells) => {
                let mut table = vec![false; cells as usize];
                fill_table(&group, &images, exponent, &targets, &mut table);
                Evaluator::Table(table)
            }
            None => Evaluator::Multiples(
                images
                    .iter()
                    .map(|q| {
                        let mut row = Vec::with_capacity(exponent as usize);
                        let mut acc = group.identity();
                        for _ in 0..exponent {
                            row.push(acc.clone());
                            acc = group.op(&acc, q);
                        }
                        row
                    })
                    .collect(),
            ),
        };
        LocalData { p, group, images, order, exponent, targets, eval }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn images(&self) -> &[G::Elem] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// `#G`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent of the subgroup generated by the images.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn targets(&self) -> &BTreeSet<G::Elem> {
        &self.targets
    }

    pub fn has_table(&self) -> bool {
        matches!(self.eval, Evaluator::Table(_))
    }

    /// `sum_j n_j Q_j` for residues `0 <= n_j < m`.
    pub fn alpha_mod(&self, n: &[u64]) -> G::Elem {
        assert_eq!(n.len(), self.rank(), "coefficient vector has the wrong length");
        match &self.eval {
            Evaluator::Multiples(rows) => n
                .iter()
                .zip(rows)
                .fold(self.group.identity(), |acc, (&k, row)| self.group.op(&acc, &row[k as usize])),
            Evaluator::Table(_) => n
                .iter()
                .zip(&self.images)
                .fold(self.group.identity(), |acc, (&k, q)| self.group.op(&acc, &self.group.times(k, q))),
        }
    }

    /// `alpha_p(n)` for an arbitrary integer vector.
    pub fn alpha(&self, n: &[Integer]) -> G::Elem {
        let red: Vec<u64> = n.iter().map(|c| c.mod_floor_u64(self.exponent)).collect();
        self.alpha_mod(&red)
    }

    /// The test on residues `0 <= n_j < m`.
    pub fn passes_mod(&self, n: &[u64]) -> bool {
        match &self.eval {
            Evaluator::Table(t) => t[self.index(n)],
            Evaluator::Multiples(_) => self.targets.contains(&self.alpha_mod(n)),
        }
    }

    pub fn lambda_p_test(&self, n: &[Integer]) -> bool {
        self.targets.contains(&self.alpha(n))
    }

    fn index(&self, n: &[u64]) -> usize {
        n.iter().rev().fold(0usize, |acc, &k| acc * self.exponent as usize + k as usize)
    }

    pub fn pass_fraction(&self) -> PassFraction {
        match &self.eval {
            Evaluator::Table(t) => PassFraction::Exact {
                passing: t.iter().filter(|&&b| b).count() as u64,
                total: t.len() as u64,
            },
            Evaluator::Multiples(_) => {
                let cells = (self.exponent as f64).powi(self.rank() as i32);
                let denom = cells.min(self.order as f64);
                PassFraction::Estimate((self.targets.len() as f64 / denom).min(1.0))
            }
        }
    }

    /// Pass rate over `samples` uniform vectors in `(Z/m)^r`.
    pub fn empirical_pass_rate<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let mut n = vec![0u64; self.rank()];
        let mut hits = 0usize;
        for _ in 0..samples {
            for c in n.iter_mut() {
                *c = rng.gen_range(0..self.exponent);
            }
            if self.passes_mod(&n) {
                hits += 1;
            }
        }
        hits as f64 / samples as f64
    }

    /// Exhaustive check over `(Z/m)^r` that the pass set is a union of cosets
    /// of `ker(alpha_p)`. Returns `None` when `m^r` exceeds `limit`.
    pub fn coset_structure(&self, limit: u64) -> Option<CosetReport> {
        let r = self.rank();
        let m = self.exponent;
        let cells = (m as u128).checked_pow(r as u32).filter(|&c| c <= limit as u128)? as u64;
        let mut fibres: BTreeMap<G::Elem, Vec<u64>> = BTreeMap::new();
        let mut pass = Vec::with_capacity(cells as usize);
        let mut n = vec![0u64; r];
        for idx in 0..cells {
            let mut rest = idx;
            for c in n.iter_mut() {
                *c = rest % m;
                rest /= m;
            }
            // evaluate the group element independently of the pass table
            let elem = n
                .iter()
                .zip(&self.images)
                .fold(self.group.identity(), |acc, (&k, q)| self.group.op(&acc, &self.group.times(k, q)));
            pass.push(self.passes_mod(&n));
            fibres.entry(elem).or_default().push(idx);
        }
        let decode = |idx: u64| -> Vec<u64> {
            let mut rest = idx;
            (0..r)
                .map(|_| {
                    let c = rest % m;
                    rest /= m;
                    c
                })
                .collect()
        };
        let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * m + c);
        let kernel: Vec<Vec<u64>> = fibres[&self.group.identity()].iter().map(|&i| decode(i)).collect();
        let mut ok = true;
        for members in fibres.values() {
            if members.len() != kernel.len() {
                ok = false;
            }
            let base = decode(members[0]);
            let mut expected: Vec<u64> = kernel
                .iter()
                .map(|k| encode(&base.iter().zip(k).map(|(&a, &b)| (a + b) % m).collect::<Vec<_>>()))
                .collect();
            expected.sort_unstable();
            if &expected != members || members.iter().any(|&i| pass[i as usize] != pass[members[0] as usize]) {
                ok = false;
            }
        }
        let passing_cosets = fibres.values().filter(|v| pass[v[0] as usize]).count() as u64;
        Some(CosetReport {
            p: self.p,
            exponent: m,
            cells,
            kernel_size: kernel.len() as u64,
            cosets: fibres.len() as u64,
            passing_cosets,
            passing: pass.iter().filter(|&&b| b).count() as u64,
            union_of_cosets: ok,
        })
    }
}

fn fill_table<G: FiniteGroup>(group: &G, images: &[G::Elem], m: u64, targets: &BTreeSet<G::Elem>, table: &mut [bool]) {
    // odometer over the top coordinate, recursing downwards
    fn rec<G: FiniteGroup>(
        group: &G,
        images: &[G::Elem],
        m: u64,
        targets: &BTreeSet<G::Elem>,
        start: G::Elem,
        table: &mut [bool],
    ) {
        let (q, lower) = images.split_last().expect("nonempty");
        let stride = table.len() / m as usize;
        let mut acc = start;
        for k in 0..m as usize {
            let slot = &mut table[k * stride..(k + 1) * stride];
            if lower.is_empty() {
                slot[0] = targets.contains(&acc);
            } else {
                rec(group, lower, m, targets, acc.clone(), slot);
            }
            acc = group.op(&acc, q);
        }
    }
    rec(group, images, m, targets, group.identity(), table);
}

/// Outcome of [`LocalData::coset_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetReport {
    pub p: u64,
    pub exponent: u64,
    pub cells: u64,
    pub kernel_size: u64,
    pub cosets: u64,
    pub passing_cosets: u64,
    pub passing: u64,
    pub union_of_cosets: bool,
}

/// Local data for either kind of instance.
#[derive(Debug, Clone)]
pub enum AnyLocalData {
    Genus2(LocalData<JacobianFp>),
    Genus1(LocalData<EllipticFp>),
}

macro_rules! forward {
    ($self:ident, $l:ident => $e:expr) => {
        match $self {
            AnyLocalData::Genus2($l) => $e,
            AnyLocalData::Genus1($l) => $e,
        }
    };
}

impl AnyLocalData {
    pub fn p(&self) -> u64 {
        forward!(self, l => l.p())
    }

    pub fn rank(&self) -> usize {
        forward!(self, l => l.rank())
    }

    pub fn order(&self) -> u64 {
        forward!(self, l => l.order())
    }

    pub fn exponent(&self) -> u64 {
        forward!(self, l => l.exponent())
    }

    pub fn target_count(&self) -> usize {
        forward!(self, l => l.targets().len())
    }

    pub fn passes_mod(&self, n: &[u64]) -> bool {
        forward!(self, l => l.passes_mod(n))
    }

    pub fn lambda_p_test(&self, n: &[Integer]) -> bool {
        forward!(self, l => l.lambda_p_test(n))
    }

    pub fn pass_fraction(&self) -> PassFraction {
        forward!(self, l => l.pass_fraction())
    }

    pub fn empirical_pass_rate<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        forward!(self, l => l.empirical_pass_rate(samples, rng))
    }

    pub fn coset_structure(&self, limit: u64) -> Option<CosetReport> {
        forward!(self, l => l.coset_structure(limit))
    }
}

fn from_jacobian(e: JacobianError) -> SieveError {
    match e {
        JacobianError::BadDenominator(p) => SieveError::BadDenominator(p),
        JacobianError::Curve(c) => SieveError::Curve(c),
        other => SieveError::Jacobian(other),
    }
}

/// Reduce the generators mod `p` and tabulate the test there.
///
/// Bad primes and primes dividing a generator denominator come back as
/// [`SieveError::BadPrime`] / [`SieveError::BadDenominator`]; callers skip them.
pub fn compute_local_data(inst: &SieveInstance, p: u64) -> Result<AnyLocalData, SieveError> {
    match &inst.curve {
        InstanceCurve::Hyperelliptic { curve, generators } => {
            if !curve.is_good_prime(p) {
                return Err(SieveError::BadPrime(p));
            }
            let jac = JacobianFp::new(curve, p).map_err(from_jacobian)?;
            let images = generators
                .iter()
                .map(|g| reduce_rational_point(g, &jac))
                .collect::<Result<Vec<_>, _>>()
                .map_err(from_jacobian)?;
            let order = group_order(curve, p, DEFAULT_EXT_CEILING.max(inst.prime_ceiling)).map_err(from_jacobian)?.order;
            let targets = curve.enumerate_points(p)?.iter().map(|pt| jac.embed(pt)).collect();
            Ok(AnyLocalData::Genus2(LocalData::new(p, jac, images, order, targets)))
        }
        InstanceCurve::Elliptic { curve, generators, x_bound } => {
            let ep = curve.reduce(p)?;
            let images = generators.iter().map(|g| ep.reduce_point(g)).collect::<Result<Vec<_>, _>>()?;
            let order = ep.order();
            let mut targets = BTreeSet::new();
            let span = 2 * x_bound + 1;
            let residues: Vec<u64> = if span >= p {
                (0..p).collect()
            } else {
                (0..span).map(|i| Integer::from(i as i64 - *x_bound as i64).mod_floor_u64(p)).collect()
            };
            for x in residues {
                targets.extend(ep.points_over(x));
            }
            Ok(AnyLocalData::Genus1(LocalData::new(p, ep, images, order, targets)))
        }
    }
}
