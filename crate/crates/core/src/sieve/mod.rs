//! The Mordell-Weil sieve.
//!
//! A rational point `P = sum_j n_j P_j` of the Jacobian that comes from an
//! integral curve point reduces, at every good prime `p`, into the image
//! `T_p` of the curve. The reduction map `alpha_p : Z^r -> J(F_p)` factors
//! through `(Z/m)^r` with `m` the exponent of the image, so each prime cuts
//! the coefficient vectors down to a union of residue classes. Intersecting
//! over many primes is done on an explicit list of residue vectors modulo a
//! growing modulus `B`.
//!
//! Primes are picked greedily by
//!
//! ```text
//! score = (1 / rho) / (lcm(B, m) / B)^r
//! ```
//!
//! where `rho` is the fraction of the lifted survivors that pass the test at
//! `p`. It is counted exactly when the lift has at most
//! [`EXACT_SCORE_BUDGET`] children; otherwise the fraction of `(Z/m)^r` that passes stands in for it
//! (exact from the pass table, or `min(1, |T_p| / min(N, m^r))` without
//! one). Primes with `rho = 1` carry no information and are never picked;
//! primes whose lift would exceed the survivor ceiling are skipped. Ties go
//! to the smaller prime.

pub mod config;
pub mod elliptic;
pub mod local;

use std::collections::HashSet;
use std::fmt::Write as _;

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{primes_up_to, Integer};
use crate::curve::{known_model_points, CurveError, CurveModel};
use crate::jacobian::{JacobianError, JacobianFp, RationalJacobianPoint};

pub use config::ConfigError;
pub use elliptic::{EcPointFp, EllipticFp, RationalPoint, WeierstrassCurve};
pub use local::{compute_local_data, AnyLocalData, CosetReport, LocalData, PassFraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("singular Weierstrass curve")]
    SingularCurve,
    #[error("p = {0} is not a good prime for this curve")]
    BadPrime(u64),
    #[error("p = {0} divides a generator denominator")]
    BadDenominator(u64),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Jacobian(JacobianError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("p = {p}: refinement would hold {survivors} survivors, above the ceiling {ceiling}")]
    Growth { p: u64, survivors: u128, ceiling: usize },
    #[error("p = {p}: modulus lcm({modulus}, {exponent}) overflows")]
    ModulusOverflow { p: u64, modulus: u128, exponent: u64 },
    #[error("coefficient box too large for exhaustive search: {0} cells")]
    BoxTooLarge(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Greedy choice by score among the candidates.
    Auto,
    /// Candidates in the order given.
    Given,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeList {
    /// Every prime up to the prime ceiling.
    All,
    Given(Vec<u64>),
}

#[derive(Debug, Clone)]
pub enum InstanceCurve {
    Hyperelliptic { curve: CurveModel, generators: Vec<RationalJacobianPoint> },
    /// Integral points are those with `|x| <= x_bound`.
    Elliptic { curve: WeierstrassCurve, generators: Vec<RationalPoint>, x_bound: u64 },
}

#[derive(Debug, Clone)]
pub struct SieveInstance {
    pub name: Option<String>,
    pub curve: InstanceCurve,
    pub rank: usize,
    /// Box half-width: `|n_j| < n_max`.
    pub n_max: Integer,
    pub prime_ceiling: u64,
    pub survivor_ceiling: usize,
    pub max_primes: usize,
    /// Stop after this many consecutive steps without a smaller in-box count.
    pub patience: usize,
    pub schedule: Schedule,
    pub primes: PrimeList,
}

impl SieveInstance {
    pub fn candidate_primes(&self) -> Vec<u64> {
        match &self.primes {
            PrimeList::All => primes_up_to(self.prime_ceiling),
            PrimeList::Given(ps) => ps.clone(),
        }
    }

    pub fn coefficient_box(&self) -> CoefficientBox {
        CoefficientBox { rank: self.rank, n_max: self.n_max.clone() }
    }

    /// Coefficient vectors in the box of all integral points with
    /// `|x| <= x_bound`, by exact rational arithmetic over the whole box.
    /// `None` for hyperelliptic instances.
    pub fn known_coefficients(&self, max_cells: u64) -> Result<Option<Vec<Vec<i64>>>, SieveError> {
        let InstanceCurve::Elliptic { curve, generators, x_bound } = &self.curve else {
            return Ok(None);
        };
        let cells = self.coefficient_box().size();
        if cells > Integer::from(max_cells) {
            return Err(SieveError::BoxTooLarge(cells.to_string()));
        }
        let n = self.n_max.to_i64().expect("box fits");
        let targets: HashSet<RationalPoint> = curve.integral_points(*x_bound).into_iter().collect();
        let multiples: Vec<Vec<RationalPoint>> = generators
            .iter()
            .map(|g| (1 - n..n).map(|k| curve.scalar_mul(&Integer::from(k), g)).collect())
            .collect();
        let width = (2 * n - 1) as usize;
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.rank];
        'outer: loop {
            let sum = idx
                .iter()
                .zip(&multiples)
                .fold(RationalPoint::Infinity, |acc, (&i, row)| curve.point_add(&acc, &row[i]));
            if targets.contains(&sum) {
                out.push(idx.iter().map(|&i| i as i64 + 1 - n).collect());
            }
            for c in idx.iter_mut() {
                *c += 1;
                if *c < width {
                    continue 'outer;
                }
                *c = 0;
            }
            break;
        }
        out.sort();
        Ok(Some(out))
    }
}

/// The haystack `{ n in Z^r : |n_j| < n_max }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientBox {
    pub rank: usize,
    pub n_max: Integer,
}

impl CoefficientBox {
    /// `(2 n_max - 1)^r`.
    pub fn size(&self) -> Integer {
        num_traits::pow(&self.n_max * 2u32 - 1u32, self.rank)
    }
}

pub fn haystack_size(b: &CoefficientBox) -> Integer {
    b.size()
}

/// Residue vectors modulo `B` that survive every consumed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveState {
    rank: usize,
    modulus: u128,
    survivors: Vec<Vec<u128>>,
    consumed: Vec<u64>,
}

impl SieveState {
    /// No information: `W = {0 mod 1}`.
    pub fn new(rank: usize) -> Self {
        SieveState { rank, modulus: 1, survivors: vec![vec![0; rank]], consumed: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn survivors(&self) -> &[Vec<u128>] {
        &self.survivors
    }

    pub fn consumed(&self) -> &[u64] {
        &self.consumed
    }

    /// `|W| / B^r`.
    pub fn density(&self) -> f64 {
        self.survivors.len() as f64 / (self.modulus as f64).powi(self.rank as i32)
    }

    /// `(|W|, B^r)` exactly.
    pub fn density_exact(&self) -> (Integer, Integer) {
        (Integer::from(self.survivors.len()), num_traits::pow(Integer::from(self.modulus), self.rank))
    }

    pub fn allows(&self, n: &[Integer]) -> bool {
        let b = Integer::from(self.modulus);
        let red: Vec<u128> = n.iter().map(|c| c.mod_floor(&b).to_u128().expect("below modulus")).collect();
        self.survivors.binary_search(&red).is_ok()
    }

    /// Number of box vectors congruent to some survivor.
    pub fn in_box_count(&self, n_max: &Integer) -> Integer {
        let b = Integer::from(self.modulus);
        let hi = n_max - 1u32;
        let lo = -n_max.clone();
        let mut cache = std::collections::HashMap::new();
        let mut count = |w: u128| -> Integer {
            cache
                .entry(w)
                .or_insert_with(|| {
                    let w = Integer::from(w);
                    (&hi - &w).div_floor(&b) - (&lo - &w).div_floor(&b)
                })
                .clone()
        };
        let mut total = Integer::zero();
        for w in &self.survivors {
            let mut prod = Integer::one();
            for &c in w {
                prod *= count(c);
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        total
    }

    /// Survivors as box vectors, when `B >= 2 n_max` makes the lift unique.
    pub fn box_vectors(&self, n_max: &Integer) -> Option<Vec<Vec<i128>>> {
        let n = n_max.to_u128()?;
        if self.modulus < n.checked_mul(2)? {
            return None;
        }
        let b = self.modulus;
        let mut out: Vec<Vec<i128>> = self
            .survivors
            .iter()
            .filter_map(|w| {
                w.iter()
                    .map(|&c| {
                        if c < n {
                            Some(c as i128)
                        } else if c > b - n {
                            Some(c as i128 - b as i128)
                        } else {
                            None
                        }
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect();
        out.sort();
        Some(out)
    }
}

struct Lift {
    modulus: u128,
    factor: u128,
    children: u128,
}

fn plan_lift(state: &SieveState, local: &AnyLocalData) -> Result<Lift, SieveError> {
    let (p, m, b) = (local.p(), local.exponent(), state.modulus);
    let overflow = || SieveError::ModulusOverflow { p, modulus: b, exponent: m };
    let g = b.gcd(&(m as u128));
    let modulus = (b / g).checked_mul(m as u128).ok_or_else(overflow)?;
    let factor = modulus / b;
    let children = factor
        .checked_pow(state.rank as u32)
        .and_then(|f| f.checked_mul(state.survivors.len() as u128))
        .ok_or_else(overflow)?;
    Ok(Lift { modulus, factor, children })
}

/// Calls `keep` on every passing child of the lift, in lexicographic order
/// of (parent, offset).
fn for_each_passing(state: &SieveState, local: &AnyLocalData, factor: u128, mut keep: impl FnMut(&[u128])) {
    let r = state.rank;
    let (b, m) = (state.modulus, local.exponent() as u128);
    let mut t = vec![0u128; r];
    let mut child = vec![0u128; r];
    let mut red = vec![0u64; r];
    for w in &state.survivors {
        t.iter_mut().for_each(|c| *c = 0);
        'lift: loop {
            for j in 0..r {
                child[j] = w[j] + t[j] * b;
                red[j] = (child[j] % m) as u64;
            }
            if local.passes_mod(&red) {
                keep(&child);
            }
            for c in t.iter_mut() {
                *c += 1;
                if *c < factor {
                    continue 'lift;
                }
                *c = 0;
            }
            break;
        }
    }
}

/// Lift to `lcm(B, m)` and keep the children that pass at `local`.
pub fn sieve_refine(state: &SieveState, local: &AnyLocalData, ceiling: usize) -> Result<SieveState, SieveError> {
    assert_eq!(state.rank, local.rank(), "rank mismatch");
    let lift = plan_lift(state, local)?;
    if lift.children > ceiling as u128 {
        return Err(SieveError::Growth { p: local.p(), survivors: lift.children, ceiling });
    }
    let mut out = Vec::new();
    for_each_passing(state, local, lift.factor, |c| out.push(c.to_vec()));
    out.sort_unstable();
    out.dedup();
    let mut consumed = state.consumed.clone();
    consumed.push(local.p());
    Ok(SieveState { rank: state.rank, modulus: lift.modulus, survivors: out, consumed })
}

/// Fraction of the lifted children of `W` that pass at `local`: counted
/// exactly when the lift has at most `budget` children, otherwise the
/// table or coset estimate. `None` if the modulus would overflow.
pub fn conditional_pass_fraction(state: &SieveState, local: &AnyLocalData, budget: usize) -> Option<f64> {
    let lift = plan_lift(state, local).ok()?;
    if lift.children > budget as u128 {
        return Some(local.pass_fraction().value());
    }
    let mut passing = 0u64;
    for_each_passing(state, local, lift.factor, |_| passing += 1);
    Some(passing as f64 / lift.children as f64)
}

/// `min(1, |T_p| / min(N, m^r))`.
pub fn estimated_pass_fraction(targets: u64, order: u64, exponent: u64, rank: usize) -> f64 {
    let cells = (exponent as f64).powi(rank as i32);
    (targets as f64 / cells.min(order as f64)).min(1.0)
}

/// `(1 / rho) / (lcm(B, m) / B)^r`.
pub fn score(rho: f64, modulus: u128, exponent: u64, rank: usize) -> f64 {
    let factor = (exponent as u128 / modulus.gcd(&(exponent as u128))) as f64;
    (1.0 / rho) / factor.powi(rank as i32)
}

fn lift_size(state: &SieveState, m: u64) -> Option<u128> {
    let b = state.modulus;
    let factor = m as u128 / b.gcd(&(m as u128));
    factor.checked_pow(state.rank as u32)?.checked_mul(state.survivors.len() as u128)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    Chosen { index: usize, score: f64 },
    /// Informative candidates exist but none fits under the ceiling.
    GrowthLimited,
    /// No candidate would remove anything.
    Uninformative,
}

/// Largest lift counted child by child when scoring a candidate.
pub const EXACT_SCORE_BUDGET: usize = 1 << 16;

/// Highest-scoring informative candidate whose lift fits under `ceiling`.
///
/// `rho` is the exact fraction of lifted survivors that pass (see
/// [`conditional_pass_fraction`]), so a prime whose condition the current
/// survivors already satisfy counts as uninformative.
pub fn select_next_prime(state: &SieveState, candidates: &[&AnyLocalData], ceiling: usize) -> Selection {
    let evaluated: Vec<Option<(f64, bool)>> = candidates
        .par_iter()
        .map(|c| {
            let fits = lift_size(state, c.exponent()).is_some_and(|s| s <= ceiling as u128);
            let rho = if fits { conditional_pass_fraction(state, c, ceiling.min(EXACT_SCORE_BUDGET))? } else { c.pass_fraction().value() };
            (rho < 1.0).then_some((rho, fits))
        })
        .collect();
    let mut best: Option<(usize, f64, u64)> = None;
    let mut blocked = false;
    for (i, (c, e)) in candidates.iter().zip(&evaluated).enumerate() {
        let Some((rho, fits)) = *e else { continue };
        if !fits {
            blocked = true;
            continue;
        }
        let s = score(rho, state.modulus, c.exponent(), state.rank);
        let better = match best {
            None => true,
            Some((_, bs, bp)) => s > bs || (s == bs && c.p() < bp),
        };
        if better {
            best = Some((i, s, c.p()));
        }
    }
    match best {
        Some((index, score, _)) => Selection::Chosen { index, score },
        None if blocked => Selection::GrowthLimited,
        None => Selection::Uninformative,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    Exhausted,
    Stalled,
    GrowthLimited,
    Uninformative,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Budget => "budget",
            StopReason::Exhausted => "exhausted",
            StopReason::Stalled => "stalled",
            StopReason::GrowthLimited => "growth-limited",
            StopReason::Uninformative => "uninformative",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub p: u64,
    pub order: u64,
    pub exponent: u64,
    pub targets: usize,
    pub pass_fraction: PassFraction,
    pub modulus: u128,
    pub survivors: usize,
    pub in_box: Integer,
}

#[derive(Debug, Clone)]
pub struct SieveOutcome {
    pub state: SieveState,
    pub steps: Vec<StepRecord>,
    pub skipped: Vec<(u64, String)>,
    pub stop: StopReason,
    pub n_max: Integer,
}

impl SieveOutcome {
    pub fn in_box_count(&self) -> Integer {
        self.steps.last().map_or_else(|| self.state.in_box_count(&self.n_max), |s| s.in_box.clone())
    }

    pub fn box_vectors(&self) -> Option<Vec<Vec<i128>>> {
        self.state.box_vectors(&self.n_max)
    }

    /// Product of the pass fractions of the consumed primes.
    pub fn predicted_density(&self) -> f64 {
        self.steps.iter().map(|s| s.pass_fraction.value()).product()
    }

    pub fn to_csv(&self) -> String {
        let r = self.state.rank;
        let haystack = CoefficientBox { rank: r, n_max: self.n_max.clone() }.size();
        let mut s = String::new();
        let primes: Vec<String> = self.state.consumed.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "key,value");
        let _ = writeln!(s, "rank,{r}");
        let _ = writeln!(s, "n_max,{}", self.n_max);
        let _ = writeln!(s, "haystack,{haystack}");
        let _ = writeln!(s, "primes,{}", primes.join(" "));
        let _ = writeln!(s, "stop,{}", self.stop.as_str());
        let _ = writeln!(s, "modulus,{}", self.state.modulus);
        let _ = writeln!(s, "residue_survivors,{}", self.state.survivors.len());
        let _ = writeln!(s, "in_box,{}", self.in_box_count());
        let _ = writeln!(s, "density,{:.6e}", self.state.density());
        let _ = writeln!(s, "predicted_density,{:.6e}", self.predicted_density());
        for (p, why) in &self.skipped {
            let _ = writeln!(s, "skipped,{p} {why}");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "step,p,N,m,targets,pass_fraction,modulus,survivors,in_box");
        for (i, st) in self.steps.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                i + 1,
                st.p,
                st.order,
                st.exponent,
                st.targets,
                st.pass_fraction,
                st.modulus,
                st.survivors,
                st.in_box
            );
        }
        let _ = writeln!(s);
        let cols: Vec<String> = (1..=r).map(|j| format!("n_{j}")).collect();
        match self.box_vectors() {
            Some(vs) => {
                let _ = writeln!(s, "{}", cols.join(","));
                for v in vs {
                    let row: Vec<String> = v.iter().map(i128::to_string).collect();
                    let _ = writeln!(s, "{}", row.join(","));
                }
            }
            None => {
                let _ = writeln!(s, "{},modulus", cols.join(","));
                for w in &self.state.survivors {
                    let row: Vec<String> = w.iter().map(u128::to_string).collect();
                    let _ = writeln!(s, "{},{}", row.join(","), self.state.modulus);
                }
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let r = self.state.rank;
        let haystack = CoefficientBox { rank: r, n_max: self.n_max.clone() }.size();
        let mut s = String::new();
        let _ = writeln!(s, "haystack: {haystack} vectors (rank {r}, |n_j| < {})", self.n_max);
        for (p, why) in &self.skipped {
            let _ = writeln!(s, "skipped p = {p}: {why}");
        }
        for (i, st) in self.steps.iter().enumerate() {
            let _ = writeln!(
                s,
                "step {:>2}: p = {:<5} N = {:<8} m = {:<8} pass {:<12} B = {:<12} |W| = {:<8} in box {}",
                i + 1,
                st.p,
                st.order,
                st.exponent,
                st.pass_fraction.to_string(),
                st.modulus,
                st.survivors,
                st.in_box
            );
        }
        let _ = writeln!(s, "stopped: {}", self.stop.as_str());
        let _ = writeln!(
            s,
            "density {:.6e} (product of pass fractions {:.6e})",
            self.state.density(),
            self.predicted_density()
        );
        match self.box_vectors() {
            Some(vs) => {
                let _ = writeln!(s, "survivors in the box ({}):", vs.len());
                for v in vs {
                    let row: Vec<String> = v.iter().map(i128::to_string).collect();
                    let _ = writeln!(s, "  ({})", row.join(", "));
                }
            }
            None => {
                let _ = writeln!(
                    s,
                    "{} residue classes mod {} ({} box vectors)",
                    self.state.survivors.len(),
                    self.state.modulus,
                    self.in_box_count()
                );
            }
        }
        s
    }
}

fn is_skip(e: &SieveError) -> bool {
    matches!(
        e,
        SieveError::BadPrime(_) | SieveError::BadDenominator(_) | SieveError::Curve(CurveError::BadPrime(_) | CurveError::NotPrime(_))
    )
}

/// Local data for each prime, in parallel; unusable primes are returned
/// separately with the reason.
pub fn local_data_for(
    inst: &SieveInstance,
    primes: &[u64],
) -> Result<(Vec<AnyLocalData>, Vec<(u64, String)>), SieveError> {
    let results: Vec<(u64, Result<AnyLocalData, SieveError>)> =
        primes.par_iter().map(|&p| (p, compute_local_data(inst, p))).collect();
    let mut locals = Vec::new();
    let mut skipped = Vec::new();
    for (p, r) in results {
        match r {
            Ok(l) => locals.push(l),
            Err(e) if is_skip(&e) => skipped.push((p, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok((locals, skipped))
}

pub fn run_sieve(inst: &SieveInstance, primes: &[u64], schedule: Schedule) -> Result<SieveOutcome, SieveError> {
    let (locals, skipped) = local_data_for(inst, primes)?;
    let mut state = SieveState::new(inst.rank);
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut last_count = state.in_box_count(&inst.n_max);
    let mut flat = 0usize;
    let mut used = vec![false; locals.len()];
    let mut given = 0usize;
    let stop = loop {
        if steps.len() >= inst.max_primes {
            break StopReason::Budget;
        }
        let idx = match schedule {
            Schedule::Given => {
                if given == locals.len() {
                    break StopReason::Exhausted;
                }
                given += 1;
                given - 1
            }
            Schedule::Auto => {
                let open: Vec<usize> = (0..locals.len()).filter(|&i| !used[i]).collect();
                if open.is_empty() {
                    break StopReason::Exhausted;
                }
                let refs: Vec<&AnyLocalData> = open.iter().map(|&i| &locals[i]).collect();
                match select_next_prime(&state, &refs, inst.survivor_ceiling) {
                    Selection::Chosen { index, .. } => open[index],
                    Selection::GrowthLimited => break StopReason::GrowthLimited,
                    Selection::Uninformative => break StopReason::Uninformative,
                }
            }
        };
        used[idx] = true;
        let local = &locals[idx];
        state = sieve_refine(&state, local, inst.survivor_ceiling)?;
        let count = state.in_box_count(&inst.n_max);
        steps.push(StepRecord {
            p: local.p(),
            order: local.order(),
            exponent: local.exponent(),
            targets: local.target_count(),
            pass_fraction: local.pass_fraction(),
            modulus: state.modulus,
            survivors: state.survivors.len(),
            in_box: count.clone(),
        });
        if count < last_count {
            flat = 0;
            last_count = count;
        } else {
            flat += 1;
            if flat >= inst.patience {
                break StopReason::Stalled;
            }
        }
    };
    Ok(SieveOutcome { state, steps, skipped, stop, n_max: inst.n_max.clone() })
}

/// Known points on the Pascal model land in `T_p`: for each known solution
/// `(x, y)`, whether `iota_p` of its reduction is among the embedded
/// `F_p`-points.
pub fn known_points_in_targets(curve: &CurveModel, p: u64) -> Result<Vec<bool>, SieveError> {
    let jac = JacobianFp::new(curve, p).map_err(|e| match e {
        JacobianError::Curve(c) => SieveError::Curve(c),
        other => SieveError::Jacobian(other),
    })?;
    let targets: HashSet<_> = curve.enumerate_points(p)?.iter().map(|pt| jac.embed(pt)).collect();
    Ok(known_model_points()
        .iter()
        .map(|(x, y)| {
            let pt = RationalJacobianPoint::from_point(
                &crate::arith::Rational::from_integer(x.clone()),
                &crate::arith::Rational::from_integer(y.clone()),
            );
            crate::jacobian::reduce_rational_point(&pt, &jac).is_ok_and(|d| targets.contains(&d))
        })
        .collect())
}
