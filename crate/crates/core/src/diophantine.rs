//! Elementary diophantine checks: sums of three cubes, coincidences in
//! Pascal's triangle, and the small-solution search for
//! `60 y (y-1) = x (x-1) (x-2) (x-3) (x-4)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binom, exact_sqrt, isqrt_u128, Integer};

/// Cubes are 0 or ±1 mod 9, so a sum of three of them misses 4 and 5.
pub fn cube_obstructed_mod9(k: &Integer) -> bool {
    let r = ((k % 9u32) + 9u32) % 9u32;
    r == Integer::from(4) || r == Integer::from(5)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeInstance {
    pub k: Integer,
    /// Half-width of the search box: `max(|x|, |y|, |z|) <= bound`.
    pub bound: u64,
}

pub type CubeTriple = (i64, i64, i64);

/// Triples `x >= y >= z` in the box with `x^3 + y^3 + z^3 = k`, ascending.
///
/// Returns immediately when `k` is obstructed mod 9.
pub fn cube_search(inst: &CubeInstance) -> Vec<CubeTriple> {
    if cube_obstructed_mod9(&inst.k) {
        return Vec::new();
    }
    cube_search_exhaustive(inst)
}

/// Same as [`cube_search`] without the mod-9 shortcut.
pub fn cube_search_exhaustive(inst: &CubeInstance) -> Vec<CubeTriple> {
    let b = i64::try_from(inst.bound).expect("bound fits in i64");
    let b3 = (b as i128).pow(3);
    let Some(k) = inst.k.to_i128().filter(|k| k.abs() <= 3 * b3) else {
        return Vec::new();
    };
    let cube = |t: i64| (t as i128).pow(3);
    // y^3 + z^3 -> [(y, z)] with y >= z
    let mut pairs: HashMap<i128, Vec<(i64, i64)>> = HashMap::new();
    for y in -b..=b {
        for z in -b..=y {
            pairs.entry(cube(y) + cube(z)).or_default().push((y, z));
        }
    }
    let mut out = Vec::new();
    for x in -b..=b {
        if let Some(list) = pairs.get(&(k - cube(x))) {
            out.extend(list.iter().filter(|&&(y, _)| y <= x).map(|&(y, z)| (x, y, z)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn verify_cube_triple(x: &Integer, y: &Integer, z: &Integer, k: &Integer) -> bool {
    &(x * x * x + y * y * y + z * z * z) == k
}

/// `C(y, k) = C(x, l)` with the side conditions `1 < k <= y/2`,
/// `1 < l <= x/2`, `k < l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialSolution {
    pub y: u64,
    pub k: u64,
    pub x: u64,
    pub l: u64,
}

impl BinomialSolution {
    pub fn holds(&self) -> bool {
        binom(self.y, self.k) == binom(self.x, self.l)
    }

    pub fn nontrivial(&self) -> bool {
        1 < self.k && 2 * self.k <= self.y && 1 < self.l && 2 * self.l <= self.x && self.k < self.l
    }
}

/// One row of an identity report: every listed `C(n, k)` should agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: String,
    pub rhs: String,
    /// Common value, when it was expanded.
    pub value: Option<Integer>,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lhs,rhs,value,pass\n");
        for c in &self.checks {
            let v = c.value.as_ref().map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(s, "\"{}\",\"{}\",{},{}", c.lhs, c.rhs, v, c.pass);
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let v = c.value.as_ref().map(|v| format!(" = {v}")).unwrap_or_default();
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{mark} {} = {}{v}", c.lhs, c.rhs);
        }
        let _ = writeln!(s, "{} identities, all pass: {}", self.checks.len(), self.all_pass());
        s
    }
}

/// The known coincidences `C(y, 2) = C(x, l) [= ...]`, as chains of `(n, k)`.
pub const SPORADIC_IDENTITIES: [&[(u64, u64)]; 7] = [
    &[(16, 2), (10, 3)],
    &[(56, 2), (22, 3)],
    &[(120, 2), (36, 3)],
    &[(21, 2), (10, 4)],
    &[(153, 2), (19, 5)],
    &[(78, 2), (15, 5), (14, 6)],
    &[(221, 2), (17, 8)],
];

fn binom_expr(n: &Integer, k: &Integer) -> String {
    format!("C({n},{k})")
}

pub fn verify_sporadic_table() -> IdentityReport {
    let checks = SPORADIC_IDENTITIES
        .iter()
        .map(|chain| {
            let values: Vec<Integer> = chain.iter().map(|&(n, k)| binom(n, k)).collect();
            let (n0, k0) = chain[0];
            IdentityCheck {
                lhs: binom_expr(&n0.into(), &k0.into()),
                rhs: chain[1..]
                    .iter()
                    .map(|&(n, k)| binom_expr(&n.into(), &k.into()))
                    .collect::<Vec<_>>()
                    .join(" = "),
                pass: values.windows(2).all(|w| w[0] == w[1]),
                value: Some(values[0].clone()),
            }
        })
        .collect();
    IdentityReport { checks }
}

/// All pairwise [`BinomialSolution`]s implied by the sporadic table.
pub fn sporadic_solutions() -> Vec<BinomialSolution> {
    let mut out = Vec::new();
    for chain in SPORADIC_IDENTITIES {
        for (i, &(y, k)) in chain.iter().enumerate() {
            for &(x, l) in &chain[i + 1..] {
                out.push(BinomialSolution { y, k, x, l });
            }
        }
    }
    out
}

/// Fibonacci numbers with `F_1 = F_2 = 1`.
pub fn fibonacci(n: u64) -> Integer {
    let (mut a, mut b) = (Integer::zero(), Integer::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

/// Binomials with `n` above this are compared through their ratio only.
pub const FULL_EXPANSION_LIMIT: u64 = 2000;

/// `C(F_{2i+2} F_{2i+3}, F_{2i} F_{2i+3}) = C(F_{2i+2} F_{2i+3} - 1, F_{2i} F_{2i+3} + 1)`
/// for `i = 1..=i_max`.
///
/// With `0 <= k < n - 1`, `C(n, k) / C(n-1, k+1) = n (k+1) / ((n-k)(n-k-1))`,
/// so the identity holds iff `n (k+1) = (n-k)(n-k-1)`. That is checked for
/// every row; rows with `n <= FULL_EXPANSION_LIMIT` are also expanded in full.
pub fn fibonacci_family_check(i_max: u64) -> IdentityReport {
    let mut checks = Vec::new();
    for i in 1..=i_max {
        let f3 = fibonacci(2 * i + 3);
        let n = fibonacci(2 * i + 2) * &f3;
        let k = fibonacci(2 * i) * &f3;
        let one = Integer::one();
        let n1 = &n - &one;
        let k1 = &k + &one;
        let well_posed = k1 < n1;
        let ratio_ok = well_posed && &n * &k1 == (&n - &k) * (&n - &k - &one);
        let (value, full_ok) = match (n.to_u64(), k.to_u64()) {
            (Some(nn), Some(kk)) if nn <= FULL_EXPANSION_LIMIT => {
                let lhs = binom(nn, kk);
                let ok = lhs == binom(nn - 1, kk + 1);
                (Some(lhs), ok)
            }
            _ => (None, true),
        };
        checks.push(IdentityCheck {
            lhs: binom_expr(&n, &k),
            rhs: binom_expr(&n1, &k1),
            value,
            pass: ratio_ok && full_ok,
        });
    }
    IdentityReport { checks }
}

fn quintic_falling(x: &Integer) -> Integer {
    (0..5).map(|j| x - Integer::from(j)).product()
}

/// Exact test of `60 y (y-1) = x (x-1) (x-2) (x-3) (x-4)`.
pub fn check_equation(x: &Integer, y: &Integer) -> bool {
    Integer::from(60) * y * (y - 1) == quintic_falling(x)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquationSolution {
    pub x: Integer,
    pub y: Integer,
}

/// Above this `|x|`, `15 R + 225` may leave `i128`.
const FAST_PATH_LIMIT: i64 = 10_000_000;

fn y_values_fast(x: i64) -> Option<i128> {
    let x = x as i128;
    let r = x * (x - 1) * (x - 2) * (x - 3) * (x - 4);
    let d = 15 * r + 225;
    if d < 0 {
        return None;
    }
    let s = isqrt_u128(d as u128) as i128;
    (s * s == d && s % 30 == 15).then_some((s + 15) / 30)
}

fn y_values_big(x: &Integer) -> Option<Integer> {
    let d = Integer::from(15) * quintic_falling(x) + 225;
    let s = exact_sqrt(&d)?;
    (&s % 30u32 == Integer::from(15)).then(|| (s + 15u32) / 30u32)
}

/// All integer solutions with `|x| <= x_bound`, sorted by `(x, y)`.
///
/// For each `x` the equation is the completed square
/// `(30 y - 15)^2 = 15 x (x-1)(x-2)(x-3)(x-4) + 225`, so it suffices to test
/// the right side for a square root `Y ≡ 15 (mod 30)` and take
/// `y = (Y + 15) / 30` together with its mirror `1 - y`.
pub fn solve_small(x_bound: &Integer) -> Vec<EquationSolution> {
    let mut out = Vec::new();
    if x_bound.is_negative() {
        return out;
    }
    let mut push = |x: Integer, y: Integer| {
        let mirror = Integer::one() - &y;
        out.push(EquationSolution { x: x.clone(), y: mirror });
        out.push(EquationSolution { x, y });
    };
    let fast = x_bound.to_i64().map(|b| b.min(FAST_PATH_LIMIT)).unwrap_or(FAST_PATH_LIMIT);
    for x in -fast..=fast {
        if let Some(y) = y_values_fast(x) {
            push(Integer::from(x), Integer::from(y));
        }
    }
    if x_bound > &Integer::from(FAST_PATH_LIMIT) {
        let mut x = Integer::from(FAST_PATH_LIMIT + 1);
        while &x <= x_bound {
            for cand in [x.clone(), -x.clone()] {
                if let Some(y) = y_values_big(&cand) {
                    push(cand, y);
                }
            }
            x += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn mod9_obstruction() {
        assert!(cube_obstructed_mod9(&int(31)));
        assert!(cube_obstructed_mod9(&int(32)));
        assert!(!cube_obstructed_mod9(&int(29)));
        assert!(cube_obstructed_mod9(&int(-4)));
        assert!(!cube_obstructed_mod9(&int(33)));
        // oracle: residues of cube sums mod 9
        let reachable: Vec<i64> = (0..9)
            .flat_map(|a| (0..9).flat_map(move |b| (0..9).map(move |c| (a * a * a + b * b * b + c * c * c) % 9)))
            .collect();
        for r in 0..9 {
            assert_eq!(cube_obstructed_mod9(&int(r)), !reachable.contains(&r));
        }
    }

    #[test]
    fn cubes_29() {
        let found = cube_search(&CubeInstance { k: int(29), bound: 5 });
        assert!(found.contains(&(3, 1, 1)));
        assert!(found.contains(&(4, -2, -3)));
        for &(x, y, z) in &found {
            assert!(x >= y && y >= z);
            assert!(verify_cube_triple(&int(x), &int(y), &int(z), &int(29)));
        }
        assert!(found.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cubes_zero_cancellation() {
        let found = cube_search(&CubeInstance { k: int(0), bound: 2 });
        assert!(found.contains(&(1, 0, -1)));
        assert!(found.contains(&(2, 0, -2)));
    }

    #[test]
    fn obstructed_targets_are_empty_even_exhaustively() {
        for k in [4, 5, 13, 14, 22, 23, 31, 32] {
            let inst = CubeInstance { k: int(k), bound: 30 };
            assert!(cube_search(&inst).is_empty());
            assert!(cube_search_exhaustive(&inst).is_empty());
        }
    }

    #[test]
    fn large_k_outside_box() {
        assert!(cube_search(&CubeInstance { k: int(10_000), bound: 3 }).is_empty());
        let huge: Integer = "1000000000000000000000000000000000000000000".parse().unwrap();
        assert!(cube_search(&CubeInstance { k: huge, bound: 3 }).is_empty());
    }

    #[test]
    fn k30_triple() {
        let x: Integer = "2220422932".parse().unwrap();
        let y: Integer = "-2218888517".parse().unwrap();
        let z: Integer = "-283059965".parse().unwrap();
        assert!(verify_cube_triple(&x, &y, &z, &int(30)));
        assert!(!verify_cube_triple(&x, &y, &z, &int(31)));
        assert!(verify_cube_triple(&int(3), &int(1), &int(1), &int(29)));
        assert!(!verify_cube_triple(&int(0), &int(0), &int(0), &int(1)));
    }

    #[test]
    fn sporadic_table() {
        let r = verify_sporadic_table();
        assert_eq!(r.checks.len(), 7);
        assert!(r.all_pass());
        let value_of = |lhs: &str| r.checks.iter().find(|c| c.lhs == lhs).unwrap().value.clone().unwrap();
        assert_eq!(value_of("C(78,2)"), int(3003));
        assert_eq!(value_of("C(221,2)"), int(24310));
        assert_eq!(value_of("C(120,2)"), int(7140));
        let sols = sporadic_solutions();
        assert!(sols.iter().all(BinomialSolution::holds));
        assert!(sols.iter().all(BinomialSolution::nontrivial));
    }

    #[test]
    fn fibonacci_rows() {
        assert_eq!(fibonacci(1), int(1));
        assert_eq!(fibonacci(2), int(1));
        assert_eq!(fibonacci(7), int(13));
        assert!(fibonacci_family_check(0).checks.is_empty());
        let r = fibonacci_family_check(10);
        assert_eq!(r.checks.len(), 10);
        assert!(r.all_pass());
        assert_eq!(r.checks[0].lhs, "C(15,5)");
        assert_eq!(r.checks[0].rhs, "C(14,6)");
        assert_eq!(r.checks[0].value, Some(int(3003)));
        assert_eq!(r.checks[1].lhs, "C(104,39)");
        assert_eq!(r.checks[1].rhs, "C(103,40)");
        // independent full expansion for i = 2
        assert_eq!(binom(104, 39), binom(103, 40));
        assert_eq!(r.checks[1].value, Some(binom(104, 39)));
    }

    #[test]
    fn ratio_test_rejects_non_identities() {
        // n (k+1) = (n-k)(n-k-1) fails for neighbours of a true row
        let (n, k) = (15i64, 4i64);
        assert_ne!(n * (k + 1), (n - k) * (n - k - 1));
        assert_ne!(binom(15, 4), binom(14, 5));
    }

    #[test]
    fn equation_checks() {
        assert!(check_equation(&int(19), &int(153)));
        assert!(check_equation(&int(15), &int(78)));
        assert!(check_equation(&int(0), &int(0)));
        assert!(!check_equation(&int(-1), &int(0)));
        assert!(!check_equation(&int(8), &int(3)));
    }

    #[test]
    fn solve_small_cases() {
        let xs: Vec<Integer> = {
            let mut v: Vec<Integer> = solve_small(&int(25)).into_iter().map(|s| s.x).collect();
            v.dedup();
            v
        };
        assert_eq!(xs, [0, 1, 2, 3, 4, 5, 6, 7, 15, 19].map(int));
        let zero = solve_small(&int(0));
        assert_eq!(
            zero,
            vec![EquationSolution { x: int(0), y: int(0) }, EquationSolution { x: int(0), y: int(1) }]
        );
        assert!(solve_small(&int(1)).iter().all(|s| s.x != int(-1)));
    }

    #[test]
    fn solve_small_matches_double_loop() {
        let b = 200i64;
        let mut oracle = Vec::new();
        for x in -b..=b {
            let x128 = x as i128;
            let r = x128 * (x128 - 1) * (x128 - 2) * (x128 - 3) * (x128 - 4);
            for y in -80_000i128..=80_000 {
                if 60 * y * (y - 1) == r {
                    oracle.push(EquationSolution { x: int(x), y: Integer::from(y) });
                }
            }
        }
        oracle.sort();
        assert_eq!(solve_small(&int(b)), oracle);
        for s in &oracle {
            assert!(check_equation(&s.x, &s.y));
            assert!(oracle.contains(&EquationSolution { x: s.x.clone(), y: Integer::one() - &s.y }));
        }
    }

    #[test]
    fn big_path_agrees_with_fast_path() {
        for x in [-30i64, -1, 0, 3, 15, 19, 20, 1000] {
            assert_eq!(y_values_fast(x).map(Integer::from), y_values_big(&int(x)), "x = {x}");
        }
    }
}
