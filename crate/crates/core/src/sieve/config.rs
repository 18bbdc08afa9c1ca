//! Instance files.
//!
//! One `key = value` pair per line; `#` starts a comment. Keys:
//!
//! ```text
//! name             = free text                                     (optional label)
//! kind             = hyperelliptic | elliptic                      (required)
//! curve            = pascal | c0 c1 c2 c3 c4 c5    (hyperelliptic, monic quintic, ascending)
//!                  = a b                           (elliptic, y^2 = x^3 + a x + b)
//! rank             = r                                             (required)
//! generator        = X Y                           (a curve point; repeat r times)
//!                  = u: c0 c1 [c2] ; v: c0 [c1]    (hyperelliptic Mumford pair)
//!                  = auto                          (elliptic, rank 1: naive search)
//! n_max            = N                             (box |n_j| < N, required)
//! prime_ceiling    = 1000
//! survivor_ceiling = 200000
//! max_primes       = 25
//! x_bound          = 100                           (elliptic: integral points have |x| <= x_bound)
//! primes           = all | p1 p2 ...
//! schedule         = auto | given
//! patience         = 3
//! ```
//!
//! Numbers are exact: integers in decimal, rationals as `a/b`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_traits::One;
use thiserror::Error;

use crate::arith::{Integer, Rational};
use crate::curve::CurveModel;
use crate::jacobian::RationalJacobianPoint;

use super::elliptic::{RationalPoint, WeierstrassCurve};
use super::{InstanceCurve, PrimeList, Schedule, SieveInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

const KEYS: [&str; 13] = [
    "kind",
    "curve",
    "rank",
    "generator",
    "n_max",
    "prime_ceiling",
    "survivor_ceiling",
    "max_primes",
    "x_bound",
    "primes",
    "schedule",
    "patience",
    "name",
];

struct Entries {
    single: BTreeMap<String, (usize, String)>,
    generators: Vec<(usize, String)>,
}

fn split_lines(text: &str) -> Result<Entries, ConfigError> {
    let mut single = BTreeMap::new();
    let mut generators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::Syntax { line, message: format!("unknown key `{key}`") });
        }
        if key == "generator" {
            generators.push((line, value.to_string()));
        } else if single.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(ConfigError::Syntax { line, message: format!("duplicate key `{key}`") });
        }
    }
    Ok(Entries { single, generators })
}

fn syntax(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, message: message.into() }
}

fn parse_integer(line: usize, s: &str) -> Result<Integer, ConfigError> {
    Integer::from_str(s).map_err(|_| syntax(line, format!("`{s}` is not an integer")))
}

fn parse_rational(line: usize, s: &str) -> Result<Rational, ConfigError> {
    if let Some((n, d)) = s.split_once('/') {
        let (n, d) = (parse_integer(line, n)?, parse_integer(line, d)?);
        if d.sign() == num_bigint::Sign::NoSign {
            return Err(syntax(line, format!("zero denominator in `{s}`")));
        }
        Ok(Rational::new(n, d))
    } else {
        Ok(Rational::from_integer(parse_integer(line, s)?))
    }
}

fn parse_count<T: FromStr>(line: usize, s: &str) -> Result<T, ConfigError> {
    s.parse().map_err(|_| syntax(line, format!("`{s}` is not a non-negative integer")))
}

fn parse_rationals(line: usize, s: &str) -> Result<Vec<Rational>, ConfigError> {
    s.split_whitespace().map(|t| parse_rational(line, t)).collect()
}

fn parse_mumford(line: usize, s: &str) -> Result<RationalJacobianPoint, ConfigError> {
    let (u, v) = s.split_once(';').ok_or_else(|| syntax(line, "expected `u: ... ; v: ...`"))?;
    let u = u.trim().strip_prefix("u:").ok_or_else(|| syntax(line, "expected `u:`"))?;
    let v = v.trim().strip_prefix("v:").ok_or_else(|| syntax(line, "expected `v:`"))?;
    Ok(RationalJacobianPoint { u: parse_rationals(line, u)?, v: parse_rationals(line, v)? })
}

fn point_pair(line: usize, s: &str) -> Result<(Rational, Rational), ConfigError> {
    match parse_rationals(line, s)?.as_slice() {
        [x, y] => Ok((x.clone(), y.clone())),
        _ => Err(syntax(line, format!("expected two coordinates, got `{s}`"))),
    }
}

impl SieveInstance {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let e = split_lines(text)?;
        let get = |k: &'static str| e.single.get(k).ok_or(ConfigError::Missing(k));
        let opt = |k: &str| e.single.get(k);

        let (kl, kind) = get("kind")?;
        let (rl, rank) = get("rank")?;
        let rank: usize = parse_count(*rl, rank)?;
        if rank == 0 {
            return Err(syntax(*rl, "rank must be at least 1"));
        }
        let (nl, n_max) = get("n_max")?;
        let n_max = parse_integer(*nl, n_max)?;
        if n_max < Integer::one() {
            return Err(syntax(*nl, "n_max must be at least 1"));
        }
        let (cl, curve_text) = get("curve")?;
        let (cl, curve_text) = (*cl, curve_text.as_str());

        let curve = match kind.as_str() {
            "hyperelliptic" => {
                let model = if curve_text == "pascal" {
                    CurveModel::pascal()
                } else {
                    let cs = curve_text
                        .split_whitespace()
                        .map(|t| parse_integer(cl, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    CurveModel::from_coeffs(cs).map_err(|err| syntax(cl, err.to_string()))?
                };
                let mut generators = Vec::new();
                for (line, g) in &e.generators {
                    let pt = if g.contains(':') {
                        parse_mumford(*line, g)?
                    } else {
                        let (x, y) = point_pair(*line, g)?;
                        RationalJacobianPoint::from_point(&x, &y)
                    };
                    pt.validate(&model).map_err(|err| syntax(*line, err.to_string()))?;
                    generators.push(pt);
                }
                if opt("x_bound").is_some() {
                    return Err(ConfigError::Invalid("x_bound applies to elliptic instances only".into()));
                }
                InstanceCurve::Hyperelliptic { curve: model, generators }
            }
            "elliptic" => {
                let [a, b] = curve_text.split_whitespace().collect::<Vec<_>>()[..] else {
                    return Err(syntax(cl, "elliptic curve needs `a b`"));
                };
                let curve = WeierstrassCurve::new(parse_integer(cl, a)?, parse_integer(cl, b)?)
                    .map_err(|err| syntax(cl, err.to_string()))?;
                let x_bound = match opt("x_bound") {
                    Some((l, v)) => parse_count(*l, v)?,
                    None => 100,
                };
                let mut generators = Vec::new();
                for (line, g) in &e.generators {
                    let pt = if g == "auto" {
                        curve
                            .naive_generator(x_bound)
                            .ok_or_else(|| syntax(*line, "no non-torsion integral point found"))?
                    } else {
                        let (x, y) = point_pair(*line, g)?;
                        RationalPoint::affine(x, y)
                    };
                    if !curve.contains(&pt) {
                        return Err(syntax(*line, format!("{pt} is not on the curve")));
                    }
                    generators.push(pt);
                }
                InstanceCurve::Elliptic { curve, generators, x_bound }
            }
            other => return Err(syntax(*kl, format!("unknown kind `{other}`"))),
        };
        let gens = match &curve {
            InstanceCurve::Hyperelliptic { generators, .. } => generators.len(),
            InstanceCurve::Elliptic { generators, .. } => generators.len(),
        };
        if gens != rank {
            return Err(ConfigError::Invalid(format!("rank is {rank} but {gens} generators are given")));
        }

        let count = |k: &str, default: u64| -> Result<u64, ConfigError> {
            match opt(k) {
                Some((l, v)) => parse_count(*l, v),
                None => Ok(default),
            }
        };
        let prime_ceiling = count("prime_ceiling", 1000)?;
        let survivor_ceiling = count("survivor_ceiling", 200_000)? as usize;
        let max_primes = count("max_primes", 25)? as usize;
        let patience = count("patience", 3)? as usize;
        if survivor_ceiling == 0 || patience == 0 {
            return Err(ConfigError::Invalid("survivor_ceiling and patience must be positive".into()));
        }
        let primes = match opt("primes") {
            None => PrimeList::All,
            Some((_, v)) if v == "all" => PrimeList::All,
            Some((l, v)) => PrimeList::Given(
                v.split_whitespace().map(|t| parse_count(*l, t)).collect::<Result<Vec<u64>, _>>()?,
            ),
        };
        let schedule = match opt("schedule").map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "auto")) => Schedule::Auto,
            Some((_, "given")) => Schedule::Given,
            Some((l, v)) => return Err(syntax(l, format!("unknown schedule `{v}`"))),
        };
        Ok(SieveInstance {
            name: opt("name").map(|(_, v)| v.clone()),
            curve,
            rank,
            n_max,
            prime_ceiling,
            survivor_ceiling,
            max_primes,
            patience,
            schedule,
            primes,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        SieveInstance::parse(&text)
    }
}
