//! Command-line front end. Every subcommand is deterministic given its flags.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage, 3 resource or
//! growth limit, 4 bad instance config.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::Integer;
use crate::curve::{CurveError, CurveModel, DEFAULT_EXT_CEILING};
use crate::diophantine::{
    cube_obstructed_mod9, cube_search, fibonacci_family_check, solve_small, verify_cube_triple, verify_sporadic_table,
    CubeInstance,
};
use crate::jacobian::{JacobianError, JacobianLocal};
use crate::sieve::{local_data_for, run_sieve, Schedule, SieveError, SieveInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

/// Seed for Monte Carlo density sampling.
pub const DEFAULT_SEED: u64 = 20_080_101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Auto,
    Given,
}

fn parse_integer(s: &str) -> Result<Integer, String> {
    Integer::from_str(s.trim()).map_err(|_| format!("`{s}` is not an integer"))
}

fn parse_triple(s: &str) -> Result<[Integer; 3], String> {
    let parts = s.split(',').map(parse_integer).collect::<Result<Vec<_>, _>>()?;
    parts.try_into().map_err(|_| format!("expected x,y,z, got `{s}`"))
}

fn parse_prime_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim().parse::<u64>() {
            Ok(p) if crate::arith::is_prime_u64(p) => Ok(p),
            _ => Err(format!("`{t}` is not a prime")),
        })
        .collect()
}

#[derive(Debug, Parser)]
#[command(name = "pascal", version, about = "Integral points on C(y,2) = C(x,5) and the Mordell-Weil sieve")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Progress notes on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search x^3 + y^3 + z^3 = k with max(|x|,|y|,|z|) <= bound.
    Cubes {
        #[arg(value_parser = parse_integer, allow_hyphen_values = true)]
        k: Integer,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        /// Check one triple `x,y,z` instead of searching.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        verify: Option<[Integer; 3]>,
    },
    /// Check the sporadic binomial coincidences and the Fibonacci family.
    Verify {
        #[arg(long, default_value_t = 10)]
        i_max: u64,
    },
    /// All solutions of C(y,2) = C(x,5) with |x| <= bound.
    Solve {
        #[arg(long, value_parser = parse_integer, allow_hyphen_values = true)]
        bound: Integer,
    },
    /// #C(F_p), #C(F_p^2) and #J(F_p) for good p in [p_min, p_max].
    Count {
        #[arg(long, default_value_t = 2)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
        /// Largest p for the O(p^2) count over F_{p^2}.
        #[arg(long, default_value_t = DEFAULT_EXT_CEILING)]
        ceiling: u64,
    },
    /// Run the sieve on an instance file.
    Sieve {
        config: PathBuf,
        /// Comma-separated primes, overriding the config.
        #[arg(long, value_parser = parse_prime_list)]
        primes: Option<::std::vec::Vec<u64>>,
        #[arg(long, value_enum)]
        schedule: Option<ScheduleArg>,
        /// Random vectors per consumed prime for the pass-rate check; 0 skips it.
        #[arg(long, default_value_t = 0)]
        density_samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) | CliError::Io { .. } => EXIT_RESOURCE,
            CliError::Config(_) => EXIT_CONFIG,
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::Config(_) | SieveError::SingularCurve => CliError::Config(e.to_string()),
            _ => CliError::Resource(e.to_string()),
        }
    }
}

/// A finished command: the report and whether every check in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    /// Notices for stderr.
    pub notes: Vec<String>,
    pub ok: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, notes: Vec::new(), ok: true }
    }
}

pub fn cmd_cubes(k: &Integer, bound: u64, verify: Option<&[Integer; 3]>, format: Format) -> Report {
    if let Some([x, y, z]) = verify {
        let ok = verify_cube_triple(x, y, z, k);
        let body = match format {
            Format::Text => format!("{x}^3 + {y}^3 + {z}^3 = {k}: {}\n", if ok { "verified" } else { "not verified" }),
            Format::Csv => format!("x,y,z,k,verified\n{x},{y},{z},{k},{ok}\n"),
        };
        return Report { body, notes: Vec::new(), ok };
    }
    let mut s = String::new();
    if cube_obstructed_mod9(k) {
        match format {
            Format::Text => {
                let _ = writeln!(s, "k = {k} is 4 or 5 mod 9, but cubes are 0 or ±1 mod 9: no solutions");
            }
            Format::Csv => s.push_str("x,y,z\n"),
        }
        let mut r = Report::ok(s);
        r.notes.push(format!("k = {k} is obstructed mod 9; no search"));
        return r;
    }
    let triples = cube_search(&CubeInstance { k: k.clone(), bound });
    match format {
        Format::Text => {
            let _ = writeln!(s, "x^3 + y^3 + z^3 = {k}, x >= y >= z, |.| <= {bound}: {} found", triples.len());
            for (x, y, z) in &triples {
                let _ = writeln!(s, "({x}, {y}, {z})");
            }
        }
        Format::Csv => {
            s.push_str("x,y,z\n");
            for (x, y, z) in &triples {
                let _ = writeln!(s, "{x},{y},{z}");
            }
        }
    }
    Report::ok(s)
}

pub fn cmd_verify(i_max: u64, format: Format) -> Report {
    let mut report = verify_sporadic_table();
    report.checks.extend(fibonacci_family_check(i_max).checks);
    let body = match format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
    };
    Report { body, notes: Vec::new(), ok: report.all_pass() }
}

pub fn cmd_solve(bound: &Integer, format: Format) -> Report {
    let sols = solve_small(bound);
    let mut s = String::new();
    match format {
        Format::Text => {
            let mut xs: Vec<String> = sols.iter().map(|e| e.x.to_string()).collect();
            xs.dedup();
            let _ = writeln!(s, "{} solutions with |x| <= {bound}; x in {{{}}}", sols.len(), xs.join(", "));
            for e in &sols {
                let _ = writeln!(s, "({}, {})", e.x, e.y);
            }
        }
        Format::Csv => {
            s.push_str("x,y\n");
            for e in &sols {
                let _ = writeln!(s, "{},{}", e.x, e.y);
            }
        }
    }
    Report::ok(s)
}

pub fn cmd_count(p_min: u64, p_max: u64, ceiling: u64, format: Format) -> Result<Report, CliError> {
    if p_max > ceiling {
        return Err(CliError::Resource(format!("p_max = {p_max} is above the ceiling {ceiling}")));
    }
    let curve = CurveModel::pascal();
    let mut notes = Vec::new();
    let mut s = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(s, "{:>6} {:>8} {:>10} {:>12} weil", "p", "n1", "n2", "N");
        }
        Format::Csv => s.push_str("p,n1,n2,N\n"),
    }
    let mut all_ok = true;
    for p in crate::arith::primes_up_to(p_max).into_iter().filter(|&p| p >= p_min) {
        let counts = match curve.local_counts(p, ceiling) {
            Ok(c) => c,
            Err(CurveError::BadPrime(_)) => {
                notes.push(format!("p = {p}: bad reduction, skipped"));
                continue;
            }
            Err(e) => return Err(CliError::Resource(e.to_string())),
        };
        let local = JacobianLocal::from_counts(counts).map_err(|e: JacobianError| CliError::Resource(e.to_string()))?;
        let ok = counts.satisfies_weil_bounds() && local.within_weil_interval();
        all_ok &= ok;
        match format {
            Format::Text => {
                let _ = writeln!(s, "{:>6} {:>8} {:>10} {:>12} {}", p, counts.n1, counts.n2, local.order, ok);
            }
            Format::Csv => {
                let _ = writeln!(s, "{},{},{},{}", p, counts.n1, counts.n2, local.order);
            }
        }
    }
    if format == Format::Text {
        s.extend(notes.iter().map(|n| format!("{n}\n")));
    }
    Ok(Report { body: s, notes, ok: all_ok })
}

pub fn cmd_sieve(
    inst: &SieveInstance,
    primes: Option<&[u64]>,
    schedule: Option<Schedule>,
    density_samples: usize,
    seed: u64,
    format: Format,
) -> Result<Report, CliError> {
    let list = match primes {
        Some(ps) => ps.to_vec(),
        None => inst.candidate_primes(),
    };
    let schedule = schedule.unwrap_or(inst.schedule);
    let outcome = run_sieve(inst, &list, schedule)?;
    let mut body = match format {
        Format::Text => outcome.to_text(),
        Format::Csv => outcome.to_csv(),
    };
    if density_samples > 0 {
        let consumed = outcome.state.consumed().to_vec();
        let (locals, _) = local_data_for(inst, &consumed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match format {
            Format::Text => {
                let _ = writeln!(body, "pass rates over {density_samples} random vectors (seed {seed}):");
            }
            Format::Csv => {
                let _ = writeln!(body, "\np,pass_fraction,empirical");
            }
        }
        for l in &locals {
            let est = l.empirical_pass_rate(density_samples, &mut rng);
            match format {
                Format::Text => {
                    let _ = writeln!(body, "  p = {:<6} exact {:<12} empirical {est:.6}", l.p(), l.pass_fraction().to_string());
                }
                Format::Csv => {
                    let _ = writeln!(body, "{},{},{est:.6}", l.p(), l.pass_fraction());
                }
            }
        }
    }
    Ok(Report::ok(body))
}

/// Run a parsed command line; returns the exit code.
pub fn run(cfg: RunConfig) -> i32 {
    let format = cfg.format;
    let result = match &cfg.command {
        Command::Cubes { k, bound, verify } => Ok(cmd_cubes(k, *bound, verify.as_ref(), format)),
        Command::Verify { i_max } => Ok(cmd_verify(*i_max, format)),
        Command::Solve { bound } => Ok(cmd_solve(bound, format)),
        Command::Count { p_min, p_max, ceiling } => cmd_count(*p_min, *p_max, *ceiling, format),
        Command::Sieve { config, primes, schedule, density_samples, seed } => SieveInstance::load(config)
            .map_err(|e| CliError::Config(e.to_string()))
            .and_then(|inst| {
                let schedule = schedule.map(|s| match s {
                    ScheduleArg::Auto => Schedule::Auto,
                    ScheduleArg::Given => Schedule::Given,
                });
                if cfg.verbose {
                    eprintln!("instance {}", inst.name.as_deref().unwrap_or("(unnamed)"));
                }
                cmd_sieve(&inst, primes.as_deref(), schedule, *density_samples, *seed, format)
            }),
    };
    match result {
        Ok(report) => {
            for n in &report.notes {
                eprintln!("{n}");
            }
            if let Err(e) = emit(&cfg.output, &report.body) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            if report.ok {
                EXIT_OK
            } else {
                EXIT_FAILED_CHECK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(output: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Parse `args` and run; clap usage errors map to exit 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(cfg),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
