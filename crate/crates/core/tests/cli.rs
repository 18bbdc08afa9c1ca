use std::path::PathBuf;
use std::process::{Command, Output};

use pascal_sieve::curve::CurveModel;
use pascal_sieve::jacobian::enumerate_group;

fn pascal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pascal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn instance(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("instances");
    p.push(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn cubes_lists_both_triples_for_29() {
    let o = pascal(&["cubes", "29"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(3, 1, 1)"));
    assert!(out.contains("(4, -2, -3)"));
}

#[test]
fn cubes_reports_the_mod_9_obstruction() {
    for k in ["31", "32", "-4"] {
        let o = pascal(&["cubes", k]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("4 or 5 mod 9"), "k = {k}");
    }
}

#[test]
fn cubes_verifies_a_given_triple() {
    let good = pascal(&["cubes", "30", "--verify", "2220422932,-2218888517,-283059965"]);
    assert_eq!(good.status.code(), Some(0));
    let bad = pascal(&["cubes", "30", "--verify", "1,1,1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_passes_every_row() {
    let o = pascal(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("C(16,2) = C(10,3) = 120"));
    assert!(out.contains("C(15,5)"));
    assert!(!out.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn solve_at_bound_zero() {
    let o = pascal(&["solve", "--bound", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x,y\n0,0\n0,1\n");
}

#[test]
fn count_csv_matches_brute_force_for_small_primes() {
    let o = pascal(&["count", "--p-max", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("p = 5: bad reduction, skipped"));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,n1,n2,N"));
    let curve = CurveModel::pascal();
    let mut rows = 0;
    for line in lines {
        let f: Vec<u64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        let p = f[0];
        assert_eq!(f[1], curve.count_points(p).unwrap());
        assert_eq!(f[3], enumerate_group(&curve, p).unwrap().len() as u64, "p = {p}");
        rows += 1;
    }
    assert_eq!(rows, 3);
}

#[test]
fn count_refuses_primes_above_the_ceiling() {
    let o = pascal(&["count", "--p-max", "100", "--ceiling", "50"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sieve_demo_is_repeatable() {
    let conf = instance("elliptic_demo.conf");
    let a = pascal(&["sieve", &conf, "--format", "csv"]);
    let b = pascal(&["sieve", &conf, "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.ends_with("n_1\n-1\n1\n"), "{out}");
}

#[test]
fn sieve_with_no_primes_keeps_the_whole_box() {
    let o = pascal(&["sieve", &instance("elliptic_demo.conf"), "--primes", ""]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1 residue classes mod 1 (99 box vectors)"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pascal(&["cubes", "abc"]).status.code(), Some(2));
    assert_eq!(pascal(&["nonsense"]).status.code(), Some(2));
    assert_eq!(pascal(&["sieve", &instance("elliptic_demo.conf"), "--primes", "7,12"]).status.code(), Some(2));
}

#[test]
fn missing_config_exits_4() {
    assert_eq!(pascal(&["sieve", "/nonexistent/instance.conf"]).status.code(), Some(4));
}

#[test]
fn growth_past_the_ceiling_exits_3() {
    let dir = std::env::temp_dir().join(format!("pascal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("tight.conf");
    std::fs::write(
        &conf,
        "kind = elliptic\ncurve = 0 -2\nrank = 1\ngenerator = 3 5\nn_max = 50\nsurvivor_ceiling = 5\nschedule = given\nprimes = 7\n",
    )
    .unwrap();
    let o = pascal(&["sieve", conf.to_str().unwrap()]);
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
