//! The binary end to end: reports, determinism and exit statuses.

use std::path::Path;
use std::process::{Command, Output};

fn catransport(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catransport")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn flat_run_is_exact_and_passes() {
    let o = catransport(&["run", "--scenario", "flat", "--checks", "all"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,scenario,N,M,residual,tolerance,pass"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 7, "{line}");
        assert!(f[4].parse::<f64>().unwrap() < 1e-12, "{line}");
        assert_eq!(f[6], "true");
    }
    assert!(!text.contains('\r'));
}

#[test]
fn named_checks_pass_on_a_generic_scenario() {
    let o = catransport(&["run", "--scenario", "so3_conj", "--grid", "200x50", "--checks", "reparam,backtrack,thin,functorial"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 5);
}

#[test]
fn same_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(
            r#"{{"scenario": "so3_r3", "grid": {{"N": 40, "M": 16}}, "seed": 9, "checks": ["all"], "output": "{}"}}"#,
            out.display()
        ),
    );
    assert_eq!(code(&catransport(&["run", "--config", &cfg])), 0);
    let first = std::fs::read(&out).unwrap();
    assert_eq!(code(&catransport(&["run", "--config", &cfg])), 0);
    assert_eq!(first, std::fs::read(&out).unwrap());
    let direct = catransport(&["run", "--scenario", "so3_r3", "--grid", "40x16", "--seed", "9"]);
    assert_eq!(first, direct.stdout);
}

#[test]
fn unknown_names_and_bad_config_exit_2() {
    assert_eq!(code(&catransport(&["run", "--scenario", "nope"])), 2);
    assert_eq!(code(&catransport(&["run", "--scenario", "flat", "--checks", "bogus"])), 2);
    assert_eq!(code(&catransport(&["run", "--scenario", "flat", "--grid", "4x4"])), 2);
    assert_eq!(code(&catransport(&["run"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"scenario": "flat", "colour": 1}"#);
    assert_eq!(code(&catransport(&["run", "--config", &cfg])), 2);
    assert_eq!(code(&catransport(&["convergence", "--scenario", "flat", "--ladder", "8x8,16x8"])), 2);
}

#[test]
fn convergence_reports_orders() {
    let o = catransport(&["convergence", "--scenario", "so3_conj", "--checks", "reparam,wc", "--ladder", "50x8,100x8,200x8"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("check,h,residual,order\n"));
    let orders: Vec<f64> = text.lines().filter(|l| l.starts_with("reparam,")).filter_map(|l| l.rsplit(',').next()?.parse().ok()).collect();
    assert_eq!(orders.len(), 2);
    assert!(orders.iter().all(|o| (o - 2.0).abs() < 0.3), "{orders:?}");
    assert_eq!(text.lines().filter(|l| l.starts_with("wc,") && l.ends_with(",exact")).count(), 3);
}

#[test]
fn finite_covering_groups() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write(dir.path(), "z4.csv", "0,1,2,3\n1,2,3,0\n2,3,0,1\n3,0,1,2\n");
    let o = catransport(&["finite", "--cayley", &z4, "--center", "0,2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("law,pass,witness\n"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));

    // S3 with Z = {e, (12)}: not central, reported with a witness
    let s3: String = (0..6)
        .map(|a| (0..6).map(|b| s3_mul(a, b).to_string()).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    let s3 = write(dir.path(), "s3.csv", &s3);
    let o = catransport(&["finite", "--cayley", &s3, "--center", "0,1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stdout).unwrap().contains("Z central subgroup,false,"));

    let bad = write(dir.path(), "bad.csv", "0,1\n1\n");
    assert_eq!(code(&catransport(&["finite", "--cayley", &bad, "--center", "0"])), 2);
}

/// Permutations of {0, 1, 2} in lexicographic order, composed as maps.
fn s3_mul(a: usize, b: usize) -> usize {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let (p, q) = (perms[a], perms[b]);
    let r = [p[q[0]], p[q[1]], p[q[2]]];
    perms.iter().position(|x| *x == r).unwrap()
}

#[test]
fn scenarios_are_listed() {
    let o = catransport(&["list-scenarios"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["flat", "so2_area", "so3_conj", "so3_r3", "double"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name},"))), "{name}");
    }
}
