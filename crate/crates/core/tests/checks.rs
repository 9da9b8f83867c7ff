//! The check registry end to end: every scenario passes, the flat scenario
//! is exact and convergence reports mark grid-exact checks.

use catransport::checks::{convergence, expand_checks, run_checks, write_convergence, Grid, CHECKS};
use catransport::scenario::SCENARIOS;

#[test]
fn every_scenario_passes_every_check() {
    for name in SCENARIOS {
        let rows = run_checks(name, Grid::new(64, 32).unwrap(), 11, &["all"]).unwrap();
        assert_eq!(rows.len(), CHECKS.len());
        let failing: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        assert!(failing.is_empty(), "{name}: {failing:?}");
    }
}

#[test]
fn flat_scenario_is_exact() {
    let rows = run_checks("flat", Grid::new(100, 50).unwrap(), 1, &["all"]).unwrap();
    for r in rows {
        assert!(r.residual < 1e-12, "{}: {:e}", r.check, r.residual);
    }
}

#[test]
fn rows_follow_registry_order() {
    let rows = run_checks("so3_conj", Grid::new(200, 50).unwrap(), 3, &["functorial", "thin", "backtrack", "reparam"]).unwrap();
    let ids: Vec<_> = rows.iter().map(|r| r.check.as_str()).collect();
    assert_eq!(ids, ["reparam", "backtrack", "thin", "functorial"]);
    assert!(rows.iter().all(|r| r.pass));
}

#[test]
fn unknown_names_are_rejected() {
    assert!(expand_checks(&["nope"]).is_err());
    assert!(run_checks("nowhere", Grid::new(8, 8).unwrap(), 0, &["all"]).is_err());
    assert!(Grid::new(7, 8).is_err());
    assert!(Grid::parse("8by8").is_err());
}

#[test]
fn convergence_marks_exact_checks_and_second_order_ones() {
    let ladder = [Grid::new(50, 8).unwrap(), Grid::new(100, 8).unwrap(), Grid::new(200, 8).unwrap()];
    let rows = convergence("so3_conj", &ladder, 5, &["backtrack", "reparam"]).unwrap();
    assert!(rows.iter().all(|r| !r.flagged));
    assert!(rows.iter().filter(|r| r.check == "backtrack").all(|r| r.exact));
    let orders: Vec<f64> = rows.iter().filter(|r| r.check == "reparam").filter_map(|r| r.order).collect();
    assert_eq!(orders.len(), 2);
    assert!(orders.iter().all(|o| (o - 2.0).abs() < 0.3), "{orders:?}");
    let mut out = Vec::new();
    write_convergence(&rows, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("check,h,residual,order\n"));
    assert!(text.lines().any(|l| l.starts_with("backtrack,") && l.ends_with(",exact")));
    assert!(convergence("so3_conj", &ladder[..2], 5, &["reparam"]).is_err());
}
