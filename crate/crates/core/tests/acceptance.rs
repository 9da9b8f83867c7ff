//! Acceptance criteria, one printed pass/fail line each with timing against
//! its budget. Runs without the libtest harness so the lines are always
//! shown; the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use catransport::bundle::PathConnection;
use catransport::checks::{convergence, measure, ConvergenceRow, Grid};
use catransport::crossed::{CrossedModule, Sampling};
use catransport::finite::fixtures::{covering_bundle, decorated_fixture, non_transitive_bundle, p1_bundle, p2_bundle};
use catransport::finite::{build_cg2, catgroup_roundtrip, check_principal_axioms, check_reduction, crossed_roundtrip, FiniteCategoricalGroup};
use catransport::fixtures;
use catransport::group::{CayleyTable, GroupModel};
use catransport::path::BundlePoint;
use catransport::scenario::scenario;
use catransport::Result;

const SEED: u64 = 20;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { ok, detail })
}

fn residual(check: &str, name: &str, grid: Grid) -> Result<(f64, f64)> {
    let m = measure(check, &scenario(name)?, grid, SEED)?;
    Ok((m.residual, m.tolerance))
}

fn orders(rows: &[ConvergenceRow]) -> Vec<f64> {
    rows.iter().filter_map(|r| r.order).collect()
}

fn near_two(orders: &[f64]) -> bool {
    !orders.is_empty() && orders.iter().all(|o| (o - 2.0).abs() <= 0.3)
}

fn grid(n: usize, m: usize) -> Grid {
    Grid::new(n, m).expect("valid grid")
}

fn c1_crossed_axioms() -> Result<Outcome> {
    let samples = Sampling::Random { samples: 100, seed: SEED };
    let s3 = GroupModel::finite("S3", CayleyTable::symmetric(3));
    let modules = [
        CrossedModule::conjugation(GroupModel::so(2)?),
        CrossedModule::conjugation(GroupModel::so(3)?),
        CrossedModule::abelian(3)?,
        CrossedModule::z4_to_z2(),
        CrossedModule::conjugation(s3),
    ];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for cm in &modules {
        let t = Instant::now();
        worst = worst.max(cm.check_peiffer(samples)?).max(cm.check_exchange_law(samples)?);
        slowest = slowest.max(t.elapsed());
    }
    let per_module = slowest < Duration::from_secs(1);
    outcome(worst < 1e-10 && per_module, format!("max residual {worst:.2e} over {} modules, slowest {slowest:.2?}", modules.len()))
}

fn c2_roundtrip() -> Result<Outcome> {
    let s3 = GroupModel::finite("S3", CayleyTable::symmetric(3));
    let z4 = GroupModel::finite("Z4", CayleyTable::cyclic(4));
    let crossed = [CrossedModule::z4_to_z2(), CrossedModule::conjugation(s3), CrossedModule::conjugation(z4)];
    let mut failures = Vec::new();
    for cm in &crossed {
        let r = crossed_roundtrip(cm)?;
        if !r.passed() {
            failures.push(format!("{}: {r}", cm.name()));
        }
    }
    let groups = [
        FiniteCategoricalGroup::codiscrete(&CayleyTable::cyclic(4)),
        build_cg2(&CayleyTable::cyclic(4), &[0, 2])?,
        build_cg2(&CayleyTable::quaternion(), &[0, 1])?,
    ];
    for cg in &groups {
        let r = catgroup_roundtrip(cg)?;
        if !r.passed() {
            failures.push(r.to_string());
        }
    }
    outcome(failures.is_empty(), format!("{} crossed modules, {} categorical groups, failures {failures:?}", crossed.len(), groups.len()))
}

fn c3_reparam() -> Result<Outcome> {
    let rows = convergence("so3_conj", &[grid(100, 8), grid(200, 8), grid(400, 8)], SEED, &["reparam"])?;
    let last = rows.last().expect("three rungs").residual;
    let o = orders(&rows);
    outcome(last < 1e-6 && near_two(&o), format!("residual {last:.3e} at N=400, orders {o:.3?}"))
}

fn c4_backtrack() -> Result<Outcome> {
    let a = residual("backtrack", "so2_area", grid(200, 8))?.0;
    let b = residual("backtrack", "so3_conj", grid(200, 8))?.0;
    outcome(a <= 1e-12 && b <= 1e-12, format!("so2_area {a:.2e}, so3_conj {b:.2e}"))
}

fn c5_thin() -> Result<Outcome> {
    let s = scenario("double")?;
    let conn = PathConnection::from_scenario(&s);
    let fam = fixtures::thin_family(80, 200)?;
    let u0 = BundlePoint { x: fam.at(0, 0).clone(), g: s.cm().g().identity() };
    let (rep, _) = conn.check_thin_homotopy(&fam, &u0)?;
    let (hol, _) = residual("holonomy", "double", grid(200, 80))?;
    let (lift, _) = residual("thin", "double", grid(200, 80))?;
    outcome(
        rep.drift < 1e-9 && rep.minors < 1e-7 && hol < 1e-9 && lift < 1e-9,
        format!("drift {:.2e}, minors {:.2e}, holonomy {hol:.2e}, transported lift {lift:.2e}", rep.drift, rep.minors),
    )
}

fn c6_wc() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for name in ["so3_conj", "so3_r3", "double"] {
        worst = worst.max(residual("wc", name, grid(40, 24))?.0);
    }
    outcome(worst <= 1e-12, format!("max composition residual {worst:.2e}"))
}

fn c7_categorical_connection() -> Result<Outcome> {
    let mut functorial = 0.0f64;
    let mut equivariance = 0.0f64;
    for name in ["so2_area", "so3_conj", "so3_r3"] {
        functorial = functorial.max(residual("functorial", name, grid(100, 8))?.0);
        equivariance = equivariance.max(residual("equivariance", name, grid(100, 8))?.0);
    }
    let rows = convergence("so3_conj", &[grid(100, 8), grid(200, 8), grid(400, 8)], SEED, &["phi"])?;
    let o = orders(&rows);
    outcome(
        functorial <= 1e-12 && equivariance < 1e-11 && near_two(&o),
        format!("functoriality {functorial:.2e}, equivariance {equivariance:.2e}, Φ-vs-C orders {o:.3?}"),
    )
}

fn c8_decorated_algebra() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for name in ["so3_conj", "double"] {
        for check in ["decorated", "doubly", "kstar", "kappa"] {
            worst = worst.max(residual(check, name, grid(32, 24))?.0);
        }
    }
    outcome(worst < 1e-10, format!("max residual {worst:.2e}"))
}

fn c9_surface() -> Result<Outcome> {
    let (at_100, _) = residual("surface", "so3_conj", grid(100, 100))?;
    let rows = convergence("so3_conj", &[grid(50, 25), grid(100, 50), grid(200, 100)], SEED, &["surface"])?;
    let o = orders(&rows);
    outcome(at_100 < 1e-5 && near_two(&o), format!("residual {at_100:.3e} at 100x100, orders {o:.3?}"))
}

fn c10_finite_bundles() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut record = |label: &str, passed: bool| {
        if !passed {
            failures.push(label.to_string());
        }
    };
    record("Z4/Z2", check_principal_axioms(&covering_bundle(&CayleyTable::cyclic(4), &[0, 2])?).passed());
    record("Q8/{±1}", check_principal_axioms(&covering_bundle(&CayleyTable::quaternion(), &[0, 1])?).passed());
    record("P1", check_principal_axioms(&p1_bundle(&CayleyTable::symmetric(3), 3)?).passed());
    record("P2", check_principal_axioms(&p2_bundle(&CayleyTable::cyclic(2), 3)?).passed());
    let fx = decorated_fixture(&CrossedModule::conjugation(GroupModel::finite("S3", CayleyTable::symmetric(3))), 2)?;
    record("decorated", check_principal_axioms(&fx.decorated).passed());
    record("reduction", check_reduction(&fx.undecorated, &fx.decorated, &fx.f, &fx.beta).passed());

    let mut planted = 0;
    let mut detected = 0;
    let mut expect = |witness: Option<String>| {
        planted += 1;
        if witness.is_some_and(|w| !w.is_empty()) {
            detected += 1;
        }
    };
    expect(check_principal_axioms(&non_transitive_bundle()).witness("transitive").map(str::to_string));
    expect(check_reduction(&fx.undecorated, &fx.decorated, &fx.f, &fx.broken_beta()).witness("equivariant").map(str::to_string));
    expect(build_cg2(&CayleyTable::symmetric(3), &[0, 2]).err().map(|e| e.to_string()));
    let broken = CrossedModule::broken_trivial_action(GroupModel::finite("S3", CayleyTable::symmetric(3)));
    expect(broken.check_peiffer(Sampling::Exhaustive).ok().filter(|&r| r > 0.0).map(|r| format!("{r}")));
    outcome(failures.is_empty() && detected == planted, format!("failures {failures:?}, counterexamples detected {detected}/{planted}"))
}

fn c11_associated() -> Result<Outcome> {
    let (r, _) = residual("associated", "so2_area", grid(100, 8))?;
    outcome(r < 1e-11, format!("max residual {r:.2e}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Result<Outcome>);
    let criteria: [Criterion; 11] = [
        ("crossed-module axioms and exchange law", 5, c1_crossed_axioms),
        ("categorical group round-trips", 5, c2_roundtrip),
        ("reparametrization invariance of ω", 2, c3_reparam),
        ("backtrack erasure", 1, c4_backtrack),
        ("thin-homotopy triviality", 5, c5_thin),
        ("composition functionals", 1, c6_wc),
        ("categorical-connection laws", 3, c7_categorical_connection),
        ("decorated and doubly decorated algebra", 2, c8_decorated_algebra),
        ("surface lift self-consistency", 10, c9_surface),
        ("finite categorical bundles", 5, c10_finite_bundles),
        ("associated transport", 1, c11_associated),
    ];
    let mut failed = Vec::new();
    for (k, (label, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let elapsed = t.elapsed();
        let in_budget = elapsed <= Duration::from_secs(*budget);
        let (ok, detail) = match result {
            Ok(o) => (o.ok && in_budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {:2} {}: {label}: {detail} [{elapsed:.2?} of {budget} s]",
            k + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
