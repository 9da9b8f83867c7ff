//! Command-line experiment runner: residual reports for the check registry,
//! convergence ladders and exhaustive checks on finite covering groups.
//!
//! Exit status: 0 when every row passes, 1 on a numerical or law failure
//! (including flagged convergence), 2 on unknown names or bad input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use catransport::checks::{self, expand_checks, Grid};
use catransport::finite::fixtures::covering_bundle;
use catransport::finite::{build_cg2, catgroup_roundtrip, check_principal_axioms, FiniteReport};
use catransport::group::CayleyTable;
use catransport::scenario::{scenario, SCENARIOS};

const DEFAULT_GRID: &str = "100x50";

#[derive(Parser)]
#[command(name = "catransport", version, about = "Residual reports for categorical parallel transport")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on one scenario and write a CSV report.
    Run(RunArgs),
    /// Run checks over a grid ladder and report observed orders.
    Convergence(ConvergenceArgs),
    /// Exhaustive checks on the covering group of a Cayley table by a central subgroup.
    Finite(FiniteArgs),
    /// List the built-in scenarios.
    ListScenarios,
}

#[derive(Args)]
struct Common {
    /// JSON config with fields scenario, grid {N, M}, seed, checks, output.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated check identifiers or `all`.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Grid as NxM: N path cells, M surface s-cells.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated grids NxM, at least three.
    #[arg(long, value_delimiter = ',', default_value = "100x50,200x100,400x200")]
    ladder: Vec<String>,
}

#[derive(Args)]
struct FiniteArgs {
    /// Headerless CSV Cayley table of K̂.
    #[arg(long)]
    cayley: PathBuf,
    /// Comma-separated element indices of the central subgroup Z.
    #[arg(long, value_delimiter = ',')]
    center: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GridConfig {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    scenario: Option<String>,
    grid: Option<GridConfig>,
    seed: Option<u64>,
    checks: Option<Vec<String>>,
    output: Option<PathBuf>,
}

/// Configuration after merging flags over the config file.
struct Resolved {
    scenario: String,
    seed: u64,
    checks: Vec<String>,
    out: Option<PathBuf>,
}

/// Failure kinds mapped to exit status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    let Some(path) = path else { return Ok(ExperimentConfig::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))
}

fn resolve(common: Common, cfg: &ExperimentConfig) -> Result<Resolved> {
    let scenario_name = common
        .scenario
        .or_else(|| cfg.scenario.clone())
        .ok_or_else(|| usage("no scenario given (use --scenario or a config file)"))?;
    scenario(&scenario_name).map_err(|e| usage(e.to_string()))?;
    let checks = common.checks.or_else(|| cfg.checks.clone()).unwrap_or_else(|| vec!["all".into()]);
    expand_checks(&checks).map_err(|e| usage(e.to_string()))?;
    Ok(Resolved {
        scenario: scenario_name,
        seed: common.seed.or(cfg.seed).unwrap_or(0),
        checks,
        out: common.out.or_else(|| cfg.output.clone()),
    })
}

fn parse_grid(s: &str) -> Result<Grid> {
    Grid::parse(s).map_err(|e| usage(e.to_string()))
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(args: RunArgs) -> Result<bool> {
    let cfg = load_config(args.common.config.as_deref())?;
    let grid = match (&args.grid, &cfg.grid) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(g)) => Grid::new(g.n, g.m).map_err(|e| usage(e.to_string()))?,
        (None, None) => parse_grid(DEFAULT_GRID)?,
    };
    let r = resolve(args.common, &cfg)?;
    let rows = checks::run_checks(&r.scenario, grid, r.seed, &r.checks)?;
    let mut out = sink(r.out.as_deref())?;
    checks::write_report(&rows, &mut out)?;
    out.flush()?;
    let failing: Vec<_> = rows.iter().filter(|row| !row.pass).collect();
    for row in &failing {
        eprintln!("FAIL {} on {}: residual {:.6e} > tolerance {:.1e}", row.check, row.scenario, row.residual, row.tolerance);
    }
    Ok(failing.is_empty())
}

fn convergence(args: ConvergenceArgs) -> Result<bool> {
    let cfg = load_config(args.common.config.as_deref())?;
    let ladder = args.ladder.iter().map(|g| parse_grid(g)).collect::<Result<Vec<_>>>()?;
    if ladder.len() < 3 {
        return Err(usage("a convergence ladder needs at least three grids"));
    }
    let r = resolve(args.common, &cfg)?;
    let rows = checks::convergence(&r.scenario, &ladder, r.seed, &r.checks)?;
    let mut out = sink(r.out.as_deref())?;
    checks::write_convergence(&rows, &mut out)?;
    out.flush()?;
    let flagged: Vec<_> = rows.iter().filter(|row| row.flagged).collect();
    for row in &flagged {
        eprintln!("FLAGGED {}: residual {:.6e} did not decrease at h = {:.6e}", row.check, row.residual, row.h);
    }
    Ok(flagged.is_empty())
}

fn finite(args: FiniteArgs) -> Result<bool> {
    let file = File::open(&args.cayley).map_err(|e| usage(format!("cannot open {}: {e}", args.cayley.display())))?;
    let table = CayleyTable::from_csv(file).map_err(|e| usage(e.to_string()))?;
    let mut report = FiniteReport::default();
    let assoc = table.associativity_witness().map(|(a, b, c)| format!("({a}·{b})·{c} ≠ {a}·({b}·{c})"));
    let associative = assoc.is_none();
    report.push("K̂ associative", assoc);
    if associative {
        match build_cg2(&table, &args.center) {
            Ok(cg) => {
                report.push("Z central subgroup", None);
                report.extend("K̂/Z categorical group", cg.check());
                report.extend("round trip", catgroup_roundtrip(&cg)?);
                report.extend("bundle K̂ → K̂/Z", check_principal_axioms(&covering_bundle(&table, &args.center)?));
            }
            Err(e) => report.push("Z central subgroup", Some(e.to_string())),
        }
    }
    let mut out = sink(args.out.as_deref())?;
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        w.write_record(["law", "pass", "witness"])?;
        for c in &report.checks {
            w.write_record([c.name.as_str(), if c.passed() { "true" } else { "false" }, c.witness.as_deref().unwrap_or("")])?;
        }
        w.flush()?;
    }
    out.flush()?;
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    Ok(report.passed())
}

fn list_scenarios() -> Result<bool> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(io::stdout().lock());
    w.write_record(["scenario", "description"])?;
    for name in SCENARIOS {
        w.write_record([name, scenario(name)?.description])?;
    }
    w.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Convergence(a) => convergence(a),
        Command::Finite(a) => finite(a),
        Command::ListScenarios => list_scenarios(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
