//! Command-line interface: six subcommands over a JSON configuration.
//!
//! ```text
//! algflow <command> --config <path> [--tol x] [--seed n] [--out path]
//!                   [--grid s0,s1,t0,t1,ns,nt] [--rule C|D|E]
//! ```
//!
//! The configuration holds the flow description at the top level
//! (`family`, `params`, optional `rule` / `qsp`), optional shared scalars
//! (`tol`, `seed`, `out`, `grid`), and one optional block per command
//! (`verify`, `scan`, `limit`, `density`, `qsp-check`, `sweep`).
//! Command-line flags override the config's scalars.
//!
//! Every command prints a run report (deterministic JSON) to stdout and, if
//! an output path is set, writes its primary artifact there: the property
//! diagram CSV for `scan`, the report JSON for the other commands. Wall
//! time goes to stderr only, so reruns are byte-identical.
//!
//! Exit codes: 0 when every requested check passed, 1 when a tolerance or
//! expectation failed, 2 on configuration or I/O problems.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::analysis::{
    closure_sweep, density_search, limit_algebra, rotation_entry_sensitivity, scan_property,
    PropertyDiagram, PropertyId, TimeGrid,
};
use crate::cubic::CubicRule;
use crate::error::{AlgflowError, Result};
use crate::flow::{max_kc_residual, sample_admissible_triples, Family, FlowSpec};
use crate::report::RunReport;
use crate::simplex::Distribution;
use crate::stochastic::StochasticityKind;

/// Default tolerance for every residual and property check.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default seed for randomized commands; fixed so that runs without an
/// explicit seed are still reproducible.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "algflow",
    version,
    about = "Verify and analyze two-time flows of algebras given by cubic matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the flow's composition law on sampled time triples.
    Verify(CommonArgs),
    /// Scan an algebraic or stochasticity property over a time grid.
    Scan(CommonArgs),
    /// Follow doubling time gaps toward the limit algebra.
    Limit(CommonArgs),
    /// Find the smallest integer whose sine approximates a target.
    Density(CommonArgs),
    /// Measure the type-A/type-B process residuals of a process flow.
    QspCheck(CommonArgs),
    /// Multiply random stochastic pairs and report closure under a rule.
    Sweep(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Scan(_) => "scan",
            Command::Limit(_) => "limit",
            Command::Density(_) => "density",
            Command::QspCheck(_) => "qsp-check",
            Command::Sweep(_) => "sweep",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Verify(a)
            | Command::Scan(a)
            | Command::Limit(a)
            | Command::Density(a)
            | Command::QspCheck(a)
            | Command::Sweep(a) => a,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Path to the JSON configuration.
    #[arg(long)]
    config: PathBuf,
    /// Tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed override for randomized commands.
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact output path override.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid override as `s_min,s_max,t_min,t_max,n_s,n_t`.
    #[arg(long)]
    grid: Option<String>,
    /// Multiplication-rule override.
    #[arg(long)]
    rule: Option<String>,
}

/// Parse command-line arguments and run; returns the process exit code.
pub fn main_entry() -> Result<i32> {
    let cli = Cli::parse();
    configure_threads();
    run(&cli.command)
}

/// Honor `ALGFLOW_THREADS` for the parallel scans; silently keeps the
/// default pool if the variable is unset, invalid, or already applied.
fn configure_threads() {
    if let Ok(raw) = std::env::var("ALGFLOW_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

const TOP_LEVEL_KEYS: [&str; 14] = [
    "family", "params", "rule", "qsp", "tol", "seed", "out", "grid", "verify", "scan", "limit",
    "density", "qsp-check", "sweep",
];

/// The configuration file parsed into a JSON value, plus the raw bytes for
/// hashing.
#[derive(Debug)]
struct Config {
    value: Value,
    bytes: Vec<u8>,
}

/// Read and parse a configuration file, validating the top-level shape.
fn parse_config(path: &Path) -> Result<Config> {
    let bytes = std::fs::read(path)?;
    let value: Value = serde_json::from_slice(&bytes)?;
    let map = value.as_object().ok_or_else(|| {
        AlgflowError::Config("configuration must be a JSON object".into())
    })?;
    for key in map.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
            return Err(AlgflowError::Config(format!(
                "unknown configuration key {key:?}; expected one of {TOP_LEVEL_KEYS:?}"
            )));
        }
    }
    Ok(Config {
        value,
        bytes,
    })
}

impl Config {
    /// The flow description, assembled from the top-level flow keys.
    fn flow(&self, rule_override: Option<CubicRule>) -> Result<FlowSpec> {
        let map = self.value.as_object().expect("validated in parse_config");
        if !map.contains_key("family") {
            return Err(AlgflowError::Config(
                "this command needs a flow: set \"family\" and \"params\" in the configuration"
                    .into(),
            ));
        }
        let mut flow_keys = serde_json::Map::new();
        for key in ["family", "params", "rule", "qsp"] {
            if let Some(v) = map.get(key) {
                flow_keys.insert(key.to_string(), v.clone());
            }
        }
        let spec: FlowSpec = serde_json::from_value(Value::Object(flow_keys))?;
        Ok(match rule_override {
            Some(rule) => spec.with_rule(rule),
            None => spec,
        })
    }

    fn block<T: for<'de> Deserialize<'de>>(&self, key: &str) -> Result<Option<T>> {
        match self.value.get(key) {
            None => Ok(None),
            Some(v) => {
                let block = serde_json::from_value(v.clone()).map_err(|e| {
                    AlgflowError::Config(format!("invalid {key:?} block: {e}"))
                })?;
                Ok(Some(block))
            }
        }
    }

    fn f64_key(&self, key: &str) -> Result<Option<f64>> {
        match self.value.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| {
                AlgflowError::Config(format!("configuration key {key:?} must be a number"))
            }),
        }
    }

    fn u64_key(&self, key: &str) -> Result<Option<u64>> {
        match self.value.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| {
                AlgflowError::Config(format!(
                    "configuration key {key:?} must be a nonnegative integer"
                ))
            }),
        }
    }

    fn grid(&self) -> Result<Option<TimeGrid>> {
        match self.value.get("grid") {
            None => Ok(None),
            Some(v) => {
                let grid: TimeGrid = serde_json::from_value(v.clone())
                    .map_err(|e| AlgflowError::Config(format!("invalid \"grid\": {e}")))?;
                grid.validate()?;
                Ok(Some(grid))
            }
        }
    }

    fn out(&self) -> Result<Option<PathBuf>> {
        match self.value.get("out") {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(PathBuf::from(s))),
            Some(_) => Err(AlgflowError::Config(
                "configuration key \"out\" must be a string path".into(),
            )),
        }
    }
}

/// Scalars after merging config values with command-line overrides.
struct Resolved {
    tol: f64,
    seed: u64,
    out: Option<PathBuf>,
    rule: Option<CubicRule>,
    grid: Option<TimeGrid>,
}

fn resolve(args: &CommonArgs, config: &Config) -> Result<Resolved> {
    let tol = match args.tol {
        Some(t) => t,
        None => config.f64_key("tol")?.unwrap_or(DEFAULT_TOL),
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(AlgflowError::Config(format!(
            "tolerance must be a positive number, got {tol}"
        )));
    }
    let seed = match args.seed {
        Some(s) => s,
        None => config.u64_key("seed")?.unwrap_or(DEFAULT_SEED),
    };
    let out = match &args.out {
        Some(p) => Some(p.clone()),
        None => config.out()?,
    };
    let rule = args
        .rule
        .as_deref()
        .map(str::parse::<CubicRule>)
        .transpose()?;
    let config_grid = config.grid()?;
    let grid = match &args.grid {
        Some(text) => Some(parse_grid_flag(text, &config_grid)?),
        None => config_grid,
    };
    Ok(Resolved {
        tol,
        seed,
        out,
        rule,
        grid,
    })
}

/// Parse the `--grid` sextuple, inheriting the admissibility constraint
/// from the config grid when one exists.
fn parse_grid_flag(text: &str, config_grid: &Option<TimeGrid>) -> Result<TimeGrid> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(AlgflowError::Config(format!(
            "--grid expects 6 comma-separated values s_min,s_max,t_min,t_max,n_s,n_t, got {:?}",
            text
        )));
    }
    let num = |i: usize| -> Result<f64> {
        parts[i]
            .parse::<f64>()
            .map_err(|_| AlgflowError::Config(format!("--grid component {:?} is not a number", parts[i])))
    };
    let count = |i: usize| -> Result<usize> {
        parts[i]
            .parse::<usize>()
            .map_err(|_| AlgflowError::Config(format!("--grid component {:?} is not a count", parts[i])))
    };
    let constraint = config_grid
        .as_ref()
        .map(|g| g.constraint)
        .unwrap_or_default();
    TimeGrid::new(num(0)?, num(1)?, num(2)?, num(3)?, count(4)?, count(5)?, constraint)
}

fn require_grid(resolved: &Resolved) -> Result<&TimeGrid> {
    resolved.grid.as_ref().ok_or_else(|| {
        AlgflowError::Config(
            "this command needs a grid: set \"grid\" in the configuration or pass --grid".into(),
        )
    })
}

/// Diagram expectations a scan config may declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Expectation {
    AllTrue,
    AllFalse,
    Mixed,
}

impl Expectation {
    fn parse(text: &str) -> Result<Self> {
        match text {
            "all-true" => Ok(Expectation::AllTrue),
            "all-false" | "empty" => Ok(Expectation::AllFalse),
            "mixed" => Ok(Expectation::Mixed),
            other => Err(AlgflowError::Config(format!(
                "unknown expectation {other:?}; use \"all-true\", \"all-false\" (alias \"empty\"), or \"mixed\""
            ))),
        }
    }

    fn check(self, diagram: &PropertyDiagram) -> bool {
        let (holds, fails, _) = diagram.counts();
        match self {
            Expectation::AllTrue => diagram.all_hold(),
            Expectation::AllFalse => diagram.none_hold(),
            Expectation::Mixed => holds > 0 && fails > 0,
        }
    }
}

/// Run one subcommand; returns the exit code.
pub fn run(command: &Command) -> Result<i32> {
    let args = command.args();
    let config = parse_config(&args.config)?;
    let resolved = resolve(args, &config)?;
    let mut report = RunReport::new(command.name(), &config.bytes, resolved.tol);
    let (summary, pass, artifact) = match command {
        Command::Verify(_) => cmd_verify(&config, &resolved)?,
        Command::Scan(_) => cmd_scan(&config, &resolved)?,
        Command::Limit(_) => cmd_limit(&config, &resolved)?,
        Command::Density(_) => cmd_density(&config, &resolved)?,
        Command::QspCheck(_) => cmd_qsp_check(&config, &resolved)?,
        Command::Sweep(_) => cmd_sweep(&config, &resolved)?,
    };
    report.summary = summary;
    if uses_seed(command) {
        report.seed = Some(resolved.seed);
    }
    let rendered = report.to_json()?;
    if let Some(path) = &resolved.out {
        let artifact_bytes = match &artifact {
            Some(text) => text.as_bytes(),
            None => rendered.as_bytes(),
        };
        std::fs::write(path, artifact_bytes)?;
    }
    print!("{rendered}");
    Ok(if pass { 0 } else { 1 })
}

fn uses_seed(command: &Command) -> bool {
    matches!(
        command,
        Command::Verify(_) | Command::QspCheck(_) | Command::Sweep(_)
    )
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyBlock {
    triples: Option<usize>,
}

fn cmd_verify(config: &Config, resolved: &Resolved) -> Result<(Value, bool, Option<String>)> {
    let block: VerifyBlock = config.block("verify")?.unwrap_or_default();
    let spec = config.flow(resolved.rule)?;
    let triples = block.triples.unwrap_or(100).max(1);
    let (worst, at) = max_kc_residual(&spec, triples, resolved.seed)?;
    let pass = worst <= resolved.tol;
    let summary = json!({
        "family": spec.family().tag(),
        "rule": spec.rule().to_string(),
        "qsp": spec.qsp(),
        "triples": triples,
        "worst_residual": worst,
        "worst_triple": [at.0, at.1, at.2],
        "pass": pass,
    });
    Ok((summary, pass, None))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanBlock {
    property: String,
    expect: Option<String>,
}

fn cmd_scan(config: &Config, resolved: &Resolved) -> Result<(Value, bool, Option<String>)> {
    let block: ScanBlock = config.block("scan")?.ok_or_else(|| {
        AlgflowError::Config("scan needs a \"scan\" block with a \"property\"".into())
    })?;
    let spec = config.flow(resolved.rule)?;
    let property: PropertyId = block.property.parse()?;
    let grid = require_grid(resolved)?;
    let expect = block.expect.as_deref().map(Expectation::parse).transpose()?;
    let diagram = scan_property(&spec, property, grid, resolved.tol)?;
    let (holds, fails, undefined) = diagram.counts();
    let pass = expect.map_or(true, |e| e.check(&diagram));
    let summary = json!({
        "family": spec.family().tag(),
        "property": property.name(),
        "grid": serde_json::to_value(grid)?,
        "cells": {"holds": holds, "fails": fails, "undefined": undefined},
        "expect": block.expect,
        "pass": pass,
    });
    Ok((summary, pass, Some(diagram.to_csv())))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitBlock {
    s0: Option<f64>,
    horizon: Option<f64>,
    expect: Option<String>,
}

fn cmd_limit(config: &Config, resolved: &Resolved) -> Result<(Value, bool, Option<String>)> {
    let block: LimitBlock = config.block("limit")?.unwrap_or_default();
    let spec = config.flow(resolved.rule)?;
    let s0 = block.s0.unwrap_or(0.0);
    let horizon = block.horizon.unwrap_or(512.0);
    let expect = match block.expect.as_deref() {
        None => None,
        Some("exists") => Some(true),
        Some("none") => Some(false),
        Some(other) => {
            return Err(AlgflowError::Config(format!(
                "unknown limit expectation {other:?}; use \"exists\" or \"none\""
            )))
        }
    };
    let limit = limit_algebra(&spec, s0, horizon, resolved.tol)?;
    let pass = expect.map_or(true, |want| want == limit.is_some());
    let summary = json!({
        "family": spec.family().tag(),
        "s0": s0,
        "horizon": horizon,
        "converged": limit.is_some(),
        "matrix": limit.as_ref().map(serde_json::to_value).transpose()?,
        "expect": block.expect,
        "pass": pass,
    });
    Ok((summary, pass, None))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityBlock {
    target: f64,
    n_max: Option<u64>,
}

fn cmd_density(config: &Config, resolved: &Resolved) -> Result<(Value, bool, Option<String>)> {
    let block: DensityBlock = config.block("density")?.ok_or_else(|| {
        AlgflowError::Config("density needs a \"density\" block with a \"target\"".into())
    })?;
    let n_max = block.n_max.unwrap_or(10_000_000);
    let witness = density_search(block.target, resolved.tol, n_max)?;
    // When the configured flow is the rotation family, translate the sine
    // tolerance into a bound on how far the matrix at the witness gap can
    // sit from the matrix with the target sine.
    let bound = match config.value.get("family") {
        Some(Value::String(tag)) if tag == "E9" => {
            let spec = config.flow(None)?;
            match spec.family() {
                Family::E9 { a, b, c, d } => {
                    let sensitivity = rotation_entry_sensitivity(*a, *b, *c, *d);
                    Some(json!({
                        "entry_sensitivity": sensitivity,
                        "matrix_distance_bound": sensitivity * resolved.tol,
                    }))
                }
                _ => None,
            }
        }
        _ => None,
    };
    let pass = witness.is_some();
    let summary = json!({
        "target": block.target,
        "n_max": n_max,
        "witness": witness.map(|w| json!({"n": w.n, "sin_n": w.sin_n, "error": w.error})),
        "rotation_bound": bound,
        "pass": pass,
    });
    Ok((summary, pass, None))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QspCheckBlock {
    triples: Option<usize>,
    x0: Option<Vec<f64>>,
}

fn cmd_qsp_check(config: &Config, resolved: &Resolved) -> Result<(Value, bool, Option<String>)> {
    let block: QspCheckBlock = config.block("qsp-check")?.unwrap_or_default();
    let spec = config.flow(resolved.rule)?;
    if !spec.qsp() {
        return Err(AlgflowError::NotQsp);
    }
    let x0 = match block.x0 {
        Some(coords) => Distribution::new(coords)?,
        None => spec.initial_distribution()?,
    };
    let triples = block.triples.unwrap_or(50).max(1);
    let mut max_a: f64 = 0.0;
    let mut max_b: f64 = 0.0;
    for (s, r, t) in sample_admissible_triples(&spec, triples, resolved.seed) {
        max_a = max_a.max(spec.qsp_residual_a(&x0, s, r, t)?);
        max_b = max_b.max(spec.qsp_residual_b(&x0, s, r, t)?);
    }
    let a_holds = max_a <= resolved.tol;
    let b_holds = max_b <= resolved.tol;
    let typing = match (a_holds, b_holds) {
        (true, true) => "types (A) and (B)",
        (true, false) => "type (A) only",
        (false, true) => "type (B) only",
        (false, false) => "neither type",
    };
    let (claim_a, claim_b) = spec.claimed_qsp_types().expect("qsp spec claims types");
    // The run passes when every documented type is actually observed;
    // satisfying an extra law is reported but not an error.
    let pass = (!claim_a || a_holds) && (!claim_b || b_holds);
    let summary = json!({
        "family": spec.family().tag(),
        "triples": triples,
        "x0": serde_json::to_value(&x0)?,
        "max_residual_a": max_a,
        "max_residual_b": max_b,
        "typing": typing,
        "documented_typing": {"a": claim_a, "b": claim_b},
        "pass": pass,
    });
    Ok((summary, pass, None))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    m: usize,
    kind: String,
    rule: Option<String>,
    trials: Option<usize>,
    expect: Option<String>,
}

fn cmd_sweep(config: &Config, resolved: &Resolved) -> Result<(Value, bool, Option<String>)> {
    let block: SweepBlock = config.block("sweep")?.ok_or_else(|| {
        AlgflowError::Config(
            "sweep needs a \"sweep\" block with \"m\", \"kind\", and \"rule\"".into(),
        )
    })?;
    let kind: StochasticityKind = block.kind.parse()?;
    let rule = match resolved.rule {
        Some(rule) => rule,
        None => block
            .rule
            .as_deref()
            .ok_or_else(|| {
                AlgflowError::Config("sweep needs a \"rule\" in its block or --rule".into())
            })?
            .parse()?,
    };
    let trials = block.trials.unwrap_or(200).max(1);
    let expect = match block.expect.as_deref() {
        None => None,
        Some("closed") => Some(true),
        Some("not-closed") => Some(false),
        Some(other) => {
            return Err(AlgflowError::Config(format!(
                "unknown sweep expectation {other:?}; use \"closed\" or \"not-closed\""
            )))
        }
    };
    let sweep = closure_sweep(block.m, kind, rule, trials, resolved.seed)?;
    let closed = sweep.fraction == 1.0;
    let pass = expect.map_or(true, |want| want == closed);
    let summary = json!({
        "m": sweep.dim,
        "kind": kind.name(),
        "rule": rule.to_string(),
        "trials": sweep.trials,
        "fraction": sweep.fraction,
        "closed": closed,
        "witness": sweep.witness.as_ref().map(serde_json::to_value).transpose()?,
        "expect": block.expect,
        "pass": pass,
    });
    Ok((summary, pass, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag_parses_and_validates() {
        let grid = parse_grid_flag("0, 3, 4, 10, 20, 21", &None).unwrap();
        assert_eq!(grid.n_s, 20);
        assert_eq!(grid.n_t, 21);
        assert_eq!(grid.t_max, 10.0);
        assert!(parse_grid_flag("0,3,4,10,20", &None).is_err());
        assert!(parse_grid_flag("0,3,4,10,20,x", &None).is_err());
        assert!(parse_grid_flag("3,0,4,10,20,20", &None).is_err());
    }

    #[test]
    fn grid_flag_inherits_constraint() {
        use crate::analysis::GridConstraint;
        let base = TimeGrid::new(0.0, 1.0, 1.0, 2.0, 2, 2, GridConstraint::RequireGap1).unwrap();
        let grid = parse_grid_flag("0,3,4,10,5,5", &Some(base)).unwrap();
        assert_eq!(grid.constraint, GridConstraint::RequireGap1);
        let grid = parse_grid_flag("0,3,4,10,5,5", &None).unwrap();
        assert_eq!(grid.constraint, GridConstraint::None);
    }

    #[test]
    fn expectations_parse() {
        assert_eq!(Expectation::parse("all-true").unwrap(), Expectation::AllTrue);
        assert_eq!(Expectation::parse("empty").unwrap(), Expectation::AllFalse);
        assert_eq!(Expectation::parse("mixed").unwrap(), Expectation::Mixed);
        assert!(Expectation::parse("sometimes").is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, br#"{"family": "E9", "params": {"a":0,"b":0,"c":0,"d":0}, "grdi": {}}"#)
            .unwrap();
        let err = parse_config(&path).unwrap_err().to_string();
        assert!(err.contains("grdi"), "{err}");
    }

    #[test]
    fn empty_config_reports_parse_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.json");
        std::fs::write(&path, b"").unwrap();
        let err = parse_config(&path).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn flow_extraction_ignores_shared_scalars() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            br#"{"family": "E9", "params": {"a": 0.2, "b": -0.4, "c": 0.8, "d": 1.4}, "tol": 1e-6, "verify": {"triples": 3}}"#,
        )
        .unwrap();
        let config = parse_config(&path).unwrap();
        let spec = config.flow(None).unwrap();
        assert_eq!(spec.family().tag(), "E9");
        let spec = config.flow(Some(CubicRule::C)).unwrap();
        assert_eq!(spec.rule(), CubicRule::C);
    }

    #[test]
    fn out_of_range_parameter_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            br#"{"family": "E2", "params": {"epsilon": 0.7, "x": 0.5}}"#,
        )
        .unwrap();
        let config = parse_config(&path).unwrap();
        let err = config.flow(None).unwrap_err().to_string();
        assert!(err.contains("epsilon"), "{err}");
    }
}
