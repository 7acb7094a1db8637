//! Analyzers over flows: property diagrams on rectangular time grids,
//! long-horizon limits, density witnesses for the rotation flow's closure,
//! structural detectors (time homogeneity, periodicity in the second
//! argument), randomized closure sweeps for the multiplication rules, and
//! specialized duration predicates for the scale and generated flows.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{CubicMatrix, CubicRule};
use crate::descriptor::FunctionDescriptor;
use crate::error::{AlgflowError, Result};
use crate::flow::{FlowSpec, GAP_TOL};
use crate::properties::{property_defect, AlgebraProperty};
use crate::report::fmt_f64;
use crate::stochastic::{stochasticity_defect, StochasticityKind};

/// Restriction applied to grid cells on top of `s <= t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridConstraint {
    /// Every cell with `s <= t` is admissible.
    #[default]
    None,
    /// Only cells with `t - s >= 1` are admissible (the process domain).
    RequireGap1,
}

/// A rectangular grid of time pairs: `n_s` equally spaced values of `s`
/// crossed with `n_t` equally spaced values of `t`, restricted to the
/// admissible region `s <= t` (plus the optional gap constraint).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_s: usize,
    pub n_t: usize,
    #[serde(default)]
    pub constraint: GridConstraint,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

impl TimeGrid {
    pub fn new(
        s_min: f64,
        s_max: f64,
        t_min: f64,
        t_max: f64,
        n_s: usize,
        n_t: usize,
        constraint: GridConstraint,
    ) -> Result<Self> {
        let grid = TimeGrid {
            s_min,
            s_max,
            t_min,
            t_max,
            n_s,
            n_t,
            constraint,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.s_min, self.s_max, self.t_min, self.t_max] {
            if !v.is_finite() {
                return Err(AlgflowError::InvalidParameter(
                    "grid bounds must be finite".into(),
                ));
            }
        }
        if self.s_min < 0.0 || self.s_max < self.s_min || self.t_max < self.t_min {
            return Err(AlgflowError::InvalidParameter(format!(
                "grid bounds must satisfy 0 <= s_min <= s_max and t_min <= t_max, got s in [{}, {}], t in [{}, {}]",
                self.s_min, self.s_max, self.t_min, self.t_max
            )));
        }
        if self.n_s == 0 || self.n_t == 0 {
            return Err(AlgflowError::InvalidParameter(
                "grid needs at least one point per axis".into(),
            ));
        }
        Ok(())
    }

    pub fn s_values(&self) -> Vec<f64> {
        linspace(self.s_min, self.s_max, self.n_s)
    }

    pub fn t_values(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.n_t)
    }

    /// Whether the time pair belongs to the grid's admissible region.
    pub fn is_admissible(&self, s: f64, t: f64) -> bool {
        if s > t + 1e-12 {
            return false;
        }
        match self.constraint {
            GridConstraint::None => true,
            GridConstraint::RequireGap1 => t - s >= 1.0 - GAP_TOL,
        }
    }
}

/// Outcome of a property check at one admissible grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellState {
    Holds,
    Fails,
    /// The flow could not be evaluated at the cell (domain error,
    /// singularity, non-finite value); recorded rather than aborting.
    Undefined,
}

impl CellState {
    /// The cell label used in CSV and JSON output.
    pub fn label(self) -> &'static str {
        match self {
            CellState::Holds => "1",
            CellState::Fails => "0",
            CellState::Undefined => "undefined",
        }
    }
}

/// A property that can be scanned over a grid: either an algebraic identity
/// of the product or a stochasticity pattern of the entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyId {
    Algebra(AlgebraProperty),
    Stochastic(StochasticityKind),
}

impl PropertyId {
    pub fn name(self) -> &'static str {
        match self {
            PropertyId::Algebra(p) => p.name(),
            PropertyId::Stochastic(k) => k.name(),
        }
    }

    /// Deviation of the matrix from the property, in the max-abs sense.
    pub fn defect(self, matrix: &CubicMatrix) -> f64 {
        match self {
            PropertyId::Algebra(p) => property_defect(matrix, p),
            PropertyId::Stochastic(k) => stochasticity_defect(matrix, k),
        }
    }
}

impl std::str::FromStr for PropertyId {
    type Err = AlgflowError;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(p) = s.parse::<AlgebraProperty>() {
            return Ok(PropertyId::Algebra(p));
        }
        if let Ok(k) = s.parse::<StochasticityKind>() {
            return Ok(PropertyId::Stochastic(k));
        }
        Err(AlgflowError::InvalidParameter(format!(
            "unknown property {s:?}"
        )))
    }
}

impl std::fmt::Display for PropertyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The result of scanning one property over a time grid: one state per
/// admissible cell, `None` for cells outside the admissible region.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyDiagram {
    grid: TimeGrid,
    property: PropertyId,
    tol: f64,
    cells: Vec<Option<CellState>>,
}

impl PropertyDiagram {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn property(&self) -> PropertyId {
        self.property
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// State at grid cell `(i_s, i_t)`; `None` if inadmissible.
    pub fn cell(&self, i_s: usize, i_t: usize) -> Option<CellState> {
        self.cells[i_s * self.grid.n_t + i_t]
    }

    /// `(holds, fails, undefined)` counts over admissible cells.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut holds = 0;
        let mut fails = 0;
        let mut undefined = 0;
        for cell in self.cells.iter().flatten() {
            match cell {
                CellState::Holds => holds += 1,
                CellState::Fails => fails += 1,
                CellState::Undefined => undefined += 1,
            }
        }
        (holds, fails, undefined)
    }

    /// True when every admissible cell holds (and at least one exists).
    pub fn all_hold(&self) -> bool {
        let (holds, fails, undefined) = self.counts();
        holds > 0 && fails == 0 && undefined == 0
    }

    /// True when no admissible cell holds (and at least one was decided).
    pub fn none_hold(&self) -> bool {
        let (holds, fails, _) = self.counts();
        holds == 0 && fails > 0
    }

    /// CSV rendering: header `s,t,holds`, one row per admissible cell,
    /// outer loop over `s`, inner loop over `t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,holds\n");
        let s_values = self.grid.s_values();
        let t_values = self.grid.t_values();
        for (i_s, &s) in s_values.iter().enumerate() {
            for (i_t, &t) in t_values.iter().enumerate() {
                if let Some(state) = self.cell(i_s, i_t) {
                    out.push_str(&fmt_f64(s));
                    out.push(',');
                    out.push_str(&fmt_f64(t));
                    out.push(',');
                    out.push_str(state.label());
                    out.push('\n');
                }
            }
        }
        out
    }

    /// JSON rendering with grid metadata and one record per admissible cell.
    pub fn to_json(&self) -> serde_json::Value {
        let s_values = self.grid.s_values();
        let t_values = self.grid.t_values();
        let mut cells = Vec::new();
        for (i_s, &s) in s_values.iter().enumerate() {
            for (i_t, &t) in t_values.iter().enumerate() {
                if let Some(state) = self.cell(i_s, i_t) {
                    cells.push(serde_json::json!({
                        "s": s,
                        "t": t,
                        "holds": state.label(),
                    }));
                }
            }
        }
        serde_json::json!({
            "property": self.property.name(),
            "tol": self.tol,
            "grid": serde_json::to_value(&self.grid).expect("grid serializes"),
            "cells": cells,
        })
    }
}

/// Scan an arbitrary defect function over a grid: a cell holds when the
/// defect is at most `tol`, fails when larger, and is undefined when the
/// defect cannot be computed (error or non-finite value).
pub fn scan_defect<F>(
    property: PropertyId,
    grid: &TimeGrid,
    tol: f64,
    defect_at: F,
) -> Result<PropertyDiagram>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    grid.validate()?;
    let s_values = grid.s_values();
    let t_values = grid.t_values();
    let n_t = grid.n_t;
    let cells: Vec<Option<CellState>> = (0..grid.n_s * n_t)
        .into_par_iter()
        .map(|index| {
            let s = s_values[index / n_t];
            let t = t_values[index % n_t];
            if !grid.is_admissible(s, t) {
                return None;
            }
            Some(match defect_at(s, t) {
                Ok(d) if d.is_finite() => {
                    if d <= tol {
                        CellState::Holds
                    } else {
                        CellState::Fails
                    }
                }
                _ => CellState::Undefined,
            })
        })
        .collect();
    Ok(PropertyDiagram {
        grid: grid.clone(),
        property,
        tol,
        cells,
    })
}

/// Scan a property of the flow's cubic matrix over a grid.
pub fn scan_property(
    spec: &FlowSpec,
    property: PropertyId,
    grid: &TimeGrid,
    tol: f64,
) -> Result<PropertyDiagram> {
    scan_defect(property, grid, tol, |s, t| {
        Ok(property.defect(&spec.eval(s, t)?))
    })
}

/// Long-horizon limit of `M[s0, s0 + gap]` along doubling gaps `1, 2, 4, ...`
/// capped by `horizon` (an absolute end time). Convergence is declared when
/// the sup-distance between consecutive iterates falls below `tol` twice in
/// a row; returns the last iterate then, or `None` if the doubling schedule
/// is exhausted first.
pub fn limit_algebra(
    spec: &FlowSpec,
    s0: f64,
    horizon: f64,
    tol: f64,
) -> Result<Option<CubicMatrix>> {
    if !(s0 >= 0.0 && s0.is_finite()) {
        return Err(AlgflowError::InvalidParameter(format!(
            "start time must be finite and nonnegative, got {s0}"
        )));
    }
    if !(horizon > s0 + 2.0) {
        return Err(AlgflowError::InvalidParameter(format!(
            "horizon must exceed the start time by more than 2 to allow doubling, got s0 = {s0}, horizon = {horizon}"
        )));
    }
    let mut gap = 1.0;
    let mut last = spec.eval(s0, s0 + gap)?;
    let mut quiet_steps = 0;
    loop {
        let next_gap = 2.0 * gap;
        if s0 + next_gap > horizon {
            return Ok(None);
        }
        let next = spec.eval(s0, s0 + next_gap)?;
        if next.sup_distance(&last)? < tol {
            quiet_steps += 1;
            if quiet_steps >= 2 {
                return Ok(Some(next));
            }
        } else {
            quiet_steps = 0;
        }
        last = next;
        gap = next_gap;
    }
}

/// A integer witnessing that `sin n` approaches a target value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub n: u64,
    pub sin_n: f64,
    pub error: f64,
}

/// Smallest `n in 1..=n_max` with `|sin n - target| < tol`, exploiting the
/// density of `{sin n : n integer}` in `[-1, 1]`.
pub fn density_search(target: f64, tol: f64, n_max: u64) -> Result<Option<DensityWitness>> {
    if !(-1.0..=1.0).contains(&target) {
        return Err(AlgflowError::InvalidParameter(format!(
            "target must lie in [-1, 1], got {target}"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(AlgflowError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if n_max == 0 {
        return Err(AlgflowError::InvalidParameter(
            "search bound must be at least 1".into(),
        ));
    }
    for n in 1..=n_max {
        let sin_n = (n as f64).sin();
        let error = (sin_n - target).abs();
        if error < tol {
            return Ok(Some(DensityWitness { n, sin_n, error }));
        }
    }
    Ok(None)
}

/// Per-entry sensitivity of the rotation flow's matrix to a perturbation of
/// the angle functions: if both `cos` and `sin` move by at most `delta`, no
/// entry moves by more than this constant times `delta`.
pub fn rotation_entry_sensitivity(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let rows = [
        a.abs() + b.abs(),
        (1.0 - a).abs() + b.abs(),
        c.abs() + d.abs(),
        c.abs() + (1.0 - d).abs(),
    ];
    rows.into_iter().fold(0.0, f64::max)
}

/// Whether the flow looks time homogeneous on the grid: `M[s, s + g]`
/// independent of `s` for every sampled gap `g`, within `tol`. Cells that
/// cannot be evaluated are skipped.
pub fn detect_homogeneous(spec: &FlowSpec, grid: &TimeGrid, tol: f64) -> Result<bool> {
    grid.validate()?;
    let min_gap = if spec.qsp() { 1.0 - GAP_TOL } else { 0.0 };
    let gaps: Vec<f64> = grid
        .t_values()
        .iter()
        .map(|t| t - grid.t_min + min_gap.max(0.0))
        .filter(|g| *g >= min_gap)
        .collect();
    let s_values = grid.s_values();
    for &gap in &gaps {
        let reference = match spec.eval(grid.s_min, grid.s_min + gap) {
            Ok(m) => m,
            Err(_) => continue,
        };
        for &s in &s_values {
            let m = match spec.eval(s, s + gap) {
                Ok(m) => m,
                Err(_) => continue,
            };
            if m.sup_distance(&reference)? > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest candidate period `P` with `M[s, t + P] = M[s, t]` on every
/// evaluable admissible grid cell, within `tol`. Candidates are taken in
/// the order given, followed by the default candidates `pi` and `2 pi`;
/// non-positive and non-finite candidates are skipped.
pub fn detect_periodic(
    spec: &FlowSpec,
    grid: &TimeGrid,
    candidates: &[f64],
    tol: f64,
) -> Result<Option<f64>> {
    grid.validate()?;
    let mut periods: Vec<f64> = Vec::new();
    for &p in candidates
        .iter()
        .chain([std::f64::consts::PI, std::f64::consts::TAU].iter())
    {
        if p.is_finite() && p > 0.0 && !periods.iter().any(|q| (q - p).abs() < 1e-12) {
            periods.push(p);
        }
    }
    let s_values = grid.s_values();
    let t_values = grid.t_values();
    'candidate: for &period in &periods {
        let mut checked = 0usize;
        for &s in &s_values {
            for &t in &t_values {
                if !grid.is_admissible(s, t) {
                    continue;
                }
                let base = match spec.eval(s, t) {
                    Ok(m) => m,
                    Err(_) => continue,
                };
                let shifted = match spec.eval(s, t + period) {
                    Ok(m) => m,
                    Err(_) => continue 'candidate,
                };
                if base.sup_distance(&shifted)? > tol {
                    continue 'candidate;
                }
                checked += 1;
            }
        }
        if checked > 0 {
            return Ok(Some(period));
        }
    }
    Ok(None)
}

/// One counterexample from a closure sweep: a sampled pair whose product
/// leaves the sampled stochasticity class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureWitness {
    /// Trial index (0-based) at which the pair was drawn.
    pub trial: usize,
    /// Stochasticity defect of the product.
    pub defect: f64,
    pub left: CubicMatrix,
    pub right: CubicMatrix,
}

/// Result of multiplying random pairs from a stochasticity class and
/// checking whether the products stay in the class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub dim: usize,
    pub kind: StochasticityKind,
    pub rule: CubicRule,
    pub trials: usize,
    pub seed: u64,
    /// Fraction of trials whose product stayed in the class (defect <= 1e-9).
    pub fraction: f64,
    /// First failing pair, if any.
    pub witness: Option<ClosureWitness>,
}

/// Tolerance used to decide whether a product stayed in its class.
const CLOSURE_TOL: f64 = 1e-9;

fn sample_stochastic(
    rng: &mut impl rand::Rng,
    dim: usize,
    kind: StochasticityKind,
) -> Result<CubicMatrix> {
    let m = dim;
    let cells = m * m * m;
    // Exponential draws normalized within each constrained slab give a
    // uniform point of that slab's simplex.
    let mut draw = |n: usize| -> Vec<f64> {
        (0..n)
            .map(|_| (-(1.0 - rng.gen::<f64>()).ln()).max(1e-300))
            .collect()
    };
    let mut entries = vec![0.0; cells];
    match kind {
        StochasticityKind::K => {
            for i in 0..m {
                for j in 0..m {
                    let raw = draw(m);
                    let total: f64 = raw.iter().sum();
                    for k in 0..m {
                        entries[(i * m + j) * m + k] = raw[k] / total;
                    }
                }
            }
        }
        StochasticityKind::Pair12 => {
            for k in 0..m {
                let raw = draw(m * m);
                let total: f64 = raw.iter().sum();
                for i in 0..m {
                    for j in 0..m {
                        entries[(i * m + j) * m + k] = raw[i * m + j] / total;
                    }
                }
            }
        }
        StochasticityKind::Pair13 => {
            for j in 0..m {
                let raw = draw(m * m);
                let total: f64 = raw.iter().sum();
                for i in 0..m {
                    for k in 0..m {
                        entries[(i * m + j) * m + k] = raw[i * m + k] / total;
                    }
                }
            }
        }
        StochasticityKind::Pair23 => {
            for i in 0..m {
                let raw = draw(m * m);
                let total: f64 = raw.iter().sum();
                for j in 0..m {
                    for k in 0..m {
                        entries[(i * m + j) * m + k] = raw[j * m + k] / total;
                    }
                }
            }
        }
        StochasticityKind::Twice => {
            // Alternate scaling of the m x m^2 unfolding until the row sums
            // are 1 and the column sums are 1/m; positive starts converge.
            let mut q: Vec<Vec<f64>> = (0..m).map(|_| draw(m * m)).collect();
            let col_target = 1.0 / m as f64;
            for _ in 0..50_000 {
                for row in q.iter_mut() {
                    let total: f64 = row.iter().sum();
                    for v in row.iter_mut() {
                        *v /= total;
                    }
                }
                for col in 0..m * m {
                    let total: f64 = q.iter().map(|row| row[col]).sum();
                    let scale = col_target / total;
                    for row in q.iter_mut() {
                        row[col] *= scale;
                    }
                }
                let worst_row = q
                    .iter()
                    .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
                    .fold(0.0, f64::max);
                if worst_row < 1e-13 {
                    break;
                }
            }
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        entries[(i * m + j) * m + k] = q[i][j * m + k];
                    }
                }
            }
        }
    }
    CubicMatrix::from_entries(m, entries)
}

/// Multiply `trials` seeded random pairs from a stochasticity class under a
/// rule and report how often the product stays in the class, with the first
/// counterexample if one occurs.
pub fn closure_sweep(
    dim: usize,
    kind: StochasticityKind,
    rule: CubicRule,
    trials: usize,
    seed: u64,
) -> Result<ClosureReport> {
    use rand::SeedableRng;
    if dim == 0 {
        return Err(AlgflowError::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    if trials == 0 {
        return Err(AlgflowError::InvalidParameter(
            "need at least one trial".into(),
        ));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(trials);
    for _ in 0..trials {
        let left = sample_stochastic(&mut rng, dim, kind)?;
        let right = sample_stochastic(&mut rng, dim, kind)?;
        pairs.push((left, right));
    }
    let defects: Vec<f64> = pairs
        .par_iter()
        .map(|(left, right)| {
            let product = left.multiply(right, rule)?;
            Ok(stochasticity_defect(&product, kind))
        })
        .collect::<Result<Vec<f64>>>()?;
    let closed = defects.iter().filter(|d| **d <= CLOSURE_TOL).count();
    let witness = defects
        .iter()
        .position(|d| *d > CLOSURE_TOL)
        .map(|trial| ClosureWitness {
            trial,
            defect: defects[trial],
            left: pairs[trial].0.clone(),
            right: pairs[trial].1.clone(),
        });
    Ok(ClosureReport {
        dim,
        kind,
        rule,
        trials,
        seed,
        fraction: closed as f64 / trials as f64,
        witness,
    })
}

/// Evolution-algebra duration diagram for the scale flow, computed from its
/// closed form: the off-diagonal entries vanish exactly where
/// `kappa21(s) = 0` and `kappa11(s) = 1/(2 Psi(s))`, so the cell defect is
/// `max(|Psi(t) (1/(2 Psi(s)) - kappa11(s))|, |Psi(t) kappa21(s)|)` — the
/// same quantities the generic scan reads off the evaluated matrix.
pub fn ea_duration_e8(
    psi: &FunctionDescriptor,
    kappa11: &FunctionDescriptor,
    kappa21: &FunctionDescriptor,
    grid: &TimeGrid,
    tol: f64,
) -> Result<PropertyDiagram> {
    scan_defect(
        PropertyId::Algebra(AlgebraProperty::EvolutionAlgebra),
        grid,
        tol,
        |s, t| {
            let psi_s = psi.eval(s)?;
            let psi_t = psi.eval(t)?;
            if psi_s == 0.0 {
                return Err(AlgflowError::SingularFamily(format!(
                    "scale function vanishes at s = {s}"
                )));
            }
            let half = 1.0 / (2.0 * psi_s);
            let k11 = kappa11.eval(s)?;
            let k21 = kappa21.eval(s)?;
            Ok((psi_t * (half - k11)).abs().max((psi_t * k21).abs()))
        },
    )
}

fn generated_tables(
    spec: &FlowSpec,
    s: f64,
) -> Result<(usize, Vec<f64>)> {
    let (afamily, weights, perturbation) = spec.as_generated().ok_or_else(|| {
        AlgflowError::InvalidParameter(
            "duration predicates apply to generated (rule-D) flows only".into(),
        )
    })?;
    let m = afamily.dim;
    let a_s = afamily.eval_at(s)?;
    let mut beta = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut v = weights[j] * a_s.get(i, k)?;
                if let Some(delta) = perturbation {
                    v += delta[(i * m + j) * m + k];
                }
                beta[(i * m + j) * m + k] = v;
            }
        }
    }
    Ok((m, beta))
}

/// Commutativity defect of a generated rule-D flow at start time `s`,
/// computed from its splitting tables: the flow is commutative at `(s, t)`
/// for every `t` exactly when the table is symmetric in its first two
/// indices.
pub fn ta_commutativity_defect(spec: &FlowSpec, s: f64) -> Result<f64> {
    let (m, beta) = generated_tables(spec, s)?;
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..i {
            for k in 0..m {
                worst = worst.max((beta[(i * m + j) * m + k] - beta[(j * m + i) * m + k]).abs());
            }
        }
    }
    Ok(worst)
}

/// Associativity defect of a generated rule-D flow at `(s, t)`, computed
/// from its splitting tables and the inverse family matrix rather than from
/// the product identity on the evaluated flow.
pub fn ta_associativity_defect(spec: &FlowSpec, s: f64, t: f64) -> Result<f64> {
    let (m, beta) = generated_tables(spec, s)?;
    let (afamily, _, _) = spec.as_generated().expect("checked by generated_tables");
    let b_t = afamily.inverse_at(t)?;
    let at = |i: usize, j: usize, k: usize| beta[(i * m + j) * m + k];
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for q in 0..m {
                    let mut x = 0.0;
                    for p in 0..m {
                        for r in 0..m {
                            x += (at(i, j, p) * at(r, k, q) - at(i, r, q) * at(j, k, p))
                                * b_t.get(p, r)?;
                        }
                    }
                    worst = worst.max(x.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Associativity duration diagram of a generated rule-D flow via the
/// splitting-table condition (the dual route to `scan_property` with the
/// associativity identity).
pub fn ta_associativity_diagram(
    spec: &FlowSpec,
    grid: &TimeGrid,
    tol: f64,
) -> Result<PropertyDiagram> {
    if spec.as_generated().is_none() {
        return Err(AlgflowError::InvalidParameter(
            "duration predicates apply to generated (rule-D) flows only".into(),
        ));
    }
    scan_defect(
        PropertyId::Algebra(AlgebraProperty::Associative),
        grid,
        tol,
        |s, t| ta_associativity_defect(spec, s, t),
    )
}
