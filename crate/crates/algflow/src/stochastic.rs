//! Stochasticity predicates for cubic matrices and the quadratic operator
//! a cubic matrix induces on the simplex.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicMatrix;
use crate::error::{AlgflowError, Result};
use crate::simplex::Distribution;

/// The ways a cubic matrix `(p_ijk)` can distribute mass.
///
/// Every kind requires all entries to be nonnegative (within tolerance) and
/// pins a family of index sums to a constant:
///
/// * `K`: `sum_k p_ijk = 1` for every `(i, j)` — each slice along the last
///   index is a distribution; this is the classical condition for the
///   quadratic operator `x'_k = sum_{i,j} p_ijk x_i x_j` to map the simplex
///   into itself.
/// * `Pair12`: `sum_{i,j} p_ijk = 1` for every `k`.
/// * `Pair13`: `sum_{i,k} p_ijk = 1` for every `j`.
/// * `Pair23`: `sum_{j,k} p_ijk = 1` for every `i`.
/// * `Twice`: `Pair23` together with `sum_i p_ijk = 1/m` for every `(j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StochasticityKind {
    K,
    Pair12,
    Pair13,
    Pair23,
    Twice,
}

impl StochasticityKind {
    pub const ALL: [StochasticityKind; 5] = [
        StochasticityKind::K,
        StochasticityKind::Pair12,
        StochasticityKind::Pair13,
        StochasticityKind::Pair23,
        StochasticityKind::Twice,
    ];

    /// Stable lowercase name used in reports and configs.
    pub fn name(self) -> &'static str {
        match self {
            StochasticityKind::K => "stochastic-k",
            StochasticityKind::Pair12 => "stochastic-12",
            StochasticityKind::Pair13 => "stochastic-13",
            StochasticityKind::Pair23 => "stochastic-23",
            StochasticityKind::Twice => "twice-stochastic",
        }
    }
}

impl std::str::FromStr for StochasticityKind {
    type Err = AlgflowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stochastic-k" | "k" | "K" => Ok(StochasticityKind::K),
            "stochastic-12" | "12" => Ok(StochasticityKind::Pair12),
            "stochastic-13" | "13" => Ok(StochasticityKind::Pair13),
            "stochastic-23" | "23" => Ok(StochasticityKind::Pair23),
            "twice-stochastic" | "twice" => Ok(StochasticityKind::Twice),
            other => Err(AlgflowError::InvalidParameter(format!(
                "unknown stochasticity kind {other:?}"
            ))),
        }
    }
}

/// Largest violation of the `kind` conditions: the maximum over all pinned
/// sums of `|sum - target|`, together with the worst negativity excess
/// `max(0, -min entry)`. Zero means the matrix satisfies the kind exactly.
pub fn stochasticity_defect(matrix: &CubicMatrix, kind: StochasticityKind) -> f64 {
    let m = matrix.dim();
    let get = |i: usize, j: usize, k: usize| matrix.get(i, j, k).expect("index in range");
    let mut worst: f64 = 0.0;
    for &v in matrix.entries() {
        worst = worst.max(-v);
    }
    match kind {
        StochasticityKind::K => {
            for i in 0..m {
                for j in 0..m {
                    let s: f64 = (0..m).map(|k| get(i, j, k)).sum();
                    worst = worst.max((s - 1.0).abs());
                }
            }
        }
        StochasticityKind::Pair12 => {
            for k in 0..m {
                let s: f64 = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| get(i, j, k))
                    .sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        StochasticityKind::Pair13 => {
            for j in 0..m {
                let s: f64 = (0..m)
                    .flat_map(|i| (0..m).map(move |k| (i, k)))
                    .map(|(i, k)| get(i, j, k))
                    .sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        StochasticityKind::Pair23 => {
            for i in 0..m {
                let s: f64 = (0..m)
                    .flat_map(|j| (0..m).map(move |k| (j, k)))
                    .map(|(j, k)| get(i, j, k))
                    .sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        StochasticityKind::Twice => {
            worst = worst.max(stochasticity_defect(matrix, StochasticityKind::Pair23));
            let target = 1.0 / m as f64;
            for j in 0..m {
                for k in 0..m {
                    let s: f64 = (0..m).map(|i| get(i, j, k)).sum();
                    worst = worst.max((s - target).abs());
                }
            }
        }
    }
    worst
}

/// Whether `matrix` satisfies the `kind` conditions within `tol`.
pub fn check_stochastic(matrix: &CubicMatrix, kind: StochasticityKind, tol: f64) -> bool {
    stochasticity_defect(matrix, kind) <= tol
}

/// Apply the quadratic operator of a cubic matrix to a distribution:
/// `x'_k = sum_{i,j} p_ijk x_i x_j`.
///
/// Requires the matrix to be `K`-stochastic within `tol` so the image is
/// again a distribution (validated with the same tolerance).
pub fn qso_apply(matrix: &CubicMatrix, x: &Distribution, tol: f64) -> Result<Distribution> {
    let m = matrix.dim();
    if x.dim() != m {
        return Err(AlgflowError::DimensionMismatch(format!(
            "matrix dimension {} does not match distribution dimension {}",
            m,
            x.dim()
        )));
    }
    if !check_stochastic(matrix, StochasticityKind::K, tol) {
        return Err(AlgflowError::NotStochastic(format!(
            "quadratic operator requires last-index sums of 1; defect {:.3e} exceeds {tol:.3e}",
            stochasticity_defect(matrix, StochasticityKind::K)
        )));
    }
    let xs = x.coords();
    let mut out = vec![0.0; m];
    for i in 0..m {
        if xs[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            if xs[j] == 0.0 {
                continue;
            }
            let w = xs[i] * xs[j];
            for (k, o) in out.iter_mut().enumerate() {
                *o += matrix.get(i, j, k)? * w;
            }
        }
    }
    Distribution::with_tolerance(out, tol.max(Distribution::DEFAULT_TOL))
}
