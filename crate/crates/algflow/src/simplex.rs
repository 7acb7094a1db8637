//! Probability distributions on a finite set (points of the standard simplex).

use serde::{Deserialize, Serialize};

use crate::error::{AlgflowError, Result};

/// A point of the simplex `{x : x_k >= 0, sum_k x_k = 1}`.
///
/// Construction validates nonnegativity and normalisation up to a tolerance;
/// entries within the tolerance below zero are clamped to exactly zero so that
/// downstream arithmetic never sees a negative coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distribution {
    coords: Vec<f64>,
}

impl Distribution {
    /// Default validation tolerance for simplex membership.
    pub const DEFAULT_TOL: f64 = 1e-9;

    /// Validate with [`Self::DEFAULT_TOL`].
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(coords, Self::DEFAULT_TOL)
    }

    /// Validate with an explicit tolerance.
    pub fn with_tolerance(mut coords: Vec<f64>, tol: f64) -> Result<Self> {
        if coords.is_empty() {
            return Err(AlgflowError::InvalidDistribution(
                "distribution must have at least one coordinate".into(),
            ));
        }
        for (k, x) in coords.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(AlgflowError::InvalidDistribution(format!(
                    "coordinate {k} is not finite"
                )));
            }
            if *x < -tol {
                return Err(AlgflowError::InvalidDistribution(format!(
                    "coordinate {k} is {x}, below -{tol}"
                )));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let total: f64 = coords.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(AlgflowError::InvalidDistribution(format!(
                "coordinates sum to {total}, expected 1 within {tol}"
            )));
        }
        Ok(Distribution { coords })
    }

    /// Uniform distribution on `dim` points.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(AlgflowError::InvalidDistribution(
                "distribution must have at least one coordinate".into(),
            ));
        }
        Ok(Distribution {
            coords: vec![1.0 / dim as f64; dim],
        })
    }

    /// Point mass at coordinate `k`.
    pub fn point_mass(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(AlgflowError::IndexOutOfRange(format!(
                "point mass index {k} out of range for dimension {dim}"
            )));
        }
        let mut coords = vec![0.0; dim];
        coords[k] = 1.0;
        Ok(Distribution { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn get(&self, k: usize) -> Result<f64> {
        self.coords.get(k).copied().ok_or_else(|| {
            AlgflowError::IndexOutOfRange(format!(
                "coordinate {k} out of range for dimension {}",
                self.coords.len()
            ))
        })
    }

    /// Sup-norm distance to another distribution.
    pub fn sup_distance(&self, other: &Distribution) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(AlgflowError::DimensionMismatch(format!(
                "cannot compare distributions of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0.0f64, |acc, (&a, &b)| acc.max((a - b).abs())))
    }
}
