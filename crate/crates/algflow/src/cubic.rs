//! Cubic matrices of structural constants and their multiplication rules.
//!
//! A finite-dimensional algebra with basis `e_1, ..., e_m` is determined by
//! its structural constants `c_ijk` via `e_i * e_j = sum_k c_ijk e_k`. We
//! store these as a dense rank-3 array ("cubic matrix") in row-major order
//! with the last index fastest: entry `(i, j, k)` lives at `(i*m + j)*m + k`.
//!
//! Indices are 0-based throughout the API. Human-facing documentation and
//! interchange formats count from 1, so the basis element `e_1` corresponds
//! to index 0 here.
//!
//! Three bilinear products on cubic matrices are provided, each contracting
//! a different pair of indices:
//!
//! * rule C: `c_ijr = sum_k a_ijk * b_kjr` (second index held fixed),
//! * rule D: `c_ijr = sum_{k,n} a_ijk * b_knr` (middle index of `b` summed out),
//! * rule E: `c_inr = sum_{j,k} a_ijk * b_knr` (middle index of `a` summed out),
//!
//! plus a general product parameterised by an associative binary operation on
//! indices that combines the two middle indices. Rules D and E are the special
//! cases where the operation keeps the left or the right middle index.

use serde::{Deserialize, Serialize};

use crate::error::{AlgflowError, Result};

/// Which bilinear product to use when composing cubic matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CubicRule {
    /// `c_ijr = sum_k a_ijk * b_kjr`.
    C,
    /// `c_ijr = sum_{k,n} a_ijk * b_knr`.
    D,
    /// `c_inr = sum_{j,k} a_ijk * b_knr`.
    E,
}

impl std::fmt::Display for CubicRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CubicRule::C => write!(f, "C"),
            CubicRule::D => write!(f, "D"),
            CubicRule::E => write!(f, "E"),
        }
    }
}

impl std::str::FromStr for CubicRule {
    type Err = AlgflowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(CubicRule::C),
            "D" | "d" => Ok(CubicRule::D),
            "E" | "e" => Ok(CubicRule::E),
            other => Err(AlgflowError::InvalidParameter(format!(
                "unknown multiplication rule {other:?}; expected C, D, or E"
            ))),
        }
    }
}

/// Dense `m x m x m` array of structural constants.
///
/// Serialises as `{"dim": m, "entries": [...]}` with the entries flattened
/// row-major, last index fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicMatrix {
    dim: usize,
    entries: Vec<f64>,
}

/// Dense `m x m` matrix; used for layers, collapses, and flow families built
/// from ordinary matrix-valued functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl CubicMatrix {
    /// All-zero cubic matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(AlgflowError::InvalidParameter(
                "cubic matrix dimension must be at least 1".into(),
            ));
        }
        Ok(CubicMatrix {
            dim,
            entries: vec![0.0; dim * dim * dim],
        })
    }

    /// Build from a flat row-major slice of length `dim^3` (last index fastest).
    pub fn from_entries(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(AlgflowError::InvalidParameter(
                "cubic matrix dimension must be at least 1".into(),
            ));
        }
        if entries.len() != dim * dim * dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "expected {} entries for dimension {}, got {}",
                dim * dim * dim,
                dim,
                entries.len()
            )));
        }
        Ok(CubicMatrix { dim, entries })
    }

    /// Cubic matrix with a single 1 at `(i, j, k)`; the matrix unit `E_ijk`.
    pub fn unit(dim: usize, i: usize, j: usize, k: usize) -> Result<Self> {
        let mut c = CubicMatrix::zeros(dim)?;
        c.check_index(i, j, k)?;
        let idx = c.flat_index(i, j, k);
        c.entries[idx] = 1.0;
        Ok(c)
    }

    /// Cubic matrix whose every layer (fixed middle index) is the identity:
    /// `c_ijk = 1` iff `i == k`. Acts as a two-sided identity for rule C.
    pub fn per_layer_identity(dim: usize) -> Result<Self> {
        let mut c = CubicMatrix::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                let idx = c.flat_index(i, j, i);
                c.entries[idx] = 1.0;
            }
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Flat row-major entries, last index fastest.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    fn flat_index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    fn check_index(&self, i: usize, j: usize, k: usize) -> Result<()> {
        if i >= self.dim || j >= self.dim || k >= self.dim {
            return Err(AlgflowError::IndexOutOfRange(format!(
                "({i}, {j}, {k}) out of range for dimension {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Entry `c_ijk` (0-based).
    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        self.check_index(i, j, k)?;
        Ok(self.entries[self.flat_index(i, j, k)])
    }

    /// Set entry `c_ijk` (0-based).
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) -> Result<()> {
        self.check_index(i, j, k)?;
        let idx = self.flat_index(i, j, k);
        self.entries[idx] = value;
        Ok(())
    }

    /// The `j`-th layer: the square matrix `(c_i j k)_{i,k}` obtained by
    /// fixing the middle index.
    pub fn layer(&self, j: usize) -> Result<SquareMatrix> {
        if j >= self.dim {
            return Err(AlgflowError::IndexOutOfRange(format!(
                "layer index {j} out of range for dimension {}",
                self.dim
            )));
        }
        let mut out = SquareMatrix::zeros(self.dim)?;
        for i in 0..self.dim {
            for k in 0..self.dim {
                let v = self.entries[self.flat_index(i, j, k)];
                out.set(i, k, v)?;
            }
        }
        Ok(out)
    }

    /// Collapse over the middle index: the square matrix with entries
    /// `sum_j c_ijk`, i.e. the sum of all layers.
    pub fn collapse(&self) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(self.dim).expect("dim >= 1 by construction");
        for i in 0..self.dim {
            for k in 0..self.dim {
                let mut acc = 0.0;
                for j in 0..self.dim {
                    acc += self.entries[self.flat_index(i, j, k)];
                }
                out.set(i, k, acc).expect("index in range");
            }
        }
        out
    }

    /// Largest absolute entry.
    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, &v| acc.max(v.abs()))
    }

    /// Sup-norm distance `max |a_ijk - b_ijk|`.
    pub fn sup_distance(&self, other: &CubicMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "cannot compare dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let d = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0.0f64, |acc, (&a, &b)| acc.max((a - b).abs()));
        Ok(d)
    }

    fn check_same_dim(&self, other: &CubicMatrix) -> Result<usize> {
        if self.dim != other.dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "cannot multiply dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(self.dim)
    }

    /// Rule-C product: `c_ijr = sum_k a_ijk * b_kjr`.
    pub fn mul_c(&self, other: &CubicMatrix) -> Result<CubicMatrix> {
        let m = self.check_same_dim(other)?;
        let mut out = CubicMatrix::zeros(m)?;
        for i in 0..m {
            for j in 0..m {
                for r in 0..m {
                    let mut acc = 0.0;
                    for k in 0..m {
                        acc += self.entries[self.flat_index(i, j, k)]
                            * other.entries[other.flat_index(k, j, r)];
                    }
                    let idx = out.flat_index(i, j, r);
                    out.entries[idx] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Rule-D product: `c_ijr = sum_{k,n} a_ijk * b_knr`.
    pub fn mul_d(&self, other: &CubicMatrix) -> Result<CubicMatrix> {
        let m = self.check_same_dim(other)?;
        // sum_{k,n} a_ijk b_knr = sum_k a_ijk * bbar_kr where bbar collapses b.
        let bbar = other.collapse();
        let mut out = CubicMatrix::zeros(m)?;
        for i in 0..m {
            for j in 0..m {
                for r in 0..m {
                    let mut acc = 0.0;
                    for k in 0..m {
                        acc += self.entries[self.flat_index(i, j, k)] * bbar.get(k, r)?;
                    }
                    let idx = out.flat_index(i, j, r);
                    out.entries[idx] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Rule-E product: `c_inr = sum_{j,k} a_ijk * b_knr`.
    pub fn mul_e(&self, other: &CubicMatrix) -> Result<CubicMatrix> {
        let m = self.check_same_dim(other)?;
        // sum_{j,k} a_ijk b_knr = sum_k abar_ik * b_knr where abar collapses a.
        let abar = self.collapse();
        let mut out = CubicMatrix::zeros(m)?;
        for i in 0..m {
            for n in 0..m {
                for r in 0..m {
                    let mut acc = 0.0;
                    for k in 0..m {
                        acc += abar.get(i, k)? * other.entries[other.flat_index(k, n, r)];
                    }
                    let idx = out.flat_index(i, n, r);
                    out.entries[idx] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Product under a named rule.
    pub fn multiply(&self, other: &CubicMatrix, rule: CubicRule) -> Result<CubicMatrix> {
        match rule {
            CubicRule::C => self.mul_c(other),
            CubicRule::D => self.mul_d(other),
            CubicRule::E => self.mul_e(other),
        }
    }

    /// General product driven by an associative operation `op` on middle
    /// indices: the matrix-unit rule is
    /// `E_ijk * E_lnr = [k == l] * E_{i, op(j,n), r}`,
    /// extended bilinearly, i.e.
    /// `c_ipr = sum over (j, n) with op(j,n) = p of sum_k a_ijk * b_knr`.
    ///
    /// With `op(j, n) = j` this reproduces rule D; with `op(j, n) = n`,
    /// rule E (bitwise identical in both cases, since the sums reorder the
    /// same addends identically).
    pub fn mul_general(&self, other: &CubicMatrix, op: &AssocOp) -> Result<CubicMatrix> {
        let m = self.check_same_dim(other)?;
        if op.dim() != m {
            return Err(AlgflowError::DimensionMismatch(format!(
                "operation table dimension {} does not match matrix dimension {m}",
                op.dim()
            )));
        }
        let mut out = CubicMatrix::zeros(m)?;
        for i in 0..m {
            for j in 0..m {
                for n in 0..m {
                    let p = op.apply(j, n);
                    for r in 0..m {
                        let mut acc = 0.0;
                        for k in 0..m {
                            acc += self.entries[self.flat_index(i, j, k)]
                                * other.entries[other.flat_index(k, n, r)];
                        }
                        let idx = out.flat_index(i, p, r);
                        out.entries[idx] += acc;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl SquareMatrix {
    /// All-zero square matrix.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(AlgflowError::InvalidParameter(
                "square matrix dimension must be at least 1".into(),
            ));
        }
        Ok(SquareMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        })
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = SquareMatrix::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, 1.0)?;
        }
        Ok(m)
    }

    /// Build from a flat row-major slice of length `dim^2`.
    pub fn from_entries(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(AlgflowError::InvalidParameter(
                "square matrix dimension must be at least 1".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "expected {} entries for dimension {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        Ok(SquareMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.dim || j >= self.dim {
            return Err(AlgflowError::IndexOutOfRange(format!(
                "({i}, {j}) out of range for dimension {}",
                self.dim
            )));
        }
        Ok(self.entries[i * self.dim + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(AlgflowError::IndexOutOfRange(format!(
                "({i}, {j}) out of range for dimension {}",
                self.dim
            )));
        }
        self.entries[i * self.dim + j] = value;
        Ok(())
    }

    /// Ordinary matrix product.
    pub fn matmul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        if self.dim != other.dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "cannot multiply dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let m = self.dim;
        let mut out = SquareMatrix::zeros(m)?;
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for k in 0..m {
                    acc += self.entries[i * m + k] * other.entries[k * m + j];
                }
                out.entries[i * m + j] = acc;
            }
        }
        Ok(out)
    }

    /// Sup-norm distance `max |a_ij - b_ij|`.
    pub fn sup_distance(&self, other: &SquareMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "cannot compare dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let d = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0.0f64, |acc, (&a, &b)| acc.max((a - b).abs()));
        Ok(d)
    }

    /// Infinity-norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        let m = self.dim;
        (0..m)
            .map(|i| (0..m).map(|j| self.entries[i * m + j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix inverse.
    ///
    /// Uses closed-form cofactor expressions for dimensions 1-3 (the common
    /// case for the built-in flow families) and partial-pivot Gaussian
    /// elimination above that. Fails when the matrix is singular or when the
    /// infinity-norm condition estimate exceeds `1e12`, since inverses that
    /// ill-conditioned would poison downstream residual checks.
    pub fn inverse(&self) -> Result<SquareMatrix> {
        let inv = match self.dim {
            1 => self.inverse_1(),
            2 => self.inverse_2(),
            3 => self.inverse_3(),
            _ => self.inverse_gauss(),
        }?;
        let cond = self.inf_norm() * inv.inf_norm();
        if !cond.is_finite() || cond > 1e12 {
            return Err(AlgflowError::SingularFamily(format!(
                "condition estimate {cond:.3e} exceeds 1e12"
            )));
        }
        Ok(inv)
    }

    fn inverse_1(&self) -> Result<SquareMatrix> {
        let a = self.entries[0];
        if a == 0.0 {
            return Err(AlgflowError::SingularFamily("1x1 matrix is zero".into()));
        }
        SquareMatrix::from_entries(1, vec![1.0 / a])
    }

    fn inverse_2(&self) -> Result<SquareMatrix> {
        let [a, b, c, d] = [
            self.entries[0],
            self.entries[1],
            self.entries[2],
            self.entries[3],
        ];
        let det = a * d - b * c;
        if det == 0.0 {
            return Err(AlgflowError::SingularFamily(
                "2x2 determinant is zero".into(),
            ));
        }
        SquareMatrix::from_entries(2, vec![d / det, -b / det, -c / det, a / det])
    }

    fn inverse_3(&self) -> Result<SquareMatrix> {
        let e = &self.entries;
        let (a, b, c) = (e[0], e[1], e[2]);
        let (d, f, g) = (e[3], e[4], e[5]);
        let (h, i, j) = (e[6], e[7], e[8]);
        let det = a * (f * j - g * i) - b * (d * j - g * h) + c * (d * i - f * h);
        if det == 0.0 {
            return Err(AlgflowError::SingularFamily(
                "3x3 determinant is zero".into(),
            ));
        }
        let cof = vec![
            (f * j - g * i) / det,
            (c * i - b * j) / det,
            (b * g - c * f) / det,
            (g * h - d * j) / det,
            (a * j - c * h) / det,
            (c * d - a * g) / det,
            (d * i - f * h) / det,
            (b * h - a * i) / det,
            (a * f - b * d) / det,
        ];
        SquareMatrix::from_entries(3, cof)
    }

    fn inverse_gauss(&self) -> Result<SquareMatrix> {
        let m = self.dim;
        // Augment [A | I] and run Gauss-Jordan with partial pivoting.
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row: Vec<f64> = self.entries[i * m..(i + 1) * m].to_vec();
                row.extend((0..m).map(|j| if i == j { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        for col in 0..m {
            let pivot_row = (col..m)
                .max_by(|&p, &q| {
                    a[p][col]
                        .abs()
                        .partial_cmp(&a[q][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if a[pivot_row][col].abs() == 0.0 {
                return Err(AlgflowError::SingularFamily(format!(
                    "no pivot in column {col}"
                )));
            }
            a.swap(col, pivot_row);
            let p = a[col][col];
            for x in a[col].iter_mut() {
                *x /= p;
            }
            for row in 0..m {
                if row == col {
                    continue;
                }
                let factor = a[row][col];
                if factor == 0.0 {
                    continue;
                }
                for k in 0..2 * m {
                    let v = a[col][k];
                    a[row][k] -= factor * v;
                }
            }
        }
        let entries = (0..m).flat_map(|i| a[i][m..].to_vec()).collect();
        SquareMatrix::from_entries(m, entries)
    }
}

/// Associative binary operation on the index set `{0, .., dim-1}`, used by
/// [`CubicMatrix::mul_general`] to combine middle indices.
///
/// Construction verifies associativity of the full table so the resulting
/// cubic-matrix product is itself associative-compatible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocOp {
    dim: usize,
    table: Vec<usize>,
}

impl AssocOp {
    /// Build from an explicit `dim x dim` Cayley table, `table[j][n] = j ∘ n`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let dim = table.len();
        if dim == 0 {
            return Err(AlgflowError::InvalidParameter(
                "operation table must be nonempty".into(),
            ));
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for row in &table {
            if row.len() != dim {
                return Err(AlgflowError::InvalidParameter(format!(
                    "operation table must be square; found row of length {}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= dim {
                    return Err(AlgflowError::IndexOutOfRange(format!(
                        "table value {v} out of range for dimension {dim}"
                    )));
                }
                flat.push(v);
            }
        }
        let op = AssocOp { dim, table: flat };
        op.verify_associative()?;
        Ok(op)
    }

    /// Left projection `j ∘ n = j`; makes the general product coincide with
    /// rule D.
    pub fn left_projection(dim: usize) -> Result<Self> {
        let table = (0..dim).map(|j| vec![j; dim]).collect();
        AssocOp::from_table(table)
    }

    /// Right projection `j ∘ n = n`; makes the general product coincide with
    /// rule E.
    pub fn right_projection(dim: usize) -> Result<Self> {
        let table = (0..dim).map(|_| (0..dim).collect()).collect();
        AssocOp::from_table(table)
    }

    fn verify_associative(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.apply(self.apply(i, j), k);
                    let right = self.apply(i, self.apply(j, k));
                    if left != right {
                        return Err(AlgflowError::NonAssociativeOp { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn apply(&self, j: usize, n: usize) -> usize {
        self.table[j * self.dim + n]
    }
}
