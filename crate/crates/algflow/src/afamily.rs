//! Time-dependent square-matrix families `t -> A(t)` described entrywise by
//! scalar function descriptors.
//!
//! These drive the conjugation-style flows: a family must be invertible at
//! every time of interest, and the triangular forms below guarantee that by
//! construction whenever the diagonal entries stay away from zero.

use serde::{Deserialize, Serialize};

use crate::cubic::SquareMatrix;
use crate::descriptor::FunctionDescriptor;
use crate::error::{AlgflowError, Result};

/// Structural form of a matrix family; declared so that configs are explicit
/// about what keeps the family invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyForm {
    /// Entries above the diagonal must be identically zero.
    LowerTriangular,
    /// Entries below the diagonal must be identically zero.
    UpperTriangular,
    /// No structural constraint; inversion may fail at some times.
    General,
}

/// A square-matrix-valued function of time, `A(t)[i][j] = entries[i][j](t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFamily {
    pub dim: usize,
    pub form: FamilyForm,
    /// Row-major grid of entry functions, `entries[i][j]`.
    pub entries: Vec<Vec<FunctionDescriptor>>,
}

impl MatrixFamily {
    /// Validate shape and structural constraints.
    ///
    /// Triangular forms additionally require the diagonal entries to stay
    /// away from zero on the standard probe grid, so that inverses exist
    /// wherever the analyzers will look.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(AlgflowError::InvalidParameter(
                "matrix family dimension must be at least 1".into(),
            ));
        }
        if self.entries.len() != self.dim {
            return Err(AlgflowError::DimensionMismatch(format!(
                "expected {} rows of entry functions, got {}",
                self.dim,
                self.entries.len()
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(AlgflowError::DimensionMismatch(format!(
                    "row {i} has {} entry functions, expected {}",
                    row.len(),
                    self.dim
                )));
            }
        }
        let is_zero = |f: &FunctionDescriptor| matches!(f, FunctionDescriptor::Const { value } if *value == 0.0);
        match self.form {
            FamilyForm::LowerTriangular => {
                for i in 0..self.dim {
                    for j in (i + 1)..self.dim {
                        if !is_zero(&self.entries[i][j]) {
                            return Err(AlgflowError::InvalidParameter(format!(
                                "lower-triangular family has nonzero entry function at ({i}, {j})"
                            )));
                        }
                    }
                }
            }
            FamilyForm::UpperTriangular => {
                for i in 0..self.dim {
                    for j in 0..i {
                        if !is_zero(&self.entries[i][j]) {
                            return Err(AlgflowError::InvalidParameter(format!(
                                "upper-triangular family has nonzero entry function at ({i}, {j})"
                            )));
                        }
                    }
                }
            }
            FamilyForm::General => {}
        }
        for (i, row) in self.entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if self.form != FamilyForm::General && i == j {
                    f.validate_nonvanishing(&format!("diagonal entry ({i}, {j})"))?;
                } else {
                    f.validate_finite(&format!("entry ({i}, {j})"))?;
                }
            }
        }
        Ok(())
    }

    /// Evaluate the family at time `t`.
    pub fn eval_at(&self, t: f64) -> Result<SquareMatrix> {
        let mut out = SquareMatrix::zeros(self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.entries[i][j].eval(t)?)?;
            }
        }
        Ok(out)
    }

    /// Evaluate and invert the family at time `t`.
    ///
    /// Triangular families are inverted by back-substitution, which is exact
    /// for the zero block; general families go through the dense inverse with
    /// its conditioning guard.
    pub fn inverse_at(&self, t: f64) -> Result<SquareMatrix> {
        let a = self.eval_at(t)?;
        match self.form {
            FamilyForm::LowerTriangular => Self::invert_lower(&a),
            FamilyForm::UpperTriangular => {
                // Invert the transpose as lower-triangular, then transpose back.
                let at = Self::transpose(&a)?;
                let inv = Self::invert_lower(&at)?;
                Self::transpose(&inv)
            }
            FamilyForm::General => a.inverse(),
        }
        .map_err(|e| {
            AlgflowError::SingularFamily(format!("matrix family at t = {t}: {e}"))
        })
    }

    fn transpose(a: &SquareMatrix) -> Result<SquareMatrix> {
        let m = a.dim();
        let mut out = SquareMatrix::zeros(m)?;
        for i in 0..m {
            for j in 0..m {
                out.set(j, i, a.get(i, j)?)?;
            }
        }
        Ok(out)
    }

    /// Invert a lower-triangular matrix by forward substitution, column by
    /// column of the identity.
    fn invert_lower(a: &SquareMatrix) -> Result<SquareMatrix> {
        let m = a.dim();
        for i in 0..m {
            if a.get(i, i)? == 0.0 {
                return Err(AlgflowError::SingularFamily(format!(
                    "zero diagonal entry at ({i}, {i})"
                )));
            }
        }
        let mut inv = SquareMatrix::zeros(m)?;
        for col in 0..m {
            // Solve L x = e_col.
            let mut x = vec![0.0; m];
            for i in 0..m {
                let mut rhs = if i == col { 1.0 } else { 0.0 };
                for (j, xj) in x.iter().enumerate().take(i) {
                    rhs -= a.get(i, j)? * xj;
                }
                x[i] = rhs / a.get(i, i)?;
            }
            for (i, xi) in x.iter().enumerate() {
                inv.set(i, col, *xi)?;
            }
        }
        Ok(inv)
    }
}
