//! Algebraic property predicates on structural constants.
//!
//! Each predicate reports the worst violation ("defect") of its defining
//! identities, so callers can either threshold it against a tolerance or
//! inspect the magnitude directly.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicMatrix;
use crate::error::{AlgflowError, Result};

/// Properties of the algebra with structural constants `c_ijk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraProperty {
    /// `e_i e_j = e_j e_i`, i.e. `c_ijk = c_jik` for all indices.
    Commutative,
    /// `(e_i e_j) e_k = e_i (e_j e_k)`:
    /// `sum_r c_ijr c_rkl = sum_r c_irl c_jkr` for all `(i, j, k, l)`.
    Associative,
    /// Commutative and the weight functional `e_i e_j -> 1` is a
    /// homomorphism: `sum_k c_ijk = 1` for all `(i, j)`.
    Baric,
    /// Products of distinct basis elements vanish: `c_ijk = 0` for `i != j`.
    EvolutionAlgebra,
}

impl AlgebraProperty {
    pub const ALL: [AlgebraProperty; 4] = [
        AlgebraProperty::Commutative,
        AlgebraProperty::Associative,
        AlgebraProperty::Baric,
        AlgebraProperty::EvolutionAlgebra,
    ];

    /// Stable lowercase name used in reports and configs.
    pub fn name(self) -> &'static str {
        match self {
            AlgebraProperty::Commutative => "commutative",
            AlgebraProperty::Associative => "associative",
            AlgebraProperty::Baric => "baric",
            AlgebraProperty::EvolutionAlgebra => "evolution-algebra",
        }
    }
}

impl std::str::FromStr for AlgebraProperty {
    type Err = AlgflowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commutative" => Ok(AlgebraProperty::Commutative),
            "associative" => Ok(AlgebraProperty::Associative),
            "baric" => Ok(AlgebraProperty::Baric),
            "evolution-algebra" | "evolution" => Ok(AlgebraProperty::EvolutionAlgebra),
            other => Err(AlgflowError::InvalidParameter(format!(
                "unknown algebra property {other:?}"
            ))),
        }
    }
}

/// Worst violation of the defining identities of `property`; zero when the
/// property holds exactly.
pub fn property_defect(matrix: &CubicMatrix, property: AlgebraProperty) -> f64 {
    let m = matrix.dim();
    let get = |i: usize, j: usize, k: usize| matrix.get(i, j, k).expect("index in range");
    match property {
        AlgebraProperty::Commutative => {
            let mut worst: f64 = 0.0;
            for i in 0..m {
                for j in 0..i {
                    for k in 0..m {
                        worst = worst.max((get(i, j, k) - get(j, i, k)).abs());
                    }
                }
            }
            worst
        }
        AlgebraProperty::Associative => {
            let mut worst: f64 = 0.0;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            let lhs: f64 = (0..m).map(|r| get(i, j, r) * get(r, k, l)).sum();
                            let rhs: f64 = (0..m).map(|r| get(i, r, l) * get(j, k, r)).sum();
                            worst = worst.max((lhs - rhs).abs());
                        }
                    }
                }
            }
            worst
        }
        AlgebraProperty::Baric => {
            let mut worst = property_defect(matrix, AlgebraProperty::Commutative);
            for i in 0..m {
                for j in 0..m {
                    let s: f64 = (0..m).map(|k| get(i, j, k)).sum();
                    worst = worst.max((s - 1.0).abs());
                }
            }
            worst
        }
        AlgebraProperty::EvolutionAlgebra => {
            let mut worst: f64 = 0.0;
            for i in 0..m {
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    for k in 0..m {
                        worst = worst.max(get(i, j, k).abs());
                    }
                }
            }
            worst
        }
    }
}

/// Whether the algebra has `property` within `tol`.
pub fn check_algebra_property(matrix: &CubicMatrix, property: AlgebraProperty, tol: f64) -> bool {
    property_defect(matrix, property) <= tol
}
