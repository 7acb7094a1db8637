//! Flows of finite-dimensional algebras.
//!
//! The crate models an algebra by its cubic matrix of structural constants,
//! composes such matrices under several bilinear rules, and studies
//! two-parameter families ("flows") of algebras whose matrices satisfy a
//! composition law over time. On top of that sit analyzers that map out, over
//! a grid of time pairs, when a flow's algebra is commutative, associative,
//! baric, an evolution algebra, or stochastic in one of several senses, plus
//! limit extraction, random closure sweeps, and a small CLI.

pub mod afamily;
pub mod analysis;
pub mod cli;
pub mod cubic;
pub mod descriptor;
pub mod error;
pub mod flow;
pub mod properties;
pub mod report;
pub mod simplex;
pub mod stochastic;

pub use afamily::{FamilyForm, MatrixFamily};
pub use analysis::{
    closure_sweep, density_search, detect_homogeneous, detect_periodic, ea_duration_e8,
    limit_algebra, rotation_entry_sensitivity, scan_defect, scan_property,
    ta_associativity_defect, ta_associativity_diagram, ta_commutativity_defect, CellState,
    ClosureReport, ClosureWitness, DensityWitness, GridConstraint, PropertyDiagram, PropertyId,
    TimeGrid,
};
pub use cubic::{AssocOp, CubicMatrix, CubicRule, SquareMatrix};
pub use descriptor::FunctionDescriptor;
pub use error::{AlgflowError, Result};
pub use flow::{
    make_flow_ta, make_flow_te, max_kc_residual, sample_admissible_triples, Family, FlowSpec,
    SquareFlowSpec,
};
pub use properties::{check_algebra_property, property_defect, AlgebraProperty};
pub use report::{fmt_f64, input_hash, to_json_string, RunReport};
pub use simplex::Distribution;
pub use stochastic::{check_stochastic, qso_apply, stochasticity_defect, StochasticityKind};
