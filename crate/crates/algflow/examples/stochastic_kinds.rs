//! The five stochasticity classes of a cubic matrix, their defect measures,
//! and the quadratic action on the simplex.
//!
//! Run with `cargo run --example stochastic_kinds`.

use algflow::{
    check_stochastic, qso_apply, stochasticity_defect, CubicMatrix, Distribution, Result,
    StochasticityKind,
};

fn main() -> Result<()> {
    // A matrix whose k-sums are all 1 (row-stochastic in the third index):
    // each (i,j) slot spreads its unit mass over the output coordinates.
    let mixing = CubicMatrix::from_entries(
        2,
        vec![
            0.9, 0.1, // (0,0,*)
            0.5, 0.5, // (0,1,*)
            0.5, 0.5, // (1,0,*)
            0.2, 0.8, // (1,1,*)
        ],
    )?;
    println!("defects of the mixing matrix:");
    for kind in StochasticityKind::ALL {
        println!(
            "  {:<20} {:.3e}",
            kind.name(),
            stochasticity_defect(&mixing, kind)
        );
    }

    // A doubly balanced example: k-sums are 1 and every i-column sums to
    // 1/m, the strongest class checked here.
    let balanced = CubicMatrix::from_entries(
        2,
        vec![0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25],
    )?;
    for kind in StochasticityKind::ALL {
        println!(
            "  uniform matrix is {:<20} {}",
            kind.name(),
            check_stochastic(&balanced, kind, 1e-12)
        );
    }

    // The quadratic action: x'_k = sum_{ij} c_ijk x_i x_j maps the simplex
    // to itself whenever the k-sums are 1 and entries are nonnegative.
    let mut x = Distribution::new(vec![0.9, 0.1])?;
    println!("iterating the quadratic map from {:?}:", x.coords());
    for step in 1..=6 {
        x = qso_apply(&mixing, &x, 1e-12)?;
        println!("  step {step}: ({:.6}, {:.6})", x.get(0)?, x.get(1)?);
    }
    Ok(())
}
