//! Verifying that a two-time family of cubic matrices composes correctly,
//! plus the structure detectors for homogeneity and periodicity.
//!
//! Run with `cargo run --example kc_verification`.

use algflow::{
    detect_homogeneous, detect_periodic, max_kc_residual, Family, FlowSpec, GridConstraint,
    Result, TimeGrid,
};
use std::f64::consts::TAU;

fn main() -> Result<()> {
    // The rotating two-parameter family composes under rule D: the matrix
    // for (s,t) equals the product of the (s,tau) and (tau,t) matrices.
    let spec = FlowSpec::new(Family::E9 {
        a: 0.2,
        b: -0.4,
        c: 0.8,
        d: 1.4,
    })?;
    println!("family {} under rule {}", spec.family().tag(), spec.rule());
    let (worst, at) = max_kc_residual(&spec, 200, 42)?;
    println!(
        "worst composition residual over 200 random triples: {worst:.3e} at ({:.3}, {:.3}, {:.3})",
        at.0, at.1, at.2
    );

    // Under the wrong rule the same family visibly fails to compose.
    let wrong = spec.with_rule(algflow::CubicRule::C);
    let (worst, _) = max_kc_residual(&wrong, 200, 42)?;
    println!("same family forced under rule C: worst residual {worst:.3e}");

    // One deliberate single-triple check, spelled out.
    let (s, tau, t) = (0.5, 1.7, 3.0);
    println!(
        "single triple ({s}, {tau}, {t}): residual {:.3e}",
        spec.kc_residual(s, tau, t)?
    );

    // This family depends only on t - s and repeats with period 2*pi; both
    // facts are detectable from evaluations alone.
    let grid = TimeGrid::new(0.0, 3.0, 0.0, 8.0, 9, 17, GridConstraint::None)?;
    println!(
        "homogeneous (depends only on t - s): {}",
        detect_homogeneous(&spec, &grid, 1e-10)?
    );
    match detect_periodic(&spec, &grid, &[1.0, 2.0], 1e-10)? {
        Some(period) => println!("periodic with period {period:.6} (tau = {TAU:.6})"),
        None => println!("no period found among the candidates"),
    }
    Ok(())
}
