//! Which stochasticity classes are closed under which products? Randomized
//! sweeps with reproducible counterexamples.
//!
//! Run with `cargo run --example closure_sweep`.

use algflow::{closure_sweep, CubicRule, Result, StochasticityKind};

fn main() -> Result<()> {
    println!("fraction of 200 random pairs whose product stays in class:");
    println!("{:<20} {:>8} {:>8} {:>8}", "class", "rule C", "rule D", "rule E");
    for kind in StochasticityKind::ALL {
        let mut row = format!("{:<20}", kind.name());
        for rule in [CubicRule::C, CubicRule::D, CubicRule::E] {
            let report = closure_sweep(2, kind, rule, 200, 99)?;
            row.push_str(&format!(" {:>8.3}", report.fraction));
        }
        println!("{row}");
    }

    // A failing sweep carries a replayable witness: the trial index, the
    // violating defect, and both factors.
    let report = closure_sweep(2, StochasticityKind::K, CubicRule::D, 200, 99)?;
    if let Some(witness) = &report.witness {
        println!(
            "k-stochastic x rule D counterexample: trial {}, defect {:.3e}",
            witness.trial, witness.defect
        );
        println!("  left factor entries:  {:?}", witness.left.entries());
        println!("  right factor entries: {:?}", witness.right.entries());
    }
    Ok(())
}
