//! Integer sines are dense in [-1, 1]: searching for witnesses and turning
//! the approximation error into a matrix-distance bound for the rotating
//! family.
//!
//! Run with `cargo run --example density_of_sines`.

use algflow::{density_search, rotation_entry_sensitivity, Result};

fn main() -> Result<()> {
    // The classic witness: 355 is a near-multiple of pi (355/113 is the
    // famous rational approximation), so sin 355 is tiny.
    if let Some(w) = density_search(0.0, 1e-4, 1000)? {
        println!("|sin n| < 1e-4 first at n = {}, error {:.6e}", w.n, w.error);
    }

    // Witnesses for a spread of targets; the needed n varies wildly with
    // how well the target's preimage aligns with the integer lattice.
    for target in [-0.99, -0.5, 0.0, 0.5, 0.739, 0.99] {
        match density_search(target, 1e-3, 10_000_000)? {
            Some(w) => println!(
                "sin n = {target:>6}: n = {:>8}, error {:.3e}",
                w.n, w.error
            ),
            None => println!("sin n = {target:>6}: no witness in range"),
        }
    }

    // For the rotating family the sine error controls how far the algebra
    // at gap n sits from the target algebra: the per-entry sensitivity
    // bound times the tolerance bounds the matrix distance.
    let sensitivity = rotation_entry_sensitivity(0.2, -0.4, 0.8, 1.4);
    let tol = 1e-3;
    println!(
        "rotating family: entry sensitivity {sensitivity}, so |sin error| < {tol} keeps the matrix within {:.3e}",
        sensitivity * tol
    );
    Ok(())
}
