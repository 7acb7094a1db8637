//! Long-time limits of flows: doubling-gap iteration until the matrices
//! stop moving, or a verdict that they never do.
//!
//! Run with `cargo run --example limit_algebras`.

use algflow::{limit_algebra, Family, FlowSpec, Result};

fn main() -> Result<()> {
    // The two-state mixing family contracts onto the algebra where every
    // product equals the second basis element.
    let spec = FlowSpec::new(Family::E2 {
        epsilon: 0.25,
        x: 0.5,
    })?;
    match limit_algebra(&spec, 0.0, 512.0, 1e-9)? {
        Some(limit) => {
            println!("two-state family converged; structural constants:");
            for i in 0..2 {
                for j in 0..2 {
                    println!(
                        "  e{} e{} = {:.2e} e1 + {:.2e} e2",
                        i + 1,
                        j + 1,
                        limit.get(i, j, 0)?,
                        limit.get(i, j, 1)?
                    );
                }
            }
        }
        None => println!("two-state family did not converge"),
    }

    // The three-state drift family piles all mass onto the third
    // coordinate.
    let spec = FlowSpec::new(Family::E4 {
        epsilon: 0.25,
        x1: 0.3,
        x2: 0.3,
    })?;
    if let Some(limit) = limit_algebra(&spec, 0.0, 512.0, 1e-9)? {
        println!(
            "three-state family: c_113 = {:.6}, c_123 = {:.6}, c_333 = {:.6}",
            limit.get(0, 0, 2)?,
            limit.get(0, 1, 2)?,
            limit.get(2, 2, 2)?
        );
    }

    // A rotating family never settles: the iterates keep circling, and the
    // search reports that honestly.
    let spec = FlowSpec::new(Family::E9 {
        a: 0.2,
        b: -0.4,
        c: 0.8,
        d: 1.4,
    })?;
    println!(
        "rotating family limit: {:?}",
        limit_algebra(&spec, 0.0, 1024.0, 1e-9)?.map(|_| "converged")
    );
    Ok(())
}
