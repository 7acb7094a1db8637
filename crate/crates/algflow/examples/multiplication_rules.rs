//! The three cubic-matrix products and the table-driven general product.
//!
//! Run with `cargo run --example multiplication_rules`.

use algflow::{AssocOp, CubicMatrix, CubicRule, Result};

fn main() -> Result<()> {
    // Unit matrices make the index bookkeeping of each rule visible: the
    // product of units is again a unit (or zero), and which unit survives
    // tells you how the middle index travels.
    let a = CubicMatrix::unit(2, 0, 1, 1)?;
    let b = CubicMatrix::unit(2, 1, 1, 0)?;
    for rule in [CubicRule::C, CubicRule::D, CubicRule::E] {
        let product = a.multiply(&b, rule)?;
        println!("unit(0,1,1) *{rule} unit(1,1,0):");
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let v = product.get(i, j, k)?;
                    if v != 0.0 {
                        println!("  entry ({i},{j},{k}) = {v}");
                    }
                }
            }
        }
        if product.sup_norm() == 0.0 {
            println!("  zero matrix");
        }
    }

    // A dense example: the same pair multiplied under all three rules.
    let a = CubicMatrix::from_entries(2, vec![0.1, 0.9, 0.3, 0.7, 0.5, 0.5, 0.2, 0.8])?;
    let b = CubicMatrix::from_entries(2, vec![0.6, 0.4, 0.25, 0.75, 0.9, 0.1, 0.5, 0.5])?;
    for rule in [CubicRule::C, CubicRule::D, CubicRule::E] {
        let product = a.multiply(&b, rule)?;
        println!("rule {rule}: entries {:?}", product.entries());
    }

    // Every associative operation on indices induces a product; the left
    // and right projections reproduce rules D and E.
    let left = AssocOp::left_projection(2)?;
    let via_table = a.mul_general(&b, &left)?;
    let via_rule = a.mul_d(&b)?;
    println!(
        "left-projection table vs rule D: sup distance {:.3e}",
        via_table.sup_distance(&via_rule)?
    );

    // A nontrivial associative operation: addition modulo 2.
    let xor = AssocOp::from_table(vec![vec![0, 1], vec![1, 0]])?;
    let product = a.mul_general(&b, &xor)?;
    println!("mod-2 table product entries: {:?}", product.entries());
    Ok(())
}
