//! Square-matrix shadows of cubic products: fixing the middle index is a
//! homomorphism for rule C, summing it out is one for rules D and E.
//!
//! Run with `cargo run --example layers_and_collapse`.

use algflow::{CubicMatrix, CubicRule, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cubic(rng: &mut ChaCha8Rng, dim: usize) -> Result<CubicMatrix> {
    let entries = (0..dim * dim * dim).map(|_| rng.gen::<f64>()).collect();
    CubicMatrix::from_entries(dim, entries)
}

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_cubic(&mut rng, 3)?;
    let b = random_cubic(&mut rng, 3)?;

    // Rule C acts layer by layer: slice the product at middle index j and
    // you get the ordinary matrix product of the j-th slices.
    let c_product = a.multiply(&b, CubicRule::C)?;
    for j in 0..3 {
        let direct = a.layer(j)?.matmul(&b.layer(j)?)?;
        println!(
            "layer {j}: |layer(a *C b) - layer(a)·layer(b)| = {:.3e}",
            c_product.layer(j)?.sup_distance(&direct)?
        );
    }

    // Rules D and E both project onto the collapsed square matrices: the
    // collapse of the product is the product of the collapses.
    let direct = a.collapse().matmul(&b.collapse())?;
    for rule in [CubicRule::D, CubicRule::E] {
        let product = a.multiply(&b, rule)?;
        println!(
            "rule {rule}: |collapse(a * b) - collapse(a)·collapse(b)| = {:.3e}",
            product.collapse().sup_distance(&direct)?
        );
    }

    // The per-layer identity is a two-sided unit for rule C.
    let id = CubicMatrix::per_layer_identity(3)?;
    println!(
        "per-layer identity: |id *C a - a| = {:.3e}, |a *C id - a| = {:.3e}",
        id.multiply(&a, CubicRule::C)?.sup_distance(&a)?,
        a.multiply(&id, CubicRule::C)?.sup_distance(&a)?
    );
    Ok(())
}
