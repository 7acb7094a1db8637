//! Scanning a time grid for where an algebraic property holds, rendering
//! the diagram as CSV, and the specialized evolution-algebra duration.
//!
//! Run with `cargo run --example property_diagrams`.

use algflow::{
    ea_duration_e8, scan_property, AlgebraProperty, Family, FlowSpec, FunctionDescriptor,
    GridConstraint, PropertyId, Result, StochasticityKind, TimeGrid,
};

fn main() -> Result<()> {
    // Where does the rotating family commute? With tied parameters
    // (a = 1 - c, b = -d) the answer is everywhere; untie one and the
    // diagram flips to everywhere-false.
    let grid = TimeGrid::new(0.0, 2.0, 0.0, 4.0, 5, 9, GridConstraint::None)?;
    for (label, d) in [("tied", 0.4), ("untied", 1.4)] {
        let spec = FlowSpec::new(Family::E9 {
            a: 0.2,
            b: -0.4,
            c: 0.8,
            d,
        })?;
        let diagram = scan_property(
            &spec,
            PropertyId::Algebra(AlgebraProperty::Commutative),
            &grid,
            1e-9,
        )?;
        let (holds, fails, undefined) = diagram.counts();
        println!("{label}: {holds} hold / {fails} fail / {undefined} undefined");
    }

    // Stochasticity classes are properties too: the two-state process
    // family keeps unit k-sums at every admissible time pair.
    let process = FlowSpec::new(Family::E2 {
        epsilon: 0.25,
        x: 0.5,
    })?;
    let gap_grid = TimeGrid::new(0.0, 2.0, 1.0, 4.0, 5, 7, GridConstraint::RequireGap1)?;
    let diagram = scan_property(
        &process,
        PropertyId::Stochastic(StochasticityKind::K),
        &gap_grid,
        1e-9,
    )?;
    println!("two-state family k-stochastic everywhere: {}", diagram.all_hold());
    println!("--- CSV rendering ---");
    print!("{}", diagram.to_csv());

    // The scale-family flow admits a closed-form evolution-algebra
    // duration; with kappa11 = 1/(2 Psi) and kappa21 = 0 the cross slabs
    // vanish identically.
    let psi = FunctionDescriptor::Exp { rate: 1.0 };
    let kappa11 = FunctionDescriptor::Recip {
        inner: Box::new(FunctionDescriptor::Product {
            factors: vec![FunctionDescriptor::Const { value: 2.0 }, psi.clone()],
        }),
    };
    let kappa21 = FunctionDescriptor::Const { value: 0.0 };
    let duration = ea_duration_e8(&psi, &kappa11, &kappa21, &grid, 1e-9)?;
    println!(
        "scale-family flow stays an evolution algebra everywhere: {}",
        duration.all_hold()
    );
    Ok(())
}
