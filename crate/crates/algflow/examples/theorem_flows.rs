//! Building flows from an invertible matrix family and a weight vector:
//! the generated rule-D and rule-E constructions, optional zero-sum
//! perturbations, and the specialized property predicates they admit.
//!
//! Run with `cargo run --example theorem_flows`.

use algflow::{
    make_flow_ta, make_flow_te, max_kc_residual, ta_associativity_defect,
    ta_commutativity_defect, FamilyForm, FunctionDescriptor, MatrixFamily, Result,
};

fn exp_family() -> MatrixFamily {
    MatrixFamily {
        dim: 2,
        form: FamilyForm::UpperTriangular,
        entries: vec![
            vec![
                FunctionDescriptor::Exp { rate: 1.0 },
                FunctionDescriptor::Const { value: 1.0 },
            ],
            vec![
                FunctionDescriptor::Const { value: 0.0 },
                FunctionDescriptor::Exp { rate: 2.0 },
            ],
        ],
    }
}

fn main() -> Result<()> {
    // The weighted-split construction: beta_ijk(s) = w_j * A(s)_ik composes
    // under rule D for any invertible family A and any unit-sum weights.
    let ta = make_flow_ta(exp_family(), vec![0.5, 0.5], None)?;
    let (worst, _) = max_kc_residual(&ta, 100, 3)?;
    println!("generated rule-D flow: worst residual {worst:.3e}");

    // The mirrored construction composes under rule E.
    let te = make_flow_te(exp_family(), vec![0.5, 0.5], None)?;
    let (worst, _) = max_kc_residual(&te, 100, 3)?;
    println!("generated rule-E flow: worst residual {worst:.3e}");

    // A zero-sum perturbation table (sum over the middle index vanishes)
    // keeps the defining constraint, hence the composition law, intact.
    let delta = vec![0.05, -0.02, -0.05, 0.02, -0.1, 0.03, 0.1, -0.03];
    let bent = make_flow_ta(exp_family(), vec![0.5, 0.5], Some(delta))?;
    let (worst, _) = max_kc_residual(&bent, 100, 3)?;
    println!("perturbed rule-D flow: worst residual {worst:.3e}");

    // The generated form makes property checks cheap: commutativity needs
    // only the start-time table, associativity a double contraction.
    for s in [0.0, 1.0, 2.0] {
        println!(
            "s = {s}: commutativity defect {:.3e}",
            ta_commutativity_defect(&ta, s)?
        );
    }
    for (s, t) in [(0.0, 0.0), (0.0, 2.0), (1.0, 3.0)] {
        println!(
            "(s,t) = ({s},{t}): associativity defect {:.3e}",
            ta_associativity_defect(&ta, s, t)?
        );
    }
    Ok(())
}
