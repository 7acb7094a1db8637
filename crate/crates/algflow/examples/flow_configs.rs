//! The JSON interchange format for flow specifications: parsing, defaults,
//! validation errors, and exact round-tripping.
//!
//! Run with `cargo run --example flow_configs`.

use algflow::{to_json_string, FlowSpec, Result};

fn main() -> Result<()> {
    // Rule and process flags may be omitted; each family carries defaults.
    let spec: FlowSpec = serde_json::from_str(
        r#"{"family": "E9", "params": {"a": 0.2, "b": -0.4, "c": 0.8, "d": 1.4}}"#,
    )?;
    println!(
        "parsed {} with default rule {} and process structure {}",
        spec.family().tag(),
        spec.rule(),
        spec.qsp()
    );

    // Serialization always writes the resolved fields, with floats printed
    // to 17 significant digits so parsing them back is exact.
    print!("{}", to_json_string(&spec)?);

    // Descriptor-driven families nest naturally.
    let spec: FlowSpec = serde_json::from_str(
        r#"{
          "family": "E8",
          "params": {
            "psi": {"fn": "exp", "rate": 1.0},
            "kappa11": {"fn": "poly", "coefficients": [0.1, 0.2]},
            "kappa21": {"fn": "const", "value": 0.2}
          }
        }"#,
    )?;
    println!("scale-family flow evaluates at (0.5, 2.0):");
    let matrix = spec.eval(0.5, 2.0)?;
    println!("  entries {:?}", matrix.entries());

    // Out-of-range parameters are rejected at parse time with a pointed
    // message, not deferred to first evaluation.
    let err = serde_json::from_str::<FlowSpec>(
        r#"{"family": "E2", "params": {"epsilon": 0.7, "x": 0.5}}"#,
    )
    .unwrap_err();
    println!("rejected bad spec: {err}");
    Ok(())
}
