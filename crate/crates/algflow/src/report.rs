//! Deterministic artifact serialization and run reports.
//!
//! Every floating-point value written by this crate — in JSON artifacts and
//! in CSV diagrams — is rendered in scientific notation with 17 significant
//! digits, enough to reproduce the exact bit pattern on read-back, so two
//! runs with the same inputs produce byte-identical files.

use std::io::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Render a float with 17 significant digits (round-trip exact for f64).
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serialize a value to JSON with deterministic float formatting and a
/// trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Hex-encoded SHA-256 of raw input bytes, used to tie a report to the
/// exact configuration that produced it.
pub fn input_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Summary of one command invocation. Wall time is deliberately *not* part
/// of the report (it would break byte-identical reruns); the CLI prints it
/// to stderr instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// The subcommand that ran.
    pub command: String,
    /// Version of this library.
    pub library_version: String,
    /// SHA-256 of the configuration file bytes.
    pub input_hash: String,
    /// Tolerance the run used.
    pub tol: f64,
    /// Seed the run used, when randomness was involved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Command-specific results.
    pub summary: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str, config_bytes: &[u8], tol: f64) -> Self {
        RunReport {
            command: command.to_string(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            input_hash: input_hash(config_bytes),
            tol,
            seed: None,
            summary: serde_json::Value::Null,
        }
    }

    /// Render the report as deterministic JSON.
    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }
}

/// Measure the wall time of a closure and report it on stderr, keeping
/// timing out of the deterministic artifacts.
pub fn timed<T>(label: &str, body: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let mut err = std::io::stderr();
    // Ignore stderr failures: timing is advisory.
    let _ = writeln!(err, "{label}: {:.3}s", elapsed.as_secs_f64());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_exactly() {
        for v in [
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            -2.2250738585072014e-308,
            6.02214076e23,
            0.0,
            1.0,
        ] {
            let text = fmt_f64(v);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{text}");
        }
    }

    #[test]
    fn json_floats_use_17_significant_digits() {
        let json = to_json_string(&serde_json::json!({"x": 0.1})).unwrap();
        assert_eq!(json, "{\"x\":1.0000000000000001e-1}\n");
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["x"].as_f64().unwrap().to_bits(), (0.1f64).to_bits());
    }

    #[test]
    fn json_output_is_deterministic() {
        let value = serde_json::json!({
            "zeta": 1.0, "alpha": [0.25, 0.5], "mid": {"b": 2.0, "a": 1.5}
        });
        let a = to_json_string(&value).unwrap();
        let b = to_json_string(&value).unwrap();
        assert_eq!(a, b);
        // Maps render in sorted key order, independent of insertion order.
        assert!(a.find("\"alpha\"").unwrap() < a.find("\"zeta\"").unwrap());
        assert!(a.find("\"a\"").unwrap() < a.find("\"b\"").unwrap());
    }

    #[test]
    fn input_hash_is_stable_and_sensitive() {
        let a = input_hash(b"{\"family\": \"E9\"}");
        let b = input_hash(b"{\"family\": \"E9\"}");
        let c = input_hash(b"{\"family\": \"E8\"}");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn report_round_trips() {
        let mut report = RunReport::new("verify", b"config", 1e-9);
        report.seed = Some(7);
        report.summary = serde_json::json!({"worst_residual": 1e-12});
        let json = report.to_json().unwrap();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
