//! Scalar functions of time, described as data.
//!
//! Several flow families are parameterised by real-valued functions of one
//! time variable (a scale `Psi(t)`, coupling functions, matrix entries of a
//! time-dependent family). Configs describe these functions as small JSON
//! objects tagged by `"fn"`; the enum here mirrors that format and evaluates
//! it.
//!
//! Example JSON forms:
//!
//! ```json
//! {"fn": "const", "value": 2.5}
//! {"fn": "poly", "coefficients": [1.0, 0.0, 3.0]}
//! {"fn": "exp", "rate": -0.5}
//! {"fn": "geom", "base": 0.5}
//! {"fn": "sin", "omega": 1.0, "phase": 0.0}
//! {"fn": "recip", "inner": {"fn": "exp", "rate": 1.0}}
//! {"fn": "sum", "terms": [...]}
//! {"fn": "product", "factors": [...]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{AlgflowError, Result};

/// A scalar function of time, evaluable at any `t` in its domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "lowercase")]
pub enum FunctionDescriptor {
    /// Constant `value`.
    Const { value: f64 },
    /// Polynomial `sum_i coefficients[i] * t^i` (ascending powers).
    Poly { coefficients: Vec<f64> },
    /// Exponential `exp(rate * t)`.
    Exp { rate: f64 },
    /// Geometric `base^t`; requires `base > 0` so real powers are defined.
    Geom { base: f64 },
    /// Sinusoid `sin(omega * t + phase)`.
    Sin { omega: f64, phase: f64 },
    /// Cosinusoid `cos(omega * t + phase)`.
    Cos { omega: f64, phase: f64 },
    /// Reciprocal `1 / inner(t)`; fails where `inner` vanishes.
    Recip { inner: Box<FunctionDescriptor> },
    /// Sum of the listed terms.
    Sum { terms: Vec<FunctionDescriptor> },
    /// Product of the listed factors.
    Product { factors: Vec<FunctionDescriptor> },
}

impl FunctionDescriptor {
    /// Evaluate at `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            FunctionDescriptor::Const { value } => *value,
            FunctionDescriptor::Poly { coefficients } => coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * t + c),
            FunctionDescriptor::Exp { rate } => (rate * t).exp(),
            FunctionDescriptor::Geom { base } => {
                if *base <= 0.0 {
                    return Err(AlgflowError::Descriptor(format!(
                        "geometric base must be positive, got {base}"
                    )));
                }
                base.powf(t)
            }
            FunctionDescriptor::Sin { omega, phase } => (omega * t + phase).sin(),
            FunctionDescriptor::Cos { omega, phase } => (omega * t + phase).cos(),
            FunctionDescriptor::Recip { inner } => {
                let x = inner.eval(t)?;
                if x == 0.0 {
                    return Err(AlgflowError::Descriptor(format!(
                        "reciprocal of zero at t = {t}"
                    )));
                }
                1.0 / x
            }
            FunctionDescriptor::Sum { terms } =>

                terms.iter().map(|f| f.eval(t)).sum::<Result<f64>>()?,
            FunctionDescriptor::Product { factors } => {
                let mut acc = 1.0;
                for f in factors {
                    acc *= f.eval(t)?;
                }
                acc
            }
        };
        if !v.is_finite() {
            return Err(AlgflowError::Descriptor(format!(
                "evaluation at t = {t} is not finite"
            )));
        }
        Ok(v)
    }

    /// Grid of 64 probe times used by [`Self::validate_positive`] and
    /// [`Self::validate_nonvanishing`]: zero plus 63 log-spaced points in
    /// `[1e-3, 100]`, covering both near-zero and moderately large times.
    pub fn probe_times() -> Vec<f64> {
        let mut ts = vec![0.0];
        let (lo, hi) = (1e-3f64, 100.0f64);
        let n = 63;
        for i in 0..n {
            let f = i as f64 / (n - 1) as f64;
            ts.push(lo * (hi / lo).powf(f));
        }
        ts
    }

    /// Check that the function evaluates and stays strictly positive on the
    /// probe grid. This is a smoke test for scale functions that must never
    /// cross zero, not a proof of global positivity.
    pub fn validate_positive(&self, what: &str) -> Result<()> {
        for t in Self::probe_times() {
            let v = self.eval(t)?;
            if v <= 0.0 {
                return Err(AlgflowError::Descriptor(format!(
                    "{what} must be positive; value {v} at t = {t}"
                )));
            }
        }
        Ok(())
    }

    /// Check that the function evaluates and stays bounded away from zero
    /// (|value| > 1e-12) on the probe grid.
    pub fn validate_nonvanishing(&self, what: &str) -> Result<()> {
        for t in Self::probe_times() {
            let v = self.eval(t)?;
            if v.abs() <= 1e-12 {
                return Err(AlgflowError::Descriptor(format!(
                    "{what} must stay away from zero; value {v} at t = {t}"
                )));
            }
        }
        Ok(())
    }

    /// Check that the function merely evaluates (finite) on the probe grid.
    pub fn validate_finite(&self, what: &str) -> Result<()> {
        for t in Self::probe_times() {
            self.eval(t).map_err(|e| {
                AlgflowError::Descriptor(format!("{what}: {e}"))
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_uses_ascending_coefficients() {
        let f = FunctionDescriptor::Poly {
            coefficients: vec![1.0, 0.0, 3.0],
        };
        // 1 + 3 t^2 at t = 2 -> 13.
        assert_eq!(f.eval(2.0).unwrap(), 13.0);
    }

    #[test]
    fn exp_and_geom_agree_on_matching_rate() {
        let e = FunctionDescriptor::Exp { rate: 0.5f64.ln() };
        let g = FunctionDescriptor::Geom { base: 0.5 };
        for t in [0.0, 1.0, 2.5, 7.0] {
            assert!((e.eval(t).unwrap() - g.eval(t).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn recip_rejects_zero_crossing() {
        let f = FunctionDescriptor::Recip {
            inner: Box::new(FunctionDescriptor::Poly {
                coefficients: vec![0.0, 1.0],
            }),
        };
        assert!(f.eval(0.0).is_err());
        assert_eq!(f.eval(2.0).unwrap(), 0.5);
    }

    #[test]
    fn sum_and_product_compose() {
        let f = FunctionDescriptor::Sum {
            terms: vec![
                FunctionDescriptor::Const { value: 1.0 },
                FunctionDescriptor::Product {
                    factors: vec![
                        FunctionDescriptor::Const { value: 2.0 },
                        FunctionDescriptor::Exp { rate: 0.0 },
                    ],
                },
            ],
        };
        assert_eq!(f.eval(10.0).unwrap(), 3.0);
    }

    #[test]
    fn validate_positive_catches_sign_change() {
        let f = FunctionDescriptor::Sin {
            omega: 1.0,
            phase: 0.0,
        };
        assert!(f.validate_positive("test function").is_err());
        let g = FunctionDescriptor::Exp { rate: -1.0 };
        assert!(g.validate_positive("test function").is_ok());
    }

    #[test]
    fn json_round_trip() {
        let f = FunctionDescriptor::Recip {
            inner: Box::new(FunctionDescriptor::Sum {
                terms: vec![
                    FunctionDescriptor::Const { value: 2.0 },
                    FunctionDescriptor::Cos {
                        omega: 1.0,
                        phase: 0.5,
                    },
                ],
            }),
        };
        let json = serde_json::to_string(&f).unwrap();
        let back: FunctionDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_tag_is_fn() {
        let f = FunctionDescriptor::Exp { rate: 1.0 };
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["fn"], "exp");
        assert_eq!(json["rate"], 1.0);
        let parsed: FunctionDescriptor =
            serde_json::from_str(r#"{"fn": "geom", "base": 0.25}"#).unwrap();
        assert_eq!(parsed, FunctionDescriptor::Geom { base: 0.25 });
    }

    #[test]
    fn probe_grid_shape() {
        let ts = FunctionDescriptor::probe_times();
        assert_eq!(ts.len(), 64);
        assert_eq!(ts[0], 0.0);
        assert!((ts[1] - 1e-3).abs() < 1e-18);
        assert!((ts[63] - 100.0).abs() < 1e-10);
    }
}
