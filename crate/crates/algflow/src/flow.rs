//! Two-time flows of algebras: a family of cubic matrices `M[s,t]` indexed by
//! ordered time pairs, satisfying a composition law ("flow equation")
//! `M[s,t] = M[s,tau] * M[tau,t]` under one of the cubic multiplication
//! rules, or — for stochastic process families — the process analogues of
//! that equation (types A and B below).
//!
//! The built-in families:
//!
//! * `E2`, `E3` — two-state stochastic process flows with explicit closed
//!   forms; both satisfy the type-A and type-B process equations.
//! * `E4`, `E5` — three-state stochastic process flows differing only in the
//!   time argument of their drift term (`t+1` vs `t`).
//! * `E6` — the flow `P[s,t]_{ij,k} = a_k(t)` built from a time-dependent
//!   stochastic vector; satisfies both process equations and rule C.
//! * `E7` — two independent square flow solutions stacked as the two layers
//!   of a cubic matrix; rule C, dimension 2.
//! * `E8` — scale-function flow `Psi(t)·kappa(s)` pattern; rule D.
//! * `E9` — the homogeneous rotation flow with four real parameters; rule D,
//!   `2*pi`-periodic in `t`.
//! * `E10` — the rule-E mirror of `E8` with functions of `t` instead of `s`.
//! * `TA` / `TE` — flows generated by an invertible matrix family `A(t)`:
//!   `c_ijr[s,t] = sum_k beta_ijk(s) * inv(A(t))_kr` with
//!   `sum_j beta_ijk(s) = A(s)_ik` (rule D), and the `s`/`t`-mirrored
//!   construction for rule E. The canonical weighted split
//!   `beta_ijk = w_j * A(s)_ik` is used, with an optional zero-row-sum
//!   perturbation table.

use serde::{Deserialize, Serialize};

use crate::afamily::MatrixFamily;
use crate::cubic::{CubicMatrix, CubicRule, SquareMatrix};
use crate::descriptor::FunctionDescriptor;
use crate::error::{AlgflowError, Result};
use crate::simplex::Distribution;
use crate::stochastic::qso_apply;

/// Slack allowed when testing the process-domain gap `t - s >= 1`, so that
/// grid arithmetic landing within rounding of the boundary is admitted.
pub const GAP_TOL: f64 = 1e-9;

/// A solution of the square-matrix flow equation
/// `Q[s,t] = Q[s,tau] * Q[tau,t]`, used as one layer of an `E7` flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SquareFlowSpec {
    /// The plane-rotation solution: `Q[s,t] = [[cos(t-s), sin(t-s)], [-sin(t-s), cos(t-s)]]`.
    Rotation,
    /// Conjugation-style solution `Q[s,t] = A(s) * inv(A(t))` for an
    /// invertible matrix family.
    Conjugation { afamily: MatrixFamily },
    /// Constant-row solution `Q[s,t]_{il} = a_l(t)` where the row functions
    /// sum to 1 at every time.
    ConstRow { a: Vec<FunctionDescriptor> },
}

impl SquareFlowSpec {
    fn validate(&self) -> Result<()> {
        match self {
            SquareFlowSpec::Rotation => Ok(()),
            SquareFlowSpec::Conjugation { afamily } => {
                if afamily.dim != 2 {
                    return Err(AlgflowError::InvalidParameter(format!(
                        "layered square flows are two-dimensional; conjugation family has dimension {}",
                        afamily.dim
                    )));
                }
                afamily.validate()
            }
            SquareFlowSpec::ConstRow { a } => {
                if a.len() != 2 {
                    return Err(AlgflowError::InvalidParameter(format!(
                        "layered square flows are two-dimensional; constant-row spec has {} functions",
                        a.len()
                    )));
                }
                for (l, f) in a.iter().enumerate() {
                    f.validate_finite(&format!("row function {l}"))?;
                }
                for t in FunctionDescriptor::probe_times() {
                    let total: f64 = a.iter().map(|f| f.eval(t)).sum::<Result<f64>>()?;
                    if (total - 1.0).abs() > 1e-9 {
                        return Err(AlgflowError::InvalidParameter(format!(
                            "constant-row functions must sum to 1; sum is {total} at t = {t}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluate the square flow at `(s, t)`.
    pub fn eval(&self, s: f64, t: f64) -> Result<SquareMatrix> {
        match self {
            SquareFlowSpec::Rotation => {
                let (sin, cos) = (t - s).sin_cos();
                SquareMatrix::from_entries(2, vec![cos, sin, -sin, cos])
            }
            SquareFlowSpec::Conjugation { afamily } => {
                afamily.eval_at(s)?.matmul(&afamily.inverse_at(t)?)
            }
            SquareFlowSpec::ConstRow { a } => {
                let a0 = a[0].eval(t)?;
                let a1 = a[1].eval(t)?;
                SquareMatrix::from_entries(2, vec![a0, a1, a0, a1])
            }
        }
    }
}

/// Parameters of one built-in flow family.
///
/// Serialized adjacently tagged: `{"family": "E9", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum Family {
    E2 {
        epsilon: f64,
        x: f64,
    },
    E3 {
        epsilon: f64,
        x: f64,
    },
    E4 {
        epsilon: f64,
        x1: f64,
        x2: f64,
    },
    E5 {
        epsilon: f64,
        x1: f64,
        x2: f64,
    },
    E6 {
        a: Vec<FunctionDescriptor>,
    },
    E7 {
        sq1: SquareFlowSpec,
        sq2: SquareFlowSpec,
    },
    E8 {
        psi: FunctionDescriptor,
        kappa11: FunctionDescriptor,
        kappa21: FunctionDescriptor,
    },
    E9 {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    E10 {
        psi: FunctionDescriptor,
        gamma11: FunctionDescriptor,
        gamma12: FunctionDescriptor,
    },
    #[serde(rename = "TA")]
    Ta {
        afamily: MatrixFamily,
        weights: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perturbation: Option<Vec<f64>>,
    },
    #[serde(rename = "TE")]
    Te {
        afamily: MatrixFamily,
        weights: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perturbation: Option<Vec<f64>>,
    },
}

impl Family {
    /// Family tag as it appears in configs.
    pub fn tag(&self) -> &'static str {
        match self {
            Family::E2 { .. } => "E2",
            Family::E3 { .. } => "E3",
            Family::E4 { .. } => "E4",
            Family::E5 { .. } => "E5",
            Family::E6 { .. } => "E6",
            Family::E7 { .. } => "E7",
            Family::E8 { .. } => "E8",
            Family::E9 { .. } => "E9",
            Family::E10 { .. } => "E10",
            Family::Ta { .. } => "TA",
            Family::Te { .. } => "TE",
        }
    }

    /// Algebra dimension of the family.
    pub fn dim(&self) -> usize {
        match self {
            Family::E2 { .. } | Family::E3 { .. } => 2,
            Family::E4 { .. } | Family::E5 { .. } => 3,
            Family::E6 { a } => a.len(),
            Family::E7 { .. } | Family::E8 { .. } | Family::E9 { .. } | Family::E10 { .. } => 2,
            Family::Ta { afamily, .. } | Family::Te { afamily, .. } => afamily.dim,
        }
    }

    /// The multiplication rule under which the family's flow equation is
    /// claimed to hold.
    pub fn canonical_rule(&self) -> CubicRule {
        match self {
            Family::E2 { .. }
            | Family::E3 { .. }
            | Family::E4 { .. }
            | Family::E5 { .. }
            | Family::E6 { .. }
            | Family::E7 { .. } => CubicRule::C,
            Family::E8 { .. } | Family::E9 { .. } | Family::Ta { .. } => CubicRule::D,
            Family::E10 { .. } | Family::Te { .. } => CubicRule::E,
        }
    }

    /// Whether the family carries stochastic-process structure (an initial
    /// distribution and the type-A/type-B composition laws).
    pub fn canonical_qsp(&self) -> bool {
        matches!(
            self,
            Family::E2 { .. }
                | Family::E3 { .. }
                | Family::E4 { .. }
                | Family::E5 { .. }
                | Family::E6 { .. }
        )
    }

    fn validate(&self) -> Result<()> {
        let range = |v: f64, lo: f64, hi: f64, what: &str| {
            if !v.is_finite() || v < lo || v > hi {
                Err(AlgflowError::InvalidParameter(format!(
                    "{what} must lie in [{lo}, {hi}], got {v}"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Family::E2 { epsilon, x } => {
                range(*epsilon, 0.0, 0.5, "E2 epsilon")?;
                range(*x, 0.0, 1.0, "E2 x")
            }
            Family::E3 { epsilon, x } => {
                range(*epsilon, 0.0, 1.0, "E3 epsilon")?;
                range(*x, 0.0, 1.0, "E3 x")
            }
            Family::E4 { epsilon, x1, x2 } | Family::E5 { epsilon, x1, x2 } => {
                let tag = self.tag();
                range(*epsilon, 0.0, 0.5, &format!("{tag} epsilon"))?;
                range(*x1, 0.0, 1.0, &format!("{tag} x1"))?;
                range(*x2, 0.0, 1.0, &format!("{tag} x2"))?;
                if x1 + x2 > 1.0 + 1e-12 {
                    return Err(AlgflowError::InvalidParameter(format!(
                        "{tag} initial coordinates must satisfy x1 + x2 <= 1, got {}",
                        x1 + x2
                    )));
                }
                Ok(())
            }
            Family::E6 { a } => {
                if a.is_empty() {
                    return Err(AlgflowError::InvalidParameter(
                        "E6 requires at least one row function".into(),
                    ));
                }
                for (l, f) in a.iter().enumerate() {
                    f.validate_finite(&format!("E6 component {l}"))?;
                }
                for t in FunctionDescriptor::probe_times() {
                    let values: Vec<f64> = a
                        .iter()
                        .map(|f| f.eval(t))
                        .collect::<Result<Vec<f64>>>()?;
                    Distribution::with_tolerance(values, 1e-9).map_err(|e| {
                        AlgflowError::InvalidParameter(format!(
                            "E6 components must form a distribution at every time; at t = {t}: {e}"
                        ))
                    })?;
                }
                Ok(())
            }
            Family::E7 { sq1, sq2 } => {
                sq1.validate()?;
                sq2.validate()
            }
            Family::E8 { psi, kappa11, kappa21 } => {
                psi.validate_nonvanishing("E8 scale function")?;
                kappa11.validate_finite("E8 kappa11")?;
                kappa21.validate_finite("E8 kappa21")
            }
            Family::E9 { a, b, c, d } => {
                for (v, what) in [(a, "a"), (b, "b"), (c, "c"), (d, "d")] {
                    if !v.is_finite() {
                        return Err(AlgflowError::InvalidParameter(format!(
                            "E9 parameter {what} must be finite"
                        )));
                    }
                }
                Ok(())
            }
            Family::E10 { psi, gamma11, gamma12 } => {
                psi.validate_nonvanishing("E10 scale function")?;
                gamma11.validate_finite("E10 gamma11")?;
                gamma12.validate_finite("E10 gamma12")
            }
            Family::Ta { afamily, weights, perturbation }
            | Family::Te { afamily, weights, perturbation } => {
                afamily.validate()?;
                let m = afamily.dim;
                if weights.len() != m {
                    return Err(AlgflowError::InvalidParameter(format!(
                        "expected {m} weights, got {}",
                        weights.len()
                    )));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(AlgflowError::InvalidDistribution(format!(
                        "weights must sum to 1, got {total}"
                    )));
                }
                if let Some(delta) = perturbation {
                    if delta.len() != m * m * m {
                        return Err(AlgflowError::DimensionMismatch(format!(
                            "perturbation table must have {} entries, got {}",
                            m * m * m,
                            delta.len()
                        )));
                    }
                    for i in 0..m {
                        for k in 0..m {
                            let s: f64 =
                                (0..m).map(|j| delta[(i * m + j) * m + k]).sum();
                            if s.abs() > 1e-9 {
                                return Err(AlgflowError::InvalidParameter(format!(
                                    "perturbation middle-index sums must vanish; sum over j at (i={i}, k={k}) is {s}"
                                )));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// A fully specified flow: family parameters, the multiplication rule under
/// which its flow equation is claimed, and whether it carries stochastic
/// process structure.
///
/// Serialized as `{"family": tag, "params": {...}, "rule": "C"|"D"|"E",
/// "qsp": bool}`; `rule` and `qsp` may be omitted in configs, in which case
/// the family's canonical values are filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSpec {
    family: Family,
    rule: CubicRule,
    qsp: bool,
}

#[derive(Deserialize)]
struct RawFlowSpec {
    #[serde(flatten)]
    family: Family,
    #[serde(default)]
    rule: Option<CubicRule>,
    #[serde(default)]
    qsp: Option<bool>,
}

impl<'de> Deserialize<'de> for FlowSpec {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawFlowSpec::deserialize(deserializer)?;
        FlowSpec::with_options(raw.family, raw.rule, raw.qsp).map_err(serde::de::Error::custom)
    }
}

impl Serialize for FlowSpec {
    fn serialize<S>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            family: &'a Family,
            rule: CubicRule,
            qsp: bool,
        }
        Out {
            family: &self.family,
            rule: self.rule,
            qsp: self.qsp,
        }
        .serialize(serializer)
    }
}

impl FlowSpec {
    /// Build a spec with the family's canonical rule and process flag.
    pub fn new(family: Family) -> Result<Self> {
        Self::with_options(family, None, None)
    }

    /// Build a spec, overriding the rule and/or the process flag.
    ///
    /// A `qsp: true` override is rejected for families without process
    /// structure (no initial distribution to define the type-A/B laws).
    pub fn with_options(
        family: Family,
        rule: Option<CubicRule>,
        qsp: Option<bool>,
    ) -> Result<Self> {
        family.validate()?;
        let rule = rule.unwrap_or_else(|| family.canonical_rule());
        let qsp = qsp.unwrap_or_else(|| family.canonical_qsp());
        if qsp && !family.canonical_qsp() {
            return Err(AlgflowError::InvalidParameter(format!(
                "family {} has no stochastic-process structure; qsp must be false",
                family.tag()
            )));
        }
        Ok(FlowSpec { family, rule, qsp })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn rule(&self) -> CubicRule {
        self.rule
    }

    pub fn qsp(&self) -> bool {
        self.qsp
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    /// Same spec checked under a different multiplication rule.
    pub fn with_rule(&self, rule: CubicRule) -> Self {
        FlowSpec {
            family: self.family.clone(),
            rule,
            qsp: self.qsp,
        }
    }

    /// Same spec with process structure disabled (treat as a plain flow).
    pub fn without_qsp(&self) -> Self {
        FlowSpec {
            family: self.family.clone(),
            rule: self.rule,
            qsp: false,
        }
    }

    /// Which process composition laws the family is documented to satisfy,
    /// as `(type_a, type_b)`; `None` for families without process structure.
    pub fn claimed_qsp_types(&self) -> Option<(bool, bool)> {
        match self.family {
            Family::E2 { .. } | Family::E3 { .. } | Family::E6 { .. } => Some((true, true)),
            Family::E4 { .. } => Some((true, false)),
            Family::E5 { .. } => Some((false, true)),
            _ => None,
        }
    }

    /// The initial distribution baked into a process family (`E6` defaults
    /// to uniform since its composition laws do not depend on it).
    pub fn initial_distribution(&self) -> Result<Distribution> {
        match &self.family {
            Family::E2 { x, .. } | Family::E3 { x, .. } => {
                Distribution::new(vec![*x, 1.0 - *x])
            }
            Family::E4 { x1, x2, .. } | Family::E5 { x1, x2, .. } => {
                Distribution::new(vec![*x1, *x2, 1.0 - *x1 - *x2])
            }
            Family::E6 { a } => Distribution::uniform(a.len()),
            _ => Err(AlgflowError::NotQsp),
        }
    }

    /// For rule-D/E theorem flows, the pieces `(matrix family, weights,
    /// perturbation)` of the generating construction.
    pub fn as_generated(&self) -> Option<(&MatrixFamily, &[f64], Option<&[f64]>)> {
        match &self.family {
            Family::Ta { afamily, weights, perturbation }
            | Family::Te { afamily, weights, perturbation } => {
                Some((afamily, weights, perturbation.as_deref()))
            }
            _ => None,
        }
    }

    fn check_time_pair(&self, s: f64, t: f64) -> Result<()> {
        if !(s.is_finite() && t.is_finite()) || s < 0.0 || t < s {
            return Err(AlgflowError::TimeDomain(format!(
                "need 0 <= s <= t, got s = {s}, t = {t}"
            )));
        }
        if self.qsp && t - s < 1.0 - GAP_TOL {
            return Err(AlgflowError::TimeDomain(format!(
                "process families require t - s >= 1, got gap {}",
                t - s
            )));
        }
        Ok(())
    }

    /// Evaluate the flow's cubic matrix at the time pair `(s, t)`.
    pub fn eval(&self, s: f64, t: f64) -> Result<CubicMatrix> {
        self.check_time_pair(s, t)?;
        match &self.family {
            Family::E2 { epsilon, x } => {
                let w = 1.0 - 2.0 * epsilon;
                let n = t - s;
                let q = (n - 1.0).exp2();
                let pref = w.powf(n) / q;
                let g = (q - 1.0) * w.powf(s) * x;
                let first = [[g + 1.0, g + 0.5], [g + 0.5, g]];
                two_state_complement(pref, &first)
            }
            Family::E3 { epsilon, x } => {
                let n = t - s;
                let q = (n - 1.0).exp2();
                let pref = epsilon.powf(n) / q * (s + 1.0) / (t + 1.0);
                let g = (q - 1.0) * epsilon.powf(s) / (s + 1.0) * x;
                let first = [[g + 1.0, g + 0.5], [g + 0.5, g]];
                two_state_complement(pref, &first)
            }
            Family::E4 { epsilon, x1, x2 } => {
                three_state_drift(*epsilon, *x1, *x2, s, t, t + 1.0)
            }
            Family::E5 { epsilon, x1, x2 } => {
                three_state_drift(*epsilon, *x1, *x2, s, t, t)
            }
            Family::E6 { a } => {
                let m = a.len();
                let row: Vec<f64> = a.iter().map(|f| f.eval(t)).collect::<Result<_>>()?;
                let mut out = CubicMatrix::zeros(m)?;
                for i in 0..m {
                    for j in 0..m {
                        for (k, &v) in row.iter().enumerate() {
                            out.set(i, j, k, v)?;
                        }
                    }
                }
                Ok(out)
            }
            Family::E7 { sq1, sq2 } => {
                let q1 = sq1.eval(s, t)?;
                let q2 = sq2.eval(s, t)?;
                let mut out = CubicMatrix::zeros(2)?;
                for i in 0..2 {
                    for r in 0..2 {
                        out.set(i, 0, r, q1.get(i, r)?)?;
                        out.set(i, 1, r, q2.get(i, r)?)?;
                    }
                }
                Ok(out)
            }
            Family::E8 { psi, kappa11, kappa21 } => {
                let psi_s = psi.eval(s)?;
                let psi_t = psi.eval(t)?;
                if psi_s == 0.0 {
                    return Err(AlgflowError::SingularFamily(format!(
                        "E8 scale function vanishes at s = {s}"
                    )));
                }
                let half = 1.0 / (2.0 * psi_s);
                let k11 = kappa11.eval(s)?;
                let k21 = kappa21.eval(s)?;
                let mut out = CubicMatrix::zeros(2)?;
                out.set(0, 0, 0, psi_t * k11)?;
                out.set(0, 0, 1, -(psi_t * k11))?;
                out.set(0, 1, 0, psi_t * (half - k11))?;
                out.set(0, 1, 1, psi_t * (k11 - half))?;
                out.set(1, 0, 0, psi_t * k21)?;
                out.set(1, 0, 1, -(psi_t * k21))?;
                out.set(1, 1, 0, psi_t * (-half - k21))?;
                out.set(1, 1, 1, psi_t * (k21 + half))?;
                Ok(out)
            }
            Family::E9 { a, b, c, d } => {
                let (st, ct) = (t - s).sin_cos();
                let mut out = CubicMatrix::zeros(2)?;
                out.set(0, 0, 0, a * ct - b * st)?;
                out.set(0, 0, 1, b * ct + a * st)?;
                out.set(0, 1, 0, (1.0 - a) * ct + b * st)?;
                out.set(0, 1, 1, -b * ct + (1.0 - a) * st)?;
                out.set(1, 0, 0, c * ct - d * st)?;
                out.set(1, 0, 1, d * ct + c * st)?;
                out.set(1, 1, 0, -c * ct - (1.0 - d) * st)?;
                out.set(1, 1, 1, (1.0 - d) * ct - c * st)?;
                Ok(out)
            }
            Family::E10 { psi, gamma11, gamma12 } => {
                let psi_s = psi.eval(s)?;
                let psi_t = psi.eval(t)?;
                if psi_s == 0.0 {
                    return Err(AlgflowError::SingularFamily(format!(
                        "E10 scale function vanishes at s = {s}"
                    )));
                }
                let ht = psi_t / 2.0;
                let g11 = gamma11.eval(t)?;
                let g12 = gamma12.eval(t)?;
                let mut out = CubicMatrix::zeros(2)?;
                out.set(0, 0, 0, g11 / psi_s)?;
                out.set(0, 0, 1, g12 / psi_s)?;
                out.set(0, 1, 0, (ht - g11) / psi_s)?;
                out.set(0, 1, 1, (-g12 - ht) / psi_s)?;
                out.set(1, 0, 0, -g11 / psi_s)?;
                out.set(1, 0, 1, -g12 / psi_s)?;
                out.set(1, 1, 0, (g11 - ht) / psi_s)?;
                out.set(1, 1, 1, (g12 + ht) / psi_s)?;
                Ok(out)
            }
            Family::Ta { afamily, weights, perturbation } => {
                let a_s = afamily.eval_at(s)?;
                let b_t = afamily.inverse_at(t)?;
                let g = a_s.matmul(&b_t)?;
                let m = afamily.dim;
                let mut out = CubicMatrix::zeros(m)?;
                for i in 0..m {
                    for j in 0..m {
                        for r in 0..m {
                            let mut v = weights[j] * g.get(i, r)?;
                            if let Some(delta) = perturbation {
                                for k in 0..m {
                                    v += delta[(i * m + j) * m + k] * b_t.get(k, r)?;
                                }
                            }
                            out.set(i, j, r, v)?;
                        }
                    }
                }
                Ok(out)
            }
            Family::Te { afamily, weights, perturbation } => {
                let a_s = afamily.eval_at(s)?;
                let b_t = afamily.inverse_at(t)?;
                let g = a_s.matmul(&b_t)?;
                let m = afamily.dim;
                let mut out = CubicMatrix::zeros(m)?;
                for i in 0..m {
                    for j in 0..m {
                        for r in 0..m {
                            let mut v = weights[j] * g.get(i, r)?;
                            if let Some(delta) = perturbation {
                                for k in 0..m {
                                    v += a_s.get(i, k)? * delta[(k * m + j) * m + r];
                                }
                            }
                            out.set(i, j, r, v)?;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn check_triple(&self, s: f64, tau: f64, t: f64) -> Result<()> {
        if !(s >= 0.0 && s < tau && tau < t) {
            return Err(AlgflowError::TimeDomain(format!(
                "need 0 <= s < tau < t, got ({s}, {tau}, {t})"
            )));
        }
        Ok(())
    }

    /// Residual of the flow equation at the triple `(s, tau, t)`.
    ///
    /// For plain flows this is the max-abs entry of
    /// `eval(s,t) - eval(s,tau) * eval(tau,t)` under the declared rule. For
    /// process families the flow equation is the process analogue, so the
    /// residual is the worst type-A/type-B residual over the types the
    /// family claims, with its baked-in initial distribution.
    pub fn kc_residual(&self, s: f64, tau: f64, t: f64) -> Result<f64> {
        self.check_triple(s, tau, t)?;
        if self.qsp {
            let x0 = self.initial_distribution()?;
            let (want_a, want_b) = self
                .claimed_qsp_types()
                .expect("qsp specs always claim at least one type");
            let mut worst: f64 = 0.0;
            if want_a {
                worst = worst.max(self.qsp_residual_a(&x0, s, tau, t)?);
            }
            if want_b {
                worst = worst.max(self.qsp_residual_b(&x0, s, tau, t)?);
            }
            Ok(worst)
        } else {
            let left = self.eval(s, t)?;
            let product = self.eval(s, tau)?.multiply(&self.eval(tau, t)?, self.rule)?;
            left.sup_distance(&product)
        }
    }

    /// State of the process at time `t`: the quadratic image of the initial
    /// distribution under the `[0, t]` transition matrix. `t = 0` returns
    /// the initial distribution itself.
    pub fn trajectory(&self, x0: &Distribution, t: f64) -> Result<Distribution> {
        if !self.qsp {
            return Err(AlgflowError::NotQsp);
        }
        if t == 0.0 {
            return Ok(x0.clone());
        }
        if t < 1.0 - GAP_TOL {
            return Err(AlgflowError::TimeDomain(format!(
                "process state is defined at t = 0 and t >= 1, got t = {t}"
            )));
        }
        let p = self.eval(0.0, t)?;
        qso_apply(&p, x0, 1e-9)
    }

    fn check_process_triple(&self, s: f64, r: f64, t: f64) -> Result<()> {
        if !self.qsp {
            return Err(AlgflowError::NotQsp);
        }
        if s < 0.0 || r - s < 1.0 - GAP_TOL || t - r < 1.0 - GAP_TOL {
            return Err(AlgflowError::TimeDomain(format!(
                "process triples require r - s >= 1 and t - r >= 1, got ({s}, {r}, {t})"
            )));
        }
        Ok(())
    }

    /// Type-A composition residual at `(s, r, t)`:
    /// `max_{i,j,k} |P[s,t]_{ij,k} - sum_{m,l} P[s,r]_{ij,m} P[r,t]_{ml,k} x^(r)_l|`.
    pub fn qsp_residual_a(&self, x0: &Distribution, s: f64, r: f64, t: f64) -> Result<f64> {
        self.check_process_triple(s, r, t)?;
        let p_st = self.eval(s, t)?;
        let p_sr = self.eval(s, r)?;
        let p_rt = self.eval(r, t)?;
        let x_r = self.trajectory(x0, r)?;
        let m = p_st.dim();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let mut rhs = 0.0;
                    for mm in 0..m {
                        let w = p_sr.get(i, j, mm)?;
                        if w == 0.0 {
                            continue;
                        }
                        for l in 0..m {
                            rhs += w * p_rt.get(mm, l, k)? * x_r.get(l)?;
                        }
                    }
                    worst = worst.max((p_st.get(i, j, k)? - rhs).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Type-B composition residual at `(s, r, t)`:
    /// `max_{i,j,k} |P[s,t]_{ij,k} - sum_{m,l,g,h} P[s,r]_{im,l} P[s,r]_{jg,h} P[r,t]_{lh,k} x^(s)_m x^(s)_g|`.
    ///
    /// The weight `x^(s)` is the process state at `s`, defined for `s = 0`
    /// (the initial distribution) and `s >= 1`; other `s` are domain errors.
    pub fn qsp_residual_b(&self, x0: &Distribution, s: f64, r: f64, t: f64) -> Result<f64> {
        self.check_process_triple(s, r, t)?;
        let p_st = self.eval(s, t)?;
        let p_sr = self.eval(s, r)?;
        let p_rt = self.eval(r, t)?;
        let x_s = self.trajectory(x0, s)?;
        let m = p_st.dim();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let mut rhs = 0.0;
                    for mm in 0..m {
                        let xm = x_s.get(mm)?;
                        if xm == 0.0 {
                            continue;
                        }
                        for l in 0..m {
                            let pil = p_sr.get(i, mm, l)?;
                            if pil == 0.0 {
                                continue;
                            }
                            for g in 0..m {
                                let xg = x_s.get(g)?;
                                if xg == 0.0 {
                                    continue;
                                }
                                for h in 0..m {
                                    rhs += pil
                                        * p_sr.get(j, g, h)?
                                        * p_rt.get(l, h, k)?
                                        * xm
                                        * xg;
                                }
                            }
                        }
                    }
                    worst = worst.max((p_st.get(i, j, k)? - rhs).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Build a `2 x 2 x 2` process matrix whose `k = 0` slice is
/// `pref * first[i][j]` and whose `k = 1` slice is the complement to 1.
fn two_state_complement(pref: f64, first: &[[f64; 2]; 2]) -> Result<CubicMatrix> {
    let mut out = CubicMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            let v = pref * first[i][j];
            out.set(i, j, 0, v)?;
            out.set(i, j, 1, 1.0 - v)?;
        }
    }
    Ok(out)
}

/// Shared closed form of the two three-state drift families: entries
/// `p_{ij,k} = (delta_ik + delta_jk) * eps^(t-s) + theta * (2 eps)^drift_time * x_k`
/// for `k < 3`, with the `k = 3` slice the complement to 1. The families
/// differ only in `drift_time` (`t+1` vs `t`).
fn three_state_drift(
    epsilon: f64,
    x1: f64,
    x2: f64,
    s: f64,
    t: f64,
    drift_time: f64,
) -> Result<CubicMatrix> {
    let n = t - s;
    let q = (n - 1.0).exp2();
    let theta = (q - 1.0) / q;
    let e = epsilon.powf(n);
    let drift = (2.0 * epsilon).powf(drift_time);
    let z = [drift * x1, drift * x2];
    let mut out = CubicMatrix::zeros(3)?;
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 1.0;
            for (k, zk) in z.iter().enumerate() {
                let mult = (i == k) as u8 + (j == k) as u8;
                let v = f64::from(mult) * e + theta * zk;
                out.set(i, j, k, v)?;
                acc -= v;
            }
            out.set(i, j, 2, acc)?;
        }
    }
    Ok(out)
}

/// Construct the rule-D theorem flow for an invertible matrix family and a
/// weight vector (optionally perturbed by a zero-middle-sum table). The
/// generating constraint `sum_j beta_ijk(s) = A(s)_ik` holds by construction
/// and is re-verified numerically at ten sample times.
pub fn make_flow_ta(
    afamily: MatrixFamily,
    weights: Vec<f64>,
    perturbation: Option<Vec<f64>>,
) -> Result<FlowSpec> {
    let spec = FlowSpec::new(Family::Ta {
        afamily,
        weights,
        perturbation,
    })?;
    verify_generator_constraint(&spec)?;
    Ok(spec)
}

/// Construct the rule-E theorem flow; the mirrored constraint
/// `sum_j gamma_ijk(t) = inv(A(t))_ik` holds by construction and is
/// re-verified numerically at ten sample times.
pub fn make_flow_te(
    afamily: MatrixFamily,
    weights: Vec<f64>,
    perturbation: Option<Vec<f64>>,
) -> Result<FlowSpec> {
    let spec = FlowSpec::new(Family::Te {
        afamily,
        weights,
        perturbation,
    })?;
    verify_generator_constraint(&spec)?;
    Ok(spec)
}

/// Times at which constructor constraints are re-checked numerically.
const CONSTRAINT_SAMPLE_TIMES: [f64; 10] = [0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.5, 8.0, 10.0];

fn verify_generator_constraint(spec: &FlowSpec) -> Result<()> {
    let (afamily, weights, perturbation) = spec
        .as_generated()
        .expect("constructor is only called with generated families");
    let m = afamily.dim;
    let is_ta = matches!(spec.family(), Family::Ta { .. });
    for &time in &CONSTRAINT_SAMPLE_TIMES {
        // Rule D splits A(s) across the middle index; rule E splits inv(A(t)).
        let target = if is_ta {
            afamily.eval_at(time)?
        } else {
            afamily.inverse_at(time)?
        };
        for i in 0..m {
            for k in 0..m {
                let mut total = 0.0;
                for j in 0..m {
                    let mut beta = weights[j] * target.get(i, k)?;
                    if let Some(delta) = perturbation {
                        beta += delta[(i * m + j) * m + k];
                    }
                    total += beta;
                }
                let gap = (total - target.get(i, k)?).abs();
                if gap > 1e-10 {
                    return Err(AlgflowError::InvalidParameter(format!(
                        "generator constraint violated at time {time}: middle-index sum differs from the family entry by {gap:.3e} at ({i}, {k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Deterministic pseudo-random triples `s < tau < t` admissible for the
/// spec: process families get unit gaps and a mix of `s = 0` (where the
/// type-B state weight is the initial distribution) and `s >= 1`; plain
/// flows get arbitrary positive gaps.
pub fn sample_admissible_triples(spec: &FlowSpec, count: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        if spec.qsp() {
            let s = if index % 2 == 0 {
                0.0
            } else {
                1.0 + 2.0 * rng.gen::<f64>()
            };
            let tau = s + 1.0 + 2.0 * rng.gen::<f64>();
            let t = tau + 1.0 + 2.0 * rng.gen::<f64>();
            out.push((s, tau, t));
        } else {
            let s = 3.0 * rng.gen::<f64>();
            let tau = s + 0.1 + 2.0 * rng.gen::<f64>();
            let t = tau + 0.1 + 2.0 * rng.gen::<f64>();
            out.push((s, tau, t));
        }
    }
    out
}

/// Worst flow-equation residual over `count` seeded admissible triples,
/// together with the triple attaining it.
pub fn max_kc_residual(
    spec: &FlowSpec,
    count: usize,
    seed: u64,
) -> Result<(f64, (f64, f64, f64))> {
    let mut worst = 0.0;
    let mut at = (0.0, 0.0, 0.0);
    for (s, tau, t) in sample_admissible_triples(spec, count, seed) {
        let r = spec.kc_residual(s, tau, t)?;
        if r >= worst {
            worst = r;
            at = (s, tau, t);
        }
    }
    Ok((worst, at))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afamily::FamilyForm;

    fn c(value: f64) -> FunctionDescriptor {
        FunctionDescriptor::Const { value }
    }

    fn e2(eps: f64, x: f64) -> FlowSpec {
        FlowSpec::new(Family::E2 { epsilon: eps, x }).unwrap()
    }

    fn e9(a: f64, b: f64, cc: f64, d: f64) -> FlowSpec {
        FlowSpec::new(Family::E9 { a, b, c: cc, d }).unwrap()
    }

    fn e8_exp(k11: f64, k21: f64) -> FlowSpec {
        FlowSpec::new(Family::E8 {
            psi: FunctionDescriptor::Exp { rate: 1.0 },
            kappa11: c(k11),
            kappa21: c(k21),
        })
        .unwrap()
    }

    fn exp_upper_family() -> MatrixFamily {
        MatrixFamily {
            dim: 2,
            form: FamilyForm::UpperTriangular,
            entries: vec![
                vec![FunctionDescriptor::Exp { rate: 1.0 }, c(1.0)],
                vec![c(0.0), FunctionDescriptor::Exp { rate: 2.0 }],
            ],
        }
    }

    #[test]
    fn defaults_fill_rule_and_process_flag() {
        let spec = e2(0.25, 0.5);
        assert_eq!(spec.rule(), CubicRule::C);
        assert!(spec.qsp());
        let spec = e9(0.2, -0.4, 0.8, 1.4);
        assert_eq!(spec.rule(), CubicRule::D);
        assert!(!spec.qsp());
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(FlowSpec::new(Family::E2 {
            epsilon: 0.7,
            x: 0.5
        })
        .is_err());
        assert!(FlowSpec::new(Family::E3 {
            epsilon: 0.7,
            x: 0.5
        })
        .is_ok());
        assert!(FlowSpec::new(Family::E4 {
            epsilon: 0.25,
            x1: 0.8,
            x2: 0.5
        })
        .is_err());
    }

    #[test]
    fn process_flag_rejected_without_process_structure() {
        let err = FlowSpec::with_options(
            Family::E9 {
                a: 0.0,
                b: 0.0,
                c: 0.0,
                d: 0.0,
            },
            None,
            Some(true),
        );
        assert!(err.is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let specs = vec![
            e2(0.25, 0.5),
            FlowSpec::new(Family::E4 {
                epsilon: 0.1234567890123456,
                x1: 0.3,
                x2: 0.3,
            })
            .unwrap(),
            e9(0.2, -0.4, 0.8, 1.4),
            FlowSpec::new(Family::E6 {
                a: vec![c(0.3), c(0.7)],
            })
            .unwrap(),
            make_flow_ta(exp_upper_family(), vec![0.5, 0.5], None).unwrap(),
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: FlowSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn config_without_rule_gets_canonical_values() {
        let spec: FlowSpec = serde_json::from_str(
            r#"{"family": "E9", "params": {"a": 0.2, "b": -0.4, "c": 0.8, "d": 1.4}}"#,
        )
        .unwrap();
        assert_eq!(spec.rule(), CubicRule::D);
        assert!(!spec.qsp());
        let spec: FlowSpec = serde_json::from_str(
            r#"{"family": "E2", "params": {"epsilon": 0.25, "x": 0.5}, "rule": "C", "qsp": true}"#,
        )
        .unwrap();
        assert!(spec.qsp());
    }

    #[test]
    fn range_error_surfaces_through_deserialization() {
        let res: std::result::Result<FlowSpec, _> =
            serde_json::from_str(r#"{"family": "E2", "params": {"epsilon": 0.7, "x": 0.5}}"#);
        let msg = res.unwrap_err().to_string();
        assert!(msg.contains("epsilon"), "unexpected message: {msg}");
    }

    #[test]
    fn two_state_entries_at_unit_gap() {
        // At t - s = 1 the binomial weight 2^(t-s-1) - 1 vanishes, leaving
        // the bare mixing row (1, 1/2, 1/2, 0) scaled by (1-2eps)^(t-s).
        let spec = e2(0.25, 0.5);
        let p = spec.eval(1.0, 2.0).unwrap();
        assert!((p.get(0, 0, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((p.get(1, 1, 0).unwrap() - 0.0).abs() < 1e-15);
        assert!((p.get(0, 0, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn process_domain_is_enforced() {
        let spec = e2(0.25, 0.5);
        assert!(spec.eval(0.0, 0.5).is_err());
        assert!(spec.eval(0.0, 1.0).is_ok());
        assert!(spec.eval(-1.0, 2.0).is_err());
        assert!(spec.eval(2.0, 1.0).is_err());
    }

    #[test]
    fn rotation_flow_at_zero_gap_reproduces_parameters() {
        let spec = e9(0.2, -0.4, 0.8, 1.4);
        let m = spec.eval(3.0, 3.0).unwrap();
        let expected = [
            ((0, 0, 0), 0.2),
            ((0, 0, 1), -0.4),
            ((0, 1, 0), 0.8),
            ((0, 1, 1), 0.4),
            ((1, 0, 0), 0.8),
            ((1, 0, 1), 1.4),
            ((1, 1, 0), -0.8),
            ((1, 1, 1), -0.4),
        ];
        for ((i, j, k), v) in expected {
            assert!(
                (m.get(i, j, k).unwrap() - v).abs() < 1e-15,
                "entry ({i},{j},{k})"
            );
        }
    }

    #[test]
    fn scale_flow_collapse_identity() {
        // Summing the middle index of the rule-D scale flow must reproduce
        // the generating square matrix Psi(t)/(2 Psi(s)) * [[1,-1],[-1,1]].
        let spec = e8_exp(0.1, 0.2);
        for (s, t) in [(0.0, 1.0), (0.3, 2.7), (1.5, 1.5)] {
            let bar = spec.eval(s, t).unwrap().collapse();
            let w = (t - s).exp() / 2.0;
            let target = SquareMatrix::from_entries(2, vec![w, -w, -w, w]).unwrap();
            assert!(bar.sup_distance(&target).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rotation_flow_collapse_identity() {
        let spec = e9(0.2, -0.4, 0.8, 1.4);
        for (s, t) in [(0.0, 1.0), (0.3, 2.7), (2.0, 8.5)] {
            let bar = spec.eval(s, t).unwrap().collapse();
            let (st, ct) = (t - s).sin_cos();
            let target = SquareMatrix::from_entries(2, vec![ct, st, -st, ct]).unwrap();
            assert!(bar.sup_distance(&target).unwrap() < 1e-12);
        }
    }

    #[test]
    fn mirrored_scale_flow_satisfies_rule_e_equation() {
        let spec = FlowSpec::new(Family::E10 {
            psi: FunctionDescriptor::Exp { rate: 1.0 },
            gamma11: FunctionDescriptor::Poly {
                coefficients: vec![0.3, 0.1],
            },
            gamma12: c(-0.2),
        })
        .unwrap();
        assert_eq!(spec.rule(), CubicRule::E);
        let (worst, _) = max_kc_residual(&spec, 100, 0x1DFE).unwrap();
        assert!(worst <= 1e-9, "worst residual {worst:.3e}");
    }

    #[test]
    fn scale_flow_satisfies_rule_d_equation_at_pinned_triple() {
        let spec = FlowSpec::new(Family::E8 {
            psi: FunctionDescriptor::Exp { rate: 1.0 },
            kappa11: FunctionDescriptor::Poly {
                coefficients: vec![0.1, 0.05],
            },
            kappa21: FunctionDescriptor::Poly {
                coefficients: vec![0.2, -0.03],
            },
        })
        .unwrap();
        let r = spec.kc_residual(0.3, 1.1, 2.7).unwrap();
        assert!(r <= 1e-10, "residual {r:.3e}");
    }

    #[test]
    fn rotation_flow_fails_under_wrong_rule() {
        let spec = e9(0.2, -0.4, 0.8, 1.4).with_rule(CubicRule::C);
        let (worst, _) = max_kc_residual(&spec, 20, 0xBAD).unwrap();
        assert!(worst > 0.1, "expected a visible mismatch, got {worst:.3e}");
    }

    #[test]
    fn process_families_satisfy_their_composition_laws() {
        for spec in [
            e2(0.25, 0.5),
            e2(0.0, 0.8),
            e2(0.5, 0.3),
            FlowSpec::new(Family::E3 {
                epsilon: 1.0,
                x: 1.0,
            })
            .unwrap(),
            FlowSpec::new(Family::E3 {
                epsilon: 0.4,
                x: 0.6,
            })
            .unwrap(),
            FlowSpec::new(Family::E6 {
                a: vec![c(0.3), c(0.7)],
            })
            .unwrap(),
        ] {
            let (worst, at) = max_kc_residual(&spec, 50, 0xFEED).unwrap();
            assert!(
                worst <= 1e-10,
                "{} residual {worst:.3e} at {at:?}",
                spec.family().tag()
            );
        }
    }

    #[test]
    fn drift_families_have_one_sided_composition_laws() {
        // The t+1 drift family misses both composition laws; the t drift
        // family satisfies both. The measured behaviour at (0, 1, 2):
        let x0 = Distribution::new(vec![0.3, 0.3, 0.4]).unwrap();
        let e4 = FlowSpec::new(Family::E4 {
            epsilon: 0.25,
            x1: 0.3,
            x2: 0.3,
        })
        .unwrap();
        let a4 = e4.qsp_residual_a(&x0, 0.0, 1.0, 2.0).unwrap();
        let b4 = e4.qsp_residual_b(&x0, 0.0, 1.0, 2.0).unwrap();
        // The per-entry gap is 0.01875 on each of the first two slices and
        // accumulates to twice that on the complement slice.
        assert!((a4 - 0.0375).abs() < 1e-12, "type-A residual {a4}");
        assert!(b4 > 1e-6, "type-B residual {b4}");

        let e5 = FlowSpec::new(Family::E5 {
            epsilon: 0.25,
            x1: 0.3,
            x2: 0.3,
        })
        .unwrap();
        for (s, r, t) in [(0.0, 1.0, 2.0), (0.0, 2.0, 3.5), (1.0, 2.5, 4.0)] {
            let a5 = e5.qsp_residual_a(&x0, s, r, t).unwrap();
            let b5 = e5.qsp_residual_b(&x0, s, r, t).unwrap();
            assert!(a5 <= 1e-10, "type-A residual {a5:.3e} at ({s},{r},{t})");
            assert!(b5 <= 1e-10, "type-B residual {b5:.3e} at ({s},{r},{t})");
        }
    }

    #[test]
    fn type_b_state_weight_is_undefined_between_zero_and_one() {
        let spec = e2(0.25, 0.5);
        let x0 = spec.initial_distribution().unwrap();
        assert!(spec.qsp_residual_b(&x0, 0.5, 1.5, 2.5).is_err());
        assert!(spec.qsp_residual_b(&x0, 1.0, 2.0, 3.0).is_ok());
    }

    #[test]
    fn trajectory_matches_closed_forms() {
        // Two-state families contract toward the second vertex with the
        // closed forms (1-2eps)^t * x and eps^t * x / (t+1).
        for eps in [0.0, 0.25, 0.5] {
            let spec = e2(eps, 0.8);
            let x0 = spec.initial_distribution().unwrap();
            for t in 1..=10 {
                let traj = spec.trajectory(&x0, t as f64).unwrap();
                let expected = (1.0 - 2.0 * eps).powi(t) * 0.8;
                assert!(
                    (traj.get(0).unwrap() - expected).abs() < 1e-12,
                    "eps {eps}, t {t}"
                );
            }
        }
        let spec = FlowSpec::new(Family::E3 {
            epsilon: 1.0,
            x: 1.0,
        })
        .unwrap();
        let x0 = spec.initial_distribution().unwrap();
        let traj = spec.trajectory(&x0, 3.0).unwrap();
        assert!((traj.get(0).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn trajectory_at_half_mixing_lands_on_second_vertex() {
        let spec = e2(0.5, 0.9);
        let x0 = spec.initial_distribution().unwrap();
        for t in [1.0, 2.0, 7.5] {
            let traj = spec.trajectory(&x0, t).unwrap();
            assert_eq!(traj.coords(), &[0.0, 1.0]);
        }
    }

    #[test]
    fn layered_flow_stacks_square_solutions() {
        let spec = FlowSpec::new(Family::E7 {
            sq1: SquareFlowSpec::Rotation,
            sq2: SquareFlowSpec::ConstRow {
                a: vec![c(0.3), c(0.7)],
            },
        })
        .unwrap();
        let m = spec.eval(1.0, 2.5).unwrap();
        let gap: f64 = 1.5;
        assert!((m.get(0, 0, 0).unwrap() - gap.cos()).abs() < 1e-15);
        assert!((m.get(1, 0, 0).unwrap() + gap.sin()).abs() < 1e-15);
        assert!((m.get(0, 1, 0).unwrap() - 0.3).abs() < 1e-15);
        assert!((m.get(1, 1, 1).unwrap() - 0.7).abs() < 1e-15);
        let (worst, _) = max_kc_residual(&spec, 100, 0x7E57).unwrap();
        assert!(worst <= 1e-9, "worst residual {worst:.3e}");
    }

    #[test]
    fn conjugated_rotation_is_the_transpose() {
        let rot_family = MatrixFamily {
            dim: 2,
            form: FamilyForm::General,
            entries: vec![
                vec![
                    FunctionDescriptor::Cos {
                        omega: 1.0,
                        phase: 0.0,
                    },
                    FunctionDescriptor::Sin {
                        omega: 1.0,
                        phase: 0.0,
                    },
                ],
                vec![
                    FunctionDescriptor::Product {
                        factors: vec![
                            c(-1.0),
                            FunctionDescriptor::Sin {
                                omega: 1.0,
                                phase: 0.0,
                            },
                        ],
                    },
                    FunctionDescriptor::Cos {
                        omega: 1.0,
                        phase: 0.0,
                    },
                ],
            ],
        };
        let sq = SquareFlowSpec::Conjugation { afamily: rot_family };
        for (s, t) in [(0.0, 0.7), (1.2, 3.9)] {
            let q = sq.eval(s, t).unwrap();
            let (st, ct) = (t - s).sin_cos();
            let target = SquareMatrix::from_entries(2, vec![ct, -st, st, ct]).unwrap();
            assert!(q.sup_distance(&target).unwrap() < 1e-13);
        }
    }

    #[test]
    fn generated_flows_satisfy_their_equations() {
        let ta = make_flow_ta(exp_upper_family(), vec![0.5, 0.5], None).unwrap();
        assert_eq!(ta.rule(), CubicRule::D);
        let (worst, _) = max_kc_residual(&ta, 50, 0xA11CE).unwrap();
        assert!(worst <= 1e-9, "rule-D residual {worst:.3e}");

        let te = make_flow_te(exp_upper_family(), vec![0.5, 0.5], None).unwrap();
        assert_eq!(te.rule(), CubicRule::E);
        let (worst, _) = max_kc_residual(&te, 50, 0xA11CE).unwrap();
        assert!(worst <= 1e-9, "rule-E residual {worst:.3e}");
    }

    #[test]
    fn perturbed_generated_flows_still_satisfy_their_equations() {
        // delta[i][j][k] with zero middle-index sums: +p at j=0, -p at j=1.
        let delta = vec![
            0.05, -0.02, -0.05, 0.02, // i = 0: j=0 row then j=1 row
            -0.1, 0.03, 0.1, -0.03, // i = 1
        ];
        let ta = make_flow_ta(exp_upper_family(), vec![0.5, 0.5], Some(delta.clone())).unwrap();
        let (worst, _) = max_kc_residual(&ta, 50, 0xD17A).unwrap();
        assert!(worst <= 1e-9, "perturbed rule-D residual {worst:.3e}");

        let te = make_flow_te(exp_upper_family(), vec![0.5, 0.5], Some(delta)).unwrap();
        let (worst, _) = max_kc_residual(&te, 50, 0xD17A).unwrap();
        assert!(worst <= 1e-9, "perturbed rule-E residual {worst:.3e}");
    }

    #[test]
    fn identity_family_gives_a_constant_flow() {
        let identity = MatrixFamily {
            dim: 2,
            form: FamilyForm::LowerTriangular,
            entries: vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
        };
        let ta = make_flow_ta(identity, vec![0.25, 0.75], None).unwrap();
        let a = ta.eval(0.0, 1.0).unwrap();
        let b = ta.eval(2.3, 7.9).unwrap();
        assert_eq!(a, b);
        let r = ta.kc_residual(0.5, 1.5, 3.0).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn bad_perturbation_is_rejected() {
        let delta = vec![0.05; 8];
        assert!(make_flow_ta(exp_upper_family(), vec![0.5, 0.5], Some(delta)).is_err());
        assert!(make_flow_ta(exp_upper_family(), vec![0.6, 0.6], None).is_err());
    }

    #[test]
    fn evaluation_is_pure() {
        let spec = e8_exp(0.1, 0.2);
        let a = spec.eval(0.7, 2.9).unwrap();
        let b = spec.eval(0.7, 2.9).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    proptest::proptest! {
        #[test]
        fn process_matrices_are_symmetric_and_row_stochastic(
            eps in 0.0..=0.5f64,
            x in 0.0..=1.0f64,
            s in 0.0..3.0f64,
            gap in 1.0..4.0f64,
        ) {
            let spec = e2(eps, x);
            let p = spec.eval(s, s + gap).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let mut total = 0.0;
                    for k in 0..2 {
                        total += p.get(i, j, k).unwrap();
                        let sym = (p.get(i, j, k).unwrap() - p.get(j, i, k).unwrap()).abs();
                        proptest::prop_assert!(sym <= 1e-12);
                    }
                    proptest::prop_assert!((total - 1.0).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn scale_flow_collapse_matches_generator(
            s in 0.0..3.0f64,
            gap in 0.0..3.0f64,
            k11 in -1.0..1.0f64,
            k21 in -1.0..1.0f64,
        ) {
            let spec = e8_exp(k11, k21);
            let t = s + gap;
            let bar = spec.eval(s, t).unwrap().collapse();
            let w = (t - s).exp() / 2.0;
            let target = SquareMatrix::from_entries(2, vec![w, -w, -w, w]).unwrap();
            proptest::prop_assert!(bar.sup_distance(&target).unwrap() < 1e-12);
        }

        #[test]
        fn rotation_flow_is_homogeneous_and_periodic(
            s in 0.0..5.0f64,
            gap in 0.0..5.0f64,
            shift in 0.0..3.0f64,
        ) {
            let spec = e9(0.2, -0.4, 0.8, 1.4);
            let a = spec.eval(s, s + gap).unwrap();
            let b = spec.eval(s + shift, s + shift + gap).unwrap();
            proptest::prop_assert!(a.sup_distance(&b).unwrap() < 1e-10);
            let c = spec
                .eval(s, s + gap + 2.0 * std::f64::consts::PI)
                .unwrap();
            proptest::prop_assert!(a.sup_distance(&c).unwrap() < 1e-10);
        }
    }
}
