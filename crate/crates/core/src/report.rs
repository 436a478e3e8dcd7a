//! Inequality identifiers and the report record every verifier returns.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fkdet::FkValue;
use crate::linalg::{min_eigenvalue, ComplexMatrix, HermitianMatrix, ToleranceConfig};

/// Stable registry of checkable inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IneqId {
    Hadamard,
    Fischer,
    ArvesonLeft,
    ArvesonRight,
    Square,
    Inverse,
    ResolventI,
    ResolventIi,
    OpMonotone,
    OpConvex,
    DetMonotone,
    DetPerturb,
    Matic1,
    Matic2,
    MaticVarCounterexample,
    TraceJensen,
    LogconvexDet,
    UpHadamard,
    UpPerturb,
    UpMatic,
    GaussianEntropy,
}

impl IneqId {
    pub const ALL: [IneqId; 21] = [
        IneqId::Hadamard,
        IneqId::Fischer,
        IneqId::ArvesonLeft,
        IneqId::ArvesonRight,
        IneqId::Square,
        IneqId::Inverse,
        IneqId::ResolventI,
        IneqId::ResolventIi,
        IneqId::OpMonotone,
        IneqId::OpConvex,
        IneqId::DetMonotone,
        IneqId::DetPerturb,
        IneqId::Matic1,
        IneqId::Matic2,
        IneqId::MaticVarCounterexample,
        IneqId::TraceJensen,
        IneqId::LogconvexDet,
        IneqId::UpHadamard,
        IneqId::UpPerturb,
        IneqId::UpMatic,
        IneqId::GaussianEntropy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IneqId::Hadamard => "hadamard",
            IneqId::Fischer => "fischer",
            IneqId::ArvesonLeft => "arveson_left",
            IneqId::ArvesonRight => "arveson_right",
            IneqId::Square => "square",
            IneqId::Inverse => "inverse",
            IneqId::ResolventI => "resolvent_i",
            IneqId::ResolventIi => "resolvent_ii",
            IneqId::OpMonotone => "op_monotone",
            IneqId::OpConvex => "op_convex",
            IneqId::DetMonotone => "det_monotone",
            IneqId::DetPerturb => "det_perturb",
            IneqId::Matic1 => "matic1",
            IneqId::Matic2 => "matic2",
            IneqId::MaticVarCounterexample => "matic_var_counterexample",
            IneqId::TraceJensen => "trace_jensen",
            IneqId::LogconvexDet => "logconvex_det",
            IneqId::UpHadamard => "up_hadamard",
            IneqId::UpPerturb => "up_perturb",
            IneqId::UpMatic => "up_matic",
            IneqId::GaussianEntropy => "gaussian_entropy",
        }
    }

    /// Every id except the counterexample states a true inequality.
    pub fn is_guaranteed(self) -> bool {
        self != IneqId::MaticVarCounterexample
    }

    /// Ids whose statement comes with an "equality if and only if" clause.
    pub fn has_equality_clause(self) -> bool {
        !matches!(
            self,
            IneqId::MaticVarCounterexample
                | IneqId::TraceJensen
                | IneqId::LogconvexDet
                | IneqId::UpHadamard
                | IneqId::UpPerturb
                | IneqId::UpMatic
        )
    }

    /// Whether the inequality involves a scalar function argument.
    pub fn takes_function(self) -> bool {
        matches!(self, IneqId::OpMonotone | IneqId::OpConvex | IneqId::DetMonotone | IneqId::TraceJensen | IneqId::LogconvexDet)
    }

    /// Whether the inequality involves a second operator `B`.
    pub fn takes_b(self) -> bool {
        matches!(self, IneqId::Matic1 | IneqId::Matic2 | IneqId::UpMatic | IneqId::MaticVarCounterexample)
    }

    /// Whether the inequality is stated for general unital positive maps
    /// rather than the block conditional expectation.
    pub fn takes_map(self) -> bool {
        matches!(self, IneqId::TraceJensen | IneqId::LogconvexDet | IneqId::UpHadamard | IneqId::UpPerturb | IneqId::UpMatic)
    }
}

impl fmt::Display for IneqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IneqId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IneqId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownIneq(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    /// Löwner order between two Hermitian matrices.
    Operator,
    /// Comparison of (ratios of) Fuglede–Kadison determinants, in log space.
    Determinant,
    /// Comparison of two real numbers.
    Scalar,
}

/// Outcome of one inequality check. `gap ≥ 0` means the inequality holds.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub ineq_id: IneqId,
    pub trial: u64,
    pub seed: u64,
    pub kind: ReportKind,
    /// Operator reports: Frobenius norms of the two sides. Determinant
    /// reports: `log Δ` of each side, or `Δ` itself when a side vanishes.
    pub lhs: f64,
    pub rhs: f64,
    /// `λ_min(RHS − LHS)` for operators, `rhs − lhs` otherwise.
    pub gap: f64,
    /// `max(1, |lhs|, |rhs|)`; tolerances are relative to it.
    pub scale: f64,
    pub holds: bool,
    pub equality_detected: bool,
    pub equality_expected: Option<bool>,
    /// `‖RHS − LHS‖_F` for operators, `|gap|` otherwise.
    pub deviation: f64,
    pub lhs_log: Option<f64>,
    pub rhs_log: Option<f64>,
    /// Description of the inputs, e.g. `n=4 partition=2,2 fn=log`.
    pub context: String,
    /// Condition numbers, residuals and tolerances used.
    pub notes: BTreeMap<String, f64>,
    #[serde(skip)]
    pub witness: Vec<(String, ComplexMatrix)>,
}

impl InequalityReport {
    fn base(ineq_id: IneqId, kind: ReportKind, lhs: f64, rhs: f64, gap: f64, deviation: f64, tol: &ToleranceConfig) -> Self {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        let holds = gap >= -tol.violation_tol * scale;
        let mut notes = BTreeMap::new();
        notes.insert("violation_tol".to_string(), tol.violation_tol);
        notes.insert("equality_tol".to_string(), tol.equality_tol);
        Self {
            ineq_id,
            trial: 0,
            seed: 0,
            kind,
            lhs,
            rhs,
            gap,
            scale,
            holds,
            equality_detected: holds && deviation <= tol.equality_tol * scale,
            equality_expected: None,
            deviation,
            lhs_log: None,
            rhs_log: None,
            context: String::new(),
            notes,
            witness: Vec::new(),
        }
    }

    /// `lower ≤ upper` in the Löwner order.
    pub fn operator(id: IneqId, lower: &HermitianMatrix, upper: &HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let diff = upper.sub(lower);
        let gap = min_eigenvalue(&diff)?;
        Ok(Self::base(id, ReportKind::Operator, lower.frobenius(), upper.frobenius(), gap, diff.frobenius(), tol))
    }

    /// `Δ_lhs ≤ Δ_rhs`. Compared in log space unless a side is zero, in
    /// which case the values themselves are compared.
    pub fn determinant(id: IneqId, lhs: FkValue, rhs: FkValue, tol: &ToleranceConfig) -> Self {
        if lhs.is_zero() || rhs.is_zero() {
            let gap = rhs.value - lhs.value;
            let mut r = Self::base(id, ReportKind::Determinant, lhs.value, rhs.value, gap, gap.abs(), tol);
            r.lhs_log = (!lhs.is_zero()).then_some(lhs.log_value);
            r.rhs_log = (!rhs.is_zero()).then_some(rhs.log_value);
            r
        } else {
            Self::log_values(id, lhs.log_value, rhs.log_value, tol)
        }
    }

    /// Comparison of two finite logarithms.
    pub fn log_values(id: IneqId, lhs_log: f64, rhs_log: f64, tol: &ToleranceConfig) -> Self {
        let gap = rhs_log - lhs_log;
        let mut r = Self::base(id, ReportKind::Determinant, lhs_log, rhs_log, gap, gap.abs(), tol);
        r.lhs_log = Some(lhs_log);
        r.rhs_log = Some(rhs_log);
        r
    }

    pub fn scalar(id: IneqId, lhs: f64, rhs: f64, tol: &ToleranceConfig) -> Self {
        let gap = rhs - lhs;
        Self::base(id, ReportKind::Scalar, lhs, rhs, gap, gap.abs(), tol)
    }

    pub fn expect(mut self, expected: Option<bool>) -> Self {
        self.equality_expected = expected;
        self
    }

    pub fn note(mut self, key: &str, value: f64) -> Self {
        self.notes.insert(key.to_string(), value);
        self
    }

    pub fn with_witness(mut self, name: &str, m: &HermitianMatrix) -> Self {
        self.witness.push((name.to_string(), m.as_matrix().clone()));
        self
    }

    /// The report contradicts an inequality that is known to hold.
    pub fn is_violation(&self) -> bool {
        self.ineq_id.is_guaranteed() && !self.holds
    }

    /// Diagnosed equality disagrees with the expected one.
    pub fn equality_mismatch(&self) -> bool {
        self.equality_expected.is_some_and(|e| e != self.equality_detected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in IneqId::ALL {
            assert_eq!(id.as_str().parse::<IneqId>().unwrap(), id);
            assert_eq!(serde_json::to_value(id).unwrap(), serde_json::Value::String(id.as_str().into()));
        }
        assert!(matches!("nope".parse::<IneqId>(), Err(Error::UnknownIneq(_))));
    }

    #[test]
    fn operator_report_orientation() {
        let t = ToleranceConfig::default();
        let lower = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]);
        let upper = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        let r = InequalityReport::operator(IneqId::Square, &lower, &upper, &t).unwrap();
        assert!(r.holds && !r.equality_detected);
        assert!(r.gap.abs() < 1e-15);
        assert!((r.deviation - 1.0).abs() < 1e-15);
        let back = InequalityReport::operator(IneqId::Square, &upper, &lower, &t).unwrap();
        assert!(!back.holds && back.is_violation());
        let same = InequalityReport::operator(IneqId::Square, &lower, &lower, &t).unwrap();
        assert!(same.equality_detected);
    }

    #[test]
    fn determinant_report_handles_zero_side() {
        let t = ToleranceConfig::default();
        let r = InequalityReport::determinant(IneqId::ArvesonRight, FkValue::ZERO, FkValue::from_log(0.5), &t);
        assert!(r.gap.is_finite() && r.gap > 0.0 && r.holds);
        assert_eq!(r.lhs_log, None);
        assert_eq!(r.rhs_log, Some(0.5));
        let both = InequalityReport::determinant(IneqId::ArvesonRight, FkValue::ZERO, FkValue::ZERO, &t);
        assert!(both.equality_detected);
        let logs = InequalityReport::determinant(IneqId::Hadamard, FkValue::from_log(1.0), FkValue::from_log(1.0), &t);
        assert!(logs.equality_detected && logs.gap == 0.0);
    }

    #[test]
    fn json_schema_has_required_fields() {
        let t = ToleranceConfig::default();
        let r = InequalityReport::scalar(IneqId::GaussianEntropy, 1.0, 2.0, &t);
        let v = serde_json::to_value(&r).unwrap();
        for key in ["ineq_id", "trial", "lhs", "rhs", "gap", "holds", "equality_detected", "equality_expected", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["equality_expected"].is_null());
    }
}
