//! Jacobi sequences `(omega_{n+1/2}, alpha_n)` for one-sided interacting Fock
//! spaces.
//!
//! Throughout the crate `omega(n)` denotes the off-diagonal weight on the gap
//! between `Phi_n` and `Phi_{n+1}` (that is, `omega_{n+1/2}`) and `alpha(n)`
//! the diagonal entry at `Phi_n`.

mod catalog;
mod definition;
mod from_moments;

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Mode, ParamMap, Scalar};
use crate::seqexpr::{self, EvalError, Expr};

pub use catalog::{catalog_sequence, Catalog, CATALOG_NAMES};
pub use definition::{DefinitionError, SequenceDefinition};
pub use from_moments::{jacobi_from_moments, jacobi_from_moments_f64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error("unknown catalog sequence `{0}`")]
    UnknownCatalog(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {index} is outside the tabulated range 0..{len}")]
    OutOfRange { index: u64, len: usize },
    #[error("sequence `{0}` has no exact rational values")]
    NotExact(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("moment list is not realizable: Hankel determinant at depth {depth} is not positive")]
    HankelNotPositive { depth: usize },
    #[error("moment list must contain M_1..M_2L with L >= 1, got {0} entries")]
    BadMomentCount(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    Catalog(Catalog),
    Expression { omega: Expr, alpha: Expr, params: ParamMap },
    Tabulated { omega: Vec<Scalar>, alpha: Vec<Scalar> },
}

/// An immutable Jacobi sequence with pure evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiSequence {
    kind: SequenceKind,
}

impl JacobiSequence {
    pub fn from_catalog(entry: Catalog) -> Self {
        JacobiSequence { kind: SequenceKind::Catalog(entry) }
    }

    /// Builds a sequence from closed-form expressions; all referenced
    /// parameters must be bound.
    pub fn from_expressions(omega: Expr, alpha: Expr, params: ParamMap) -> Result<Self, JacobiError> {
        for name in omega.params().union(&alpha.params()) {
            if !params.contains_key(name) {
                return Err(EvalError::UnboundParameter(name.clone()).into());
            }
        }
        Ok(JacobiSequence { kind: SequenceKind::Expression { omega, alpha, params } })
    }

    pub fn parse_expressions(omega: &str, alpha: &str, params: ParamMap) -> Result<Self, String> {
        let omega = seqexpr::parse(omega).map_err(|e| format!("omega: {e}"))?;
        let alpha = seqexpr::parse(alpha).map_err(|e| format!("alpha: {e}"))?;
        Self::from_expressions(omega, alpha, params).map_err(|e| e.to_string())
    }

    /// Finite table of `omega(0..L)` and `alpha(0..L)`; indices past the table
    /// are errors, never extrapolated.
    pub fn tabulated(omega: Vec<Scalar>, alpha: Vec<Scalar>) -> Self {
        JacobiSequence { kind: SequenceKind::Tabulated { omega, alpha } }
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn catalog_entry(&self) -> Option<&Catalog> {
        match &self.kind {
            SequenceKind::Catalog(c) => Some(c),
            _ => None,
        }
    }

    /// Number of valid indices for tabulated sequences.
    pub fn range(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Tabulated { omega, alpha } => Some(omega.len().min(alpha.len())),
            _ => None,
        }
    }

    /// Whether exact evaluation is possible in principle. Expressions may
    /// still fail at particular indices (square roots of non-squares).
    pub fn supports_exact(&self) -> bool {
        match &self.kind {
            SequenceKind::Catalog(c) => c.is_exact(),
            SequenceKind::Expression { params, .. } => params.values().all(Scalar::is_exact),
            SequenceKind::Tabulated { omega, alpha } => {
                omega.iter().chain(alpha).all(Scalar::is_exact)
            }
        }
    }

    fn tabulated_at(list: &[Scalar], n: u64, len: usize, mode: Mode, name: &str) -> Result<Scalar, JacobiError> {
        let v = list.get(n as usize).filter(|_| (n as usize) < len).ok_or(JacobiError::OutOfRange { index: n, len })?;
        match (mode, v) {
            (Mode::Exact, Scalar::Float(_)) => Err(JacobiError::NotExact(name.to_string())),
            (Mode::Float, v) => Ok(Scalar::Float(v.to_f64())),
            (Mode::Exact, v) => Ok(v.clone()),
        }
    }

    /// `omega_{n+1/2}`.
    pub fn omega(&self, n: u64, mode: Mode) -> Result<Scalar, JacobiError> {
        match &self.kind {
            SequenceKind::Catalog(c) => c.omega(n, mode),
            SequenceKind::Expression { omega, params, .. } => Ok(seqexpr::evaluate(omega, n, params, mode)?),
            SequenceKind::Tabulated { omega, .. } => {
                Self::tabulated_at(omega, n, self.range().unwrap_or(0), mode, "tabulated")
            }
        }
    }

    /// `alpha_n`.
    pub fn alpha(&self, n: u64, mode: Mode) -> Result<Scalar, JacobiError> {
        match &self.kind {
            SequenceKind::Catalog(c) => c.alpha(n, mode),
            SequenceKind::Expression { alpha, params, .. } => Ok(seqexpr::evaluate(alpha, n, params, mode)?),
            SequenceKind::Tabulated { alpha, .. } => {
                Self::tabulated_at(alpha, n, self.range().unwrap_or(0), mode, "tabulated")
            }
        }
    }

    pub fn omega_exact(&self, n: u64) -> Result<BigRational, JacobiError> {
        match self.omega(n, Mode::Exact)? {
            Scalar::Exact(r) => Ok(r),
            Scalar::Float(_) => Err(JacobiError::NotExact(self.to_string())),
        }
    }

    pub fn alpha_exact(&self, n: u64) -> Result<BigRational, JacobiError> {
        match self.alpha(n, Mode::Exact)? {
            Scalar::Exact(r) => Ok(r),
            Scalar::Float(_) => Err(JacobiError::NotExact(self.to_string())),
        }
    }

    pub fn omega_f64(&self, n: u64) -> Result<f64, JacobiError> {
        Ok(self.omega(n, Mode::Float)?.to_f64())
    }

    pub fn alpha_f64(&self, n: u64) -> Result<f64, JacobiError> {
        Ok(self.alpha(n, Mode::Float)?.to_f64())
    }
}

impl fmt::Display for JacobiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SequenceKind::Catalog(c) => write!(f, "{c}"),
            SequenceKind::Expression { omega, alpha, params } => {
                write!(f, "omega = {omega}, alpha = {alpha}")?;
                for (k, v) in params {
                    write!(f, ", {k} = {v}")?;
                }
                Ok(())
            }
            SequenceKind::Tabulated { omega, .. } => write!(f, "tabulated[{}]", omega.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonPositiveOmega { index: u64, value: String },
    NonFiniteAlpha { index: u64 },
    EvaluationFailed { index: u64, message: String },
}

impl Violation {
    pub fn index(&self) -> u64 {
        match self {
            Violation::NonPositiveOmega { index, .. }
            | Violation::NonFiniteAlpha { index }
            | Violation::EvaluationFailed { index, .. } => *index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n_max: u64,
    /// Violations in index order, at most [`MAX_REPORTED_VIOLATIONS`].
    pub violations: Vec<Violation>,
    /// False when some value in range could only be evaluated in float mode.
    pub exact_capable: bool,
    pub notes: Vec<String>,
}

pub const MAX_REPORTED_VIOLATIONS: usize = 64;

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Checks `omega(n) > 0` and `alpha(n)` finite for `0 <= n <= n_max`.
pub fn validate(seq: &JacobiSequence, n_max: u64) -> ValidationReport {
    let mut exact_capable = seq.supports_exact();
    let mut notes = Vec::new();
    if !exact_capable {
        notes.push("sequence is float-only; exact mode is unavailable".to_string());
    }
    let mut violations = Vec::new();
    for n in 0..=n_max {
        if violations.len() >= MAX_REPORTED_VIOLATIONS {
            notes.push(format!("stopped after {MAX_REPORTED_VIOLATIONS} violations"));
            break;
        }
        let mode = if exact_capable { Mode::Exact } else { Mode::Float };
        let omega = match seq.omega(n, mode) {
            Err(JacobiError::Eval(EvalError::Irrational { .. })) | Err(JacobiError::NotExact(_)) => {
                exact_capable = false;
                notes.push(format!("omega({n}) is irrational; exact mode is unavailable"));
                seq.omega(n, Mode::Float)
            }
            other => other,
        };
        match omega {
            Ok(omega) => {
                let positive = match &omega {
                    Scalar::Exact(r) => r.is_positive(),
                    Scalar::Float(x) => *x > 0.0 && x.is_finite(),
                };
                if !positive {
                    violations.push(Violation::NonPositiveOmega { index: n, value: omega.to_string() });
                }
            }
            Err(e @ JacobiError::OutOfRange { .. }) => {
                violations.push(Violation::EvaluationFailed { index: n, message: e.to_string() });
                break;
            }
            Err(e) => violations.push(Violation::EvaluationFailed { index: n, message: e.to_string() }),
        }
        let mode = if exact_capable { Mode::Exact } else { Mode::Float };
        let alpha = match seq.alpha(n, mode) {
            Err(JacobiError::Eval(EvalError::Irrational { .. })) | Err(JacobiError::NotExact(_)) => {
                exact_capable = false;
                notes.push(format!("alpha({n}) is irrational; exact mode is unavailable"));
                seq.alpha(n, Mode::Float)
            }
            other => other,
        };
        match alpha {
            Ok(Scalar::Float(x)) if !x.is_finite() => violations.push(Violation::NonFiniteAlpha { index: n }),
            Ok(_) => {}
            Err(e @ JacobiError::OutOfRange { .. }) => {
                violations.push(Violation::EvaluationFailed { index: n, message: e.to_string() });
                break;
            }
            Err(e) => violations.push(Violation::EvaluationFailed { index: n, message: e.to_string() }),
        }
    }
    ValidationReport { n_max, violations, exact_capable, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_validates() {
        let seq = catalog_sequence("gaussian", &ParamMap::new()).unwrap();
        let report = validate(&seq, 1000);
        assert!(report.is_ok());
        assert!(report.exact_capable);
    }

    #[test]
    fn tabulated_zero_omega_is_flagged() {
        let omega = vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(0), Scalar::from_int(4)];
        let alpha = vec![Scalar::from_int(0); 4];
        let report = validate(&JacobiSequence::tabulated(omega, alpha), 10);
        assert_eq!(report.first_violation().map(Violation::index), Some(2));
    }

    #[test]
    fn tabulated_range_is_an_error_not_extrapolated() {
        let seq = JacobiSequence::tabulated(vec![Scalar::from_int(1); 3], vec![Scalar::from_int(0); 3]);
        assert!(seq.omega(2, Mode::Exact).is_ok());
        assert_eq!(seq.omega(3, Mode::Float), Err(JacobiError::OutOfRange { index: 3, len: 3 }));
        let report = validate(&seq, 10);
        assert!(matches!(report.first_violation(), Some(Violation::EvaluationFailed { index: 3, .. })));
    }

    #[test]
    fn expression_hitting_zero() {
        let seq = JacobiSequence::parse_expressions("n-3", "0", ParamMap::new()).unwrap();
        let report = validate(&seq, 10);
        let indices: Vec<u64> = report.violations.iter().map(Violation::index).collect();
        assert_eq!(indices, vec![0, 1, 2, 3]);
        assert!(matches!(&report.violations[3], Violation::NonPositiveOmega { index: 3, value } if value == "0"));
        let seq = JacobiSequence::parse_expressions("(n-3)^2", "0", ParamMap::new()).unwrap();
        let report = validate(&seq, 10);
        assert!(matches!(report.first_violation(), Some(Violation::NonPositiveOmega { index: 3, .. })));
    }

    #[test]
    fn irrational_expression_is_flagged_float_only() {
        let seq = JacobiSequence::parse_expressions("sqrt(n+1)", "0", ParamMap::new()).unwrap();
        let report = validate(&seq, 5);
        assert!(report.is_ok());
        assert!(!report.exact_capable);
        assert!(!report.notes.is_empty());
    }

    #[test]
    fn unbound_parameters_are_rejected_up_front() {
        assert!(JacobiSequence::parse_expressions("c", "0", ParamMap::new()).is_err());
    }

    #[test]
    fn evaluation_is_pure() {
        let seq = catalog_sequence("uniform", &ParamMap::new()).unwrap();
        for n in [0u64, 7, 1234] {
            assert_eq!(seq.omega(n, Mode::Exact).unwrap(), seq.omega(n, Mode::Exact).unwrap());
            assert_eq!(seq.omega(n, Mode::Float).unwrap(), seq.omega(n, Mode::Float).unwrap());
        }
    }
}
