//! The Jacobi operator `X = A + B + C` on one-sided and two-sided interacting
//! Fock spaces, and its moments in the vector states `<. Phi_k, Phi_k>`.
//!
//! Exact moments are computed by a weighted Motzkin-path recursion: a closed
//! walk crosses every gap as often upward as downward, so each moment is a
//! polynomial in `omega` and `alpha` and stays rational for rational
//! sequences. Float moments propagate `Phi_k` through `X` with the square
//! roots in place.

mod two_sided;
mod vector;
mod walk;

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::jacobi::{JacobiError, JacobiSequence};
use crate::scalar::{rational_string, rational_to_f64, Mode};

pub use two_sided::{shifted_two_sided, Condition, TwoSidedJacobiSequence};
pub use vector::{apply_x, FockVector};
pub use walk::{moment, moment_sequence, normalized_moment, two_sided_moment, variance_at};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("index {0} is below the start of a one-sided Fock space")]
    IndexUnderflow(i64),
    #[error("exact mode needs rational coefficients: {0}")]
    NotExact(String),
    #[error("level {level} has zero variance; the normalized variable is undefined")]
    ZeroVariance { level: u64 },
}

/// Coefficient access shared by one-sided and two-sided sequences.
///
/// `gap(n)` is `omega_{n+1/2}`; `diag(n)` is `alpha_n`.
pub trait JacobiOperator {
    fn gap_exact(&self, n: i64) -> Result<BigRational, FockError>;
    fn gap_f64(&self, n: i64) -> Result<f64, FockError>;
    fn diag_exact(&self, n: i64) -> Result<BigRational, FockError>;
    fn diag_f64(&self, n: i64) -> Result<f64, FockError>;
    /// Lowest index of the space, `Some(0)` for one-sided sequences.
    fn min_index(&self) -> Option<i64>;
}

impl JacobiOperator for JacobiSequence {
    fn gap_exact(&self, n: i64) -> Result<BigRational, FockError> {
        if n < 0 {
            return Ok(BigRational::from_integer(0.into()));
        }
        Ok(self.omega_exact(n as u64)?)
    }

    fn gap_f64(&self, n: i64) -> Result<f64, FockError> {
        if n < 0 {
            return Ok(0.0);
        }
        Ok(self.omega_f64(n as u64)?)
    }

    fn diag_exact(&self, n: i64) -> Result<BigRational, FockError> {
        if n < 0 {
            return Ok(BigRational::from_integer(0.into()));
        }
        Ok(self.alpha_exact(n as u64)?)
    }

    fn diag_f64(&self, n: i64) -> Result<f64, FockError> {
        if n < 0 {
            return Ok(0.0);
        }
        Ok(self.alpha_f64(n as u64)?)
    }

    fn min_index(&self) -> Option<i64> {
        Some(0)
    }
}

/// A moment value. Odd normalized moments in exact mode carry a single
/// factor `1/sqrt(radicand)` that is kept symbolic.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentValue {
    Exact(BigRational),
    ExactOverSqrt { coefficient: BigRational, radicand: BigRational },
    Float(f64),
}

impl MomentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(r) => rational_to_f64(r),
            MomentValue::ExactOverSqrt { coefficient, radicand } => {
                rational_to_f64(coefficient) / rational_to_f64(radicand).sqrt()
            }
            MomentValue::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            MomentValue::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            MomentValue::Float(_) => Mode::Float,
            _ => Mode::Exact,
        }
    }
}

impl fmt::Display for MomentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentValue::Exact(r) => f.write_str(&rational_string(r)),
            MomentValue::ExactOverSqrt { coefficient, radicand } => {
                write!(f, "{}/sqrt({})", rational_string(coefficient), rational_string(radicand))
            }
            MomentValue::Float(x) => write!(f, "{x:e}"),
        }
    }
}

impl Serialize for MomentValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            MomentValue::Float(x) => serializer.serialize_f64(*x),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

/// Moments `M_1..M_{m_max}` at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    pub level: u64,
    pub normalized: bool,
    pub mode: Mode,
    /// `entries[j]` is the moment of order `j + 1`.
    pub entries: Vec<MomentValue>,
}

impl MomentSequence {
    pub fn get(&self, order: usize) -> Option<&MomentValue> {
        order.checked_sub(1).and_then(|i| self.entries.get(i))
    }
}
