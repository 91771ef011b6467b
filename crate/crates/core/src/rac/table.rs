use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{PredictedLimit, RacError};
use crate::arcsine::{arcsine_moment, discrete_arcsine, discrete_moment, DEFAULT_SERIES_TOL};
use crate::fock::{moment_sequence, MomentValue};
use crate::jacobi::JacobiSequence;
use crate::scalar::{rational_to_f64, Mode, Scalar};

pub const MAX_TABLE_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub k: u64,
    pub m: usize,
    pub computed: MomentValue,
    pub predicted: Scalar,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTable {
    pub predicted_limit: PredictedLimit,
    pub mode: Mode,
    pub rows: Vec<LimitRow>,
}

impl LimitTable {
    /// Errors for order `m` in level order.
    pub fn errors(&self, m: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.m == m).map(|r| r.error).collect()
    }
}

/// `|computed - predicted|`, exactly whenever both sides are exact.
fn distance(computed: &MomentValue, predicted: &Scalar) -> f64 {
    match (computed, predicted) {
        (MomentValue::Exact(a), Scalar::Exact(b)) => rational_to_f64(&(a - b).abs()),
        (MomentValue::ExactOverSqrt { coefficient, radicand }, Scalar::Exact(b)) if b.is_zero() => {
            rational_to_f64(&coefficient.abs()) / rational_to_f64(radicand).sqrt()
        }
        (computed, predicted) => (computed.to_f64() - predicted.to_f64()).abs(),
    }
}

/// Normalized moments at each level next to the moments of the predicted
/// limit law.
pub fn limit_table(
    seq: &JacobiSequence,
    levels: &[u64],
    m_max: usize,
    mode: Mode,
    limit: PredictedLimit,
) -> Result<LimitTable, RacError> {
    if m_max > MAX_TABLE_ORDER {
        return Err(RacError::OrderTooLarge(m_max));
    }
    let predicted: Vec<Scalar> = match limit {
        PredictedLimit::Unknown => return Err(RacError::NoPredictedLimit),
        PredictedLimit::Arcsine => (1..=m_max).map(|m| Scalar::Exact(arcsine_moment(m))).collect(),
        PredictedLimit::DiscreteArcsine { c } => {
            let law = discrete_arcsine(c, DEFAULT_SERIES_TOL)?;
            (1..=m_max)
                .map(|m| discrete_moment(&law, m).map(|d| Scalar::Float(d.value)))
                .collect::<Result<_, _>>()?
        }
    };
    let mut rows = Vec::with_capacity(levels.len() * m_max);
    for &k in levels {
        let moments = moment_sequence(seq, k, m_max, true, mode)?;
        for (i, computed) in moments.entries.into_iter().enumerate() {
            let error = distance(&computed, &predicted[i]);
            rows.push(LimitRow { k, m: i + 1, computed, predicted: predicted[i].clone(), error });
        }
    }
    Ok(LimitTable { predicted_limit: limit, mode, rows })
}
