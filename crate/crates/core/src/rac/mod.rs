//! Asymptotic commutativity of a Jacobi sequence.
//!
//! The conditions are read off two probe sequences:
//! the gap ratio `r(n) = omega_{n+1/2} / omega_{n-1/2}` and the normalized
//! drift `d(n) = (alpha_n - alpha_{n-1}) / sqrt(omega_{n+1/2} + omega_{n-1/2})`.
//! RAC1 holds when `r -> 1` and `d -> 0`, RAC2 with constant `c` when
//! `r -> 1` and `d -> c`. Limits are estimated numerically by polynomial
//! extrapolation in `1/n` over a probe schedule.

mod extrapolate;
mod table;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arcsine::ArcsineError;
use crate::fock::FockError;
use crate::jacobi::{JacobiError, JacobiSequence};
use crate::scalar::{rational_sqrt, rational_to_f64};
use crate::seqexpr::EvalError;

pub use extrapolate::{Extrapolation, EXTRAPOLATION_ORDER};
pub use table::{limit_table, LimitRow, LimitTable, MAX_TABLE_ORDER};

use extrapolate::extrapolate;

pub const DEFAULT_SCHEDULE: [u64; 4] = [100, 1_000, 10_000, 100_000];
pub const DEFAULT_TOL: f64 = 1e-6;

/// Exact extrapolation is skipped when probe values exceed this many bits.
const EXACT_BITS_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RacError {
    #[error("invalid probe schedule: {0}")]
    InvalidSchedule(String),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("probe at n = {n} failed: {source}")]
    Probe { n: u64, source: JacobiError },
    #[error("probe at n = {n} is not finite")]
    NonFinite { n: u64 },
    #[error("no classical limit is predicted for this sequence")]
    NoPredictedLimit,
    #[error("moment order {0} exceeds the table limit {MAX_TABLE_ORDER}")]
    OrderTooLarge(usize),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Arcsine(#[from] ArcsineError),
}

/// `r(n)` and `d(n)` at one index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub n: u64,
    pub ratio: f64,
    pub drift: f64,
    /// Whether `r(n)` was computed in exact arithmetic.
    pub exact: bool,
    #[serde(skip)]
    deviation_exact: Option<BigRational>,
    #[serde(skip)]
    drift_exact: Option<BigRational>,
}

fn is_exactness_failure(e: &JacobiError) -> bool {
    matches!(e, JacobiError::NotExact(_) | JacobiError::Eval(EvalError::Irrational { .. }))
}

fn exact_probe(seq: &JacobiSequence, n: u64) -> Result<Option<Probe>, RacError> {
    let wrap = |e: JacobiError| if is_exactness_failure(&e) { None } else { Some(RacError::Probe { n, source: e }) };
    let values = (|| {
        Ok::<_, JacobiError>((seq.omega_exact(n)?, seq.omega_exact(n - 1)?, seq.alpha_exact(n)?, seq.alpha_exact(n - 1)?))
    })();
    let (upper, lower, alpha, alpha_prev) = match values {
        Ok(v) => v,
        Err(e) => return wrap(e).map_or(Ok(None), Err),
    };
    if !lower.is_positive() {
        return Err(RacError::NonFinite { n });
    }
    // r = (a/b)/(c/d) = ad/bc and r - 1 = (ad - bc)/bc, reduced only when small.
    let cross_upper = upper.numer() * lower.denom();
    let cross_lower = upper.denom() * lower.numer();
    let settle = |num: BigInt, den: BigInt| {
        let r = BigRational::new_raw(num, den);
        if bits(&r) < EXACT_BITS_LIMIT { r.reduced() } else { r }
    };
    let deviation = settle(&cross_upper - &cross_lower, cross_lower.clone());
    let ratio = settle(cross_upper, cross_lower);
    let diff = alpha - alpha_prev;
    let sum = upper + lower;
    let (drift, drift_exact) = if diff.is_zero() {
        (0.0, Some(BigRational::zero()))
    } else {
        let magnitude = rational_to_f64(&(&diff * &diff / &sum)).sqrt();
        let exact = rational_sqrt(&sum).map(|root| &diff / root);
        (if diff.is_negative() { -magnitude } else { magnitude }, exact)
    };
    Ok(Some(Probe {
        n,
        ratio: rational_to_f64(&ratio),
        drift,
        exact: true,
        deviation_exact: Some(deviation),
        drift_exact,
    }))
}

fn float_probe(seq: &JacobiSequence, n: u64) -> Result<Probe, RacError> {
    let get = |f: &dyn Fn(u64) -> Result<f64, JacobiError>, i: u64| f(i).map_err(|source| RacError::Probe { n, source });
    let upper = get(&|i| seq.omega_f64(i), n)?;
    let lower = get(&|i| seq.omega_f64(i), n - 1)?;
    let alpha = get(&|i| seq.alpha_f64(i), n)?;
    let alpha_prev = get(&|i| seq.alpha_f64(i), n - 1)?;
    let ratio = upper / lower;
    let drift = (alpha - alpha_prev) / (upper + lower).sqrt();
    if !ratio.is_finite() || !drift.is_finite() {
        return Err(RacError::NonFinite { n });
    }
    Ok(Probe { n, ratio, drift, exact: false, deviation_exact: None, drift_exact: None })
}

/// `r(n)` and `d(n)`, exactly where the sequence allows it.
pub fn probe(seq: &JacobiSequence, n: u64) -> Result<Probe, RacError> {
    if n == 0 {
        return Err(RacError::InvalidSchedule("probe index must be at least 1".into()));
    }
    if seq.supports_exact() {
        if let Some(p) = exact_probe(seq, n)? {
            return Ok(p);
        }
    }
    float_probe(seq, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Rac1,
    Rac2 { c: f64 },
    Neither,
    Undetermined,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Rac1 => f.write_str("RAC1"),
            Classification::Rac2 { c } => write!(f, "RAC2(c={c})"),
            Classification::Neither => f.write_str("NEITHER"),
            Classification::Undetermined => f.write_str("UNDETERMINED"),
        }
    }
}

/// The classical limit law implied by a classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictedLimit {
    Arcsine,
    DiscreteArcsine { c: f64 },
    Unknown,
}

impl fmt::Display for PredictedLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictedLimit::Arcsine => f.write_str("arcsine"),
            PredictedLimit::DiscreteArcsine { c } => write!(f, "discrete_arcsine({c})"),
            PredictedLimit::Unknown => f.write_str("unknown"),
        }
    }
}

impl Classification {
    pub fn predicted_limit(&self) -> PredictedLimit {
        match self {
            Classification::Rac1 => PredictedLimit::Arcsine,
            Classification::Rac2 { c } => PredictedLimit::DiscreteArcsine { c: *c },
            _ => PredictedLimit::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RacReport {
    pub classification: Classification,
    pub predicted_limit: PredictedLimit,
    pub tol: f64,
    pub probes: Vec<Probe>,
    /// Extrapolation of `r(n) - 1`.
    pub ratio_deviation: Extrapolation,
    /// Extrapolation of `d(n)`.
    pub drift: Extrapolation,
    pub notes: Vec<String>,
}

impl RacReport {
    /// Estimated `lim r(n)`.
    pub fn ratio_limit(&self) -> f64 {
        1.0 + self.ratio_deviation.limit
    }
}

fn bits(r: &BigRational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

fn inverse(n: u64) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

/// Extrapolates with exact arithmetic when every sample is exact and of
/// moderate size, otherwise in `f64`.
fn extrapolate_samples(schedule: &[u64], exact: Option<Vec<BigRational>>, float: Vec<f64>) -> (Extrapolation, bool) {
    if let Some(values) = exact.filter(|v| v.iter().map(bits).sum::<u64>() < EXACT_BITS_LIMIT) {
        let h: Vec<BigRational> = schedule.iter().map(|&n| inverse(n)).collect();
        return (extrapolate(&h, &values, rational_to_f64), true);
    }
    let h: Vec<f64> = schedule.iter().map(|&n| 1.0 / n as f64).collect();
    (extrapolate(&h, &float, |x| *x), false)
}

fn check_schedule(schedule: &[u64], tol: f64) -> Result<(), RacError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(RacError::InvalidTolerance(tol));
    }
    if schedule.len() < EXTRAPOLATION_ORDER + 2 {
        return Err(RacError::InvalidSchedule(format!(
            "need at least {} probe indices, got {}",
            EXTRAPOLATION_ORDER + 2,
            schedule.len()
        )));
    }
    if schedule[0] == 0 {
        return Err(RacError::InvalidSchedule("probe indices must be at least 1".into()));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(RacError::InvalidSchedule("probe indices must be strictly increasing".into()));
    }
    Ok(())
}

/// Classifies a sequence as RAC1, RAC2(c), NEITHER or UNDETERMINED from its
/// probes on `schedule`.
pub fn classify(seq: &JacobiSequence, schedule: &[u64], tol: f64) -> Result<RacReport, RacError> {
    check_schedule(schedule, tol)?;
    let probes = schedule.iter().map(|&n| probe(seq, n)).collect::<Result<Vec<_>, _>>()?;

    let deviations_exact: Option<Vec<BigRational>> =
        probes.iter().map(|p| p.deviation_exact.clone()).collect();
    let deviations: Vec<f64> = match &deviations_exact {
        Some(d) => d.iter().map(rational_to_f64).collect(),
        None => probes.iter().map(|p| p.ratio - 1.0).collect(),
    };
    let (ratio_deviation, ratio_is_exact) = extrapolate_samples(schedule, deviations_exact, deviations.clone());

    let drifts_exact: Option<Vec<BigRational>> = probes.iter().map(|p| p.drift_exact.clone()).collect();
    let drifts: Vec<f64> = probes.iter().map(|p| p.drift).collect();
    let (drift, drift_is_exact) = extrapolate_samples(schedule, drifts_exact, drifts);

    let mut notes = vec![format!(
        "polynomial extrapolation of order {} in 1/n over windows of {} probes (ratio: {}, drift: {})",
        EXTRAPOLATION_ORDER,
        EXTRAPOLATION_ORDER + 1,
        if ratio_is_exact { "exact" } else { "float" },
        if drift_is_exact { "exact" } else { "float" },
    )];

    let ratio_converges_to_one = ratio_deviation.limit.abs() <= tol && ratio_deviation.residual <= tol;
    let drift_converges = drift.residual <= tol && drift.limit.is_finite();

    let classification = if ratio_converges_to_one && drift_converges {
        if drift.limit.abs() <= tol {
            Classification::Rac1
        } else {
            Classification::Rac2 { c: drift.limit }
        }
    } else {
        let off_everywhere = deviations.iter().all(|d| d.abs() > tol);
        let settled_elsewhere = ratio_deviation.residual <= tol && ratio_deviation.limit.abs() > tol;
        let not_approaching = deviations.windows(2).all(|w| w[1].abs() >= w[0].abs());
        if off_everywhere && (settled_elsewhere || not_approaching) {
            notes.push(format!("r(n) stays away from 1 (estimated limit {})", 1.0 + ratio_deviation.limit));
            Classification::Neither
        } else {
            if !drift_converges {
                notes.push(format!("d(n) did not settle: last residual {:e}", drift.residual));
            }
            if !ratio_converges_to_one {
                notes.push(format!(
                    "r(n) not resolved: estimate {} with residual {:e}",
                    1.0 + ratio_deviation.limit,
                    ratio_deviation.residual
                ));
            }
            Classification::Undetermined
        }
    };

    Ok(RacReport {
        predicted_limit: classification.predicted_limit(),
        classification,
        tol,
        probes,
        ratio_deviation,
        drift,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::catalog_sequence;
    use crate::scalar::{ParamMap, Scalar};

    fn catalog(name: &str, param: Option<(&str, Scalar)>) -> JacobiSequence {
        let mut p = ParamMap::new();
        if let Some((k, v)) = param {
            p.insert(k.into(), v);
        }
        catalog_sequence(name, &p).unwrap()
    }

    #[test]
    fn probe_values() {
        let exp = catalog("exponential", None);
        let p = probe(&exp, 2).unwrap();
        assert_eq!(p.ratio, 9.0 / 4.0);
        assert!((p.drift - 2.0 / 13f64.sqrt()).abs() < 1e-16);
        let g = probe(&catalog("gaussian", None), 10).unwrap();
        assert_eq!((g.ratio, g.drift), (1.1, 0.0));
        for c in [Scalar::ratio(3, 10), Scalar::Float(-0.7)] {
            let expected = c.to_f64();
            let shift = catalog("free_shift", Some(("c", c)));
            for n in [1u64, 7, 1000] {
                let p = probe(&shift, n).unwrap();
                assert_eq!(p.ratio, 1.0);
                // alpha_n - alpha_{n-1} cancels about log10(n) digits in float mode.
                assert!((p.drift - expected).abs() <= 1e-16 * n as f64 + 1e-16);
            }
        }
        assert!(probe(&exp, 0).is_err());
    }

    #[test]
    fn probes_of_exponential_match_closed_forms() {
        let exp = catalog("exponential", None);
        for n in 1..200u64 {
            let x = n as f64;
            let p = probe(&exp, n).unwrap();
            assert!((p.ratio - ((x + 1.0) / x).powi(2)).abs() < 1e-14);
            assert!((p.drift - 2.0 / ((x + 1.0).powi(2) + x * x).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn catalog_rac1() {
        let seqs = vec![
            catalog("gaussian", None),
            catalog("uniform", None),
            catalog("exponential", None),
            catalog("q_gaussian", Some(("q", Scalar::ratio(-1, 2)))),
            catalog("q_gaussian", Some(("q", Scalar::from_int(0)))),
            catalog("q_gaussian", Some(("q", Scalar::ratio(1, 2)))),
            catalog("q_gaussian", Some(("q", Scalar::from_int(1)))),
        ];
        for seq in &seqs {
            let report = classify(seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
            assert_eq!(report.classification, Classification::Rac1, "{seq}: {:?}", report.notes);
            assert_eq!(report.predicted_limit, PredictedLimit::Arcsine);
        }
    }

    #[test]
    fn free_shift_rac2() {
        for c in [0.1, -0.1, 0.5, -0.5, 2.0, -2.0] {
            let seq = catalog("free_shift", Some(("c", Scalar::Float(c))));
            let report = classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
            match report.classification {
                Classification::Rac2 { c: estimate } => assert!((estimate - c).abs() <= 1e-9),
                other => panic!("c={c}: {other}"),
            }
            assert_eq!(report.predicted_limit, PredictedLimit::DiscreteArcsine { c: report.drift.limit });
        }
        // Within tolerance of zero is reported as RAC1.
        let seq = catalog("free_shift", Some(("c", Scalar::Float(1e-9))));
        assert_eq!(classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap().classification, Classification::Rac1);
    }

    #[test]
    fn geometric_growth_is_neither() {
        let seq = JacobiSequence::parse_expressions("2^n", "0", ParamMap::new()).unwrap();
        let report = classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
        assert_eq!(report.classification, Classification::Neither);
        assert_eq!(report.predicted_limit, PredictedLimit::Unknown);
        assert!((report.ratio_limit() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_drift_is_undetermined() {
        let seq = JacobiSequence::parse_expressions("1", "n^2", ParamMap::new()).unwrap();
        let report = classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).unwrap();
        assert_eq!(report.classification, Classification::Undetermined);
    }

    #[test]
    fn slow_ratio_is_not_called_neither() {
        // r(n) tends to 1, too slowly to resolve at this tolerance on a short schedule.
        let seq = JacobiSequence::parse_expressions("sqrt(sqrt(n+1))", "0", ParamMap::new()).unwrap();
        let report = classify(&seq, &[2, 3, 4, 5], 1e-9).unwrap();
        assert_ne!(report.classification, Classification::Neither);
    }

    #[test]
    fn residuals_shrink_as_schedule_extends() {
        let schedule = [100u64, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];
        for seq in [catalog("gaussian", None), catalog("uniform", None), catalog("exponential", None)] {
            let report = classify(&seq, &schedule, DEFAULT_TOL).unwrap();
            for e in [&report.ratio_deviation, &report.drift] {
                assert!(e.residuals.windows(2).all(|w| w[1] <= w[0]), "{seq}: {:?}", e.residuals);
            }
        }
    }

    #[test]
    fn schedule_validation() {
        let g = catalog("gaussian", None);
        assert!(matches!(classify(&g, &[1, 2, 3], 1e-6), Err(RacError::InvalidSchedule(_))));
        assert!(matches!(classify(&g, &[1, 3, 2, 4], 1e-6), Err(RacError::InvalidSchedule(_))));
        assert!(matches!(classify(&g, &[1, 2, 3, 4], 0.0), Err(RacError::InvalidTolerance(_))));
        let table = JacobiSequence::tabulated(vec![Scalar::from_int(1); 50], vec![Scalar::from_int(0); 50]);
        assert!(matches!(classify(&table, &DEFAULT_SCHEDULE, 1e-6), Err(RacError::Probe { n: 100, .. })));
    }
}
