//! Normalized orthogonal polynomials from the three-term recurrence and
//! quadrature moments of `|P_n|^2 dmu` for the catalog measures.
//!
//! The moments `int x^m |P_n(x)|^2 dmu` coincide with the state moments of
//! the Jacobi operator at level `n`, which makes this module an oracle for
//! the walk-counting engine that shares no code with it. All arithmetic is
//! double-double so that agreement can be checked well below `1e-8` even when
//! the moments themselves are large.

mod quadrature;

use serde::Serialize;
use thiserror::Error;

use crate::dd::{DoubleDouble, PI};
use crate::jacobi::{Catalog, JacobiError, JacobiSequence};
use crate::scalar::{Mode, Scalar};

use quadrature::{adaptive, tail, Integral};

/// Absolute tolerance requested from the quadrature.
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-10;
/// Unbounded supports are cut where the density drops below this fraction
/// of its peak; the tails beyond are then integrated segment by segment until
/// the integrand itself is negligible.
const DENSITY_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthopolyError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("omega at index {index} is not positive")]
    NonPositiveOmega { index: u64 },
    #[error("no reference measure for sequence `{0}`")]
    NoMeasure(String),
    #[error("quadrature did not converge (achieved error estimate {achieved:e})")]
    NotConverged { achieved: f64 },
}

/// The orthogonality measures of the classical catalog sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSpec {
    /// `exp(-x^2/2)/sqrt(2 pi)` on the real line.
    Gaussian,
    /// Density `1/2` on `[-1, 1]`.
    Uniform,
    /// `exp(-x)` on `[0, inf)`.
    Exponential,
}

impl MeasureSpec {
    pub const ALL: [MeasureSpec; 3] = [MeasureSpec::Gaussian, MeasureSpec::Uniform, MeasureSpec::Exponential];

    pub fn name(&self) -> &'static str {
        match self {
            MeasureSpec::Gaussian => "gaussian",
            MeasureSpec::Uniform => "uniform",
            MeasureSpec::Exponential => "exponential",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }

    /// The measure whose orthonormal polynomials `seq` generates, for the
    /// catalog sequences that have one.
    pub fn for_sequence(seq: &JacobiSequence) -> Result<Self, OrthopolyError> {
        match seq.catalog_entry() {
            Some(Catalog::Gaussian) => Ok(MeasureSpec::Gaussian),
            Some(Catalog::Uniform) => Ok(MeasureSpec::Uniform),
            Some(Catalog::Exponential) => Ok(MeasureSpec::Exponential),
            Some(other) => Err(OrthopolyError::NoMeasure(other.name().to_string())),
            None => Err(OrthopolyError::NoMeasure(seq.to_string())),
        }
    }

    /// The Jacobi sequence of this measure.
    pub fn sequence(&self) -> JacobiSequence {
        JacobiSequence::from_catalog(match self {
            MeasureSpec::Gaussian => Catalog::Gaussian,
            MeasureSpec::Uniform => Catalog::Uniform,
            MeasureSpec::Exponential => Catalog::Exponential,
        })
    }

    /// Closed support interval; infinite ends are unbounded.
    pub fn support(&self) -> (f64, f64) {
        match self {
            MeasureSpec::Gaussian => (f64::NEG_INFINITY, f64::INFINITY),
            MeasureSpec::Uniform => (-1.0, 1.0),
            MeasureSpec::Exponential => (0.0, f64::INFINITY),
        }
    }

    /// Density at a point of the support.
    pub fn density(&self, x: DoubleDouble) -> DoubleDouble {
        match self {
            MeasureSpec::Gaussian => (-(x.sqr() * 0.5)).exp() / (PI * 2.0).sqrt(),
            MeasureSpec::Uniform => DoubleDouble::from_f64(0.5),
            MeasureSpec::Exponential => (-x).exp(),
        }
    }

    /// Interval on which the density is at least `DENSITY_CUTOFF` of its peak.
    fn core(&self) -> (f64, f64) {
        let depth = -DENSITY_CUTOFF.ln();
        match self {
            MeasureSpec::Gaussian => {
                let r = (2.0 * depth).sqrt().ceil();
                (-r, r)
            }
            MeasureSpec::Uniform => (-1.0, 1.0),
            MeasureSpec::Exponential => (0.0, depth.ceil()),
        }
    }

    /// Segment width used beyond the core on unbounded sides.
    fn tail_step(&self) -> f64 {
        match self {
            MeasureSpec::Gaussian => 1.0,
            MeasureSpec::Uniform => 0.0,
            MeasureSpec::Exponential => 4.0,
        }
    }

    /// Integrates `f * density` over the support.
    fn integrate<F>(&self, len: usize, f: F) -> Result<Vec<DoubleDouble>, OrthopolyError>
    where
        F: Fn(DoubleDouble, &mut [DoubleDouble]),
    {
        let weighted = |x: DoubleDouble, out: &mut [DoubleDouble]| {
            f(x, out);
            let d = self.density(x);
            out.iter_mut().for_each(|v| *v *= d);
        };
        let tol = DEFAULT_QUADRATURE_TOL;
        let (lo, hi) = self.core();
        let (support_lo, support_hi) = self.support();
        let tails = (support_lo.is_infinite() as usize + support_hi.is_infinite() as usize) as f64;
        // Half the budget goes to the core (unit panels), half to the tails.
        let core_tol = if tails > 0.0 { tol / 2.0 } else { tol };
        let tail_tol = tol / 2.0 / tails.max(1.0);
        let width = hi - lo;
        let panels = width.ceil().max(1.0) as usize;
        let mut total = Integral { values: vec![DoubleDouble::ZERO; len], error: 0.0 };
        let mut absorb = |part: Result<Integral, f64>| -> Result<(), OrthopolyError> {
            let part = part.map_err(|achieved| OrthopolyError::NotConverged { achieved })?;
            total.error += part.error;
            for (t, p) in total.values.iter_mut().zip(part.values) {
                *t += p;
            }
            Ok(())
        };
        for i in 0..panels {
            let a = lo + width * i as f64 / panels as f64;
            let b = lo + width * (i + 1) as f64 / panels as f64;
            absorb(adaptive(&weighted, len, a, b, core_tol, width))?;
        }
        if support_hi.is_infinite() {
            absorb(tail(&weighted, len, hi, self.tail_step(), tail_tol))?;
        }
        if support_lo.is_infinite() {
            absorb(tail(&weighted, len, lo, -self.tail_step(), tail_tol))?;
        }
        if total.error > tol {
            return Err(OrthopolyError::NotConverged { achieved: total.error });
        }
        Ok(total.values)
    }
}

/// Recurrence coefficients `alpha_j` and `sqrt(omega_{j+1/2})` for `j < n`,
/// exact values rounded once to double-double.
struct Recurrence {
    alpha: Vec<DoubleDouble>,
    root_omega: Vec<DoubleDouble>,
}

fn to_dd(value: Result<Scalar, JacobiError>, fallback: impl FnOnce() -> Result<f64, JacobiError>) -> Result<DoubleDouble, JacobiError> {
    match value {
        Ok(Scalar::Exact(r)) => Ok(DoubleDouble::from_rational(&r)),
        _ => fallback().map(DoubleDouble::from_f64),
    }
}

impl Recurrence {
    fn new(seq: &JacobiSequence, n: u64) -> Result<Self, OrthopolyError> {
        let mut alpha = Vec::with_capacity(n as usize);
        let mut root_omega = Vec::with_capacity(n as usize);
        for j in 0..n {
            alpha.push(alpha_dd(seq, j)?);
            let omega = omega_dd(seq, j)?;
            if omega.hi <= 0.0 {
                return Err(OrthopolyError::NonPositiveOmega { index: j });
            }
            root_omega.push(omega.sqrt());
        }
        Ok(Recurrence { alpha, root_omega })
    }

    /// `P_n(x)` from `sqrt(omega_{j+1/2}) P_{j+1} = (x - alpha_j) P_j - sqrt(omega_{j-1/2}) P_{j-1}`.
    fn eval(&self, x: DoubleDouble) -> DoubleDouble {
        let mut prev = DoubleDouble::ZERO;
        let mut cur = DoubleDouble::ONE;
        let mut below = DoubleDouble::ZERO;
        for (alpha, root) in self.alpha.iter().zip(&self.root_omega) {
            let next = ((x - *alpha) * cur - below * prev) / *root;
            prev = cur;
            cur = next;
            below = *root;
        }
        cur
    }
}

fn omega_dd(seq: &JacobiSequence, j: u64) -> Result<DoubleDouble, JacobiError> {
    to_dd(seq.omega(j, Mode::Exact), || seq.omega_f64(j))
}

fn alpha_dd(seq: &JacobiSequence, j: u64) -> Result<DoubleDouble, JacobiError> {
    to_dd(seq.alpha(j, Mode::Exact), || seq.alpha_f64(j))
}

/// The normalized orthogonal polynomial `P_n(x)` of `seq`.
pub fn eval_normalized_poly(seq: &JacobiSequence, n: u64, x: f64) -> Result<f64, OrthopolyError> {
    Ok(Recurrence::new(seq, n)?.eval(DoubleDouble::from_f64(x)).to_f64())
}

/// `int (x - shift)^m |P_n(x)|^2 dmu` for `m = 0..=m_max`.
fn shifted_moments(
    measure: MeasureSpec,
    seq: &JacobiSequence,
    n: u64,
    m_max: usize,
    shift: DoubleDouble,
) -> Result<Vec<DoubleDouble>, OrthopolyError> {
    let recurrence = Recurrence::new(seq, n)?;
    measure.integrate(m_max + 1, |x, out| {
        let mut v = recurrence.eval(x).sqr();
        let y = x - shift;
        for o in out.iter_mut() {
            *o = v;
            v *= y;
        }
    })
}

/// `int x^m |P_n(x)|^2 dmu` for `m = 0..=m_max`, indexed by `m`.
pub fn quadrature_moments(
    measure: MeasureSpec,
    seq: &JacobiSequence,
    n: u64,
    m_max: usize,
) -> Result<Vec<DoubleDouble>, OrthopolyError> {
    shifted_moments(measure, seq, n, m_max, DoubleDouble::ZERO)
}

/// `int x^m |P_n(x)|^2 dmu`.
pub fn quadrature_moment(measure: MeasureSpec, seq: &JacobiSequence, n: u64, m: usize) -> Result<DoubleDouble, OrthopolyError> {
    Ok(quadrature_moments(measure, seq, n, m)?[m])
}

/// Moments `m = 0..=m_max` of `|P_n(s x)|^2 mu(s dx)` with
/// `s = sqrt(omega_{n+1/2} + omega_{n-1/2})`.
///
/// With `centered` the variable is first shifted by `alpha_n`, giving the
/// moments of `|P_n(s x + alpha_n)|^2 mu(s dx + alpha_n)`. Only the centered
/// form can approach the arcsine law when `alpha_n` grows.
pub fn rescaled_density_moments(
    measure: MeasureSpec,
    seq: &JacobiSequence,
    n: u64,
    m_max: usize,
    centered: bool,
) -> Result<Vec<f64>, OrthopolyError> {
    let below = if n == 0 { DoubleDouble::ZERO } else { omega_dd(seq, n - 1)? };
    let scale = (omega_dd(seq, n)? + below).sqrt();
    let shift = if centered { alpha_dd(seq, n)? } else { DoubleDouble::ZERO };
    let raw = shifted_moments(measure, seq, n, m_max, shift)?;
    let mut power = DoubleDouble::ONE;
    Ok(raw
        .into_iter()
        .map(|v| {
            let out = (v / power).to_f64();
            power *= scale;
            out
        })
        .collect())
}

/// `int P_i P_j dmu` for `i, j <= degree`.
pub fn gram_matrix(measure: MeasureSpec, seq: &JacobiSequence, degree: u64) -> Result<Vec<Vec<f64>>, OrthopolyError> {
    let recurrences = (0..=degree).map(|i| Recurrence::new(seq, i)).collect::<Result<Vec<_>, _>>()?;
    let size = recurrences.len();
    let flat = measure.integrate(size * size, |x, out| {
        let p: Vec<DoubleDouble> = recurrences.iter().map(|r| r.eval(x)).collect();
        for i in 0..size {
            for j in 0..size {
                out[i * size + j] = p[i] * p[j];
            }
        }
    })?;
    Ok(flat.chunks(size).map(|row| row.iter().map(|v| v.to_f64()).collect()).collect())
}
