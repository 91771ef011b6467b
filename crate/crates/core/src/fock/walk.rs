use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FockError, JacobiOperator, MomentSequence, MomentValue, TwoSidedJacobiSequence};
use crate::jacobi::JacobiSequence;
use crate::scalar::{rational_pow, Mode, Scalar};

/// Positions reachable by a closed walk of length at most `horizon` from
/// `center`, together with which coefficients such a walk can touch.
struct Band {
    lo: i64,
    center: i64,
    horizon: usize,
}

impl Band {
    fn new<S: JacobiOperator + ?Sized>(seq: &S, center: i64, horizon: usize) -> Self {
        let radius = (horizon / 2) as i64;
        let lo = match seq.min_index() {
            Some(min) => (center - radius).max(min),
            None => center - radius,
        };
        Band { lo, center, horizon }
    }

    fn hi(&self) -> i64 {
        self.center + (self.horizon / 2) as i64
    }

    fn len(&self) -> usize {
        (self.hi() - self.lo + 1) as usize
    }

    /// A closed walk stays at `p` for one step only if it can go there and
    /// back, i.e. `2|p - c| + 1 <= horizon`.
    fn uses_diag(&self, p: i64) -> bool {
        (2 * (p - self.center).unsigned_abs() as usize) < self.horizon
    }

    /// Crossing the gap between `p` and `p + 1` costs at least twice the
    /// distance to its far end.
    fn uses_gap(&self, p: i64) -> bool {
        let far = if p >= self.center { p + 1 - self.center } else { self.center - p };
        2 * far as usize <= self.horizon
    }
}

/// Runs `v <- T v` from the basis vector at `band.center` and records the
/// returning coefficient after every step. `lower[i]` multiplies the entry
/// below position `lo + i`, `upper[i]` the entry above.
fn propagate<T>(band: &Band, lower: &[T], diag: &[T], upper: &[T]) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    let len = band.len();
    let c = (band.center - band.lo) as usize;
    let mut v = vec![T::zero(); len];
    v[c] = T::one();
    let mut out = Vec::with_capacity(band.horizon + 1);
    out.push(T::one());
    for t in 1..=band.horizon {
        let radius = t.min(band.horizon - t);
        let from = c.saturating_sub(radius);
        let to = (c + radius).min(len - 1);
        let mut next = vec![T::zero(); len];
        for i in from..=to {
            let mut acc = diag[i].clone() * &v[i];
            if i > 0 {
                acc = acc + lower[i].clone() * &v[i - 1];
            }
            if i + 1 < len {
                acc = acc + upper[i].clone() * &v[i + 1];
            }
            next[i] = acc;
        }
        v = next;
        out.push(v[c].clone());
    }
    out
}

/// Exact `<(X - shift)^m Phi_c, Phi_c>` for `m = 0..=horizon`, using the
/// similar non-symmetric matrix with `1` above and `omega` below the diagonal
/// so that every closed walk collects one `omega` per down-step.
pub(crate) fn walk_exact<S: JacobiOperator + ?Sized>(
    seq: &S,
    center: i64,
    horizon: usize,
    shift: &BigRational,
) -> Result<Vec<BigRational>, FockError> {
    let band = Band::new(seq, center, horizon);
    let len = band.len();
    let mut lower = vec![BigRational::zero(); len];
    let mut diag = vec![BigRational::zero(); len];
    let mut upper = vec![BigRational::zero(); len];
    for i in 0..len {
        let p = band.lo + i as i64;
        if band.uses_diag(p) {
            diag[i] = seq.diag_exact(p)? - shift;
        }
        if i + 1 < len && band.uses_gap(p) {
            upper[i] = seq.gap_exact(p)?;
            lower[i + 1] = BigRational::one();
        }
    }
    Ok(propagate(&band, &lower, &diag, &upper))
}

/// Float `<((X - shift) / scale)^m Phi_c, Phi_c>` for `m = 0..=horizon` by
/// propagating `Phi_c` through the symmetric matrix.
pub(crate) fn walk_f64<S: JacobiOperator + ?Sized>(
    seq: &S,
    center: i64,
    horizon: usize,
    shift: f64,
    scale: f64,
) -> Result<Vec<f64>, FockError> {
    let band = Band::new(seq, center, horizon);
    let len = band.len();
    let mut lower = vec![0.0; len];
    let mut diag = vec![0.0; len];
    let mut upper = vec![0.0; len];
    for i in 0..len {
        let p = band.lo + i as i64;
        if band.uses_diag(p) {
            diag[i] = (seq.diag_f64(p)? - shift) / scale;
        }
        if i + 1 < len && band.uses_gap(p) {
            let off = seq.gap_f64(p)?.sqrt() / scale;
            upper[i] = off;
            lower[i + 1] = off;
        }
    }
    Ok(propagate(&band, &lower, &diag, &upper))
}

fn moments_at<S: JacobiOperator + ?Sized>(
    seq: &S,
    center: i64,
    m_max: usize,
    mode: Mode,
) -> Result<Vec<Scalar>, FockError> {
    Ok(match mode {
        Mode::Exact => walk_exact(seq, center, m_max, &BigRational::zero())?
            .into_iter()
            .map(Scalar::Exact)
            .collect(),
        Mode::Float => walk_f64(seq, center, m_max, 0.0, 1.0)?.into_iter().map(Scalar::Float).collect(),
    })
}

/// `<X^m Phi_k, Phi_k>`.
pub fn moment(seq: &JacobiSequence, k: u64, m: usize, mode: Mode) -> Result<Scalar, FockError> {
    Ok(moments_at(seq, k as i64, m, mode)?.pop().expect("non-empty"))
}

/// `<X^m Phi_0, Phi_0>` for a two-sided sequence.
pub fn two_sided_moment(tseq: &TwoSidedJacobiSequence, m: usize, mode: Mode) -> Result<Scalar, FockError> {
    Ok(moments_at(tseq, 0, m, mode)?.pop().expect("non-empty"))
}

/// `omega_{k+1/2} + omega_{k-1/2}`, with `omega_{-1/2} = 0`.
pub fn variance_at(seq: &JacobiSequence, k: u64, mode: Mode) -> Result<Scalar, FockError> {
    let v = match mode {
        Mode::Exact => Scalar::Exact(seq.gap_exact(k as i64)? + seq.gap_exact(k as i64 - 1)?),
        Mode::Float => Scalar::Float(seq.gap_f64(k as i64)? + seq.gap_f64(k as i64 - 1)?),
    };
    let positive = match &v {
        Scalar::Exact(r) => r > &BigRational::zero(),
        Scalar::Float(x) => *x > 0.0,
    };
    if positive {
        Ok(v)
    } else {
        Err(FockError::ZeroVariance { level: k })
    }
}

fn normalized_exact(seq: &JacobiSequence, k: u64, m_max: usize) -> Result<Vec<MomentValue>, FockError> {
    let variance = match variance_at(seq, k, Mode::Exact)? {
        Scalar::Exact(v) => v,
        Scalar::Float(_) => unreachable!(),
    };
    let shift = seq.alpha_exact(k)?;
    let raw = walk_exact(seq, k as i64, m_max, &shift)?;
    let mut out = Vec::with_capacity(m_max);
    for (m, r) in raw.into_iter().enumerate().skip(1) {
        let half = (m / 2) as u64;
        let coefficient = r / rational_pow(&variance, half);
        out.push(if m % 2 == 0 || coefficient.is_zero() {
            MomentValue::Exact(coefficient)
        } else {
            MomentValue::ExactOverSqrt { coefficient, radicand: variance.clone() }
        });
    }
    Ok(out)
}

fn normalized_f64(seq: &JacobiSequence, k: u64, m_max: usize) -> Result<Vec<MomentValue>, FockError> {
    let variance = variance_at(seq, k, Mode::Float)?.to_f64();
    let shift = seq.alpha_f64(k)?;
    let raw = walk_f64(seq, k as i64, m_max, shift, variance.sqrt())?;
    Ok(raw
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, x)| {
            MomentValue::Float(match m {
                1 => 0.0,
                2 => 1.0,
                _ => x,
            })
        })
        .collect())
}

/// `<(X^(k))^m Phi_k, Phi_k>` for the normalized variable
/// `X^(k) = (X - alpha_k) / sqrt(omega_{k+1/2} + omega_{k-1/2})`.
pub fn normalized_moment(seq: &JacobiSequence, k: u64, m: usize, mode: Mode) -> Result<MomentValue, FockError> {
    if m == 0 {
        return Ok(match mode {
            Mode::Exact => MomentValue::Exact(BigRational::one()),
            Mode::Float => MomentValue::Float(1.0),
        });
    }
    let mut all = match mode {
        Mode::Exact => normalized_exact(seq, k, m)?,
        Mode::Float => normalized_f64(seq, k, m)?,
    };
    Ok(all.pop().expect("non-empty"))
}

/// Moments of orders `1..=m_max` at level `k` from a single walk pass.
pub fn moment_sequence(
    seq: &JacobiSequence,
    k: u64,
    m_max: usize,
    normalized: bool,
    mode: Mode,
) -> Result<MomentSequence, FockError> {
    let entries = if normalized {
        match mode {
            Mode::Exact => normalized_exact(seq, k, m_max)?,
            Mode::Float => normalized_f64(seq, k, m_max)?,
        }
    } else {
        moments_at(seq, k as i64, m_max, mode)?
            .into_iter()
            .skip(1)
            .map(|s| match s {
                Scalar::Exact(r) => MomentValue::Exact(r),
                Scalar::Float(x) => MomentValue::Float(x),
            })
            .collect()
    };
    Ok(MomentSequence { level: k, normalized, mode, entries })
}
