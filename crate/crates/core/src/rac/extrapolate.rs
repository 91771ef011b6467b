use num_traits::{Num, Signed};
use serde::Serialize;

/// Order of the extrapolating polynomial in `h = 1/n`.
pub const EXTRAPOLATION_ORDER: usize = 2;

/// Value at `h = 0` of the interpolating polynomial through `(h_i, v_i)`,
/// by Neville's scheme.
pub(crate) fn neville_at_zero<T>(h: &[T], v: &[T]) -> T
where
    T: Clone + Num,
{
    let mut p: Vec<T> = v.to_vec();
    let len = p.len();
    for level in 1..len {
        for i in 0..len - level {
            let j = i + level;
            // P_{i..j}(0) = (h_j P_{i..j-1} - h_i P_{i+1..j}) / (h_j - h_i)
            p[i] = (h[j].clone() * p[i].clone() - h[i].clone() * p[i + 1].clone()) / (h[j].clone() - h[i].clone());
        }
    }
    p[0].clone()
}

/// Limit estimates of a sequence sampled at increasing indices, one per
/// window of `EXTRAPOLATION_ORDER + 1` consecutive samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub order: usize,
    pub estimates: Vec<f64>,
    /// `|estimate_{j+1} - estimate_j|`.
    pub residuals: Vec<f64>,
    pub limit: f64,
    pub residual: f64,
}

pub(crate) fn extrapolate<T>(h: &[T], v: &[T], to_f64: impl Fn(&T) -> f64) -> Extrapolation
where
    T: Clone + Num + Signed,
{
    let window = EXTRAPOLATION_ORDER + 1;
    let estimates: Vec<T> = (0..=h.len().saturating_sub(window))
        .map(|j| neville_at_zero(&h[j..j + window], &v[j..j + window]))
        .collect();
    let residuals: Vec<f64> = estimates.windows(2).map(|w| to_f64(&(w[1].clone() - w[0].clone()).abs())).collect();
    let estimates: Vec<f64> = estimates.iter().map(&to_f64).collect();
    Extrapolation {
        order: EXTRAPOLATION_ORDER,
        limit: *estimates.last().unwrap_or(&f64::NAN),
        residual: *residuals.last().unwrap_or(&f64::INFINITY),
        estimates,
        residuals,
    }
}
