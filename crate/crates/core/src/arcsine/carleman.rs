use serde::Serialize;

use super::law::{discrete_arcsine, discrete_moment, DEFAULT_SERIES_TOL};
use super::{check_c, ArcsineError};
use crate::dd::DoubleDouble;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlemanRow {
    pub m: usize,
    /// `sum_n |b_n^(m)|`.
    pub abs_sum: f64,
    /// `(sqrt(2) + |c| m)^m`.
    pub abs_sum_bound: f64,
    /// `b_0^(2m)`, the moment of order `2m`.
    pub even_moment: f64,
    /// `(sqrt(2) + 2|c| m)^(2m)`.
    pub even_moment_bound: f64,
    /// The same moment summed over the weights of `mu_c`.
    pub discrete_moment: f64,
    pub relative_difference: f64,
    /// `1 / b_0^(2m)^(1/(2m))`.
    pub carleman_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlemanReport {
    pub c: f64,
    pub rows: Vec<CarlemanRow>,
    /// `sum_{m <= m_max} 1 / b_0^(2m)^(1/(2m))`.
    pub partial_sum: f64,
    pub bounds_hold: bool,
    /// Largest relative difference between the recursion and the weights.
    pub max_relative_difference: f64,
}

/// Coefficients `b^(m)` of `X^m Phi_0` for the chain `omega = 1/2`,
/// `alpha(n) = cn`:
/// `b_n^(m+1) = b_{n-1}^(m)/sqrt 2 + b_{n+1}^(m)/sqrt 2 + c n b_n^(m)`.
/// Index `n` is stored at `n + steps`.
fn coefficient_arrays(c: f64, steps: usize) -> Vec<Vec<DoubleDouble>> {
    let width = 2 * steps + 1;
    let inv_sqrt2 = DoubleDouble::ONE / DoubleDouble::from_f64(2.0).sqrt();
    let c = DoubleDouble::from_f64(c);
    let mut current = vec![DoubleDouble::ZERO; width];
    current[steps] = DoubleDouble::ONE;
    let mut all = vec![current.clone()];
    for _ in 0..steps {
        let mut next = vec![DoubleDouble::ZERO; width];
        for i in 0..width {
            let n = i as i64 - steps as i64;
            let mut v = c * n as f64 * current[i];
            if i > 0 {
                v += current[i - 1] * inv_sqrt2;
            }
            if i + 1 < width {
                v += current[i + 1] * inv_sqrt2;
            }
            next[i] = v;
        }
        all.push(next.clone());
        current = next;
    }
    all
}

/// Runs the coefficient recursion behind the determinacy argument for `mu_c`
/// and checks its growth bounds for every `m <= m_max`.
pub fn carleman_bound_check(c: f64, m_max: usize) -> Result<CarlemanReport, ArcsineError> {
    check_c(c)?;
    if m_max == 0 {
        return Err(ArcsineError::InvalidOrder);
    }
    let c_abs = c.abs();
    let top = std::f64::consts::SQRT_2 + 2.0 * c_abs * m_max as f64;
    if !top.powi(2 * m_max as i32).is_finite() {
        return Err(ArcsineError::Overflow { m: m_max });
    }
    let law = discrete_arcsine(c, DEFAULT_SERIES_TOL)?;
    let arrays = coefficient_arrays(c, 2 * m_max);
    let mut rows = Vec::with_capacity(m_max);
    let mut partial_sum = 0.0;
    let mut bounds_hold = true;
    let mut max_relative_difference: f64 = 0.0;
    let center = 2 * m_max;
    for m in 1..=m_max {
        let abs_sum: f64 = arrays[m].iter().map(|b| b.abs()).sum::<DoubleDouble>().to_f64();
        let abs_sum_bound = (std::f64::consts::SQRT_2 + c_abs * m as f64).powi(m as i32);
        let even_moment = arrays[2 * m][center].to_f64();
        let even_moment_bound = (std::f64::consts::SQRT_2 + 2.0 * c_abs * m as f64).powi(2 * m as i32);
        let discrete = discrete_moment(&law, 2 * m)?.value;
        let relative_difference = (even_moment - discrete).abs() / discrete.abs();
        let carleman_term = even_moment.powf(-1.0 / (2 * m) as f64);
        partial_sum += carleman_term;
        bounds_hold &= abs_sum <= abs_sum_bound && even_moment <= even_moment_bound;
        max_relative_difference = max_relative_difference.max(relative_difference);
        rows.push(CarlemanRow {
            m,
            abs_sum,
            abs_sum_bound,
            even_moment,
            even_moment_bound,
            discrete_moment: discrete,
            relative_difference,
            carleman_term,
        });
    }
    Ok(CarlemanReport { c, rows, partial_sum, bounds_hold, max_relative_difference })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_steps_by_hand() {
        let b = coefficient_arrays(0.7, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(b[0][2].to_f64(), 1.0);
        assert_eq!(b[1][2].to_f64(), 0.0);
        assert!((b[1][1].to_f64() - h).abs() < 1e-16 && (b[1][3].to_f64() - h).abs() < 1e-16);
        assert!((b[2][2].to_f64() - 1.0).abs() < 1e-15);
        // b_{+-1}^(2) = +-c/sqrt(2), b_{+-2}^(2) = 1/2.
        assert!((b[2][3].to_f64() - 0.7 * h).abs() < 1e-15);
        assert!((b[2][1].to_f64() + 0.7 * h).abs() < 1e-15);
        assert!((b[2][4].to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bounds_and_moment_agreement() {
        for c in [0.5, 1.0, -1.0] {
            let report = carleman_bound_check(c, 15).unwrap();
            assert!(report.bounds_hold);
            assert!(report.max_relative_difference <= 1e-9, "c={c}: {}", report.max_relative_difference);
            assert!(report.partial_sum > 0.0);
            assert!((report.rows[0].even_moment - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_overflowing_orders() {
        assert!(matches!(carleman_bound_check(1.0, 200), Err(ArcsineError::Overflow { .. })));
        assert!(carleman_bound_check(0.0, 3).is_err());
        assert!(carleman_bound_check(1.0, 0).is_err());
    }
}
