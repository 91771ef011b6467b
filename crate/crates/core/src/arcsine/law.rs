use serde::Serialize;

use super::series::{miller_coefficients, series_coefficient, SERIES_LIMIT};
use super::{arcsine_moment, check_c, check_tol, ArcsineError};
use crate::dd::DoubleDouble;
use crate::scalar::rational_to_f64;

pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
pub const DEFAULT_MOMENT_TOL: f64 = 1e-10;

/// The discrete arcsine law `mu_c`: weight `w_n = a_n(c)^2` at `cn`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteArcsineLaw {
    pub c: f64,
    /// Series argument `sqrt(2)/|c|`.
    pub x: f64,
    pub n_trunc: usize,
    /// `a_0(|c|)..a_{n_trunc}(|c|)`.
    pub coefficients: Vec<f64>,
    /// `w_0..w_{n_trunc}`; `w_{-n} = w_n`.
    pub weights: Vec<f64>,
    /// Upper bound on the mass outside `|n| <= n_trunc`.
    pub tail_mass_bound: f64,
    pub tol: f64,
}

/// `ln((x/2)^n / n!)`, the log of the bound `|a_n| <= (x/2)^n / n!`.
fn log_coefficient_bound(x: f64, n: usize) -> f64 {
    let log_fact: f64 = (2..=n).map(|j| (j as f64).ln()).sum();
    n as f64 * (x / 2.0).ln() - log_fact
}

/// Bound on `2 sum_{n > n_trunc} (|c| n)^m a_n^2`. Past `n_trunc` successive
/// terms shrink by at most `ratio`, so the tail is dominated by a geometric
/// series. `None` when the ratio does not certify decay.
fn tail_bound(x: f64, c_abs: f64, n_trunc: usize, m: usize) -> Option<f64> {
    let first = n_trunc + 1;
    let ratio = ((first + 1) as f64 / first as f64).powi(m as i32) * (x / 2.0 / (first + 1) as f64).powi(2);
    if ratio >= 1.0 {
        return None;
    }
    let log_first = m as f64 * (c_abs * first as f64).ln() + 2.0 * log_coefficient_bound(x, first);
    Some(2.0 * log_first.exp() / (1.0 - ratio))
}

/// Builds `mu_c` with enough terms that the certified tail mass is at most
/// `tol`.
pub fn discrete_arcsine(c: f64, tol: f64) -> Result<DiscreteArcsineLaw, ArcsineError> {
    check_c(c)?;
    check_tol(tol)?;
    let c_abs = c.abs();
    let x = std::f64::consts::SQRT_2 / c_abs;
    let mut n_trunc = (x + 20.0 + 10.0 * (1.0 / tol).log10().max(0.0)).ceil() as usize;
    while tail_bound(x, c_abs, n_trunc, 0).is_none_or(|b| b > tol) {
        n_trunc += 10;
    }
    let tail_mass_bound = tail_bound(x, c_abs, n_trunc, 0).unwrap_or(tol);
    let coefficients: Vec<f64> = if x <= SERIES_LIMIT {
        (0..=n_trunc as u64).map(|n| series_coefficient(n, c_abs, tol.min(1e-16)).to_f64()).collect()
    } else {
        miller_coefficients(x, n_trunc)
    };
    let weights = coefficients.iter().map(|a| a * a).collect();
    Ok(DiscreteArcsineLaw { c, x, n_trunc, coefficients, weights, tail_mass_bound, tol })
}

impl DiscreteArcsineLaw {
    /// `w_n` for any integer `n` (zero past the truncation).
    pub fn weight(&self, n: i64) -> f64 {
        self.weights.get(n.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    /// `(n, cn, w_n)` for `|n| <= n_trunc`, in increasing `n`.
    pub fn atoms(&self) -> impl Iterator<Item = (i64, f64, f64)> + '_ {
        let n = self.n_trunc as i64;
        (-n..=n).map(move |k| (k, self.c * k as f64, self.weight(k)))
    }

    pub fn total_mass(&self) -> f64 {
        let mut sum = DoubleDouble::from_f64(self.weights[0]);
        for w in &self.weights[1..] {
            sum += DoubleDouble::from_f64(*w) * 2.0;
        }
        sum.to_f64()
    }
}

/// A moment of `mu_c` with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteMoment {
    pub value: f64,
    /// Certified bound on the neglected tail `|n| > n_trunc`.
    pub truncation_bound: f64,
    /// Truncation bound plus the effect of the weights' own relative error.
    pub error_bound: f64,
}

/// `sum_n (cn)^m w_n`, summed over symmetric pairs so that odd moments are
/// exactly zero.
pub fn discrete_moment(law: &DiscreteArcsineLaw, m: usize) -> Result<DiscreteMoment, ArcsineError> {
    if m % 2 == 1 {
        return Ok(DiscreteMoment { value: 0.0, truncation_bound: 0.0, error_bound: 0.0 });
    }
    if m == 0 {
        let value = law.total_mass();
        return Ok(DiscreteMoment {
            value,
            truncation_bound: law.tail_mass_bound,
            error_bound: law.tail_mass_bound + 4.0 * law.tol.max(f64::EPSILON),
        });
    }
    let c = DoubleDouble::from_f64(law.c.abs());
    let mut sum = DoubleDouble::ZERO;
    for (n, w) in law.weights.iter().enumerate().skip(1) {
        sum += (c * n as f64).powi(m as u32) * *w * 2.0;
    }
    let value = sum.to_f64();
    let bound = tail_bound(law.x, law.c.abs(), law.n_trunc, m);
    match bound {
        Some(b) if b <= DEFAULT_MOMENT_TOL * value.abs().max(1.0) => Ok(DiscreteMoment {
            value,
            truncation_bound: b,
            error_bound: b + 4.0 * law.tol.max(f64::EPSILON) * value.abs(),
        }),
        _ => Err(ArcsineError::TruncationInsufficient { m, n_trunc: law.n_trunc, bound: bound.unwrap_or(f64::INFINITY) }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CToZeroRow {
    pub c: f64,
    pub m: usize,
    pub discrete: f64,
    pub arcsine: f64,
    pub error: f64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CToZeroTable {
    pub rows: Vec<CToZeroRow>,
    /// For every even order the error does not increase down the list of
    /// `c` values, up to the reported error bounds.
    pub non_increasing: bool,
}

/// Distance between the moments of `mu_c` and of the arcsine law for each
/// `c` in a decreasing list and each order `1..=m_max`.
pub fn c_to_zero_check(c_list: &[f64], m_max: usize, tol: f64) -> Result<CToZeroTable, ArcsineError> {
    if c_list.iter().any(|c| c.is_nan() || *c <= 0.0) || c_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ArcsineError::NotDecreasing);
    }
    let mut rows = Vec::new();
    for &c in c_list {
        let law = discrete_arcsine(c, tol)?;
        for m in 1..=m_max {
            let moment = discrete_moment(&law, m)?;
            let arcsine = rational_to_f64(&arcsine_moment(m));
            rows.push(CToZeroRow {
                c,
                m,
                discrete: moment.value,
                arcsine,
                error: (moment.value - arcsine).abs(),
                error_bound: moment.error_bound,
            });
        }
    }
    let mut non_increasing = true;
    for m in (2..=m_max).step_by(2) {
        let errs: Vec<&CToZeroRow> = rows.iter().filter(|r| r.m == m).collect();
        for pair in errs.windows(2) {
            if pair[1].error > pair[0].error + pair[0].error_bound + pair[1].error_bound {
                non_increasing = false;
            }
        }
    }
    Ok(CToZeroTable { rows, non_increasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcsine::series::weight_formula_f64;
    use crate::fock::{two_sided_moment, TwoSidedJacobiSequence};
    use crate::scalar::{f64_to_rational, Mode, Scalar};

    const CS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

    #[test]
    fn weights_are_symmetric_positive_and_normalized() {
        for c in CS {
            let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).unwrap();
            assert!((law.total_mass() - 1.0).abs() <= 1e-12, "c={c}: {}", law.total_mass());
            assert!(law.tail_mass_bound <= DEFAULT_SERIES_TOL);
            for n in 0..=law.n_trunc as i64 {
                assert_eq!(law.weight(n), law.weight(-n));
                assert!(law.weight(n) >= 0.0);
            }
            let negative = discrete_arcsine(-c, DEFAULT_SERIES_TOL).unwrap();
            assert_eq!(negative.weights, law.weights);
        }
    }

    #[test]
    fn large_c_leading_terms() {
        // a_0 = 1 - 1/(2c^2) + O(c^-4), so w_0 = 1 - 1/c^2 + O(c^-4).
        let law = discrete_arcsine(10.0, DEFAULT_SERIES_TOL).unwrap();
        assert!((law.coefficients[0] - (1.0 - 1.0 / 200.0)).abs() < 1e-4);
        assert!((law.weight(0) - (1.0 - 1.0 / 100.0)).abs() < 1e-4);
        assert!((law.weight(1) - 5e-3).abs() < 1e-4);
        assert!((law.weight(-1) - 5e-3).abs() < 1e-4);
    }

    #[test]
    fn two_routes_agree() {
        for c in CS {
            let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).unwrap();
            for n in 0..=law.n_trunc as u64 {
                let w = law.weights[n as usize];
                if w < 1e-280 {
                    break;
                }
                let formula = weight_formula_f64(n, c).unwrap();
                assert!((formula - w).abs() <= 1e-12 * formula, "c={c} n={n}");
            }
        }
    }

    #[test]
    fn low_order_moments() {
        for c in CS {
            let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).unwrap();
            assert!((discrete_moment(&law, 0).unwrap().value - 1.0).abs() < 1e-12);
            assert!((discrete_moment(&law, 2).unwrap().value - 1.0).abs() < 1e-10);
            let m4 = discrete_moment(&law, 4).unwrap().value;
            assert!((m4 - (1.5 + c * c)).abs() < 1e-9 * (1.5 + c * c), "c={c}");
            for m in [1, 3, 7, 11] {
                assert_eq!(discrete_moment(&law, m).unwrap().value, 0.0);
            }
        }
    }

    #[test]
    fn moments_equal_free_chain_walks() {
        for c in [0.3, 1.0, -0.5, 2.0] {
            let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).unwrap();
            let chain = TwoSidedJacobiSequence::free_chain(Scalar::Exact(f64_to_rational(c).unwrap()));
            for m in 0..=10 {
                let walk = two_sided_moment(&chain, m, Mode::Exact).unwrap().to_f64();
                let moment = discrete_moment(&law, m).unwrap();
                assert!((walk - moment.value).abs() <= 1e-10 * walk.abs().max(1.0), "c={c} m={m}");
            }
        }
    }

    #[test]
    fn small_c_uses_backward_recurrence() {
        let law = discrete_arcsine(0.05, DEFAULT_SERIES_TOL).unwrap();
        assert!(law.x > SERIES_LIMIT);
        assert!((law.total_mass() - 1.0).abs() < 1e-13);
        assert!((discrete_moment(&law, 2).unwrap().value - 1.0).abs() < 1e-10);
        assert!((discrete_moment(&law, 4).unwrap().value - (1.5 + 0.0025)).abs() < 1e-9);
    }

    #[test]
    fn c_to_zero_table() {
        let table = c_to_zero_check(&[1.0, 0.5, 0.25, 0.125], 8, DEFAULT_SERIES_TOL).unwrap();
        assert!(table.non_increasing);
        for row in &table.rows {
            match row.m {
                2 => assert!(row.error < 1e-12),
                4 => assert!((row.error - row.c * row.c).abs() < 1e-9),
                m if m % 2 == 1 => assert_eq!(row.error, 0.0),
                _ => {}
            }
        }
        assert!(c_to_zero_check(&[0.5, 1.0], 4, 1e-14).is_err());
        assert!(c_to_zero_check(&[1.0, -0.5], 4, 1e-14).is_err());
    }

    #[test]
    fn high_order_needs_enough_terms() {
        let law = discrete_arcsine(1.0, 1e-2).unwrap();
        assert!(matches!(discrete_moment(&law, 400), Err(ArcsineError::TruncationInsufficient { .. })));
    }
}
