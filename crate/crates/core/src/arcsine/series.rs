use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{check_c, check_tol, ArcsineError};
use crate::dd::DoubleDouble;
use crate::scalar::{f64_to_rational, rational_to_f64};

/// Largest series argument `x = sqrt(2)/|c|` summed directly; beyond it the
/// alternating series loses too many digits to cancellation.
pub(crate) const SERIES_LIMIT: f64 = 15.0;

/// `(x/2)^2 = 1/(2c^2)` in double-double.
fn half_x_squared(c_abs: f64) -> DoubleDouble {
    let c = DoubleDouble::from_f64(c_abs);
    DoubleDouble::from_f64(0.5) / (c * c)
}

/// `a_n(|c|)` for `n >= 0` by the alternating series
/// `(x/2)^n sum_l (-(x/2)^2)^l / (l! (n+l)!)`.
pub(crate) fn series_coefficient(n: u64, c_abs: f64, tol: f64) -> DoubleDouble {
    let y = half_x_squared(c_abs);
    let half_x = y.sqrt();
    let mut prefactor = DoubleDouble::ONE;
    for j in 1..=n {
        prefactor = prefactor * half_x / j as f64;
        if prefactor.hi == 0.0 {
            return DoubleDouble::ZERO;
        }
    }
    let peak = half_x.to_f64();
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut l = 0u64;
    loop {
        term = -(term * y) / ((l + 1) as f64 * (n + l + 1) as f64);
        sum += term;
        l += 1;
        if l as f64 > peak && term.abs().to_f64() <= tol * sum.abs().to_f64() {
            break;
        }
    }
    prefactor * sum
}

/// `a_0(|c|)..a_{n_max}(|c|)` by backward recurrence on
/// `a_{k-1} = (2k/x) a_k - a_{k+1}`, normalized by `a_0^2 + 2 sum a_k^2 = 1`
/// with the sign fixed by `a_0 + 2 sum a_{2k} = 1`.
pub(crate) fn miller_coefficients(x: f64, n_max: usize) -> Vec<f64> {
    let reach = (n_max as f64).max(x);
    let mut start = (reach + (160.0 * reach).sqrt() + 20.0).ceil() as usize;
    start += start % 2;
    let mut values = vec![0.0; start + 2];
    values[start] = 1.0;
    for k in (1..=start).rev() {
        let next = (2.0 * k as f64 / x) * values[k] - values[k + 1];
        values[k - 1] = next;
        if next.abs() > 1e250 {
            for v in values.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let largest = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for v in values.iter_mut() {
        *v /= largest;
    }
    let mut norm = DoubleDouble::from_f64(values[0]).sqr();
    let mut even_sum = values[0];
    for (k, v) in values.iter().enumerate().skip(1) {
        norm += DoubleDouble::from_f64(*v).sqr() * 2.0;
        if k % 2 == 0 {
            even_sum += 2.0 * v;
        }
    }
    let scale = even_sum.signum() / norm.sqrt().to_f64();
    values.truncate(n_max + 1);
    values.iter().map(|v| v * scale).collect()
}

/// The Fourier coefficient `a_n(c)` of `exp(i sqrt(2) sin t / c)`.
///
/// Negative `n` uses `a_{-n}(c) = (-1)^n a_n(c)`, and negative `c` contributes
/// the same sign factor.
pub fn fourier_coefficient(n: i64, c: f64, tol: f64) -> Result<f64, ArcsineError> {
    check_c(c)?;
    check_tol(tol)?;
    let order = n.unsigned_abs();
    let x = std::f64::consts::SQRT_2 / c.abs();
    let magnitude = if x <= SERIES_LIMIT {
        series_coefficient(order, c.abs(), tol).to_f64()
    } else {
        miller_coefficients(x, order as usize)[order as usize]
    };
    let flips = (n < 0) as u64 + (c < 0.0) as u64;
    let odd = order % 2 == 1 && flips % 2 == 1;
    Ok(if odd { -magnitude } else { magnitude })
}

/// The weight `w_n = (2^n c^(2n))^(-1) (sum_l (-1)^l (2c^2)^(-l) / ((n+l)! l!))^2`
/// in exact rational arithmetic on the binary value of `c`.
///
/// The alternating sum stops at the first index past its peak whose term is
/// below `1e-80` of the largest term. Over the common denominator
/// `B^L L! (n+L)!` (with `y = A/B`) every term is an integer, so the sum is
/// accumulated in integers and the result is left unreduced.
pub fn weight_formula(n: u64, c: f64) -> Result<BigRational, ArcsineError> {
    check_c(c)?;
    let c = f64_to_rational(c.abs()).ok_or(ArcsineError::InvalidC(c))?;
    let y = (&c * &c * BigInt::from(2)).recip();
    let (a, b) = (y.numer().clone(), y.denom().clone());

    let log_y = rational_to_f64(&y).ln();
    let log_term = |l: u64| {
        l as f64 * log_y - (1..=l).map(|j| (j as f64).ln()).sum::<f64>() - (n + 1..=n + l).map(|j| (j as f64).ln()).sum::<f64>()
    };
    let peak = log_y.exp().sqrt();
    let mut largest = 0.0f64;
    let mut last = 0u64;
    loop {
        let t = log_term(last);
        largest = largest.max(t);
        if last as f64 > peak && t < largest - 80.0 * std::f64::consts::LN_10 {
            break;
        }
        last += 1;
    }

    // T_l = A^l B^(L-l) (L!/l!) ((n+L)!/(n+l)!), T_{l+1} = T_l A / (B (l+1) (n+l+1)).
    let mut term = b.pow(last as u32);
    for j in 1..=last {
        term *= BigInt::from(j) * BigInt::from(n + j);
    }
    let mut numer = BigInt::zero();
    for l in 0..=last {
        if l % 2 == 0 {
            numer += &term;
        } else {
            numer -= &term;
        }
        if l < last {
            term = term * &a / (&b * BigInt::from((l + 1) * (n + l + 1)));
        }
    }
    let mut denom = b.pow(last as u32);
    for j in 1..=(n + last) {
        denom *= BigInt::from(j);
    }
    for j in 1..=last {
        denom *= BigInt::from(j);
    }
    let numer = a.pow(n as u32) * &numer * &numer;
    let denom = b.pow(n as u32) * &denom * &denom;
    Ok(BigRational::new_raw(numer, denom))
}

pub fn weight_formula_f64(n: u64, c: f64) -> Result<f64, ArcsineError> {
    Ok(rational_to_f64(&weight_formula(n, c)?))
}
