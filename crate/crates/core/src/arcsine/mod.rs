//! The arcsine law and the discrete arcsine laws `mu_c` on `cZ`.
//!
//! `mu_c` puts mass `|a_n(c)|^2` at `cn`, where `a_n(c)` are the Fourier
//! coefficients of `exp(i sqrt(2) sin t / c)`. These coincide with the Bessel
//! values `J_n(sqrt(2)/c)`, which the tests use as an independent oracle.

mod carleman;
mod law;
mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use carleman::{carleman_bound_check, CarlemanReport, CarlemanRow};
pub use law::{
    c_to_zero_check, discrete_arcsine, discrete_moment, CToZeroRow, CToZeroTable, DiscreteArcsineLaw, DiscreteMoment,
    DEFAULT_MOMENT_TOL, DEFAULT_SERIES_TOL,
};
pub use series::{fourier_coefficient, weight_formula, weight_formula_f64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArcsineError {
    #[error("the drift constant c must be nonzero and finite, got {0}")]
    InvalidC(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("truncation at n = {n_trunc} is insufficient for order {m} (tail bound {bound:e}); rebuild with a tighter tolerance")]
    TruncationInsufficient { m: usize, n_trunc: usize, bound: f64 },
    #[error("c values must be positive and strictly decreasing")]
    NotDecreasing,
    #[error("the bound (sqrt(2) + 2|c|m)^(2m) overflows double precision at m = {m}")]
    Overflow { m: usize },
    #[error("order must be at least 1")]
    InvalidOrder,
}

/// Even moments `C(m, m/2) / 2^(m/2)` of the arcsine law on `(-sqrt 2, sqrt 2)`;
/// odd moments vanish.
pub fn arcsine_moment(m: usize) -> BigRational {
    if m % 2 == 1 {
        return BigRational::zero();
    }
    let half = m / 2;
    let mut binom = BigInt::from(1);
    for j in 0..half {
        binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    BigRational::new(binom, BigInt::from(1) << half)
}

pub(crate) fn check_c(c: f64) -> Result<(), ArcsineError> {
    if c == 0.0 || !c.is_finite() {
        Err(ArcsineError::InvalidC(c))
    } else {
        Ok(())
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<(), ArcsineError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(ArcsineError::InvalidTolerance(tol))
    }
}
