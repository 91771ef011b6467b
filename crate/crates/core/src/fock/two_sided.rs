use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FockError, JacobiOperator};
use crate::jacobi::JacobiSequence;
use crate::scalar::{rational_sqrt, rational_to_f64, Scalar};

/// Boundary behaviour of a two-sided sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `omega` vanishes on every gap below index `N` and `alpha` below `N`.
    Cutoff(i64),
    StrictlyPositive,
}

/// Jacobi coefficients indexed by all integers.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoSidedJacobiSequence {
    /// `omega(n) = base.omega(n + shift)`, `alpha(n) = base.alpha(n + shift)`,
    /// zero below `-shift`.
    Shifted { base: JacobiSequence, shift: u64 },
    /// The level-`level` normalized variable re-indexed so that the level
    /// sits at 0: `omega(n) = omega_{n+k+1/2} / V` and
    /// `alpha(n) = (alpha_{n+k} - alpha_k) / sqrt(V)` with
    /// `V = omega_{k+1/2} + omega_{k-1/2}`.
    Normalized { base: JacobiSequence, level: u64 },
    /// `omega = 1/2` everywhere and `alpha(n) = c n`.
    FreeChain { c: Scalar },
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

impl TwoSidedJacobiSequence {
    pub fn free_chain(c: Scalar) -> Self {
        TwoSidedJacobiSequence::FreeChain { c }
    }

    pub fn normalized(base: JacobiSequence, level: u64) -> Self {
        TwoSidedJacobiSequence::Normalized { base, level }
    }

    pub fn condition(&self) -> Condition {
        match self {
            TwoSidedJacobiSequence::Shifted { shift, .. } => Condition::Cutoff(-(*shift as i64)),
            TwoSidedJacobiSequence::Normalized { level, .. } => Condition::Cutoff(-(*level as i64)),
            TwoSidedJacobiSequence::FreeChain { .. } => Condition::StrictlyPositive,
        }
    }

    /// Index into the base sequence, `None` below the cutoff.
    fn base_index(&self, n: i64) -> Option<u64> {
        let shift = match self {
            TwoSidedJacobiSequence::Shifted { shift, .. } => *shift,
            TwoSidedJacobiSequence::Normalized { level, .. } => *level,
            TwoSidedJacobiSequence::FreeChain { .. } => return None,
        };
        let i = n + shift as i64;
        (i >= 0).then_some(i as u64)
    }

    fn variance_exact(base: &JacobiSequence, level: u64) -> Result<BigRational, FockError> {
        let below = if level == 0 { BigRational::zero() } else { base.omega_exact(level - 1)? };
        Ok(base.omega_exact(level)? + below)
    }

    fn variance_f64(base: &JacobiSequence, level: u64) -> Result<f64, FockError> {
        let below = if level == 0 { 0.0 } else { base.omega_f64(level - 1)? };
        Ok(base.omega_f64(level)? + below)
    }
}

impl JacobiOperator for TwoSidedJacobiSequence {
    fn gap_exact(&self, n: i64) -> Result<BigRational, FockError> {
        match self {
            TwoSidedJacobiSequence::FreeChain { c } => {
                c.as_exact().ok_or_else(|| FockError::NotExact(self.to_string()))?;
                Ok(half())
            }
            TwoSidedJacobiSequence::Shifted { base, .. } => match self.base_index(n) {
                Some(i) => Ok(base.omega_exact(i)?),
                None => Ok(BigRational::zero()),
            },
            TwoSidedJacobiSequence::Normalized { base, level } => match self.base_index(n) {
                Some(i) => Ok(base.omega_exact(i)? / Self::variance_exact(base, *level)?),
                None => Ok(BigRational::zero()),
            },
        }
    }

    fn gap_f64(&self, n: i64) -> Result<f64, FockError> {
        match self {
            TwoSidedJacobiSequence::FreeChain { .. } => Ok(0.5),
            TwoSidedJacobiSequence::Shifted { base, .. } => match self.base_index(n) {
                Some(i) => Ok(base.omega_f64(i)?),
                None => Ok(0.0),
            },
            TwoSidedJacobiSequence::Normalized { base, level } => match self.base_index(n) {
                Some(i) => Ok(base.omega_f64(i)? / Self::variance_f64(base, *level)?),
                None => Ok(0.0),
            },
        }
    }

    fn diag_exact(&self, n: i64) -> Result<BigRational, FockError> {
        match self {
            TwoSidedJacobiSequence::FreeChain { c } => {
                let c = c.as_exact().ok_or_else(|| FockError::NotExact(self.to_string()))?;
                Ok(c * BigRational::from_integer(BigInt::from(n)))
            }
            TwoSidedJacobiSequence::Shifted { base, .. } => match self.base_index(n) {
                Some(i) => Ok(base.alpha_exact(i)?),
                None => Ok(BigRational::zero()),
            },
            TwoSidedJacobiSequence::Normalized { base, level } => match self.base_index(n) {
                Some(i) => {
                    let delta = base.alpha_exact(i)? - base.alpha_exact(*level)?;
                    if delta.is_zero() {
                        return Ok(delta);
                    }
                    let variance = Self::variance_exact(base, *level)?;
                    let root = rational_sqrt(&variance).ok_or_else(|| {
                        FockError::NotExact(format!(
                            "normalizer sqrt({}) is irrational",
                            rational_to_f64(&variance)
                        ))
                    })?;
                    Ok(delta / root)
                }
                None => Ok(BigRational::zero()),
            },
        }
    }

    fn diag_f64(&self, n: i64) -> Result<f64, FockError> {
        match self {
            TwoSidedJacobiSequence::FreeChain { c } => Ok(c.to_f64() * n as f64),
            TwoSidedJacobiSequence::Shifted { base, .. } => match self.base_index(n) {
                Some(i) => Ok(base.alpha_f64(i)?),
                None => Ok(0.0),
            },
            TwoSidedJacobiSequence::Normalized { base, level } => match self.base_index(n) {
                Some(i) => {
                    let delta = base.alpha_f64(i)? - base.alpha_f64(*level)?;
                    Ok(delta / Self::variance_f64(base, *level)?.sqrt())
                }
                None => Ok(0.0),
            },
        }
    }

    fn min_index(&self) -> Option<i64> {
        None
    }
}

impl fmt::Display for TwoSidedJacobiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoSidedJacobiSequence::Shifted { base, shift } => write!(f, "{base} shifted by {shift}"),
            TwoSidedJacobiSequence::Normalized { base, level } => write!(f, "{base} normalized at level {level}"),
            TwoSidedJacobiSequence::FreeChain { c } => write!(f, "free chain (c = {c})"),
        }
    }
}

/// Re-indexes a one-sided sequence so that level `k` becomes index 0.
pub fn shifted_two_sided(seq: &JacobiSequence, k: u64) -> TwoSidedJacobiSequence {
    TwoSidedJacobiSequence::Shifted { base: seq.clone(), shift: k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::catalog_sequence;
    use crate::scalar::ParamMap;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_shift() {
        let gaussian = catalog_sequence("gaussian", &ParamMap::new()).unwrap();
        let t = shifted_two_sided(&gaussian, 0);
        assert_eq!(t.condition(), Condition::Cutoff(0));
        for n in 0..20 {
            assert_eq!(t.gap_exact(n).unwrap(), gaussian.omega_exact(n as u64).unwrap());
        }
        assert_eq!(t.gap_exact(-1).unwrap(), rat(0, 1));
    }

    #[test]
    fn shifted_free_shift_alpha() {
        let mut p = ParamMap::new();
        p.insert("c".into(), Scalar::ratio(3, 10));
        let seq = catalog_sequence("free_shift", &p).unwrap();
        let t = shifted_two_sided(&seq, 7);
        assert_eq!(t.condition(), Condition::Cutoff(-7));
        for n in -7..10i64 {
            assert_eq!(t.diag_exact(n).unwrap(), rat(3 * (n + 7), 10));
        }
        assert_eq!(t.diag_exact(-8).unwrap(), rat(0, 1));
        assert_eq!(t.gap_exact(-8).unwrap(), rat(0, 1));
        assert_eq!(t.gap_exact(-7).unwrap(), rat(1, 2));
    }

    #[test]
    fn normalized_exponential_needs_square_variance() {
        let exp = catalog_sequence("exponential", &ParamMap::new()).unwrap();
        // V at level 1 is 4 + 1 = 5, irrational root.
        let t = TwoSidedJacobiSequence::normalized(exp.clone(), 1);
        assert_eq!(t.gap_exact(0).unwrap(), rat(4, 5));
        assert!(matches!(t.diag_exact(1), Err(FockError::NotExact(_))));
        assert_eq!(t.diag_exact(0).unwrap(), rat(0, 1));
        // Level 0: V = 1.
        let t = TwoSidedJacobiSequence::normalized(exp, 0);
        assert_eq!(t.diag_exact(2).unwrap(), rat(4, 1));
    }

    #[test]
    fn free_chain_coefficients() {
        let t = TwoSidedJacobiSequence::free_chain(Scalar::ratio(1, 4));
        assert_eq!(t.condition(), Condition::StrictlyPositive);
        assert_eq!(t.gap_exact(-100).unwrap(), rat(1, 2));
        assert_eq!(t.diag_exact(-8).unwrap(), rat(-2, 1));
        let t = TwoSidedJacobiSequence::free_chain(Scalar::Float(0.1));
        assert!(t.diag_exact(1).is_err());
        assert!((t.diag_f64(3).unwrap() - 0.3).abs() < 1e-15);
    }
}
