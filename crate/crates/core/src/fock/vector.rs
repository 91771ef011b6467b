use std::collections::BTreeMap;

use super::{FockError, JacobiOperator};

/// Finitely supported vector `sum_n c_n Phi_n`; zero coefficients are never
/// stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FockVector {
    coeffs: BTreeMap<i64, f64>,
}

impl FockVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis vector `Phi_n`.
    pub fn basis(n: i64) -> Self {
        let mut v = Self::new();
        v.set(n, 1.0);
        v
    }

    pub fn set(&mut self, n: i64, value: f64) {
        if value == 0.0 {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, value);
        }
    }

    pub fn add(&mut self, n: i64, value: f64) {
        let current = self.get(n);
        self.set(n, current + value);
    }

    pub fn get(&self, n: i64) -> f64 {
        self.coeffs.get(&n).copied().unwrap_or(0.0)
    }

    /// `(min, max)` of the support, `None` for the zero vector.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn inner(&self, other: &FockVector) -> f64 {
        self.iter().map(|(n, c)| c * other.get(n)).sum()
    }
}

/// `(A + B + C) v` with `A Phi_n = sqrt(omega_{n-1/2}) Phi_{n-1}`,
/// `B Phi_n = alpha_n Phi_n`, `C Phi_n = sqrt(omega_{n+1/2}) Phi_{n+1}`.
pub fn apply_x<S: JacobiOperator + ?Sized>(seq: &S, v: &FockVector) -> Result<FockVector, FockError> {
    apply_affine(seq, v, 0.0, 1.0)
}

/// `((X - shift) v) / scale`.
pub(crate) fn apply_affine<S: JacobiOperator + ?Sized>(
    seq: &S,
    v: &FockVector,
    shift: f64,
    scale: f64,
) -> Result<FockVector, FockError> {
    let min = seq.min_index();
    let mut out = FockVector::new();
    for (n, c) in v.iter() {
        if let Some(min) = min {
            if n < min {
                return Err(FockError::IndexUnderflow(n));
            }
        }
        let down = if min == Some(n) { 0.0 } else { seq.gap_f64(n - 1)? };
        let up = seq.gap_f64(n)?;
        let diag = seq.diag_f64(n)? - shift;
        if down != 0.0 {
            out.add(n - 1, c * down.sqrt() / scale);
        }
        out.add(n, c * diag / scale);
        if up != 0.0 {
            out.add(n + 1, c * up.sqrt() / scale);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TwoSidedJacobiSequence;
    use crate::jacobi::catalog_sequence;
    use crate::scalar::{ParamMap, Scalar};

    #[test]
    fn gaussian_vacuum() {
        let seq = catalog_sequence("gaussian", &ParamMap::new()).unwrap();
        let v = apply_x(&seq, &FockVector::basis(0)).unwrap();
        assert_eq!(v, FockVector::basis(1));
    }

    #[test]
    fn free_chain_with_drift() {
        let c = 0.3;
        let chain = TwoSidedJacobiSequence::free_chain(Scalar::Float(c));
        let v = apply_x(&chain, &FockVector::basis(5)).unwrap();
        assert_eq!(v.support(), Some((4, 6)));
        assert!((v.get(4) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((v.get(5) - 5.0 * c).abs() < 1e-15);
        assert!((v.get(6) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn exponential_first_level() {
        let seq = catalog_sequence("exponential", &ParamMap::new()).unwrap();
        let v = apply_x(&seq, &FockVector::basis(1)).unwrap();
        assert_eq!((v.get(0), v.get(1), v.get(2)), (1.0, 3.0, 2.0));
        assert_eq!(v.support(), Some((0, 2)));
    }

    #[test]
    fn negative_index_in_one_sided_space() {
        let seq = catalog_sequence("gaussian", &ParamMap::new()).unwrap();
        assert_eq!(apply_x(&seq, &FockVector::basis(-1)), Err(FockError::IndexUnderflow(-1)));
    }

    #[test]
    fn band_support_grows_by_one_per_step() {
        let seq = catalog_sequence("exponential", &ParamMap::new()).unwrap();
        for k in [0i64, 3, 20] {
            let mut v = FockVector::basis(k);
            for m in 1..=12i64 {
                v = apply_x(&seq, &v).unwrap();
                let (lo, hi) = v.support().unwrap();
                assert!(lo >= (k - m).max(0) && hi <= k + m, "k={k} m={m}: {lo}..{hi}");
            }
        }
        let chain = TwoSidedJacobiSequence::free_chain(Scalar::ratio(1, 2));
        let mut v = FockVector::basis(0);
        for m in 1..=10i64 {
            v = apply_x(&chain, &v).unwrap();
            assert_eq!(v.support(), Some((-m, m)));
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut v = FockVector::basis(2);
        v.add(2, -1.0);
        assert!(v.is_zero());
        assert_eq!(v.support(), None);
    }
}
