use num_rational::BigRational;
use num_traits::{Num, One};

use super::{JacobiError, JacobiSequence};
use crate::scalar::Scalar;

/// Chebyshev's algorithm on ordinary moments. `moments` holds
/// `mu_0 = 1, mu_1, ..., mu_2L`. Returns `(alpha_0..alpha_{L-1},
/// omega_{1/2}..omega_{L-1/2})`.
fn chebyshev<T>(moments: &[T]) -> Result<(Vec<T>, Vec<T>), JacobiError>
where
    T: Clone + Num + PartialOrd,
{
    let depth = (moments.len() - 1) / 2;
    let mut alpha = Vec::with_capacity(depth);
    let mut omega = Vec::with_capacity(depth);

    // sigma_{k-2}, sigma_{k-1}, indexed by l directly.
    let mut older: Vec<T> = vec![T::zero(); moments.len()];
    let mut prev: Vec<T> = moments.to_vec();
    let mut a_prev = moments[1].clone() / moments[0].clone();
    let mut b_prev = moments[0].clone();
    alpha.push(a_prev.clone());

    for k in 1..=depth {
        let mut cur: Vec<T> = vec![T::zero(); moments.len()];
        for l in k..=(2 * depth - k) {
            cur[l] = prev[l + 1].clone() - a_prev.clone() * prev[l].clone() - b_prev.clone() * older[l].clone();
        }
        if cur[k].partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(JacobiError::HankelNotPositive { depth: k });
        }
        let b = cur[k].clone() / prev[k - 1].clone();
        omega.push(b.clone());
        if k < depth {
            let a = cur[k + 1].clone() / cur[k].clone() - prev[k].clone() / prev[k - 1].clone();
            alpha.push(a.clone());
            a_prev = a;
        }
        b_prev = b;
        older = prev;
        prev = cur;
    }
    Ok((alpha, omega))
}

fn check_count(len: usize) -> Result<(), JacobiError> {
    if len < 2 || !len.is_multiple_of(2) {
        Err(JacobiError::BadMomentCount(len))
    } else {
        Ok(())
    }
}

/// Recovers the Jacobi-sequence prefix of length `L` from the moments
/// `M_1..M_2L` of a probability measure (`M_0 = 1` is implied), in exact
/// arithmetic.
pub fn jacobi_from_moments(moments: &[BigRational]) -> Result<JacobiSequence, JacobiError> {
    check_count(moments.len())?;
    let mut all = Vec::with_capacity(moments.len() + 1);
    all.push(BigRational::one());
    all.extend_from_slice(moments);
    let (alpha, omega) = chebyshev(&all)?;
    Ok(JacobiSequence::tabulated(
        omega.into_iter().map(Scalar::Exact).collect(),
        alpha.into_iter().map(Scalar::Exact).collect(),
    ))
}

/// Float variant of [`jacobi_from_moments`]; ill-conditioned beyond a few
/// levels, so prefer exact input.
pub fn jacobi_from_moments_f64(moments: &[f64]) -> Result<JacobiSequence, JacobiError> {
    check_count(moments.len())?;
    let mut all = Vec::with_capacity(moments.len() + 1);
    all.push(1.0);
    all.extend_from_slice(moments);
    let (alpha, omega) = chebyshev(&all)?;
    Ok(JacobiSequence::tabulated(
        omega.into_iter().map(Scalar::Float).collect(),
        alpha.into_iter().map(Scalar::Float).collect(),
    ))
}
