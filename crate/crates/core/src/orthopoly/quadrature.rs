//! Adaptive Gauss–Legendre quadrature in double-double for vector-valued
//! integrands.

use std::sync::OnceLock;

use crate::dd::DoubleDouble;

pub(crate) const GAUSS_POINTS: usize = 20;
const MAX_DEPTH: u32 = 40;
const MAX_TAIL_SEGMENTS: usize = 10_000;
/// Panel differences below this fraction of the panel value are rounding noise.
const RELATIVE_FLOOR: f64 = 1e-28;

/// Nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static [(DoubleDouble, DoubleDouble)] {
    static RULE: OnceLock<Vec<(DoubleDouble, DoubleDouble)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_POINTS;
        (0..n)
            .map(|i| {
                let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut x = DoubleDouble::from_f64(guess);
                let mut derivative = DoubleDouble::ONE;
                for _ in 0..100 {
                    let (p, dp) = legendre_with_derivative(n, x);
                    derivative = dp;
                    let step = p / dp;
                    x -= step;
                    if step.abs().hi < 1e-32 {
                        break;
                    }
                }
                let (_, dp) = legendre_with_derivative(n, x);
                if dp.is_finite() {
                    derivative = dp;
                }
                let weight = DoubleDouble::from_f64(2.0) / ((DoubleDouble::ONE - x.sqr()) * derivative.sqr());
                (x, weight)
            })
            .collect()
    })
}

/// `(P_n(x), P_n'(x))` for the Legendre polynomial of degree `n`.
fn legendre_with_derivative(n: usize, x: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let mut prev = DoubleDouble::ONE;
    let mut cur = x;
    for k in 1..n {
        let next = (x * cur * (2 * k + 1) as f64 - prev * k as f64) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    let derivative = (x * cur - prev) * n as f64 / (x.sqr() - 1.0);
    (cur, derivative)
}

/// One Gauss–Legendre sum over `[a, b]`, accumulated into `out`.
fn rule<F>(f: &F, a: DoubleDouble, b: DoubleDouble, out: &mut [DoubleDouble], scratch: &mut [DoubleDouble])
where
    F: Fn(DoubleDouble, &mut [DoubleDouble]),
{
    out.iter_mut().for_each(|v| *v = DoubleDouble::ZERO);
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    for &(x, w) in gauss_legendre() {
        f(mid + half * x, scratch);
        for (o, s) in out.iter_mut().zip(scratch.iter()) {
            *o += *s * w;
        }
    }
    out.iter_mut().for_each(|v| *v *= half);
}

/// Result of integrating over one or more panels.
#[derive(Debug, Clone)]
pub(crate) struct Integral {
    pub values: Vec<DoubleDouble>,
    /// Largest summed panel disagreement over the components.
    pub error: f64,
}

/// Integrates `f` over `[a, b]`, bisecting panels until the one-panel and
/// two-half-panel sums agree within `tol * width / reference_width` in every
/// component.
pub(crate) fn adaptive<F>(f: &F, len: usize, a: f64, b: f64, tol: f64, reference_width: f64) -> Result<Integral, f64>
where
    F: Fn(DoubleDouble, &mut [DoubleDouble]),
{
    let mut scratch = vec![DoubleDouble::ZERO; len];
    let mut whole = vec![DoubleDouble::ZERO; len];
    let mut left = vec![DoubleDouble::ZERO; len];
    let mut right = vec![DoubleDouble::ZERO; len];
    let mut values = vec![DoubleDouble::ZERO; len];
    let mut error = 0.0f64;
    let mut failed = false;

    let mut stack = vec![(DoubleDouble::from_f64(a), DoubleDouble::from_f64(b), 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let mid = (lo + hi) * 0.5;
        rule(f, lo, hi, &mut whole, &mut scratch);
        rule(f, lo, mid, &mut left, &mut scratch);
        rule(f, mid, hi, &mut right, &mut scratch);
        let budget = tol * (hi - lo).to_f64() / reference_width;
        let mut worst = 0.0f64;
        let mut accepted = true;
        for i in 0..len {
            let fine = left[i] + right[i];
            let diff = (fine - whole[i]).abs().to_f64();
            worst = worst.max(diff);
            if diff > budget.max(RELATIVE_FLOOR * fine.abs().to_f64()) || !diff.is_finite() {
                accepted = false;
            }
        }
        if accepted || depth >= MAX_DEPTH {
            failed |= !accepted;
            error += worst;
            for i in 0..len {
                values[i] += left[i] + right[i];
            }
        } else {
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    if failed {
        Err(error)
    } else {
        Ok(Integral { values, error })
    }
}

/// Integrates `f` over `[start, start + direction * inf)` in segments of
/// width `step`, stopping once a segment contributes less than `tol / 1000`
/// in every component. Segment `j` gets the budget `tol 2^-(j+1)`.
pub(crate) fn tail<F>(f: &F, len: usize, start: f64, step: f64, tol: f64) -> Result<Integral, f64>
where
    F: Fn(DoubleDouble, &mut [DoubleDouble]),
{
    let mut values = vec![DoubleDouble::ZERO; len];
    let mut error = 0.0f64;
    let mut budget = tol / 2.0;
    for j in 0..MAX_TAIL_SEGMENTS {
        let a = start + step * j as f64;
        let (lo, hi) = if step > 0.0 { (a, a + step) } else { (a + step, a) };
        let segment = adaptive(f, len, lo, hi, budget, hi - lo)?;
        error += segment.error;
        let negligible = segment.values.iter().all(|v| v.abs().to_f64() <= tol * 1e-3);
        for (v, s) in values.iter_mut().zip(&segment.values) {
            *v += *s;
        }
        if negligible {
            error += segment.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs().to_f64()));
            return Ok(Integral { values, error });
        }
        budget /= 2.0;
    }
    Err(error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_are_roots() {
        let rule = gauss_legendre();
        let total: DoubleDouble = rule.iter().map(|(_, w)| *w).sum();
        assert!((total - 2.0).abs().to_f64() < 1e-30);
        for &(x, _) in rule {
            let (p, _) = legendre_with_derivative(GAUSS_POINTS, x);
            assert!(p.abs().to_f64() < 1e-29);
        }
    }

    #[test]
    fn polynomials_to_degree_39_are_exact() {
        let f = |x: DoubleDouble, out: &mut [DoubleDouble]| {
            out[0] = x.powi(38);
            out[1] = x.powi(39);
        };
        let r = adaptive(&f, 2, -1.0, 1.0, 1e-25, 2.0).unwrap();
        assert!((r.values[0] - DoubleDouble::from_f64(2.0) / 39.0).abs().to_f64() < 1e-30);
        assert!(r.values[1].abs().to_f64() < 1e-30);
    }

    #[test]
    fn exponential_tail() {
        let f = |x: DoubleDouble, out: &mut [DoubleDouble]| out[0] = (-x).exp();
        let r = tail(&f, 1, 10.0, 2.0, 1e-25).unwrap();
        let expected = DoubleDouble::from_f64(-10.0).exp();
        assert!((r.values[0] - expected).abs().to_f64() < 1e-24);
        let left = tail(&|x: DoubleDouble, out: &mut [DoubleDouble]| out[0] = x.exp(), 1, -10.0, -2.0, 1e-25).unwrap();
        assert!((left.values[0] - expected).abs().to_f64() < 1e-24);
    }
}
