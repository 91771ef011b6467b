//! Acceptance criteria, one pass/fail line each. Exits nonzero if any fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use fockspace::arcsine::{
    c_to_zero_check, carleman_bound_check, discrete_arcsine, discrete_moment, fourier_coefficient, weight_formula_f64,
    DEFAULT_SERIES_TOL,
};
use fockspace::fock::{moment, moment_sequence, normalized_moment, shifted_two_sided, two_sided_moment, MomentValue};
use fockspace::jacobi::{catalog_sequence, jacobi_from_moments, JacobiSequence};
use fockspace::orthopoly::{quadrature_moments, MeasureSpec};
use fockspace::rac::{classify, Classification, DEFAULT_SCHEDULE, DEFAULT_TOL};
use fockspace::scalar::{Mode, ParamMap, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn f64_of(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

fn catalog(name: &str, param: Option<(&str, Scalar)>) -> JacobiSequence {
    let params: ParamMap = param.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    catalog_sequence(name, &params).unwrap()
}

fn rac1_catalog() -> Vec<JacobiSequence> {
    vec![
        catalog("gaussian", None),
        catalog("uniform", None),
        catalog("exponential", None),
        catalog("q_gaussian", Some(("q", Scalar::ratio(-1, 2)))),
        catalog("q_gaussian", Some(("q", Scalar::from_int(0)))),
        catalog("q_gaussian", Some(("q", Scalar::ratio(1, 2)))),
        catalog("q_gaussian", Some(("q", Scalar::from_int(1)))),
    ]
}

/// Arcsine moments from `C(m, m/2) / 2^(m/2)` by direct products.
fn arcsine_oracle(m: usize) -> BigRational {
    if m % 2 == 1 {
        return BigRational::zero();
    }
    let mut binom = BigInt::one();
    for i in 0..m / 2 {
        binom = binom * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    BigRational::new(binom, BigInt::one() << (m / 2))
}

fn exact_normalized(seq: &JacobiSequence, k: u64, m: usize) -> Result<BigRational, String> {
    match normalized_moment(seq, k, m, Mode::Exact).map_err(err)? {
        MomentValue::Exact(r) => Ok(r),
        other => Err(format!("expected a rational value, got {other}")),
    }
}

/// Weighted Motzkin paths of length `m` from 0 back to 0 on the two-sided
/// chain with `omega = 1/2` and `alpha_n = c n`: an up step carries the
/// factor `omega`, a level step at `n` carries `c n`, a down step carries 1.
fn chain_walks(c: f64, m: usize) -> f64 {
    fn go(c: f64, pos: i64, left: usize) -> f64 {
        if left == 0 {
            return if pos == 0 { 1.0 } else { 0.0 };
        }
        if pos.unsigned_abs() as usize > left {
            return 0.0;
        }
        0.5 * go(c, pos + 1, left - 1) + go(c, pos - 1, left - 1) + c * pos as f64 * go(c, pos, left - 1)
    }
    go(c, 0, m)
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let g = catalog("gaussian", None);
    let levels = [10i64, 100, 1000];
    let mut previous = [f64::INFINITY; 9];
    for &k in &levels {
        let fourth = exact_normalized(&g, k as u64, 4)?;
        let closed = BigRational::new((6 * k * k + 6 * k + 3).into(), ((2 * k + 1) * (2 * k + 1)).into());
        check(fourth == closed, || format!("k={k}: M_4 = {fourth}, closed form {closed}"))?;
        let gap = (&fourth - ratio(3, 2)).abs();
        check(gap == ratio(3, 2) / int((2 * k + 1) * (2 * k + 1)), || format!("k={k}: error {gap}"))?;
        for (m, prev) in previous.iter_mut().enumerate().skip(1) {
            let e = f64_of(&(exact_normalized(&g, k as u64, m)? - arcsine_oracle(m)).abs());
            check(e <= *prev, || format!("m={m}: error grows at k={k}"))?;
            *prev = e;
        }
    }
    let at_1000 = f64_of(&(exact_normalized(&g, 1000, 4)? - ratio(3, 2)).abs());
    check(at_1000 <= 4e-7, || format!("|M_4(1000) - 1.5| = {at_1000:e}"))?;
    let elapsed = start.elapsed().as_secs_f64();
    check(elapsed < 1.0, || format!("took {elapsed:.2}s"))?;
    Ok(format!("M_4 exact for k in {{10, 100, 1000}}, |M_4(1000) - 1.5| = {at_1000:.3e}, {elapsed:.2}s"))
}

fn ac2() -> Outcome {
    for seq in rac1_catalog() {
        let report = classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).map_err(err)?;
        check(report.classification == Classification::Rac1, || format!("{seq}: {}", report.classification))?;
    }
    let mut worst = 0.0f64;
    for (n, d) in [(1i64, 10i64), (-1, 10), (1, 2), (-1, 2), (2, 1), (-2, 1)] {
        let seq = catalog("free_shift", Some(("c", Scalar::ratio(n, d))));
        let report = classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).map_err(err)?;
        let c = n as f64 / d as f64;
        match report.classification {
            Classification::Rac2 { c: estimate } if (estimate - c).abs() <= 1e-9 => worst = worst.max((estimate - c).abs()),
            other => return Err(format!("free_shift({c}): {other}")),
        }
    }
    let geometric = JacobiSequence::parse_expressions("2^n", "0", ParamMap::new())?;
    let report = classify(&geometric, &DEFAULT_SCHEDULE, DEFAULT_TOL).map_err(err)?;
    check(report.classification == Classification::Neither, || format!("2^n: {}", report.classification))?;
    Ok(format!("7 catalog entries RAC1, 6 free_shift RAC2 (max |c - c_hat| = {worst:.1e}), 2^n NEITHER"))
}

fn ac3() -> Outcome {
    let mut worst = 0.0f64;
    for seq in rac1_catalog() {
        let levels = [100u64, 1000, 10_000]
            .iter()
            .map(|&k| moment_sequence(&seq, k, 8, true, Mode::Exact).map_err(err))
            .collect::<Result<Vec<_>, _>>()?;
        for m in [4usize, 6, 8] {
            let errors = levels
                .iter()
                .map(|level| match level.get(m) {
                    Some(MomentValue::Exact(v)) => Ok((v - arcsine_oracle(m)).abs()),
                    other => Err(format!("{seq} m={m}: expected a rational value, got {other:?}")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            check(errors.windows(2).all(|w| w[1] <= w[0]), || format!("{seq} m={m}: errors not decreasing"))?;
            let last = f64_of(&errors[2]);
            worst = worst.max(last);
            check(last <= 1e-3, || format!("{seq} m={m}: error {last:e} at k = 1e4"))?;
        }
    }
    Ok(format!("errors non-increasing over k = 1e2, 1e3, 1e4; largest at 1e4 is {worst:.3e}"))
}

fn ac4() -> Outcome {
    for c in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).map_err(err)?;
        let mass = law.total_mass();
        check((mass - 1.0).abs() <= 1e-12, || format!("c={c}: mass {mass}"))?;
        for n in 1..=law.n_trunc as i64 {
            check(law.weight(n) == law.weight(-n), || format!("c={c}: w_{n} != w_-{n}"))?;
        }
        let m2 = discrete_moment(&law, 2).map_err(err)?.value;
        check((m2 - 1.0).abs() <= 1e-10, || format!("c={c}: M_2 = {m2}"))?;
        let m4 = discrete_moment(&law, 4).map_err(err)?.value;
        let walks = chain_walks(c, 4);
        check((walks - (1.5 + c * c)).abs() <= 1e-12, || format!("c={c}: walk count {walks}"))?;
        check((m4 - walks).abs() <= 1e-9, || format!("c={c}: M_4 = {m4}, walks {walks}"))?;
        for n in 0..=law.n_trunc as u64 {
            let w = weight_formula_f64(n, c).map_err(err)?;
            if w < 1e-280 {
                break;
            }
            let a = fourier_coefficient(n as i64, c, 1e-16).map_err(err)?;
            check((w - a * a).abs() <= 1e-12 * w, || format!("c={c} n={n}: {w} vs {}", a * a))?;
        }
    }
    Ok("mass, symmetry, M_2, M_4 and both weight routes for c in {0.1, 0.5, 1, 2, 10}".into())
}

fn ac5() -> Outcome {
    let mut worst = 0.0f64;
    for (n, d) in [(3i64, 10i64), (1, 1)] {
        let c = n as f64 / d as f64;
        let seq = catalog("free_shift", Some(("c", Scalar::ratio(n, d))));
        let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).map_err(err)?;
        for m in 1..=10usize {
            let limit = discrete_moment(&law, m).map_err(err)?.value;
            for k in [m as u64, 2 * m as u64, 40] {
                let value = normalized_moment(&seq, k, m, Mode::Exact).map_err(err)?.to_f64();
                let gap = (value - limit).abs();
                worst = worst.max(gap);
                check(gap <= 1e-10, || format!("c={c} k={k} m={m}: {value} vs {limit}"))?;
            }
        }
    }
    Ok(format!("largest gap {worst:.2e} over c in {{0.3, 1}}, m <= 10, k in {{m, 2m, 40}}"))
}

fn ac6() -> Outcome {
    let cs = [1.0, 0.5, 0.25, 0.125];
    for m in [2usize, 4, 6, 8] {
        let mut previous = f64::INFINITY;
        for c in cs {
            let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).map_err(err)?;
            let value = discrete_moment(&law, m).map_err(err)?.value;
            let gap = (value - f64_of(&arcsine_oracle(m))).abs();
            check(gap <= previous + 1e-12, || format!("m={m}: error grows at c={c}"))?;
            previous = gap;
            if m == 4 {
                check((gap - c * c).abs() <= 1e-9, || format!("c={c}: M_4 error {gap} vs c^2"))?;
            }
        }
    }
    let table = c_to_zero_check(&cs, 8, DEFAULT_SERIES_TOL).map_err(err)?;
    check(table.non_increasing, || "library table reports increasing errors".into())?;
    Ok("even moment errors non-increasing down c = 1, 1/2, 1/4, 1/8; M_4 error = c^2".into())
}

fn ac7() -> Outcome {
    for c in [0.5, 1.0] {
        let report = carleman_bound_check(c, 15).map_err(err)?;
        let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).map_err(err)?;
        for row in &report.rows {
            let m = row.m as f64;
            let direct = discrete_moment(&law, 2 * row.m).map_err(err)?.value;
            let rel = (row.even_moment - direct).abs() / direct;
            check(rel <= 1e-9, || format!("c={c} m={}: b_0 = {} vs {direct}", row.m, row.even_moment))?;
            let even_bound = (2f64.sqrt() + 2.0 * c * m).powf(2.0 * m);
            check(row.even_moment <= even_bound, || format!("c={c} m={}: even bound fails", row.m))?;
            let abs_bound = (2f64.sqrt() + c * m).powf(m);
            check(row.abs_sum <= abs_bound, || format!("c={c} m={}: absolute sum bound fails", row.m))?;
        }
        check(report.rows.len() == 15, || format!("c={c}: {} rows", report.rows.len()))?;
    }
    Ok("b_0^(2m) matches the weights and both bounds hold for c in {0.5, 1}, m <= 15".into())
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for measure in [MeasureSpec::Gaussian, MeasureSpec::Uniform, MeasureSpec::Exponential] {
        let seq = measure.sequence();
        for n in 0..=10u64 {
            let quad = quadrature_moments(measure, &seq, n, 10).map_err(err)?;
            for (m, q) in quad.iter().enumerate().skip(1) {
                let exact = moment(&seq, n, m, Mode::Exact).map_err(err)?;
                let exact = exact.as_exact().ok_or("expected an exact moment")?.clone();
                let diff = f64_of(&(q.to_rational().ok_or("non-finite quadrature")? - exact)).abs();
                worst = worst.max(diff);
                check(diff <= 1e-8, || format!("{} n={n} m={m}: {diff:e}", measure.name()))?;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(elapsed < 60.0, || format!("took {elapsed:.1}s"))?;
    Ok(format!("largest absolute difference {worst:.2e}, {elapsed:.2}s"))
}

fn ac9() -> Outcome {
    let mut sequences = rac1_catalog();
    for (n, d) in [(3i64, 10i64), (-2, 1)] {
        sequences.push(catalog("free_shift", Some(("c", Scalar::ratio(n, d)))));
    }
    let mut worst = 0.0f64;
    for seq in &sequences {
        for k in [0u64, 1, 10, 100, 1000, 10_000] {
            let exact_all = moment_sequence(seq, k, 12, false, Mode::Exact).map_err(err)?;
            let float_all = moment_sequence(seq, k, 12, false, Mode::Float).map_err(err)?;
            for m in 1..=12usize {
                let exact = f64_of(exact_all.get(m).and_then(MomentValue::as_exact).ok_or("expected an exact moment")?);
                let float = float_all.get(m).ok_or("missing order")?.to_f64();
                let rel = if exact == 0.0 { float.abs() } else { (exact - float).abs() / exact.abs() };
                worst = worst.max(rel);
                check(rel <= 1e-10, || format!("{seq} k={k} m={m}: {exact} vs {float}"))?;
            }
        }
    }
    for seq in &sequences {
        let moments = (1..=16usize)
            .map(|m| moment(seq, 0, m, Mode::Exact).map_err(err).and_then(|s| s.as_exact().cloned().ok_or("inexact".into())))
            .collect::<Result<Vec<_>, String>>()?;
        let rebuilt = jacobi_from_moments(&moments).map_err(err)?;
        for n in 0..8u64 {
            let same = rebuilt.omega(n, Mode::Exact).map_err(err)? == seq.omega(n, Mode::Exact).map_err(err)?
                && rebuilt.alpha(n, Mode::Exact).map_err(err)? == seq.alpha(n, Mode::Exact).map_err(err)?;
            check(same, || format!("{seq}: round trip differs at n={n}"))?;
        }
    }
    // The two-sided chain agrees with its one-sided truncation away from the edge.
    let chain = catalog("free_shift", Some(("c", Scalar::ratio(1, 2))));
    let two_sided = shifted_two_sided(&chain, 20);
    for m in 1..=12usize {
        let a = two_sided_moment(&two_sided, m, Mode::Exact).map_err(err)?;
        let b = two_sided_moment(&two_sided, m, Mode::Float).map_err(err)?;
        let (a, b) = (a.to_f64(), b.to_f64());
        check((a - b).abs() <= 1e-10 * a.abs().max(1.0), || format!("two-sided m={m}: {a} vs {b}"))?;
    }
    Ok(format!("largest relative difference {worst:.2e}; moments M_1..M_16 rebuild all catalog sequences to depth 8"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 harmonic oscillator arcsine convergence", ac1),
        ("AC2 catalog classification", ac2),
        ("AC3 limit-table convergence", ac3),
        ("AC4 discrete arcsine law", ac4),
        ("AC5 moment-convergence equality", ac5),
        ("AC6 c -> 0 limit", ac6),
        ("AC7 Carleman bound", ac7),
        ("AC8 isometry oracle", ac8),
        ("AC9 exact/float agreement and round trip", ac9),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("{} criteria, {failures} failed", criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
