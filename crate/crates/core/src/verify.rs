//! A self-contained suite of cross-checks between the engines: closed forms,
//! walk counting against vector propagation, exact against float
//! arithmetic, walk moments against quadrature, and the discrete arcsine
//! identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arcsine::{
    arcsine_moment, c_to_zero_check, carleman_bound_check, discrete_arcsine, discrete_moment, fourier_coefficient,
    weight_formula_f64, DEFAULT_SERIES_TOL,
};
use crate::fock::{apply_x, moment, normalized_moment, FockVector};
use crate::jacobi::{catalog_sequence, jacobi_from_moments, JacobiSequence};
use crate::orthopoly::{gram_matrix, quadrature_moments, MeasureSpec};
use crate::rac::{classify, Classification, DEFAULT_SCHEDULE, DEFAULT_TOL};
use crate::scalar::{rational_to_f64, Mode, ParamMap, Scalar};

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Perturbs one computed value so that the suite must fail.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Outcome = Result<String, String>;
type NamedCheck<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog(name: &str, param: Option<(&str, Scalar)>) -> JacobiSequence {
    let params: ParamMap = param.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    catalog_sequence(name, &params).expect("catalog entry with valid parameters")
}

fn all_catalog() -> Vec<JacobiSequence> {
    vec![
        catalog("gaussian", None),
        catalog("uniform", None),
        catalog("exponential", None),
        catalog("q_gaussian", Some(("q", Scalar::ratio(-1, 2)))),
        catalog("q_gaussian", Some(("q", Scalar::ratio(1, 2)))),
        catalog("q_gaussian", Some(("q", Scalar::from_int(1)))),
        catalog("free_shift", Some(("c", Scalar::ratio(1, 2)))),
    ]
}

fn exact_value(s: Scalar) -> Result<BigRational, String> {
    s.as_exact().cloned().ok_or_else(|| "expected an exact value".to_string())
}

fn gaussian_fourth_moment(fault: bool) -> Outcome {
    let g = catalog("gaussian", None);
    for k in [0u64, 10, 100, 1000] {
        let mut got = exact_value(moment(&g, k, 4, Mode::Exact).map_err(|e| e.to_string())?)?;
        if fault && k == 1000 {
            got += BigRational::from_integer(BigInt::from(1));
        }
        let k = BigInt::from(k);
        let expected = BigRational::from_integer(&k * &k * 6 + &k * 6 + 3);
        ensure(got == expected, || format!("k={k}: {got} != {expected}"))?;
    }
    Ok("M_4(k) = 6k^2+6k+3 for k in {0, 10, 100, 1000}".into())
}

fn walk_vs_vectors() -> Outcome {
    let k = 6u64;
    for seq in all_catalog() {
        let mut v = FockVector::basis(k as i64);
        for m in 1..=10usize {
            v = apply_x(&seq, &v).map_err(|e| e.to_string())?;
            let direct = v.get(k as i64);
            let walk = moment(&seq, k, m, Mode::Float).map_err(|e| e.to_string())?.to_f64();
            ensure((walk - direct).abs() <= 1e-12 * direct.abs().max(1.0), || {
                format!("{seq} m={m}: walk {walk} vs vector {direct}")
            })?;
        }
    }
    Ok("walk moments equal <X^m e_6, e_6> for m <= 10".into())
}

fn exact_float_agreement() -> Outcome {
    let mut worst = 0.0f64;
    for seq in all_catalog() {
        for k in [0u64, 100, 1000] {
            for m in 1..=12usize {
                let exact = moment(&seq, k, m, Mode::Exact).map_err(|e| e.to_string())?.to_f64();
                let float = moment(&seq, k, m, Mode::Float).map_err(|e| e.to_string())?.to_f64();
                let rel = (exact - float).abs() / exact.abs().max(f64::MIN_POSITIVE);
                let rel = if exact == 0.0 { float.abs() } else { rel };
                worst = worst.max(rel);
                ensure(rel <= 1e-10, || format!("{seq} k={k} m={m}: {exact} vs {float}"))?;
            }
        }
    }
    Ok(format!("largest relative difference {worst:.2e}"))
}

fn isometry_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for measure in MeasureSpec::ALL {
        let seq = measure.sequence();
        for n in 0..=10u64 {
            let quad = quadrature_moments(measure, &seq, n, 10).map_err(|e| e.to_string())?;
            for (m, q) in quad.iter().enumerate().skip(1) {
                let exact = exact_value(moment(&seq, n, m, Mode::Exact).map_err(|e| e.to_string())?)?;
                let q = q.to_rational().ok_or("non-finite quadrature value")?;
                let diff = rational_to_f64(&(q - exact)).abs();
                worst = worst.max(diff);
                ensure(diff <= 1e-8, || format!("{} n={n} m={m}: difference {diff:e}", measure.name()))?;
            }
        }
    }
    Ok(format!("largest absolute difference {worst:.2e}"))
}

fn orthonormality() -> Outcome {
    for measure in MeasureSpec::ALL {
        let gram = gram_matrix(measure, &measure.sequence(), 10).map_err(|e| e.to_string())?;
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                ensure((v - expected).abs() <= 1e-9, || format!("{} <P_{i}, P_{j}> = {v}", measure.name()))?;
            }
        }
    }
    Ok("<P_i, P_j> = delta_ij for i, j <= 10".into())
}

fn discrete_arcsine_identities() -> Outcome {
    for c in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).map_err(|e| e.to_string())?;
        let mass = law.total_mass();
        ensure((mass - 1.0).abs() <= 1e-12, || format!("c={c}: total mass {mass}"))?;
        for n in 1..20i64 {
            ensure(law.weight(n) == law.weight(-n), || format!("c={c}: w_{n} != w_-{n}"))?;
        }
        let m2 = discrete_moment(&law, 2).map_err(|e| e.to_string())?.value;
        ensure((m2 - 1.0).abs() <= 1e-10, || format!("c={c}: second moment {m2}"))?;
        let m4 = discrete_moment(&law, 4).map_err(|e| e.to_string())?.value;
        ensure((m4 - (1.5 + c * c)).abs() <= 1e-9, || format!("c={c}: fourth moment {m4}"))?;
        for n in 0..10u64 {
            let a = fourier_coefficient(n as i64, c, 1e-16).map_err(|e| e.to_string())?;
            let w = weight_formula_f64(n, c).map_err(|e| e.to_string())?;
            if w > 1e-280 {
                ensure((w - a * a).abs() <= 1e-12 * w, || format!("c={c} n={n}: weight {w} vs a_n^2 {}", a * a))?;
            }
        }
    }
    Ok("mass, symmetry, M_2 = 1, M_4 = 3/2 + c^2 and both weight routes for c in {0.1, 0.5, 1, 2, 10}".into())
}

fn moment_convergence_equality() -> Outcome {
    for (num, den) in [(3i64, 10i64), (1, 1)] {
        let c = num as f64 / den as f64;
        let seq = catalog("free_shift", Some(("c", Scalar::ratio(num, den))));
        let law = discrete_arcsine(c, DEFAULT_SERIES_TOL).map_err(|e| e.to_string())?;
        for m in 1..=10usize {
            let walk = normalized_moment(&seq, 12, m, Mode::Exact).map_err(|e| e.to_string())?.to_f64();
            let limit = discrete_moment(&law, m).map_err(|e| e.to_string())?.value;
            ensure((walk - limit).abs() <= 1e-10 * limit.abs().max(1.0), || format!("c={c} m={m}: {walk} vs {limit}"))?;
        }
    }
    Ok("free_shift normalized moments at k = 12 equal the discrete arcsine moments for m <= 10".into())
}

fn c_to_zero() -> Outcome {
    let cs = [1.0, 0.5, 0.25, 0.125];
    let table = c_to_zero_check(&cs, 8, DEFAULT_SERIES_TOL).map_err(|e| e.to_string())?;
    ensure(table.non_increasing, || "errors increase as c decreases".into())?;
    for row in table.rows.iter().filter(|r| r.m == 4) {
        ensure((row.error - row.c * row.c).abs() <= 1e-9, || format!("c={}: M_4 error {}", row.c, row.error))?;
    }
    Ok("moment errors shrink along c = 1, 1/2, 1/4, 1/8 and equal c^2 at m = 4".into())
}

fn carleman() -> Outcome {
    for c in [0.5, 1.0] {
        let report = carleman_bound_check(c, 15).map_err(|e| e.to_string())?;
        ensure(report.bounds_hold, || format!("c={c}: a Carleman bound fails"))?;
        ensure(report.max_relative_difference <= 1e-9, || {
            format!("c={c}: recursion differs from weights by {:e}", report.max_relative_difference)
        })?;
    }
    Ok("moment bounds hold for c in {0.5, 1}, m <= 15".into())
}

fn classification() -> Outcome {
    for seq in [catalog("gaussian", None), catalog("uniform", None), catalog("exponential", None)] {
        let report = classify(&seq, &DEFAULT_SCHEDULE, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(report.classification == Classification::Rac1, || format!("{seq}: {:?}", report.classification))?;
    }
    let shift = catalog("free_shift", Some(("c", Scalar::ratio(-1, 2))));
    let report = classify(&shift, &DEFAULT_SCHEDULE, DEFAULT_TOL).map_err(|e| e.to_string())?;
    match report.classification {
        Classification::Rac2 { c } if (c + 0.5).abs() <= 1e-9 => {}
        other => return Err(format!("free_shift(-1/2): {other:?}")),
    }
    let geometric = JacobiSequence::parse_expressions("2^n", "0", ParamMap::new()).map_err(|e| e.to_string())?;
    let report = classify(&geometric, &DEFAULT_SCHEDULE, DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure(report.classification == Classification::Neither, || format!("2^n: {:?}", report.classification))?;
    Ok("classical catalog RAC1, free_shift(-1/2) RAC2, 2^n NEITHER".into())
}

fn from_moments_round_trip() -> Outcome {
    let depth = 8u64;
    for seq in all_catalog() {
        let moments = (1..=2 * depth as usize)
            .map(|m| moment(&seq, 0, m, Mode::Exact).map_err(|e| e.to_string()).and_then(exact_value))
            .collect::<Result<Vec<_>, _>>()?;
        let rebuilt = jacobi_from_moments(&moments).map_err(|e| e.to_string())?;
        for n in 0..depth {
            let same = rebuilt.omega(n, Mode::Exact).ok() == seq.omega(n, Mode::Exact).ok()
                && rebuilt.alpha(n, Mode::Exact).ok() == seq.alpha(n, Mode::Exact).ok();
            ensure(same, || format!("{seq}: coefficients differ at n={n}"))?;
        }
    }
    Ok(format!("catalog coefficients recovered exactly to depth {depth}"))
}

fn arcsine_closed_form() -> Outcome {
    let g = catalog("gaussian", None);
    for m in [2usize, 4, 6, 8] {
        let k = 1000u64;
        let value = normalized_moment(&g, k, m, Mode::Exact).map_err(|e| e.to_string())?.to_f64();
        let limit = rational_to_f64(&arcsine_moment(m));
        ensure((value - limit).abs() <= 1e-4 * limit, || format!("m={m}: {value} vs {limit}"))?;
    }
    Ok("gaussian normalized moments at k = 1000 are near the arcsine moments".into())
}

/// Runs every check and reports each outcome.
pub fn run_suite(options: &VerifyOptions) -> VerifyReport {
    let checks: Vec<NamedCheck> = vec![
        ("gaussian_fourth_moment", Box::new(|| gaussian_fourth_moment(options.inject_fault))),
        ("walk_vs_vectors", Box::new(walk_vs_vectors)),
        ("exact_float_agreement", Box::new(exact_float_agreement)),
        ("isometry_oracle", Box::new(isometry_oracle)),
        ("orthonormality", Box::new(orthonormality)),
        ("arcsine_closed_form", Box::new(arcsine_closed_form)),
        ("discrete_arcsine_identities", Box::new(discrete_arcsine_identities)),
        ("moment_convergence_equality", Box::new(moment_convergence_equality)),
        ("c_to_zero", Box::new(c_to_zero)),
        ("carleman", Box::new(carleman)),
        ("classification", Box::new(classification)),
        ("from_moments_round_trip", Box::new(from_moments_round_trip)),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, run)| {
            let (passed, detail) = match run() {
                Ok(detail) => (true, detail),
                Err(detail) => (false, detail),
            };
            CheckResult { name, passed, detail }
        })
        .collect();
    VerifyReport { checks }
}
