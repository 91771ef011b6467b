use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{JacobiError, JacobiSequence};
use crate::scalar::{Mode, ParamMap, Scalar};

pub const CATALOG_NAMES: [&str; 5] = ["gaussian", "uniform", "exponential", "q_gaussian", "free_shift"];

/// Closed-form Jacobi sequences of classical measures.
#[derive(Debug, Clone, PartialEq)]
pub enum Catalog {
    /// `omega = n+1`, `alpha = 0` (harmonic oscillator, standard normal law).
    Gaussian,
    /// `omega = (n+1)^2/((2n+1)(2n+3))`, `alpha = 0` (uniform law on [-1, 1]).
    Uniform,
    /// `omega = (n+1)^2`, `alpha = 2n+1` (exponential law on [0, inf)).
    Exponential,
    /// `omega = 1 + q + ... + q^n`, `alpha = 0`, `-1 < q <= 1`.
    QGaussian { q: Scalar },
    /// `omega = 1/2`, `alpha = c n`.
    FreeShift { c: Scalar },
}

impl Catalog {
    pub fn name(&self) -> &'static str {
        match self {
            Catalog::Gaussian => "gaussian",
            Catalog::Uniform => "uniform",
            Catalog::Exponential => "exponential",
            Catalog::QGaussian { .. } => "q_gaussian",
            Catalog::FreeShift { .. } => "free_shift",
        }
    }

    pub(crate) fn is_exact(&self) -> bool {
        match self {
            Catalog::QGaussian { q } => q.is_exact(),
            Catalog::FreeShift { c } => c.is_exact(),
            _ => true,
        }
    }

    fn int(v: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn omega_exact(&self, n: u64) -> Option<BigRational> {
        Some(match self {
            Catalog::Gaussian => Self::int(n + 1),
            Catalog::Uniform => {
                let m = Self::int(n + 1);
                (&m * &m) / (Self::int(2 * n + 1) * Self::int(2 * n + 3))
            }
            Catalog::Exponential => {
                let m = Self::int(n + 1);
                &m * &m
            }
            Catalog::QGaussian { q } => {
                let q = q.as_exact()?;
                if q.is_one() {
                    Self::int(n + 1)
                } else {
                    // q = p/s: sum_j q^j = (s^(n+1) - p^(n+1)) / ((s - p) s^n), already in lowest terms.
                    let (p, s) = (q.numer(), q.denom());
                    let e = u32::try_from(n + 1).ok()?;
                    let numer = (s.pow(e) - p.pow(e)) / (s - p);
                    BigRational::new_raw(numer, s.pow(e - 1))
                }
            }
            Catalog::FreeShift { c } => {
                c.as_exact()?;
                BigRational::new(1.into(), 2.into())
            }
        })
    }

    fn alpha_exact(&self, n: u64) -> Option<BigRational> {
        Some(match self {
            Catalog::Exponential => Self::int(2 * n + 1),
            Catalog::FreeShift { c } => c.as_exact()? * Self::int(n),
            Catalog::QGaussian { q } => {
                q.as_exact()?;
                BigRational::zero()
            }
            _ => BigRational::zero(),
        })
    }

    fn omega_f64(&self, n: u64) -> f64 {
        let x = n as f64;
        match self {
            Catalog::Gaussian => x + 1.0,
            Catalog::Uniform => (x + 1.0) * (x + 1.0) / ((2.0 * x + 1.0) * (2.0 * x + 3.0)),
            Catalog::Exponential => (x + 1.0) * (x + 1.0),
            Catalog::QGaussian { q } => {
                let q = q.to_f64();
                if q == 1.0 {
                    x + 1.0
                } else {
                    (1.0 - q.powf(x + 1.0)) / (1.0 - q)
                }
            }
            Catalog::FreeShift { .. } => 0.5,
        }
    }

    fn alpha_f64(&self, n: u64) -> f64 {
        match self {
            Catalog::Exponential => 2.0 * n as f64 + 1.0,
            Catalog::FreeShift { c } => c.to_f64() * n as f64,
            _ => 0.0,
        }
    }

    pub(crate) fn omega(&self, n: u64, mode: Mode) -> Result<Scalar, JacobiError> {
        match mode {
            Mode::Exact => self
                .omega_exact(n)
                .map(Scalar::Exact)
                .ok_or_else(|| JacobiError::NotExact(self.to_string())),
            Mode::Float => Ok(Scalar::Float(self.omega_f64(n))),
        }
    }

    pub(crate) fn alpha(&self, n: u64, mode: Mode) -> Result<Scalar, JacobiError> {
        match mode {
            Mode::Exact => self
                .alpha_exact(n)
                .map(Scalar::Exact)
                .ok_or_else(|| JacobiError::NotExact(self.to_string())),
            Mode::Float => Ok(Scalar::Float(self.alpha_f64(n))),
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Catalog::QGaussian { q } => write!(f, "q_gaussian(q={q})"),
            Catalog::FreeShift { c } => write!(f, "free_shift(c={c})"),
            other => f.write_str(other.name()),
        }
    }
}

fn q_in_range(q: &Scalar) -> bool {
    match q {
        Scalar::Exact(r) => {
            let one = BigRational::one();
            r > &-one.clone() && r <= &one
        }
        Scalar::Float(x) => *x > -1.0 && *x <= 1.0,
    }
}

/// Looks up a catalog entry by name and binds its parameters
/// (`q` for `q_gaussian`, `c` for `free_shift`).
pub fn catalog_sequence(name: &str, params: &ParamMap) -> Result<JacobiSequence, JacobiError> {
    let expected: &[&str] = match name {
        "gaussian" | "uniform" | "exponential" => &[],
        "q_gaussian" => &["q"],
        "free_shift" => &["c"],
        _ => return Err(JacobiError::UnknownCatalog(name.to_string())),
    };
    if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(JacobiError::InvalidParameter(format!("`{name}` takes no parameter `{extra}`")));
    }
    let get = |key: &str| {
        params
            .get(key)
            .cloned()
            .ok_or_else(|| JacobiError::InvalidParameter(format!("`{name}` requires parameter `{key}`")))
    };
    let entry = match name {
        "gaussian" => Catalog::Gaussian,
        "uniform" => Catalog::Uniform,
        "exponential" => Catalog::Exponential,
        "q_gaussian" => {
            let q = get("q")?;
            if !q_in_range(&q) {
                return Err(JacobiError::InvalidParameter(format!("q = {q} is outside (-1, 1]")));
            }
            Catalog::QGaussian { q }
        }
        "free_shift" => {
            let c = get("c")?;
            if !c.to_f64().is_finite() {
                return Err(JacobiError::InvalidParameter(format!("c = {c} is not finite")));
            }
            Catalog::FreeShift { c }
        }
        _ => unreachable!(),
    };
    Ok(JacobiSequence::from_catalog(entry))
}
