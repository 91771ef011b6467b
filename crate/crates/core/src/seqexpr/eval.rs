use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{BinOp, Expr};
use crate::scalar::{rational_pow, rational_sqrt, Mode, ParamMap, Scalar};

/// Largest exponent accepted by `^` and `qsum` in exact mode.
const MAX_EXPONENT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at n = {n}")]
    DivisionByZero { n: u64 },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("irrational value in exact mode at n = {n}: {what}")]
    Irrational { n: u64, what: String },
    #[error("exponent must be a non-negative integer at n = {n}, got {value}")]
    BadExponent { n: u64, value: String },
    #[error("non-finite value at n = {n}")]
    NonFinite { n: u64 },
}

/// Evaluates `expr` at index `n`.
///
/// Exact mode requires every parameter to be an exact rational and fails on
/// square roots of non-squares; float mode converts everything to `f64`.
pub fn evaluate(expr: &Expr, n: u64, params: &ParamMap, mode: Mode) -> Result<Scalar, EvalError> {
    match mode {
        Mode::Exact => exact(expr, n, params).map(Scalar::Exact),
        Mode::Float => {
            let v = float(expr, n, params)?;
            if v.is_finite() {
                Ok(Scalar::Float(v))
            } else {
                Err(EvalError::NonFinite { n })
            }
        }
    }
}

fn exponent_exact(value: &BigRational, n: u64) -> Result<u64, EvalError> {
    let bad = || EvalError::BadExponent { n, value: value.to_string() };
    if !value.is_integer() || value.is_negative() {
        return Err(bad());
    }
    let e = value.to_integer().to_u64().ok_or_else(bad)?;
    if e > MAX_EXPONENT {
        return Err(bad());
    }
    Ok(e)
}

fn exact(expr: &Expr, n: u64, params: &ParamMap) -> Result<BigRational, EvalError> {
    Ok(match expr {
        Expr::Num(r) => r.clone(),
        Expr::Var => BigRational::from_integer(BigInt::from(n)),
        Expr::Param(name) => match params.get(name) {
            Some(Scalar::Exact(r)) => r.clone(),
            Some(Scalar::Float(x)) => {
                return Err(EvalError::Irrational {
                    n,
                    what: format!("parameter `{name}` = {x} has no exact value"),
                })
            }
            None => return Err(EvalError::UnboundParameter(name.clone())),
        },
        Expr::Neg(e) => -exact(e, n, params)?,
        Expr::Binary(op, a, b) => {
            let lhs = exact(a, n, params)?;
            let rhs = exact(b, n, params)?;
            match op {
                BinOp::Add => lhs + rhs,
                BinOp::Sub => lhs - rhs,
                BinOp::Mul => lhs * rhs,
                BinOp::Div => {
                    if rhs.is_zero() {
                        return Err(EvalError::DivisionByZero { n });
                    }
                    lhs / rhs
                }
                BinOp::Pow => rational_pow(&lhs, exponent_exact(&rhs, n)?),
            }
        }
        Expr::Sqrt(e) => {
            let v = exact(e, n, params)?;
            rational_sqrt(&v).ok_or_else(|| EvalError::Irrational { n, what: format!("sqrt({v})") })?
        }
        Expr::Qsum(q, m) => {
            let q = exact(q, n, params)?;
            let m = exponent_exact(&exact(m, n, params)?, n)?;
            if q.is_one() {
                BigRational::from_integer(BigInt::from(m + 1))
            } else {
                (BigRational::one() - rational_pow(&q, m + 1)) / (BigRational::one() - q)
            }
        }
    })
}

fn exponent_float(value: f64, n: u64) -> Result<i64, EvalError> {
    if value.fract() != 0.0 || value < 0.0 || !value.is_finite() {
        return Err(EvalError::BadExponent { n, value: value.to_string() });
    }
    Ok(value as i64)
}

fn powi(base: f64, e: i64) -> f64 {
    if e <= i32::MAX as i64 {
        base.powi(e as i32)
    } else {
        base.powf(e as f64)
    }
}

fn float(expr: &Expr, n: u64, params: &ParamMap) -> Result<f64, EvalError> {
    Ok(match expr {
        Expr::Num(r) => crate::scalar::rational_to_f64(r),
        Expr::Var => n as f64,
        Expr::Param(name) => params
            .get(name)
            .map(Scalar::to_f64)
            .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
        Expr::Neg(e) => -float(e, n, params)?,
        Expr::Binary(op, a, b) => {
            let lhs = float(a, n, params)?;
            let rhs = float(b, n, params)?;
            match op {
                BinOp::Add => lhs + rhs,
                BinOp::Sub => lhs - rhs,
                BinOp::Mul => lhs * rhs,
                BinOp::Div => {
                    if rhs == 0.0 {
                        return Err(EvalError::DivisionByZero { n });
                    }
                    lhs / rhs
                }
                BinOp::Pow => powi(lhs, exponent_float(rhs, n)?),
            }
        }
        Expr::Sqrt(e) => float(e, n, params)?.sqrt(),
        Expr::Qsum(q, m) => {
            let q = float(q, n, params)?;
            let m = exponent_float(float(m, n, params)?, n)?;
            if q == 1.0 {
                (m + 1) as f64
            } else {
                (1.0 - powi(q, m + 1)) / (1.0 - q)
            }
        }
    })
}
