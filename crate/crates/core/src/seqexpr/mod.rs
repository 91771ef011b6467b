//! Closed-form expressions for user-defined `omega(n)` and `alpha(n)`.
//!
//! Grammar (EBNF), whitespace ignored between tokens:
//!
//! ```text
//! expr    = term , { ("+" | "-") , term } ;
//! term    = unary , { ("*" | "/") , unary } ;
//! unary   = "-" , unary | power ;
//! power   = primary , [ "^" , unary ] ;
//! primary = number | "n" | param | call | "(" , expr , ")" ;
//! call    = ("sqrt" , "(" , expr , ")") | ("qsum" , "(" , expr , "," , expr , ")") ;
//! number  = digit , { digit } , [ "." , { digit } ] | "." , digit , { digit } ;
//! param   = letter , { letter | digit | "_" } ;   (* not n, sqrt or qsum *)
//! ```
//!
//! `+ - * /` associate to the left and `^` to the right. Exponents must
//! evaluate to non-negative integers, and there is no implicit
//! multiplication. `qsum(q, n)` is `1 + q + ... + q^n`.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use eval::{evaluate, EvalError};
pub use parse::{parse, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree. Literals are non-negative; negation is explicit.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    /// The index variable `n`.
    Var,
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Qsum(Box<Expr>, Box<Expr>),
}

pub(crate) fn is_reserved(name: &str) -> bool {
    matches!(name, "n" | "sqrt" | "qsum")
}

impl Expr {
    pub fn num(v: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Names of the parameters referenced by the expression.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) | Expr::Var => {}
            Expr::Param(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Sqrt(e) => e.collect_params(out),
            Expr::Binary(_, a, b) | Expr::Qsum(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Num(r) if !is_terminating(r) => 2,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(r) => write_literal(f, r)?,
            Expr::Var => f.write_str("n")?,
            Expr::Param(name) => f.write_str(name)?,
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, 3)?;
            }
            Expr::Binary(op, a, b) => {
                let (left, right) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                a.write_at(f, left)?;
                write!(f, "{}", op.symbol())?;
                b.write_at(f, right)?;
            }
            Expr::Sqrt(e) => {
                f.write_str("sqrt(")?;
                e.write_at(f, 0)?;
                f.write_str(")")?;
            }
            Expr::Qsum(q, n) => {
                f.write_str("qsum(")?;
                q.write_at(f, 0)?;
                f.write_str(", ")?;
                n.write_at(f, 0)?;
                f.write_str(")")?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Minimal-parenthesis rendering that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

fn is_terminating(r: &BigRational) -> bool {
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_even() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    d.is_one()
}

fn write_literal(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_negative() {
        // Not produced by the parser; kept printable.
        f.write_str("(-")?;
        write_literal(f, &-r)?;
        return f.write_str(")");
    }
    if r.denom().is_one() {
        return write!(f, "{}", r.numer());
    }
    if !is_terminating(r) {
        return write!(f, "{}/{}", r.numer(), r.denom());
    }
    let mut digits = 0usize;
    let mut scaled = r.clone();
    let ten = BigRational::from_integer(BigInt::from(10));
    while !scaled.denom().is_one() {
        scaled *= &ten;
        digits += 1;
    }
    let s = scaled.numer().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    write!(f, "{int_part}.{frac_part}")
}
