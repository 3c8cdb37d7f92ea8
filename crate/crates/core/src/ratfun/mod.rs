//! Exact arithmetic for multivariate Laurent polynomials and rational
//! functions over ℚ, plus square matrices over them.

mod context;
mod function;
mod matrix;
mod parse;
mod poly;
mod posexpr;

pub use context::VarContext;
pub use function::RatFun;
pub use matrix::RatMatrix;
pub use parse::{parse_expr, parse_ratfun, parse_ratfun_auto, Expr};
pub use poly::{Exponents, LaurentPoly};
pub use posexpr::{pos_to_ratfun, PosExpr, PosNode};

pub use parse::rational_from_str;

/// Arbitrary-precision rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Field operations on rational functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies one field operation; division by the zero function is an error.
pub fn arith(op: ArithOp, f: &RatFun, g: &RatFun) -> crate::Result<RatFun> {
    f.ctx().check_same(g.ctx())?;
    Ok(match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => f.mul(g),
        ArithOp::Div => f.div(g)?,
    })
}

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
