//! Subtraction-free expression DAGs.
//!
//! A [`PosExpr`] is a witness that a rational function is positive: it is
//! built only from variables, positive constants, sums, products and
//! quotients. Nodes are reference counted, so subexpressions may be shared.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed};
use rand::Rng;

use super::context::VarContext;
use super::function::RatFun;
use super::parse::Expr;
use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug)]
pub enum PosNode {
    Var(usize),
    Const(Rational),
    Sum(Vec<PosExpr>),
    Product(Vec<PosExpr>),
    Quotient(PosExpr, PosExpr),
}

#[derive(Clone, Debug)]
pub struct PosExpr(Arc<PosNode>);

impl PosExpr {
    pub fn var(i: usize) -> Self {
        PosExpr(Arc::new(PosNode::Var(i)))
    }

    /// A constant; rejects zero and negative values.
    pub fn constant(c: Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "constant {c} is not positive"
            )));
        }
        Ok(PosExpr(Arc::new(PosNode::Const(c))))
    }

    pub fn one() -> Self {
        PosExpr(Arc::new(PosNode::Const(Rational::one())))
    }

    pub fn sum(parts: Vec<PosExpr>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty sum".into()));
        }
        Ok(PosExpr(Arc::new(PosNode::Sum(parts))))
    }

    pub fn product(parts: Vec<PosExpr>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty product".into()));
        }
        Ok(PosExpr(Arc::new(PosNode::Product(parts))))
    }

    pub fn quotient(num: PosExpr, den: PosExpr) -> Self {
        PosExpr(Arc::new(PosNode::Quotient(num, den)))
    }

    pub fn node(&self) -> &PosNode {
        &self.0
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn walk(e: &PosExpr, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(e.id()) {
                return;
            }
            match e.node() {
                PosNode::Var(_) | PosNode::Const(_) => {}
                PosNode::Sum(ps) | PosNode::Product(ps) => ps.iter().for_each(|p| walk(p, seen)),
                PosNode::Quotient(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// Converts a parsed expression, rejecting subtraction and nonpositive constants.
    pub fn from_expr(e: &Expr, ctx: &VarContext) -> Result<Self> {
        let not_positive =
            |what: &str| Error::InvalidArgument(format!("{what} is not subtraction-free"));
        Ok(match e {
            Expr::Int(n) => PosExpr::constant(Rational::from_integer(n.clone()))?,
            Expr::Var(v) => PosExpr::var(
                ctx.index_of(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {v:?}")))?,
            ),
            Expr::Add(a, b) => {
                PosExpr::sum(vec![Self::from_expr(a, ctx)?, Self::from_expr(b, ctx)?])?
            }
            Expr::Mul(a, b) => {
                PosExpr::product(vec![Self::from_expr(a, ctx)?, Self::from_expr(b, ctx)?])?
            }
            Expr::Div(a, b) => {
                PosExpr::quotient(Self::from_expr(a, ctx)?, Self::from_expr(b, ctx)?)
            }
            Expr::Pow(a, k) => {
                let base = Self::from_expr(a, ctx)?;
                if *k == 0 {
                    return Ok(PosExpr::one());
                }
                let p = PosExpr::product(vec![base; k.unsigned_abs() as usize])?;
                if *k > 0 {
                    p
                } else {
                    PosExpr::quotient(PosExpr::one(), p)
                }
            }
            Expr::Sub(..) => return Err(not_positive("a difference")),
            Expr::Neg(..) => return Err(not_positive("a negation")),
            Expr::Call(name, _) => return Err(not_positive(&format!("{name}()"))),
        })
    }

    /// A random DAG in `nvars` variables; subexpressions are reused with some probability.
    pub fn random<R: Rng>(rng: &mut R, nvars: usize, depth: usize) -> Self {
        let mut pool: Vec<PosExpr> = Vec::new();
        Self::random_inner(rng, nvars, depth, &mut pool)
    }

    fn random_inner<R: Rng>(
        rng: &mut R,
        nvars: usize,
        depth: usize,
        pool: &mut Vec<PosExpr>,
    ) -> Self {
        if !pool.is_empty() && rng.gen_bool(0.15) {
            return pool[rng.gen_range(0..pool.len())].clone();
        }
        let e = if depth == 0 || rng.gen_bool(0.25) {
            if rng.gen_bool(0.8) {
                PosExpr::var(rng.gen_range(0..nvars))
            } else {
                let c = Rational::new(rng.gen_range(1..6).into(), rng.gen_range(1..4).into());
                PosExpr::constant(c).expect("positive")
            }
        } else {
            match rng.gen_range(0..3) {
                0 => {
                    let k = rng.gen_range(2..4);
                    let parts = (0..k)
                        .map(|_| Self::random_inner(rng, nvars, depth - 1, pool))
                        .collect();
                    PosExpr::sum(parts).expect("nonempty")
                }
                1 => {
                    let k = rng.gen_range(2..3);
                    let parts = (0..k)
                        .map(|_| Self::random_inner(rng, nvars, depth - 1, pool))
                        .collect();
                    PosExpr::product(parts).expect("nonempty")
                }
                _ => PosExpr::quotient(
                    Self::random_inner(rng, nvars, depth - 1, pool),
                    Self::random_inner(rng, nvars, depth - 1, pool),
                ),
            }
        };
        pool.push(e.clone());
        e
    }
}

/// The rational function denoted by a subtraction-free DAG.
///
/// Sums are formed without trial division, so the expanded numerator and
/// denominator of the result have only positive coefficients.
pub fn pos_to_ratfun(e: &PosExpr, ctx: &VarContext) -> Result<RatFun> {
    let mut memo: HashMap<usize, RatFun> = HashMap::new();
    to_ratfun_memo(e, ctx, &mut memo)
}

fn to_ratfun_memo(
    e: &PosExpr,
    ctx: &VarContext,
    memo: &mut HashMap<usize, RatFun>,
) -> Result<RatFun> {
    if let Some(r) = memo.get(&e.id()) {
        return Ok(r.clone());
    }
    let r = match e.node() {
        PosNode::Var(i) => {
            if *i >= ctx.len() {
                return Err(Error::InvalidArgument(format!(
                    "variable index {i} outside {ctx:?}"
                )));
            }
            RatFun::var(ctx, *i)
        }
        PosNode::Const(c) => RatFun::constant(ctx, c.clone()),
        PosNode::Sum(ps) => {
            let parts = ps
                .iter()
                .map(|p| to_ratfun_memo(p, ctx, memo))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&RatFun> = parts.iter().collect();
            RatFun::sum_positive(&refs)
        }
        PosNode::Product(ps) => {
            let mut acc = RatFun::one(ctx);
            for p in ps {
                acc = acc.mul(&to_ratfun_memo(p, ctx, memo)?);
            }
            acc
        }
        PosNode::Quotient(a, b) => {
            let num = to_ratfun_memo(a, ctx, memo)?;
            let den = to_ratfun_memo(b, ctx, memo)?;
            num.div(&den)?
        }
    };
    memo.insert(e.id(), r.clone());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::parse::{parse_expr, parse_ratfun};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> VarContext {
        VarContext::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn dag_examples() {
        let x = PosExpr::var(0);
        assert!(pos_to_ratfun(&x, &ctx())
            .unwrap()
            .equals(&parse_ratfun("x", &ctx()).unwrap()));
        let e = PosExpr::quotient(
            PosExpr::sum(vec![x.clone(), PosExpr::var(1)]).unwrap(),
            x.clone(),
        );
        assert!(pos_to_ratfun(&e, &ctx())
            .unwrap()
            .equals(&parse_ratfun("(x+y)/x", &ctx()).unwrap()));
        let sq = PosExpr::product(vec![x.clone(), x.clone()]).unwrap();
        let e2 = PosExpr::sum(vec![sq, PosExpr::one()]).unwrap();
        assert!(pos_to_ratfun(&e2, &ctx())
            .unwrap()
            .equals(&parse_ratfun("x^2+1", &ctx()).unwrap()));
    }

    #[test]
    fn rejects_subtraction() {
        assert!(PosExpr::from_expr(&parse_expr("x - y").unwrap(), &ctx()).is_err());
        assert!(PosExpr::from_expr(&parse_expr("0*x").unwrap(), &ctx()).is_err());
        assert!(PosExpr::constant(Rational::from_integer((-1).into())).is_err());
        assert!(PosExpr::from_expr(&parse_expr("(x^3+1)/(x+1)").unwrap(), &ctx()).is_ok());
    }

    #[test]
    fn random_dags_have_positive_expansions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let e = PosExpr::random(&mut rng, 2, 4);
            let f = pos_to_ratfun(&e, &ctx()).unwrap();
            assert!(f.numerator().all_coefficients_positive(), "{f}");
            assert!(f.denominator().all_coefficients_positive(), "{f}");
        }
    }
}
