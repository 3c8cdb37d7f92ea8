//! Min-plus piecewise-linear expressions over ℤ.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ratfun::{parse_expr, Expr, VarContext};

#[derive(Debug)]
pub enum PLNode {
    Var(usize),
    Const(i64),
    Sum(Vec<PLExpr>),
    Neg(PLExpr),
    Min(Vec<PLExpr>),
    /// Integer multiple.
    Scale(i64, PLExpr),
}

/// A shared DAG of [`PLNode`]s.
#[derive(Clone, Debug)]
pub struct PLExpr(Arc<PLNode>);

impl PLExpr {
    pub fn var(i: usize) -> Self {
        PLExpr(Arc::new(PLNode::Var(i)))
    }

    pub fn constant(c: i64) -> Self {
        PLExpr(Arc::new(PLNode::Const(c)))
    }

    pub fn sum(parts: Vec<PLExpr>) -> Self {
        match parts.len() {
            0 => Self::constant(0),
            1 => parts.into_iter().next().expect("one part"),
            _ => PLExpr(Arc::new(PLNode::Sum(parts))),
        }
    }

    pub fn negate(e: PLExpr) -> Self {
        PLExpr(Arc::new(PLNode::Neg(e)))
    }

    pub fn diff(a: PLExpr, b: PLExpr) -> Self {
        Self::sum(vec![a, Self::negate(b)])
    }

    /// Minimum of a nonempty list.
    pub fn min(parts: Vec<PLExpr>) -> Result<Self> {
        match parts.len() {
            0 => Err(Error::InvalidArgument("min of nothing".into())),
            1 => Ok(parts.into_iter().next().expect("one part")),
            _ => Ok(PLExpr(Arc::new(PLNode::Min(parts)))),
        }
    }

    /// `max(a, …) = −min(−a, …)`.
    pub fn max(parts: Vec<PLExpr>) -> Result<Self> {
        Ok(Self::negate(Self::min(
            parts.into_iter().map(Self::negate).collect(),
        )?))
    }

    pub fn scale(k: i64, e: PLExpr) -> Self {
        PLExpr(Arc::new(PLNode::Scale(k, e)))
    }

    pub fn node(&self) -> &PLNode {
        &self.0
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self.node() {
            PLNode::Var(i) => i + 1,
            PLNode::Const(_) => 0,
            PLNode::Sum(ps) | PLNode::Min(ps) => ps.iter().map(PLExpr::arity).max().unwrap_or(0),
            PLNode::Neg(e) | PLNode::Scale(_, e) => e.arity(),
        }
    }

    /// Structural evaluation at an integer point.
    pub fn eval(&self, x: &[i64]) -> i64 {
        match self.node() {
            PLNode::Var(i) => x[*i],
            PLNode::Const(c) => *c,
            PLNode::Sum(ps) => ps.iter().map(|p| p.eval(x)).sum(),
            PLNode::Neg(e) => -e.eval(x),
            PLNode::Min(ps) => ps.iter().map(|p| p.eval(x)).min().expect("nonempty min"),
            PLNode::Scale(k, e) => k * e.eval(x),
        }
    }

    /// Flattens the DAG into a straight-line program, folding constants.
    pub fn compile(&self) -> PLProgram {
        let mut prog = PLProgram { ops: Vec::new() };
        let mut memo = HashMap::new();
        prog.emit(self, &mut memo);
        prog
    }

    /// Parses `min(...)`, `max(...)`, `+`, `-`, integer literals and
    /// integer multiples such as `2*x` over the variables of `ctx`.
    pub fn parse(src: &str, ctx: &VarContext) -> Result<Self> {
        Self::from_expr(&parse_expr(src)?, ctx)
    }

    fn from_expr(e: &Expr, ctx: &VarContext) -> Result<Self> {
        let bad = |m: String| Error::Parse { pos: 0, msg: m };
        Ok(match e {
            Expr::Int(n) => {
                PLExpr::constant(n.to_i64().ok_or_else(|| bad(format!("{n} out of range")))?)
            }
            Expr::Var(v) => PLExpr::var(
                ctx.index_of(v)
                    .ok_or_else(|| bad(format!("unknown variable {v:?}")))?,
            ),
            Expr::Add(a, b) => {
                PLExpr::sum(vec![Self::from_expr(a, ctx)?, Self::from_expr(b, ctx)?])
            }
            Expr::Sub(a, b) => PLExpr::diff(Self::from_expr(a, ctx)?, Self::from_expr(b, ctx)?),
            Expr::Neg(a) => PLExpr::negate(Self::from_expr(a, ctx)?),
            Expr::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Int(k), other) | (other, Expr::Int(k)) => PLExpr::scale(
                    k.to_i64().ok_or_else(|| bad(format!("{k} out of range")))?,
                    Self::from_expr(other, ctx)?,
                ),
                _ => return Err(bad("a product needs an integer factor".into())),
            },
            Expr::Call(name, args) => {
                let parts = args
                    .iter()
                    .map(|a| Self::from_expr(a, ctx))
                    .collect::<Result<Vec<_>>>()?;
                match name.as_str() {
                    "min" => PLExpr::min(parts)?,
                    "max" => PLExpr::max(parts)?,
                    _ => return Err(bad(format!("unknown function {name}"))),
                }
            }
            Expr::Div(..) | Expr::Pow(..) => {
                return Err(bad("'/' and '^' are not piecewise-linear".into()))
            }
        })
    }

    /// Printable form using the names of `ctx`.
    pub fn display<'a>(&'a self, ctx: &'a VarContext) -> impl fmt::Display + 'a {
        PLDisplay { e: self, ctx }
    }
}

struct PLDisplay<'a> {
    e: &'a PLExpr,
    ctx: &'a VarContext,
}

impl PLDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &PLExpr, paren: bool) -> fmt::Result {
        // max(a, b) is stored as -min(-a, -b).
        if let PLNode::Neg(inner) = e.node() {
            if let PLNode::Min(ps) = inner.node() {
                if ps.iter().all(|p| matches!(p.node(), PLNode::Neg(_))) {
                    write!(f, "max(")?;
                    for (k, p) in ps.iter().enumerate() {
                        if k > 0 {
                            write!(f, ", ")?;
                        }
                        let PLNode::Neg(q) = p.node() else {
                            unreachable!()
                        };
                        self.write(f, q, false)?;
                    }
                    return write!(f, ")");
                }
            }
        }
        match e.node() {
            PLNode::Var(i) => write!(f, "{}", self.ctx.name(*i)),
            PLNode::Const(c) if *c < 0 && paren => write!(f, "({c})"),
            PLNode::Const(c) => write!(f, "{c}"),
            PLNode::Sum(ps) => {
                if paren {
                    write!(f, "(")?;
                }
                for (k, p) in ps.iter().enumerate() {
                    match (k, p.node()) {
                        (0, _) => self.write(f, p, false)?,
                        (_, PLNode::Neg(inner)) => {
                            write!(f, " - ")?;
                            self.write(f, inner, true)?;
                        }
                        _ => {
                            write!(f, " + ")?;
                            self.write(f, p, false)?;
                        }
                    }
                }
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            PLNode::Neg(inner) => {
                write!(f, "-")?;
                self.write(f, inner, true)
            }
            PLNode::Min(ps) => {
                write!(f, "min(")?;
                for (k, p) in ps.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    self.write(f, p, false)?;
                }
                write!(f, ")")
            }
            PLNode::Scale(k, inner) => {
                write!(f, "{k}*")?;
                self.write(f, inner, true)
            }
        }
    }
}

impl fmt::Display for PLDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.e, false)
    }
}

#[derive(Clone, Debug)]
enum Op {
    Var(usize),
    Const(i64),
    Sum(Vec<usize>),
    Neg(usize),
    Min(Vec<usize>),
    Scale(i64, usize),
}

/// Straight-line form of a [`PLExpr`]; each shared node is evaluated once.
#[derive(Clone, Debug)]
pub struct PLProgram {
    ops: Vec<Op>,
}

impl PLProgram {
    fn push(&mut self, op: Op) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    fn constant_of(&self, slot: usize) -> Option<i64> {
        match self.ops[slot] {
            Op::Const(c) => Some(c),
            _ => None,
        }
    }

    fn emit(&mut self, e: &PLExpr, memo: &mut HashMap<usize, usize>) -> usize {
        if let Some(&s) = memo.get(&e.id()) {
            return s;
        }
        let op = match e.node() {
            PLNode::Var(i) => Op::Var(*i),
            PLNode::Const(c) => Op::Const(*c),
            PLNode::Sum(ps) => {
                let slots: Vec<usize> = ps.iter().map(|p| self.emit(p, memo)).collect();
                match slots
                    .iter()
                    .map(|&s| self.constant_of(s))
                    .collect::<Option<Vec<_>>>()
                {
                    Some(cs) => Op::Const(cs.iter().sum()),
                    None => Op::Sum(slots),
                }
            }
            PLNode::Neg(p) => {
                let s = self.emit(p, memo);
                match self.constant_of(s) {
                    Some(c) => Op::Const(-c),
                    None => Op::Neg(s),
                }
            }
            PLNode::Min(ps) => {
                let slots: Vec<usize> = ps.iter().map(|p| self.emit(p, memo)).collect();
                match slots
                    .iter()
                    .map(|&s| self.constant_of(s))
                    .collect::<Option<Vec<_>>>()
                {
                    Some(cs) => Op::Const(*cs.iter().min().expect("nonempty")),
                    None => Op::Min(slots),
                }
            }
            PLNode::Scale(k, p) => {
                let s = self.emit(p, memo);
                match self.constant_of(s) {
                    Some(c) => Op::Const(k * c),
                    None => Op::Scale(*k, s),
                }
            }
        };
        let slot = self.push(op);
        memo.insert(e.id(), slot);
        slot
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    /// The value if the whole program folded to a constant.
    pub fn as_constant(&self) -> Option<i64> {
        self.ops
            .len()
            .checked_sub(1)
            .and_then(|k| self.constant_of(k))
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Evaluates with a caller-provided scratch buffer.
    pub fn eval_with(&self, x: &[i64], scratch: &mut Vec<i64>) -> i64 {
        scratch.clear();
        for op in &self.ops {
            let v = match op {
                Op::Var(i) => x[*i],
                Op::Const(c) => *c,
                Op::Sum(s) => s.iter().map(|&k| scratch[k]).sum(),
                Op::Neg(k) => -scratch[*k],
                Op::Min(s) => s.iter().map(|&k| scratch[k]).min().expect("nonempty"),
                Op::Scale(c, k) => c * scratch[*k],
            };
            scratch.push(v);
        }
        *scratch.last().expect("nonempty program")
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        let mut scratch = Vec::with_capacity(self.ops.len());
        self.eval_with(x, &mut scratch)
    }
}

/// `pl_eval` in functional form.
pub fn pl_eval(p: &PLExpr, x: &[i64]) -> Result<i64> {
    if p.arity() > x.len() {
        return Err(Error::InvalidArgument(format!(
            "expression uses {} variables, point has {}",
            p.arity(),
            x.len()
        )));
    }
    Ok(p.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> VarContext {
        VarContext::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn evaluates_gl3_closed_form() {
        let p = PLExpr::parse("min(2*x, 0)", &ctx()).unwrap();
        assert_eq!(pl_eval(&p, &[-3, 0]).unwrap(), -6);
        let q = PLExpr::parse("min(x, y)", &ctx()).unwrap();
        assert_eq!(pl_eval(&q, &[4, 1]).unwrap(), 1);
        assert_eq!(pl_eval(&PLExpr::constant(0), &[7, 7]).unwrap(), 0);
    }

    #[test]
    fn max_and_difference() {
        let p = PLExpr::parse("x - max(y, 3) + -2", &ctx()).unwrap();
        assert_eq!(p.eval(&[10, 1]), 5);
        assert_eq!(p.eval(&[10, 5]), 3);
        assert_eq!(p.compile().eval(&[10, 5]), 3);
    }

    #[test]
    fn display_round_trips() {
        for src in ["min(x, y - 1)", "x - min(2*y, -x, 0)", "-(x + y)"] {
            let p = PLExpr::parse(src, &ctx()).unwrap();
            let printed = p.display(&ctx()).to_string();
            let q = PLExpr::parse(&printed, &ctx()).unwrap();
            for a in -3..=3 {
                for b in -3..=3 {
                    assert_eq!(p.eval(&[a, b]), q.eval(&[a, b]), "{src} vs {printed}");
                }
            }
        }
    }

    #[test]
    fn constants_fold() {
        let p = PLExpr::parse("min(1, 2) + 3*4", &ctx()).unwrap();
        assert_eq!(p.compile().as_constant(), Some(13));
        assert_eq!(p.eval(&[]), 13);
    }

    #[test]
    fn rejects_non_linear_input() {
        assert!(PLExpr::parse("x*y", &ctx()).is_err());
        assert!(PLExpr::parse("x/2", &ctx()).is_err());
        assert!(PLExpr::parse("foo(x)", &ctx()).is_err());
    }
}
