//! Shared textual expression syntax.
//!
//! Grammar: variables `[A-Za-z_][A-Za-z0-9_]*`, integer literals (so `p/q` is a
//! rational literal), binary `+ - * /`, unary `-`, `^` with an integer
//! exponent that may be negative, parentheses, and function calls such as
//! `min(a, b)` which only the piecewise-linear reader accepts.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::context::VarContext;
use super::function::RatFun;
use super::poly::LaurentPoly;
use super::Rational;
use crate::error::{Error, Result};

/// Parsed expression tree before it is interpreted in a specific algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let k: i32 = n.try_into().map_err(|_| Error::Parse {
                    pos: self.offset(),
                    msg: "exponent too large".into(),
                })?;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => self.err("expected an integer exponent after '^'"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(')') {
                        return self.err("expected ')' after arguments");
                    }
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses the shared expression syntax into a tree.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Interprets the tree as a rational function in `ctx`.
    pub fn to_ratfun(&self, ctx: &VarContext) -> Result<RatFun> {
        Ok(match self {
            Expr::Int(n) => RatFun::constant(ctx, Rational::from_integer(n.clone())),
            Expr::Var(v) => RatFun::named(ctx, v)?,
            Expr::Add(a, b) => a.to_ratfun(ctx)?.add(&b.to_ratfun(ctx)?),
            Expr::Sub(a, b) => a.to_ratfun(ctx)?.sub(&b.to_ratfun(ctx)?),
            Expr::Mul(a, b) => a.to_ratfun(ctx)?.mul(&b.to_ratfun(ctx)?),
            Expr::Div(a, b) => a.to_ratfun(ctx)?.div(&b.to_ratfun(ctx)?)?,
            Expr::Neg(a) => a.to_ratfun(ctx)?.neg(),
            Expr::Pow(a, k) => a.to_ratfun(ctx)?.pow(*k)?,
            Expr::Call(name, _) => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("function {name}() is not a rational operation"),
                })
            }
        })
    }
}

/// Parses `src` as a rational function in `ctx`.
pub fn parse_ratfun(src: &str, ctx: &VarContext) -> Result<RatFun> {
    parse_expr(src)?.to_ratfun(ctx)
}

/// Parses `src`, building a context from its variables in order of appearance.
pub fn parse_ratfun_auto(src: &str) -> Result<RatFun> {
    let e = parse_expr(src)?;
    let ctx = VarContext::new(&e.variables())?;
    e.to_ratfun(&ctx)
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    ctx: &VarContext,
    e: &[i32],
    mut first: bool,
) -> std::result::Result<bool, fmt::Error> {
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{}", ctx.name(i))?;
        } else {
            write!(f, "{}^{}", ctx.name(i), k)?;
        }
    }
    Ok(first)
}

/// Writes `c·x^e` with an explicit sign handled by the caller.
fn write_term(
    f: &mut fmt::Formatter<'_>,
    ctx: &VarContext,
    e: &[i32],
    c: &Rational,
) -> fmt::Result {
    let constant = e.iter().all(|&k| k == 0);
    if constant {
        return write_rational(f, c);
    }
    let first = if c.is_one() {
        true
    } else {
        write_rational(f, c)?;
        false
    };
    write_monomial(f, ctx, e, first).map(|_| ())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_term(f, self.ctx(), e, &c.abs())?;
        }
        Ok(())
    }
}

/// Factored form, e.g. `2*x*y^-1*(x + y)^-2`. The output parses back to an equal function.
impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let c = self.coeff();
        if c.is_negative() {
            write!(f, "-")?;
        }
        let c = c.abs();
        let mut first = true;
        if !c.is_one() || (self.is_monomial() && self.mono().iter().all(|&k| k == 0)) {
            write_rational(f, &c)?;
            first = false;
        }
        first = write_monomial(f, self.ctx(), self.mono(), first)?;
        for (p, k) in self.factors() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{k}")?;
            }
        }
        Ok(())
    }
}

impl RatFun {
    /// Expanded `N` or `(N)/(D)` with terms in descending lexicographic order.
    ///
    /// Deterministic for a given representation; used for golden output.
    pub fn to_canonical_string(&self) -> String {
        let num = self.numerator();
        let den = self.denominator();
        if den.as_constant().is_some_and(|c| c.is_one()) {
            format!("{num}")
        } else {
            format!("({num})/({den})")
        }
    }
}

pub fn rational_from_str(s: &str) -> Result<Rational> {
    let e = parse_expr(s)?;
    let ctx = VarContext::empty();
    let f = e.to_ratfun(&ctx)?;
    f.as_constant().ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("{s:?} is not a rational constant"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_negative_exponents() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        let f = parse_ratfun("-x^2 + 3*y^-1/2", &ctx).unwrap();
        let g = parse_ratfun("(3 - 2*x^2*y)/(2*y)", &ctx).unwrap();
        assert!(f.equals(&g));
    }

    #[test]
    fn display_round_trips() {
        let ctx = VarContext::new(&["a", "b", "c"]).unwrap();
        for src in [
            "(a+b)^2/(c-1)",
            "-1/2*a*b^-3",
            "7",
            "(a^3+1)/(a+1) - c",
            "0",
        ] {
            let f = parse_ratfun(src, &ctx).unwrap();
            let back = parse_ratfun(&f.to_string(), &ctx).unwrap();
            assert!(f.equals(&back), "{src} -> {f}");
            let canon = parse_ratfun(&f.to_canonical_string(), &ctx).unwrap();
            assert!(f.equals(&canon), "{src} -> {}", f.to_canonical_string());
        }
    }

    #[test]
    fn canonical_form_is_lexicographic() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        let f = parse_ratfun("y + x^2 + x*y", &ctx).unwrap();
        assert_eq!(f.to_canonical_string(), "x^2 + x*y + y");
        let g = parse_ratfun("(x^3+1)/(x+1)", &ctx).unwrap();
        assert_eq!(g.to_canonical_string(), "(x^3 + 1)/(x + 1)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let ctx = VarContext::new(&["x"]).unwrap();
        assert!(matches!(
            parse_ratfun("x +", &ctx),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_ratfun("x ^ y", &ctx),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_ratfun("x $ 1", &ctx),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(parse_ratfun("z", &ctx).is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(
            rational_from_str("-3/4").unwrap(),
            Rational::new((-3).into(), 4.into())
        );
    }
}
