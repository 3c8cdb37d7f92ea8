//! Degree-oracle tropicalization and structural min-plus images.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::pl::{PLExpr, PLProgram};
use crate::error::{Error, Result};
use crate::ratfun::{PosExpr, PosNode, RatFun, Rational};

#[derive(Clone, Debug)]
struct CompiledFactor {
    nvars: usize,
    exps: Vec<i32>,
    coeffs: Vec<Rational>,
    positive: bool,
    exp: i64,
}

impl CompiledFactor {
    fn dot(&self, t: usize, lambda: &[i64]) -> i64 {
        self.exps[t * self.nvars..(t + 1) * self.nvars]
            .iter()
            .zip(lambda)
            .map(|(&e, &l)| e as i64 * l)
            .sum()
    }

    /// Lowest degree of `p(s^λ)` with a nonzero coefficient.
    fn lowest_degree(&self, lambda: &[i64]) -> Option<i64> {
        let n = self.coeffs.len();
        if self.positive {
            return (0..n).map(|t| self.dot(t, lambda)).min();
        }
        let mut dots: Vec<(i64, usize)> = (0..n).map(|t| (self.dot(t, lambda), t)).collect();
        dots.sort_unstable();
        let mut k = 0;
        while k < dots.len() {
            let d = dots[k].0;
            let mut sum = Rational::zero();
            while k < dots.len() && dots[k].0 == d {
                sum += &self.coeffs[dots[k].1];
                k += 1;
            }
            if !sum.is_zero() {
                return Some(d);
            }
        }
        None
    }
}

/// A rational function prepared for repeated tropical evaluation.
///
/// The value at `λ` is the lowest exponent of `f(s^{λ_1}, …, s^{λ_k})`.
#[derive(Clone, Debug)]
pub struct TropFn {
    nvars: usize,
    mono: Vec<i64>,
    factors: Vec<CompiledFactor>,
    zero: bool,
}

impl TropFn {
    pub fn new(f: &RatFun) -> Self {
        let nvars = f.ctx().len();
        let factors = f
            .factors()
            .map(|(p, e)| CompiledFactor {
                nvars,
                exps: p
                    .terms()
                    .iter()
                    .flat_map(|(x, _)| x.iter().copied())
                    .collect(),
                coeffs: p.terms().iter().map(|(_, c)| c.clone()).collect(),
                positive: p.terms().iter().all(|(_, c)| c.is_positive()),
                exp: e as i64,
            })
            .collect();
        TropFn {
            nvars,
            mono: f.mono().iter().map(|&e| e as i64).collect(),
            factors,
            zero: f.is_zero(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, lambda: &[i64]) -> Result<i64> {
        if self.zero {
            return Err(Error::DegreeUndefined);
        }
        if lambda.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "co-character of length {} for {} variables",
                lambda.len(),
                self.nvars
            )));
        }
        let mut acc: i64 = self.mono.iter().zip(lambda).map(|(m, l)| m * l).sum();
        for f in &self.factors {
            let d = f
                .lowest_degree(lambda)
                .ok_or_else(|| Error::Cancellation(lambda.to_vec()))?;
            acc += f.exp * d;
        }
        Ok(acc)
    }
}

/// Degree of a univariate rational function: lowest exponent of the
/// numerator minus lowest exponent of the denominator.
pub fn deg(f: &RatFun) -> Result<i64> {
    if f.ctx().len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "deg needs a univariate function, got {:?}",
            f.ctx()
        )));
    }
    trop_eval(f, &[1])
}

/// `Trop(f)(λ)`: the degree of `f` restricted to the curve `x_i = s^{λ_i}`.
///
/// Fails with [`Error::Cancellation`] when the restriction vanishes
/// identically, which cannot happen for a positive function.
pub fn trop_eval(f: &RatFun, lambda: &[i64]) -> Result<i64> {
    TropFn::new(f).eval(lambda)
}

/// Node-wise min-plus image of a subtraction-free expression.
pub fn trop_structural(e: &PosExpr) -> PLExpr {
    fn go(e: &PosExpr, memo: &mut HashMap<usize, PLExpr>) -> PLExpr {
        if let Some(p) = memo.get(&e.id()) {
            return p.clone();
        }
        let p = match e.node() {
            PosNode::Var(i) => PLExpr::var(*i),
            PosNode::Const(_) => PLExpr::constant(0),
            PosNode::Sum(ps) => {
                PLExpr::min(ps.iter().map(|p| go(p, memo)).collect()).expect("nonempty sum")
            }
            PosNode::Product(ps) => PLExpr::sum(ps.iter().map(|p| go(p, memo)).collect()),
            PosNode::Quotient(a, b) => PLExpr::diff(go(a, memo), go(b, memo)),
        };
        memo.insert(e.id(), p.clone());
        p
    }
    go(e, &mut HashMap::new())
}

/// A piecewise-linear map `ℤ^k → ℤ^ℓ`, in oracle form, closed form, or both.
#[derive(Clone, Debug)]
pub struct TropMap {
    source_dim: usize,
    oracle: Option<Vec<TropFn>>,
    closed: Option<(Vec<PLExpr>, Vec<PLProgram>)>,
}

impl TropMap {
    /// Oracle form of the map with the given coordinate functions.
    pub fn from_ratfuns(fs: &[RatFun]) -> Result<Self> {
        let k = fs
            .first()
            .map(|f| f.ctx().len())
            .ok_or_else(|| Error::InvalidArgument("empty map".into()))?;
        for f in fs {
            fs[0].ctx().check_same(f.ctx())?;
        }
        Ok(TropMap {
            source_dim: k,
            oracle: Some(fs.iter().map(TropFn::new).collect()),
            closed: None,
        })
    }

    pub fn from_pl(source_dim: usize, exprs: Vec<PLExpr>) -> Result<Self> {
        let mut m = TropMap {
            source_dim,
            oracle: None,
            closed: None,
        };
        m.set_closed(exprs)?;
        Ok(m)
    }

    pub fn identity(k: usize) -> Self {
        Self::from_pl(k, (0..k).map(PLExpr::var).collect()).expect("identity")
    }

    /// Attaches a closed form alongside the oracle.
    pub fn set_closed(&mut self, exprs: Vec<PLExpr>) -> Result<()> {
        if let Some(o) = &self.oracle {
            if o.len() != exprs.len() {
                return Err(Error::InvalidArgument(
                    "closed form has the wrong target dimension".into(),
                ));
            }
        }
        if exprs.iter().any(|e| e.arity() > self.source_dim) {
            return Err(Error::InvalidArgument(
                "closed form uses too many variables".into(),
            ));
        }
        let progs = exprs.iter().map(PLExpr::compile).collect();
        self.closed = Some((exprs, progs));
        Ok(())
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        match (&self.oracle, &self.closed) {
            (Some(o), _) => o.len(),
            (None, Some((e, _))) => e.len(),
            (None, None) => 0,
        }
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    pub fn closed_form(&self) -> Option<&[PLExpr]> {
        self.closed.as_ref().map(|(e, _)| e.as_slice())
    }

    fn check_dim(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.source_dim {
            return Err(Error::InvalidArgument(format!(
                "point of length {} for ℤ^{}",
                x.len(),
                self.source_dim
            )));
        }
        Ok(())
    }

    pub fn eval_oracle(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_dim(x)?;
        let o = self
            .oracle
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("no oracle form".into()))?;
        o.iter().map(|f| f.eval(x)).collect()
    }

    pub fn eval_closed(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_dim(x)?;
        let (_, progs) = self
            .closed
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("no closed form".into()))?;
        let mut scratch = Vec::new();
        Ok(progs.iter().map(|p| p.eval_with(x, &mut scratch)).collect())
    }

    /// Oracle form when present, else the closed form.
    pub fn eval(&self, x: &[i64]) -> Result<Vec<i64>> {
        if self.oracle.is_some() {
            self.eval_oracle(x)
        } else {
            self.eval_closed(x)
        }
    }

    /// View of the closed form alone, for comparisons against the oracle.
    pub fn closed_only(&self) -> Option<TropMap> {
        self.closed.as_ref().map(|c| TropMap {
            source_dim: self.source_dim,
            oracle: None,
            closed: Some(c.clone()),
        })
    }

    /// View of the oracle form alone.
    pub fn oracle_only(&self) -> Option<TropMap> {
        self.oracle.as_ref().map(|o| TropMap {
            source_dim: self.source_dim,
            oracle: Some(o.clone()),
            closed: None,
        })
    }
}

pub fn trop_map_eval(f: &TropMap, lambda: &[i64]) -> Result<Vec<i64>> {
    f.eval(lambda)
}

/// Anything that can be evaluated pointwise on a lattice.
pub trait PLFunction: Sync {
    fn eval_point(&self, x: &[i64]) -> Result<Vec<i64>>;
}

impl PLFunction for PLExpr {
    fn eval_point(&self, x: &[i64]) -> Result<Vec<i64>> {
        Ok(vec![super::pl::pl_eval(self, x)?])
    }
}

impl PLFunction for PLProgram {
    fn eval_point(&self, x: &[i64]) -> Result<Vec<i64>> {
        Ok(vec![self.eval(x)])
    }
}

impl PLFunction for TropMap {
    fn eval_point(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.eval(x)
    }
}

impl PLFunction for TropFn {
    fn eval_point(&self, x: &[i64]) -> Result<Vec<i64>> {
        Ok(vec![self.eval(x)?])
    }
}

impl<F: Fn(&[i64]) -> Result<Vec<i64>> + Sync> PLFunction for F {
    fn eval_point(&self, x: &[i64]) -> Result<Vec<i64>> {
        self(x)
    }
}

/// A product of closed integer intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IntBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidArgument("malformed box".into()));
        }
        Ok(IntBox { lo, hi })
    }

    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        IntBox {
            lo: vec![lo; dim],
            hi: vec![hi; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Number of lattice points, saturating.
    pub fn size(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .fold(1u128, |acc, (a, b)| acc.saturating_mul((b - a + 1) as u128))
    }

    /// The `k`-th lattice point in mixed-radix order (first coordinate slowest).
    pub fn point(&self, mut k: u128) -> Vec<i64> {
        let mut x = vec![0; self.dim()];
        for d in (0..self.dim()).rev() {
            let w = (self.hi[d] - self.lo[d] + 1) as u128;
            x[d] = self.lo[d] + (k % w) as i64;
            k /= w;
        }
        x
    }

    pub fn corners(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        (0..1u64 << d)
            .map(|mask| {
                (0..d)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            self.hi[i]
                        } else {
                            self.lo[i]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<i64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| rng.gen_range(a..=b))
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| a <= v && v <= b)
    }
}

/// Outcome of a pointwise comparison on a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxComparison {
    pub points_checked: usize,
    /// First point (in check order) where the two sides differ.
    pub witness: Option<Vec<i64>>,
}

impl BoxComparison {
    pub fn agree(&self) -> bool {
        self.witness.is_none()
    }
}

/// Boxes up to this many points are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u128 = 200_000;

/// Compares two maps at every corner of the box, at every lattice point if
/// the box is small, and at `samples` seeded random points.
pub fn pl_compare_on_box(
    p: &dyn PLFunction,
    q: &dyn PLFunction,
    bx: &IntBox,
    samples: usize,
    seed: u64,
) -> BoxComparison {
    let mut points = bx.corners();
    if bx.size() <= EXHAUSTIVE_LIMIT {
        points.extend((0..bx.size()).map(|k| bx.point(k)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points.extend((0..samples).map(|_| bx.sample(&mut rng)));
    let witness = points
        .par_iter()
        .find_first(|x| p.eval_point(x) != q.eval_point(x))
        .cloned();
    BoxComparison {
        points_checked: points.len(),
        witness,
    }
}

pub fn pl_equal_on_box(
    p: &dyn PLFunction,
    q: &dyn PLFunction,
    bx: &IntBox,
    samples: usize,
    seed: u64,
) -> bool {
    pl_compare_on_box(p, q, bx, samples, seed).agree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse_ratfun, pos_to_ratfun, VarContext};

    fn s() -> VarContext {
        VarContext::new(&["s"]).unwrap()
    }

    fn xy() -> VarContext {
        VarContext::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn univariate_degrees() {
        let f = parse_ratfun("(s^2 + s^5)/(s^-1 + s)", &s()).unwrap();
        assert_eq!(deg(&f).unwrap(), 3);
        let g = parse_ratfun("(s^3 + 1)/(s + 1)", &s()).unwrap();
        assert_eq!(deg(&g).unwrap(), 0);
        let z = parse_ratfun("s^4 - s^4", &s()).unwrap();
        assert_eq!(deg(&z), Err(Error::DegreeUndefined));
    }

    #[test]
    fn trop_eval_examples() {
        let f = parse_ratfun("(x^3 + 1)/(x + 1)", &xy()).unwrap();
        assert_eq!(trop_eval(&f, &[1, 0]).unwrap(), 0);
        assert_eq!(trop_eval(&f, &[-2, 0]).unwrap(), -4);
        let g = parse_ratfun("x + y", &xy()).unwrap();
        assert_eq!(trop_eval(&g, &[3, 5]).unwrap(), 3);
        let h = parse_ratfun("y - x", &xy()).unwrap();
        assert_eq!(trop_eval(&h, &[2, 2]), Err(Error::Cancellation(vec![2, 2])));
    }

    #[test]
    fn lowest_surviving_degree_after_partial_cancellation() {
        // x - y + x^2 at (1,1): degree-1 terms cancel, s^2 survives.
        let f = parse_ratfun("x - y + x^2", &xy()).unwrap();
        assert_eq!(trop_eval(&f, &[1, 1]).unwrap(), 2);
    }

    #[test]
    fn structural_matches_worked_examples() {
        let ctx = VarContext::new(&["x"]).unwrap();
        let e =
            PosExpr::from_expr(&crate::ratfun::parse_expr("(x^3+1)/(x+1)").unwrap(), &ctx).unwrap();
        let p = trop_structural(&e);
        let closed = PLExpr::parse("min(2*x, 0)", &ctx).unwrap();
        assert!(pl_equal_on_box(
            &p,
            &closed,
            &IntBox::cube(1, -10, 10),
            0,
            1
        ));
        let f = pos_to_ratfun(&e, &ctx).unwrap();
        for l in -10..=10 {
            assert_eq!(p.eval(&[l]), trop_eval(&f, &[l]).unwrap());
        }
        let seven = PosExpr::constant(Rational::from_integer(7.into())).unwrap();
        assert_eq!(trop_structural(&seven).eval(&[5]), 0);
    }

    #[test]
    fn box_comparison_finds_witness() {
        let p = PLExpr::parse("min(x, y)", &xy()).unwrap();
        let q = PLExpr::parse("x", &xy()).unwrap();
        let r = pl_compare_on_box(&p, &q, &IntBox::cube(2, -2, 2), 10, 3);
        assert!(!r.agree());
        assert!(pl_equal_on_box(&p, &p, &IntBox::cube(2, -2, 2), 10, 3));
    }

    #[test]
    fn counterexample_map() {
        let f = TropMap::from_ratfuns(&[
            parse_ratfun("x", &xy()).unwrap(),
            parse_ratfun("x + y", &xy()).unwrap(),
        ])
        .unwrap();
        assert_eq!(trop_map_eval(&f, &[0, 1]).unwrap(), vec![0, 0]);
        let finv = TropMap::from_ratfuns(&[
            parse_ratfun("x", &xy()).unwrap(),
            parse_ratfun("y - x", &xy()).unwrap(),
        ])
        .unwrap();
        let mid = trop_map_eval(&f, &[0, 1]).unwrap();
        assert!(matches!(
            trop_map_eval(&finv, &mid),
            Err(Error::Cancellation(_))
        ));
        assert_eq!(
            trop_map_eval(&TropMap::identity(2), &[4, -1]).unwrap(),
            vec![4, -1]
        );
    }

    #[test]
    fn box_points_cover_box() {
        let b = IntBox::new(vec![-1, 0], vec![1, 2]).unwrap();
        assert_eq!(b.size(), 9);
        let pts: std::collections::BTreeSet<_> = (0..9).map(|k| b.point(k)).collect();
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|p| b.contains(p)));
        assert_eq!(b.corners().len(), 4);
    }

    #[test]
    fn functoriality_on_random_maps() {
        let r = crate::tropical::functoriality_check(20, 20, 4).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.points, 400);
    }
}
