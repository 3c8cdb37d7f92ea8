//! Sparse multivariate Laurent polynomials over ℚ.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::context::VarContext;
use super::Rational;
use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial, one entry per context variable.
pub type Exponents = SmallVec<[i32; 12]>;

/// A Laurent polynomial: a finite map from exponent vectors to nonzero rationals.
///
/// Terms are kept sorted in descending lexicographic order of their exponent
/// vectors, so the first term is the leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ctx: VarContext,
    terms: Vec<(Exponents, Rational)>,
}

impl LaurentPoly {
    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn new(
        ctx: VarContext,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let k = ctx.len();
        let mut acc: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "exponent vector of length {} in a context of {k} variables",
                    e.len()
                )));
            }
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(LaurentPoly { ctx, terms })
    }

    pub fn zero(ctx: &VarContext) -> Self {
        LaurentPoly {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ctx: &VarContext) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &VarContext, c: Rational) -> Self {
        Self::monomial(ctx, zero_exps(ctx.len()), c)
    }

    pub fn monomial(ctx: &VarContext, e: Exponents, c: Rational) -> Self {
        debug_assert_eq!(e.len(), ctx.len());
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(e, c)]
        };
        LaurentPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn var(ctx: &VarContext, i: usize) -> Self {
        let mut e = zero_exps(ctx.len());
        e[i] = 1;
        Self::monomial(ctx, e, Rational::one())
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Exponents, Rational)] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The value of a constant polynomial (zero polynomial included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Exponents, Rational)> {
        self.terms.first()
    }

    /// Componentwise minimum exponent (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return zero_exps(self.ctx.len());
        };
        let mut m = first.clone();
        for (e, _) in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return zero_exps(self.ctx.len());
        };
        let mut m = first.clone();
        for (e, _) in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    /// True if some variable occurs with a nonzero exponent.
    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[v] != 0)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        if shift.iter().all(|&s| s == 0) {
            return self.clone();
        }
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, shift), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        if other.is_monomial() {
            let (e, c) = &other.terms[0];
            return self.shift(e).scale(c);
        }
        if self.is_monomial() {
            let (e, c) = &self.terms[0];
            return other.shift(e).scale(c);
        }
        let mut acc: HashMap<Exponents, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = add_exps(ea, eb);
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact evaluation at a point with all coordinates nonzero.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.ctx.len() {
            return Err(Error::InvalidArgument(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ctx.len()
            )));
        }
        let mut cache: HashMap<(usize, i32), Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = match cache.get(&(i, k)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = rational_pow(&point[i], k)?;
                        cache.insert((i, k), p.clone());
                        p
                    }
                };
                v *= p;
            }
            total += v;
        }
        Ok(total)
    }

    /// Splits `self = c · x^m · p` where `p` has no monomial factor and leading coefficient 1.
    pub fn split_content(&self) -> (Rational, Exponents, LaurentPoly) {
        if self.is_zero() {
            return (Rational::zero(), zero_exps(self.ctx.len()), self.clone());
        }
        let m = self.min_exponents();
        let lc = self.terms[0].1.clone();
        let inv = lc.recip();
        let neg: Exponents = m.iter().map(|x| -x).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (add_exps(e, &neg), c * &inv))
            .collect();
        (
            lc,
            m,
            LaurentPoly {
                ctx: self.ctx.clone(),
                terms,
            },
        )
    }

    /// Quotient `self / d` if `d` divides `self` exactly.
    ///
    /// Both operands must have nonnegative exponents; division proceeds by
    /// leading terms in lexicographic order.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        debug_assert_eq!(self.ctx, d.ctx);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.ctx));
        }
        if d.is_monomial() {
            let (e, c) = &d.terms[0];
            let neg: Exponents = e.iter().map(|x| -x).collect();
            let q = self.shift(&neg).scale(&c.recip());
            return if q.min_exponents().iter().all(|&x| x >= 0) {
                Some(q)
            } else {
                None
            };
        }
        // Degree bounds are necessary conditions for divisibility.
        let (smin, smax) = (self.min_exponents(), self.max_exponents());
        let (dmin, dmax) = (d.min_exponents(), d.max_exponents());
        for v in 0..self.ctx.len() {
            if smin[v] < 0 || dmin[v] < 0 || dmax[v] - dmin[v] > smax[v] - smin[v] {
                return None;
            }
        }
        let (lt_e, lt_c) = &d.terms[0];
        let lt_inv = lt_c.recip();
        let mut rem: BTreeMap<Exponents, Rational> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Exponents, Rational)> = Vec::new();
        while let Some((e, c)) = rem.pop_last() {
            let mut qe = Exponents::with_capacity(e.len());
            for (a, b) in e.iter().zip(lt_e) {
                if a < b {
                    return None;
                }
                qe.push(a - b);
            }
            let qc = &c * &lt_inv;
            for (de, dc) in &d.terms[1..] {
                let te = add_exps(&qe, de);
                let tc = &qc * dc;
                match rem.get_mut(&te) {
                    Some(v) => {
                        *v -= tc;
                        if v.is_zero() {
                            rem.remove(&te);
                        }
                    }
                    None => {
                        rem.insert(te, -tc);
                    }
                }
            }
            quot.push((qe, qc));
        }
        Some(LaurentPoly {
            ctx: self.ctx.clone(),
            terms: quot,
        })
    }

    /// Re-expresses this polynomial in a larger context: variable `i` maps to `target` index `map[i]`.
    pub fn embed(&self, target: &VarContext, map: &[usize]) -> Self {
        debug_assert_eq!(map.len(), self.ctx.len());
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = zero_exps(target.len());
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            (ne, c.clone())
        });
        // Injective embeddings keep lexicographic order only when `map` is increasing.
        if map.windows(2).all(|w| w[0] < w[1]) {
            LaurentPoly {
                ctx: target.clone(),
                terms: terms.collect(),
            }
        } else {
            LaurentPoly::new(target.clone(), terms).expect("embedding preserves lengths")
        }
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_positive())
    }
}

pub(crate) fn zero_exps(k: usize) -> Exponents {
    SmallVec::from_elem(0, k)
}

pub(crate) fn add_exps(a: &[i32], b: &[i32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn rational_pow(x: &Rational, k: i32) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::one());
    }
    if x.is_zero() {
        return if k > 0 {
            Ok(Rational::zero())
        } else {
            Err(Error::Pole)
        };
    }
    let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
    Ok(if k > 0 { p } else { p.recip() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn ctx() -> VarContext {
        VarContext::new(&["x", "y"]).unwrap()
    }

    fn p(terms: &[([i32; 2], i64)]) -> LaurentPoly {
        LaurentPoly::new(
            ctx(),
            terms.iter().map(|(e, c)| (Exponents::from_slice(e), q(*c))),
        )
        .unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[([1, 0], 1), ([0, 1], 1)]);
        let b = p(&[([1, 0], 1), ([0, 1], -1)]);
        assert_eq!(a.mul(&b), p(&[([2, 0], 1), ([0, 2], -1)]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.pow(2), p(&[([2, 0], 1), ([1, 1], 2), ([0, 2], 1)]));
    }

    #[test]
    fn exact_division() {
        // x^3 + 1 = (x + 1)(x^2 - x + 1)
        let f = p(&[([3, 0], 1), ([0, 0], 1)]);
        let d = p(&[([1, 0], 1), ([0, 0], 1)]);
        assert_eq!(
            f.div_exact(&d),
            Some(p(&[([2, 0], 1), ([1, 0], -1), ([0, 0], 1)]))
        );
        let g = p(&[([3, 0], 1), ([0, 0], 2)]);
        assert_eq!(g.div_exact(&d), None);
        let h = p(&[([2, 0], 1), ([0, 2], -1)]);
        let xy = p(&[([1, 0], 1), ([0, 1], -1)]);
        assert_eq!(h.div_exact(&xy), Some(p(&[([1, 0], 1), ([0, 1], 1)])));
    }

    #[test]
    fn laurent_evaluation() {
        let f = p(&[([-2, 0], 1), ([0, 1], 3)]);
        assert_eq!(
            f.eval(&[q(2), q(1)]).unwrap(),
            Rational::new(BigInt::from(13), BigInt::from(4))
        );
        assert_eq!(f.eval(&[q(0), q(1)]), Err(Error::Pole));
    }

    #[test]
    fn content_split() {
        let f = p(&[([3, 1], 2), ([1, 2], 4)]);
        let (c, m, r) = f.split_content();
        assert_eq!(c, q(2));
        assert_eq!(m.as_slice(), &[1, 1]);
        assert_eq!(r, p(&[([2, 0], 1), ([0, 1], 2)]));
    }
}
