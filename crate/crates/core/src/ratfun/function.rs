//! Rational functions in partially factored form.
//!
//! A [`RatFun`] is stored as `coeff · x^mono · ∏ p_k^{e_k}` where every `p_k`
//! is a polynomial with no monomial factor and leading coefficient 1, and the
//! `e_k` are nonzero integers. Products and quotients only merge factor lists;
//! sums work over the common denominator `∏ p_k^{min e_k}` and then try to
//! cancel the new numerator against the factors already present. No
//! multivariate GCD is computed, so two equal functions may have different
//! representations; equality is decided by cross-multiplication.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::context::VarContext;
use super::poly::{add_exps, zero_exps, Exponents, LaurentPoly};
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Factor {
    poly: Arc<LaurentPoly>,
    exp: i32,
}

/// An exact rational function over ℚ in a fixed [`VarContext`].
#[derive(Clone, Debug)]
pub struct RatFun {
    ctx: VarContext,
    coeff: Rational,
    mono: Exponents,
    factors: Vec<Factor>,
}

fn cmp_poly(a: &LaurentPoly, b: &LaurentPoly) -> Ordering {
    a.n_terms()
        .cmp(&b.n_terms())
        .then_with(|| a.terms().cmp(b.terms()))
}

fn same_poly(a: &Arc<LaurentPoly>, b: &Arc<LaurentPoly>) -> bool {
    Arc::ptr_eq(a, b) || cmp_poly(a, b) == Ordering::Equal
}

/// Inserts `p^exp` into a sorted factor list, merging equal polynomials.
fn push_factor(factors: &mut Vec<Factor>, poly: Arc<LaurentPoly>, exp: i32) {
    if exp == 0 {
        return;
    }
    match factors.binary_search_by(|f| cmp_poly(&f.poly, &poly)) {
        Ok(i) => {
            factors[i].exp += exp;
            if factors[i].exp == 0 {
                factors.remove(i);
            }
        }
        Err(i) => factors.insert(i, Factor { poly, exp }),
    }
}

impl RatFun {
    pub fn zero(ctx: &VarContext) -> Self {
        RatFun {
            ctx: ctx.clone(),
            coeff: Rational::zero(),
            mono: zero_exps(ctx.len()),
            factors: Vec::new(),
        }
    }

    pub fn one(ctx: &VarContext) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &VarContext, c: Rational) -> Self {
        RatFun {
            ctx: ctx.clone(),
            coeff: c,
            mono: zero_exps(ctx.len()),
            factors: Vec::new(),
        }
    }

    pub fn from_int(ctx: &VarContext, c: i64) -> Self {
        Self::constant(ctx, Rational::from_integer(c.into()))
    }

    pub fn var(ctx: &VarContext, i: usize) -> Self {
        let mut mono = zero_exps(ctx.len());
        mono[i] = 1;
        RatFun {
            ctx: ctx.clone(),
            coeff: Rational::one(),
            mono,
            factors: Vec::new(),
        }
    }

    /// The variable called `name`, if it belongs to the context.
    pub fn named(ctx: &VarContext, name: &str) -> Result<Self> {
        ctx.index_of(name)
            .map(|i| Self::var(ctx, i))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {name:?}")))
    }

    /// `c · x^e` for a Laurent exponent vector `e`.
    pub fn monomial(ctx: &VarContext, e: &[i32], c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(ctx);
        }
        RatFun {
            ctx: ctx.clone(),
            coeff: c,
            mono: Exponents::from_slice(e),
            factors: Vec::new(),
        }
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        let ctx = p.ctx().clone();
        if p.is_zero() {
            return Self::zero(&ctx);
        }
        let (c, m, rest) = p.split_content();
        let mut factors = Vec::new();
        if !rest.is_monomial() {
            factors.push(Factor {
                poly: Arc::new(rest),
                exp: 1,
            });
        }
        RatFun {
            ctx,
            coeff: c,
            mono: m,
            factors,
        }
    }

    /// `num / den` for Laurent polynomials.
    pub fn from_parts(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        Self::from_poly(num).div(&Self::from_poly(den))
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.factors.is_empty() && (self.is_zero() || self.mono.iter().all(|&e| e == 0)) {
            Some(self.coeff.clone())
        } else {
            None
        }
    }

    /// True for `c · x^e` (no polynomial factors).
    pub fn is_monomial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Overall constant of the factored form.
    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    /// Laurent monomial part of the factored form.
    pub fn mono(&self) -> &[i32] {
        &self.mono
    }

    /// Polynomial factors with their (nonzero) exponents.
    pub fn factors(&self) -> impl Iterator<Item = (&LaurentPoly, i32)> {
        self.factors.iter().map(|f| (f.poly.as_ref(), f.exp))
    }

    /// Total number of stored polynomial terms, a measure of representation size.
    pub fn term_count(&self) -> usize {
        1 + self.factors.iter().map(|f| f.poly.n_terms()).sum::<usize>()
    }

    /// Upper bound on the number of terms of the expanded numerator and denominator.
    pub fn expanded_size_bound(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| (f.poly.n_terms() as f64).powi(f.exp.abs()))
            .sum::<f64>()
            + 1.0
    }

    /// Expanded numerator `N` with `self = N / D`.
    pub fn numerator(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero(&self.ctx);
        }
        let pos: Exponents = self.mono.iter().map(|&e| e.max(0)).collect();
        let mut out = LaurentPoly::monomial(&self.ctx, pos, self.coeff.clone());
        for f in self.factors.iter().filter(|f| f.exp > 0) {
            out = out.mul(&f.poly.pow(f.exp as u32));
        }
        out
    }

    /// Expanded denominator `D`: no monomial factor, leading coefficient 1.
    pub fn denominator(&self) -> LaurentPoly {
        let neg: Exponents = self.mono.iter().map(|&e| (-e).max(0)).collect();
        let mut out = LaurentPoly::monomial(&self.ctx, neg, Rational::one());
        if self.is_zero() {
            return LaurentPoly::one(&self.ctx);
        }
        for f in self.factors.iter().filter(|f| f.exp < 0) {
            out = out.mul(&f.poly.pow((-f.exp) as u32));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeff = -out.coeff;
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() || self.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = self.clone();
        out.coeff *= s;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx, "context mismatch in mul");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut factors = self.factors.clone();
        for f in &other.factors {
            push_factor(&mut factors, f.poly.clone(), f.exp);
        }
        RatFun {
            ctx: self.ctx.clone(),
            coeff: &self.coeff * &other.coeff,
            mono: add_exps(&self.mono, &other.mono),
            factors,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun {
            ctx: self.ctx.clone(),
            coeff: self.coeff.recip(),
            mono: self.mono.iter().map(|e| -e).collect(),
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    poly: f.poly.clone(),
                    exp: -f.exp,
                })
                .collect(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one(&self.ctx));
        }
        if self.is_zero() {
            return if k > 0 {
                Ok(self.clone())
            } else {
                Err(Error::DivisionByZero)
            };
        }
        let coeff = num_traits::pow(self.coeff.clone(), k.unsigned_abs() as usize);
        Ok(RatFun {
            ctx: self.ctx.clone(),
            coeff: if k > 0 { coeff } else { coeff.recip() },
            mono: self.mono.iter().map(|e| e * k).collect(),
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    poly: f.poly.clone(),
                    exp: f.exp * k,
                })
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(&[self, other])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::sum(&[self, &other.neg()])
    }

    /// Sum of several rational functions over their common denominator.
    pub fn sum(terms: &[&RatFun]) -> Self {
        sum_impl(terms, true)
    }

    /// Sum that never divides the new numerator by existing factors.
    ///
    /// Sums of subtraction-free inputs then keep all coefficients positive.
    pub fn sum_positive(terms: &[&RatFun]) -> Self {
        sum_impl(terms, false)
    }

    /// Mathematical equality, decided by cross-multiplying over the common denominator.
    pub fn equals(&self, other: &Self) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        if self.structurally_equal(other) {
            return true;
        }
        self.sub(other).is_zero()
    }

    fn structurally_equal(&self, other: &Self) -> bool {
        self.coeff == other.coeff
            && self.mono == other.mono
            && self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.exp == b.exp && same_poly(&a.poly, &b.poly))
    }

    /// Exact value at a point of the torus (all coordinates nonzero).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.ctx.len() {
            return Err(Error::InvalidArgument(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ctx.len()
            )));
        }
        if point.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidArgument(
                "torus points must have nonzero coordinates".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let mut value = self.coeff.clone();
        for (i, &e) in self.mono.iter().enumerate() {
            value *= super::poly::rational_pow(&point[i], e)?;
        }
        let mut vanished = false;
        for f in &self.factors {
            let v = f.poly.eval(point)?;
            if v.is_zero() {
                if f.exp < 0 {
                    return Err(Error::Pole);
                }
                vanished = true;
                continue;
            }
            value *= super::poly::rational_pow(&v, f.exp)?;
        }
        Ok(if vanished { Rational::zero() } else { value })
    }

    /// Composition `self ∘ images`: variable `i` is replaced by `images[i]`.
    pub fn substitute(&self, images: &[RatFun]) -> Result<RatFun> {
        if images.len() != self.ctx.len() {
            return Err(Error::InvalidArgument(format!(
                "{} images for {} variables",
                images.len(),
                self.ctx.len()
            )));
        }
        let target = match images.first() {
            Some(f) => f.ctx.clone(),
            None => {
                // A constant in the empty context.
                return Err(Error::InvalidArgument(
                    "substitution needs a target context".into(),
                ));
            }
        };
        for f in images {
            target.check_same(&f.ctx)?;
        }
        let mut cache = PowCache::new(images);
        self.substitute_with(&target, &mut cache)
    }

    /// Like [`substitute`](Self::substitute), for a function of the empty context.
    pub fn substitute_into(&self, target: &VarContext, images: &[RatFun]) -> Result<RatFun> {
        if self.ctx.is_empty() {
            return Ok(RatFun::constant(target, self.coeff.clone()));
        }
        self.substitute(images)
    }

    fn substitute_with(&self, target: &VarContext, cache: &mut PowCache<'_>) -> Result<RatFun> {
        if self.is_zero() {
            return Ok(RatFun::zero(target));
        }
        let mut out = RatFun::constant(target, self.coeff.clone());
        for (v, &e) in self.mono.iter().enumerate() {
            if e != 0 {
                out = out.mul(&cache.pow(v, e)?);
            }
        }
        for f in &self.factors {
            let mut parts = Vec::with_capacity(f.poly.n_terms());
            for (e, c) in f.poly.terms() {
                let mut t = RatFun::constant(target, c.clone());
                for (v, &k) in e.iter().enumerate() {
                    if k != 0 {
                        t = t.mul(&cache.pow(v, k)?);
                    }
                }
                parts.push(t);
            }
            let refs: Vec<&RatFun> = parts.iter().collect();
            let value = RatFun::sum(&refs);
            if value.is_zero() && f.exp < 0 {
                return Err(Error::DivisionByZero);
            }
            out = out.mul(&value.pow(f.exp)?);
        }
        Ok(out)
    }

    /// Moves this function into `target`, sending variable `i` to `target[map[i]]`.
    pub fn embed(&self, target: &VarContext, map: &[usize]) -> Result<RatFun> {
        if map.len() != self.ctx.len() || map.iter().any(|&m| m >= target.len()) {
            return Err(Error::InvalidArgument("bad embedding map".into()));
        }
        if map.windows(2).all(|w| w[0] < w[1]) {
            let mut mono = zero_exps(target.len());
            for (i, &e) in self.mono.iter().enumerate() {
                mono[map[i]] = e;
            }
            let mut factors = Vec::with_capacity(self.factors.len());
            for f in &self.factors {
                push_factor(&mut factors, Arc::new(f.poly.embed(target, map)), f.exp);
            }
            return Ok(RatFun {
                ctx: target.clone(),
                coeff: self.coeff.clone(),
                mono,
                factors,
            });
        }
        let images: Vec<RatFun> = map.iter().map(|&j| RatFun::var(target, j)).collect();
        self.substitute_into(target, &images)
    }

    /// Moves this function into `target`, matching variables by name.
    pub fn embed_by_name(&self, target: &VarContext) -> Result<RatFun> {
        let map = self
            .ctx
            .names()
            .iter()
            .map(|n| {
                target.index_of(n).ok_or_else(|| {
                    Error::ContextMismatch(format!("variable {n} missing from {target:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.embed(target, &map)
    }

    /// True if the variable occurs in some factor or in the monomial part.
    pub fn uses_var(&self, v: usize) -> bool {
        self.mono[v] != 0 || self.factors.iter().any(|f| f.poly.uses_var(v))
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Powers of substitution images, shared across the factors of one substitution.
struct PowCache<'a> {
    images: &'a [RatFun],
    cache: HashMap<(usize, i32), RatFun>,
}

impl<'a> PowCache<'a> {
    fn new(images: &'a [RatFun]) -> Self {
        PowCache {
            images,
            cache: HashMap::new(),
        }
    }

    fn pow(&mut self, v: usize, k: i32) -> Result<RatFun> {
        if let Some(p) = self.cache.get(&(v, k)) {
            return Ok(p.clone());
        }
        let p = self.images[v].pow(k)?;
        self.cache.insert((v, k), p.clone());
        Ok(p)
    }
}

fn sum_impl(terms: &[&RatFun], cancel: bool) -> RatFun {
    let nz: Vec<&RatFun> = terms.iter().copied().filter(|t| !t.is_zero()).collect();
    let Some(first) = nz.first() else {
        return match terms.first() {
            Some(t) => RatFun::zero(&t.ctx),
            None => panic!("sum of an empty list has no context"),
        };
    };
    let ctx = first.ctx.clone();
    if nz.len() == 1 {
        return (*first).clone();
    }
    debug_assert!(nz.iter().all(|t| t.ctx == ctx), "context mismatch in sum");
    let k = ctx.len();

    // Common monomial and common factor powers.
    let mut common_mono: Exponents = first.mono.clone();
    for t in &nz[1..] {
        for v in 0..k {
            common_mono[v] = common_mono[v].min(t.mono[v]);
        }
    }
    let mut distinct: Vec<Arc<LaurentPoly>> = Vec::new();
    for t in &nz {
        for f in &t.factors {
            if !distinct.iter().any(|p| same_poly(p, &f.poly)) {
                distinct.push(f.poly.clone());
            }
        }
    }
    let exps: Vec<Vec<i32>> = nz
        .iter()
        .map(|t| {
            distinct
                .iter()
                .map(|p| {
                    t.factors
                        .iter()
                        .find(|f| same_poly(&f.poly, p))
                        .map_or(0, |f| f.exp)
                })
                .collect()
        })
        .collect();
    let common: Vec<i32> = (0..distinct.len())
        .map(|j| exps.iter().map(|e| e[j]).min().unwrap_or(0))
        .collect();

    // Numerator over the common denominator; every exponent here is nonnegative.
    let mut powers: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
    let mut numer = LaurentPoly::zero(&ctx);
    for (t, e) in nz.iter().zip(&exps) {
        let shift: Exponents = t
            .mono
            .iter()
            .zip(&common_mono)
            .map(|(a, b)| a - b)
            .collect();
        let mut prod = LaurentPoly::monomial(&ctx, shift, t.coeff.clone());
        for (j, p) in distinct.iter().enumerate() {
            let r = e[j] - common[j];
            if r > 0 {
                let pw = powers.entry((j, r)).or_insert_with(|| p.pow(r as u32));
                prod = prod.mul(pw);
            }
        }
        numer = numer.add(&prod);
    }
    if numer.is_zero() {
        return RatFun::zero(&ctx);
    }

    let (c, m, mut rest) = numer.split_content();
    let mut factors: Vec<Factor> = Vec::new();
    for (j, p) in distinct.iter().enumerate() {
        push_factor(&mut factors, p.clone(), common[j]);
    }
    if cancel && !rest.is_monomial() {
        // Denominator factors first, then factors of the inputs (for sharing).
        let mut order: Vec<usize> = (0..distinct.len()).collect();
        order.sort_by_key(|&j| (common[j] >= 0, distinct[j].n_terms()));
        for j in order {
            while !rest.is_monomial() {
                match rest.div_exact(&distinct[j]) {
                    Some(q) => {
                        push_factor(&mut factors, distinct[j].clone(), 1);
                        rest = q;
                    }
                    None => break,
                }
            }
        }
    }
    let mut coeff = c;
    if !rest.is_monomial() {
        push_factor(&mut factors, Arc::new(rest), 1);
    } else {
        // A quotient of monic polynomials is monic.
        coeff *= &rest.terms()[0].1;
    }
    RatFun {
        ctx,
        coeff,
        mono: add_exps(&common_mono, &m),
        factors,
    }
}
