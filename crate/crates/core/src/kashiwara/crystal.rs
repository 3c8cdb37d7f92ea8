use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geocrystal::{GeometricCrystal, Status, VerificationReport};
use crate::ratfun::{RatFun, VarContext};
use crate::tropical::{pl_compare_on_box, IntBox, PLExpr, TropMap};

/// A point `(λ; m)` of the free crystal `X̃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KashiwaraElement {
    pub lambda: Vec<i64>,
    pub m: Vec<i64>,
}

impl KashiwaraElement {
    pub fn new(lambda: Vec<i64>, m: Vec<i64>) -> Self {
        KashiwaraElement { lambda, m }
    }

    pub fn from_coords(lambda_len: usize, x: &[i64]) -> Self {
        KashiwaraElement {
            lambda: x[..lambda_len].to_vec(),
            m: x[lambda_len..].to_vec(),
        }
    }

    /// `λ` followed by `m`, in chart order.
    pub fn coords(&self) -> Vec<i64> {
        self.lambda.iter().chain(&self.m).copied().collect()
    }
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for KashiwaraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", tuple(&self.lambda), tuple(&self.m))
    }
}

/// The tropicalization `Trop(X, θ)` of a positive decorated geometric crystal.
///
/// Every map is kept in oracle form (lowest-degree extraction from the
/// source functions); known closed PL formulas ride along for comparison.
#[derive(Clone, Debug)]
pub struct TropCrystal {
    source: GeometricCrystal,
    lambda_len: usize,
    names: VarContext,
    ext_names: VarContext,
    f: TropMap,
    phi: Vec<TropMap>,
    eps: Vec<TropMap>,
    e: Vec<TropMap>,
    gamma: TropMap,
    f0: Vec<Option<TropMap>>,
    f_shift: i64,
    phi_shift: Vec<i64>,
}

/// Leading chart variables named `t1, t2, …` form the `λ` block.
fn count_lambda(chart: &VarContext) -> usize {
    chart
        .names()
        .iter()
        .enumerate()
        .take_while(|(k, s)| **s == format!("t{}", k + 1))
        .count()
}

fn tropical_names(chart: &VarContext, lambda_len: usize) -> VarContext {
    let names: Vec<String> = chart
        .names()
        .iter()
        .enumerate()
        .map(|(k, s)| {
            if k < lambda_len {
                format!("l{}", k + 1)
            } else if s.starts_with('c') && s[1..].parse::<usize>().is_ok() {
                format!("m{}", &s[1..])
            } else {
                s.clone()
            }
        })
        .collect();
    VarContext::new(&names).unwrap_or_else(|_| chart.clone())
}

fn single(f: &RatFun) -> Result<TropMap> {
    TropMap::from_ratfuns(std::slice::from_ref(f))
}

fn scalar(m: &TropMap, x: &[i64]) -> Result<i64> {
    Ok(m.eval(x)?[0])
}

/// Builds `Trop(X, θ)`: `f̃ = Trop(f)`, `φ̃_i = −Trop(φ_i)`, `ε̃_i = −Trop(ε_i)`,
/// `γ̃ = Trop(γ)` and `ẽ_i = Trop(e_i)` as a map of `(λ, m, n)`.
pub fn tropicalize(x: &GeometricCrystal) -> Result<TropCrystal> {
    let chart = x.chart();
    let lambda_len = count_lambda(chart);
    let names = tropical_names(chart, lambda_len);
    let n = names.fresh_names("n", 1);
    let ext_names = names.extend(&n)?;
    let dim = chart.len();
    let f = single(x.f())?;
    let phi = (1..=x.rank())
        .map(|i| single(&x.phi(i).inv()?))
        .collect::<Result<Vec<_>>>()?;
    let eps = (1..=x.rank())
        .map(|i| single(&x.eps(i).inv()?))
        .collect::<Result<Vec<_>>>()?;
    let e = (1..=x.rank())
        .map(|i| {
            if x.trivial_action(i) {
                TropMap::from_pl(dim + 1, (0..dim).map(PLExpr::var).collect())
            } else {
                TropMap::from_ratfuns(x.e_action(i))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = TropMap::from_ratfuns(x.gamma())?;
    let f0 = (1..=x.rank())
        .map(|i| {
            let g = x.f0(i)?;
            if g.is_zero() {
                Ok(None)
            } else {
                single(&g).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = TropCrystal {
        source: x.clone(),
        lambda_len,
        names,
        ext_names,
        f,
        phi,
        eps,
        e,
        gamma,
        f0,
        f_shift: 0,
        phi_shift: vec![0; x.rank()],
    };
    if x.name() == "GL3[1,2,1]" && dim == 6 && lambda_len == 3 {
        t.attach_gl3_closed_forms()?;
    }
    Ok(t)
}

/// The printed piecewise-linear formulas for `GL_3` in the chart `(1,2,1)`.
pub const GL3_CLOSED_F: &str = "min(m1, m2-m3, m3, l2-l3-max(m3, m2-m1), l1-l2-m1)";
pub const GL3_CLOSED_PHI: [&str; 2] = ["l1-l2-min(m1, 2*m1+m3-m2)", "l2-l3+m1-m2"];
pub const GL3_CLOSED_EPS: [&str; 2] = ["max(m3, m1+2*m3-m2)", "m2-m3"];
pub const GL3_CLOSED_E: [[&str; 6]; 2] = [
    [
        "l1",
        "l2",
        "l3",
        "m1+max(m1+m3-m2-n, 0)-max(m1+m3-m2, 0)",
        "m2",
        "m3+max(m1+m3-m2, 0)-max(m1+m3-m2, n)",
    ],
    ["l1", "l2", "l3", "m1", "m2-n", "m3"],
];

impl TropCrystal {
    /// Installs the `GL_3` closed forms next to the oracle maps.
    pub fn attach_gl3_closed_forms(&mut self) -> Result<()> {
        let p = |s: &str| PLExpr::parse(s, &self.names);
        let q = |s: &str| PLExpr::parse(s, &self.ext_names);
        let f = vec![p(GL3_CLOSED_F)?];
        let phi = GL3_CLOSED_PHI
            .iter()
            .map(|s| p(s))
            .collect::<Result<Vec<_>>>()?;
        let eps = GL3_CLOSED_EPS
            .iter()
            .map(|s| p(s))
            .collect::<Result<Vec<_>>>()?;
        let e = GL3_CLOSED_E
            .iter()
            .map(|row| row.iter().map(|s| q(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        self.f.set_closed(f)?;
        for (k, ph) in phi.into_iter().enumerate() {
            self.phi[k].set_closed(vec![ph])?;
        }
        for (k, ep) in eps.into_iter().enumerate() {
            self.eps[k].set_closed(vec![ep])?;
        }
        for (k, ek) in e.into_iter().enumerate() {
            self.e[k].set_closed(ek)?;
        }
        Ok(())
    }

    pub fn source(&self) -> &GeometricCrystal {
        &self.source
    }

    pub fn rank(&self) -> usize {
        self.source.rank()
    }

    /// Number of coordinates of `X̃`.
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn lambda_len(&self) -> usize {
        self.lambda_len
    }

    /// Coordinate names `l1.., m1..` (other chart names are kept).
    pub fn names(&self) -> &VarContext {
        &self.names
    }

    /// [`Self::names`] followed by the step variable `n`.
    pub fn ext_names(&self) -> &VarContext {
        &self.ext_names
    }

    pub fn f_map(&self) -> &TropMap {
        &self.f
    }

    pub fn phi_map(&self, i: usize) -> &TropMap {
        &self.phi[i - 1]
    }

    pub fn eps_map(&self, i: usize) -> &TropMap {
        &self.eps[i - 1]
    }

    pub fn e_map(&self, i: usize) -> &TropMap {
        &self.e[i - 1]
    }

    pub fn gamma_map(&self) -> &TropMap {
        &self.gamma
    }

    /// Whether the printed closed forms are attached.
    pub fn has_closed_forms(&self) -> bool {
        self.f.closed_form().is_some()
    }

    /// Adds a constant to `f̃`, for negative controls.
    pub fn with_f_shift(mut self, k: i64) -> Self {
        self.f_shift = k;
        self
    }

    /// Adds a constant to `φ̃_i`, for negative controls.
    pub fn with_phi_shift(mut self, i: usize, k: i64) -> Self {
        self.phi_shift[i - 1] = k;
        self
    }

    fn check(&self, b: &KashiwaraElement) -> Result<Vec<i64>> {
        if b.lambda.len() != self.lambda_len || b.lambda.len() + b.m.len() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "{b} does not fit ℤ^{}",
                self.dim()
            )));
        }
        Ok(b.coords())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        self.source.check_index(i)
    }

    pub fn f_at(&self, x: &[i64]) -> Result<i64> {
        Ok(scalar(&self.f, x)? + self.f_shift)
    }

    pub fn phi_at(&self, i: usize, x: &[i64]) -> Result<i64> {
        Ok(scalar(&self.phi[i - 1], x)? + self.phi_shift[i - 1])
    }

    pub fn eps_at(&self, i: usize, x: &[i64]) -> Result<i64> {
        scalar(&self.eps[i - 1], x)
    }

    /// `f̃₀` via index `i`; `None` stands for `+∞` (when `f₀ = 0`).
    pub fn f0_at(&self, i: usize, x: &[i64]) -> Result<Option<i64>> {
        self.f0[i - 1].as_ref().map(|m| scalar(m, x)).transpose()
    }

    pub fn e_at(&self, i: usize, n: i64, x: &[i64]) -> Result<Vec<i64>> {
        let mut p = x.to_vec();
        p.push(n);
        self.e[i - 1].eval(&p)
    }

    pub fn f_tilde(&self, b: &KashiwaraElement) -> Result<i64> {
        self.f_at(&self.check(b)?)
    }

    pub fn phi_tilde(&self, i: usize, b: &KashiwaraElement) -> Result<i64> {
        self.check_index(i)?;
        self.phi_at(i, &self.check(b)?)
    }

    pub fn eps_tilde(&self, i: usize, b: &KashiwaraElement) -> Result<i64> {
        self.check_index(i)?;
        self.eps_at(i, &self.check(b)?)
    }

    pub fn gamma_tilde(&self, b: &KashiwaraElement) -> Result<Vec<i64>> {
        self.gamma.eval(&self.check(b)?)
    }

    pub fn f0_tilde(&self, i: usize, b: &KashiwaraElement) -> Result<Option<i64>> {
        self.check_index(i)?;
        self.f0_at(i, &self.check(b)?)
    }

    /// `ẽ_i^n(b)` in the free crystal; `n = −1` is `f̃_i`.
    pub fn e_tilde(&self, i: usize, n: i64, b: &KashiwaraElement) -> Result<KashiwaraElement> {
        self.check_index(i)?;
        let y = self.e_at(i, n, &self.check(b)?)?;
        Ok(KashiwaraElement::from_coords(self.lambda_len, &y))
    }

    /// `b ∈ B̃`, i.e. `f̃(b) ≥ 0`.
    pub fn membership(&self, b: &KashiwaraElement) -> Result<bool> {
        Ok(self.f_tilde(b)? >= 0)
    }

    pub fn contains_coords(&self, x: &[i64]) -> Result<bool> {
        Ok(self.f_at(x)? >= 0)
    }
}

pub fn e_tilde(
    t: &TropCrystal,
    i: usize,
    n: i64,
    b: &KashiwaraElement,
) -> Result<KashiwaraElement> {
    t.e_tilde(i, n, b)
}

pub fn membership(t: &TropCrystal, b: &KashiwaraElement) -> Result<bool> {
    t.membership(b)
}

fn named(ctx: &VarContext, x: &[i64]) -> Vec<(String, String)> {
    ctx.names()
        .iter()
        .cloned()
        .zip(x.iter().map(|v| v.to_string()))
        .collect()
}

/// Seeded points of `bx`: its corners first, then uniform samples.
fn box_points(bx: &IntBox, samples: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = if bx.dim() <= 12 {
        bx.corners()
    } else {
        Vec::new()
    };
    pts.extend((0..samples).map(|_| bx.sample(&mut rng)));
    pts
}

/// Runs `check` on every point in parallel and keeps the first failure in
/// point order.
fn pointwise<F>(name: &VarContext, pts: &[Vec<i64>], check: F) -> Status
where
    F: Fn(&[i64]) -> Result<Option<String>> + Sync,
{
    let bad = pts
        .par_iter()
        .map(|p| match check(p) {
            Ok(None) => None,
            Ok(Some(d)) => Some((p, d)),
            Err(e) => Some((p, e.to_string())),
        })
        .find_first(Option::is_some)
        .flatten();
    match bad {
        None => Status::CheckedNumerically { points: pts.len() },
        Some((p, detail)) => Status::Failed {
            witness: named(name, p),
            detail,
        },
    }
}

fn min_opt(parts: &[Option<i64>]) -> Option<i64> {
    parts.iter().flatten().copied().min()
}

/// Pointwise check of `f̃(ẽ_iⁿ b) = min(f̃₀(b), n + φ̃_i(b), −n + ε̃_i(b))`.
///
/// `bx` lives in `(b, n)`-space. The `n = 0` specialization is checked
/// separately on the projected points.
pub fn verify_decorated_trop(
    t: &TropCrystal,
    bx: &IntBox,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if bx.dim() != t.dim() + 1 {
        return Err(Error::InvalidArgument(format!(
            "box must live in ℤ^{}",
            t.dim() + 1
        )));
    }
    let pts = box_points(bx, samples, seed);
    let mut report = VerificationReport::default();
    for i in 1..=t.rank() {
        let status = pointwise(t.ext_names(), &pts, |p| {
            let (x, n) = (&p[..t.dim()], p[t.dim()]);
            let lhs = t.f_at(&t.e_at(i, n, x)?)?;
            let rhs = min_opt(&[
                t.f0_at(i, x)?,
                Some(n + t.phi_at(i, x)?),
                Some(t.eps_at(i, x)? - n),
            ]);
            Ok((Some(lhs) != rhs).then(|| format!("f̃(ẽ{i}^n b) = {lhs}, min(...) = {rhs:?}")))
        });
        report.push(format!("decorated-trop[{i}]"), status);
        let status = pointwise(t.ext_names(), &pts, |p| {
            let x = &p[..t.dim()];
            let lhs = t.f_at(x)?;
            let rhs = min_opt(&[t.f0_at(i, x)?, Some(t.phi_at(i, x)?), Some(t.eps_at(i, x)?)]);
            Ok((Some(lhs) != rhs).then(|| format!("f̃ = {lhs}, min(f̃0, φ̃, ε̃) = {rhs:?}")))
        });
        report.push(format!("decorated-trop-n0[{i}]"), status);
        if t.f0[i - 1].is_none() {
            report.notes.push(format!(
                "f0 via index {i} is zero; f̃0 = +∞ drops out of the minimum"
            ));
        }
    }
    Ok(report)
}

/// Sampled checks of the free-crystal structure: the ℤ-action laws, the
/// co-weight shift of `γ̃`, the shifts of `ε̃_i`, `φ̃_i` and `φ̃_i − ε̃_i = ⟨γ̃, α_i⟩`.
/// `bx` lives in `X̃`; steps are drawn from `[−steps, steps]`.
pub fn verify_trop_properties(
    t: &TropCrystal,
    bx: &IntBox,
    steps: i64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if bx.dim() != t.dim() {
        return Err(Error::InvalidArgument(format!(
            "box must live in ℤ^{}",
            t.dim()
        )));
    }
    let mut lo = bx.lo.clone();
    let mut hi = bx.hi.clone();
    lo.extend([-steps, -steps]);
    hi.extend([steps, steps]);
    let pts = box_points(&IntBox::new(lo, hi)?, samples, seed);
    let torus = t.source().torus();
    let d = t.dim();
    let mut report = VerificationReport::default();
    for i in 1..=t.rank() {
        let names = t.ext_names().extend(&["k"])?;
        report.push(
            format!("free-action[{i}]"),
            pointwise(&names, &pts, |p| {
                let (x, a, b) = (&p[..d], p[d], p[d + 1]);
                if t.e_at(i, 0, x)? != x {
                    return Ok(Some("ẽ^0 ≠ id".into()));
                }
                let ab = t.e_at(i, a, &t.e_at(i, b, x)?)?;
                Ok((ab != t.e_at(i, a + b, x)?).then(|| "ẽ^a ẽ^b ≠ ẽ^(a+b)".into()))
            }),
        );
        if t.lambda_len() > 0 {
            report.push(
                format!("lambda-fixed[{i}]"),
                pointwise(t.ext_names(), &pts, |p| {
                    let y = t.e_at(i, p[d], &p[..d])?;
                    Ok((y[..t.lambda_len()] != p[..t.lambda_len()]).then(|| "λ-part moved".into()))
                }),
            );
        }
        report.push(
            format!("gamma-shift[{i}]"),
            pointwise(t.ext_names(), &pts, |p| {
                let (x, n) = (&p[..d], p[d]);
                let lhs = t.gamma.eval(&t.e_at(i, n, x)?)?;
                let rhs = torus.coroot_shift(i, n, &t.gamma.eval(x)?);
                Ok((lhs != rhs).then(|| format!("{lhs:?} vs {rhs:?}")))
            }),
        );
        report.push(
            format!("eps-shift[{i}]"),
            pointwise(t.ext_names(), &pts, |p| {
                let (x, n) = (&p[..d], p[d]);
                let (lhs, rhs) = (t.eps_at(i, &t.e_at(i, n, x)?)?, t.eps_at(i, x)? - n);
                Ok((lhs != rhs).then(|| format!("ε̃(ẽⁿb) = {lhs}, ε̃(b) − n = {rhs}")))
            }),
        );
        report.push(
            format!("phi-shift[{i}]"),
            pointwise(t.ext_names(), &pts, |p| {
                let (x, n) = (&p[..d], p[d]);
                let (lhs, rhs) = (t.phi_at(i, &t.e_at(i, n, x)?)?, t.phi_at(i, x)? + n);
                Ok((lhs != rhs).then(|| format!("φ̃(ẽⁿb) = {lhs}, φ̃(b) + n = {rhs}")))
            }),
        );
        report.push(
            format!("phi-eps=<gamma,alpha>[{i}]"),
            pointwise(t.ext_names(), &pts, |p| {
                let x = &p[..d];
                let lhs = t.phi_at(i, x)? - t.eps_at(i, x)?;
                let rhs = torus.root_pairing(i, &t.gamma.eval(x)?);
                Ok((lhs != rhs).then(|| format!("{lhs} vs {rhs}")))
            }),
        );
    }
    Ok(report)
}

/// Compares every attached closed form with its oracle on `[lo, hi]`,
/// at all corners plus `samples` seeded points (exhaustively for small boxes).
pub fn closed_form_check(
    t: &TropCrystal,
    lo: i64,
    hi: i64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let mut maps: Vec<(String, &TropMap)> = vec![("f".into(), &t.f)];
    for i in 1..=t.rank() {
        maps.push((format!("phi[{i}]"), &t.phi[i - 1]));
        maps.push((format!("eps[{i}]"), &t.eps[i - 1]));
    }
    for i in 1..=t.rank() {
        maps.push((format!("e[{i}]"), &t.e[i - 1]));
    }
    for (name, m) in maps {
        let (Some(closed), Some(oracle)) = (m.closed_only(), m.oracle_only()) else {
            report.push(
                format!("closed-form {name}"),
                Status::NotApplicable {
                    reason: "no closed form attached".into(),
                },
            );
            continue;
        };
        let bx = IntBox::cube(m.source_dim(), lo, hi);
        let cmp = pl_compare_on_box(&oracle, &closed, &bx, samples, seed);
        let names = if m.source_dim() == t.dim() {
            t.names()
        } else {
            t.ext_names()
        };
        let status = match cmp.witness {
            None => Status::CheckedNumerically {
                points: cmp.points_checked,
            },
            Some(w) => Status::Failed {
                detail: format!(
                    "oracle {:?} vs closed {:?}",
                    oracle.eval(&w),
                    closed.eval(&w)
                ),
                witness: named(names, &w),
            },
        };
        report.push(format!("closed-form {name}"), status);
    }
    Ok(report)
}
