use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::crystal::GeometricCrystal;
use super::report::{affine_solve, is_zero_at, random_point, Checker, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::ratfun::{RatFun, Rational, VarContext};

type Job<'a> = Box<dyn Fn() -> Result<Status> + Send + Sync + 'a>;

/// Runs independent checks in parallel and records them in submission order.
fn run_jobs(jobs: Vec<(String, Job<'_>)>) -> VerificationReport {
    let statuses: Vec<Status> = jobs
        .par_iter()
        .map(|(_, job)| {
            job().unwrap_or_else(|e| Status::Failed {
                witness: vec![],
                detail: format!("evaluation error: {e}"),
            })
        })
        .collect();
    let mut report = VerificationReport::default();
    for ((name, _), s) in jobs.into_iter().zip(statuses) {
        report.push(name, s);
    }
    report
}

fn not_applicable(i: usize) -> Status {
    Status::NotApplicable {
        reason: format!("e_{i} acts trivially"),
    }
}

/// Checks every crystal axiom symbolically, with a fresh variable for the
/// action parameter, and the Verma relation for every pair of indices.
pub fn verify_axioms(x: &GeometricCrystal, checker: &Checker) -> VerificationReport {
    let ext = x.ext().clone();
    let k = x.chart().len();
    let d = RatFun::var(&ext, k);
    let xs = x.chart_vars_in(&ext);
    let lift = |f: &RatFun| f.embed(&ext, &(0..k).collect::<Vec<_>>());
    let mut jobs: Vec<(String, Job<'_>)> = Vec::new();
    for i in 1..=x.rank() {
        let (d, xs) = (d.clone(), xs.clone());
        let trivial = x.trivial_action(i);
        jobs.push((
            format!("eps=alpha(gamma)*phi[{i}]"),
            Box::new(move || {
                let rhs = x.torus().root_char(i, x.gamma())?.mul(x.phi(i));
                Ok(checker.check_one(x.eps(i), &rhs))
            }),
        ));
        let (d1, xs1) = (d.clone(), xs.clone());
        jobs.push((
            format!("gamma-equivariance[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let moved = x.e_compose(i, &d1, &xs1)?;
                let lhs = x
                    .gamma()
                    .iter()
                    .map(|g| g.substitute(&moved))
                    .collect::<Result<Vec<_>>>()?;
                let g = x.gamma().iter().map(lift).collect::<Result<Vec<_>>>()?;
                let rhs = x.torus().coroot_act(i, &d1, &g)?;
                Ok(checker.check(&lhs, &rhs))
            }),
        ));
        let (d2, xs2) = (d.clone(), xs.clone());
        jobs.push((
            format!("eps-scaling[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let moved = x.e_compose(i, &d2, &xs2)?;
                Ok(checker.check_one(&x.eps(i).substitute(&moved)?, &d2.mul(&lift(x.eps(i))?)))
            }),
        ));
        let (d3, xs3) = (d.clone(), xs.clone());
        jobs.push((
            format!("phi-scaling[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let moved = x.e_compose(i, &d3, &xs3)?;
                Ok(checker.check_one(&x.phi(i).substitute(&moved)?, &lift(x.phi(i))?.div(&d3)?))
            }),
        ));
        jobs.push((
            format!("unital[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let chart = x.chart();
                let one = RatFun::one(chart);
                let lhs = x.e_compose(i, &one, &x.chart_vars_in(chart))?;
                Ok(checker.check(&lhs, &x.chart_vars_in(chart)))
            }),
        ));
        jobs.push((
            format!("composition[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let (ctx, c1, c2) = two_parameters(x.chart())?;
                let v = x.chart_vars_in(&ctx);
                let lhs = x.e_compose(i, &c1, &x.e_compose(i, &c2, &v)?)?;
                let rhs = x.e_compose(i, &c1.mul(&c2), &v)?;
                Ok(checker.check(&lhs, &rhs))
            }),
        ));
        let (d4, xs4) = (d.clone(), xs.clone());
        jobs.push((
            format!("decoration[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let moved = x.e_compose(i, &d4, &xs4)?;
                let lhs = x.f().substitute(&moved)?;
                let one = RatFun::one(&ext_of(x));
                let rhs = lift(x.f())?
                    .add(&d4.sub(&one).div(&lift(x.phi(i))?)?)
                    .add(&d4.inv()?.sub(&one).div(&lift(x.eps(i))?)?);
                Ok(checker.check_one(&lhs, &rhs))
            }),
        ));
        let (d5, xs5) = (d.clone(), xs.clone());
        jobs.push((
            format!("f0-invariance[{i}]"),
            Box::new(move || {
                if trivial {
                    return Ok(not_applicable(i));
                }
                let f0 = x.f0(i)?;
                let moved = x.e_compose(i, &d5, &xs5)?;
                Ok(checker.check_one(&f0.substitute(&moved)?, &lift(&f0)?))
            }),
        ));
    }
    for i in 1..=x.rank() {
        for j in i + 1..=x.rank() {
            jobs.push((
                format!("verma[{i},{j}]"),
                Box::new(move || verify_verma(x, i, j, checker)),
            ));
        }
    }
    let mut report = run_jobs(jobs);
    report.notes.extend(f0_independence_notes(x));
    report
}

fn ext_of(x: &GeometricCrystal) -> VarContext {
    x.ext().clone()
}

/// The chart extended by two fresh parameters.
fn two_parameters(chart: &VarContext) -> Result<(VarContext, RatFun, RatFun)> {
    let names = chart.fresh_names("c", 2);
    let ctx = chart.extend(&names)?;
    let k = chart.len();
    Ok((ctx.clone(), RatFun::var(&ctx, k), RatFun::var(&ctx, k + 1)))
}

/// Reports whether `f₀ = f − 1/φ_i − 1/ε_i` is the same function for all `i`.
fn f0_independence_notes(x: &GeometricCrystal) -> Vec<String> {
    let f0s: Vec<Option<RatFun>> = (1..=x.rank())
        .map(|i| {
            if x.trivial_action(i) {
                None
            } else {
                x.f0(i).ok()
            }
        })
        .collect();
    let mut notes = Vec::new();
    for i in 0..f0s.len() {
        for j in i + 1..f0s.len() {
            if let (Some(a), Some(b)) = (&f0s[i], &f0s[j]) {
                let same = a.equals(b);
                notes.push(format!(
                    "f0 defined via index {} and via index {} {}",
                    i + 1,
                    j + 1,
                    if same {
                        "coincide"
                    } else {
                        "differ (informational)"
                    }
                ));
            }
        }
    }
    notes
}

/// The rank-two relation between `e_i` and `e_j`, selected from the Cartan
/// entries `(⟨α_i, α_j^∨⟩, ⟨α_j, α_i^∨⟩)`.
pub fn verify_verma(x: &GeometricCrystal, i: usize, j: usize, checker: &Checker) -> Result<Status> {
    x.check_index(i)?;
    x.check_index(j)?;
    if i == j {
        return Err(Error::InvalidArgument("Verma relations need i ≠ j".into()));
    }
    if x.trivial_action(i) || x.trivial_action(j) {
        return Ok(Status::NotApplicable {
            reason: "trivial action".into(),
        });
    }
    let (lhs, rhs) = verma_words(x.cartan().a(j, i), x.cartan().a(i, j))?;
    let (ctx, c1, c2) = two_parameters(x.chart())?;
    let v = x.chart_vars_in(&ctx);
    let realize = |word: &[(bool, u32, u32)]| -> Result<Vec<RatFun>> {
        let seq = word
            .iter()
            .map(|&(first, p1, p2)| {
                Ok((
                    if first { i } else { j },
                    c1.pow(p1 as i32)?.mul(&c2.pow(p2 as i32)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        x.e_sequence(&seq, &v)
    };
    Ok(checker.check(&realize(&lhs)?, &realize(&rhs)?))
}

/// A word letter: (`true` for `e_i`, `false` for `e_j`, power of `c₁`, power of `c₂`).
type VermaWord = Vec<(bool, u32, u32)>;

/// Both sides of the Verma relation for `(⟨α_i,α_j^∨⟩, ⟨α_j,α_i^∨⟩)`.
pub fn verma_words(aij_dual: i32, aji_dual: i32) -> Result<(VermaWord, VermaWord)> {
    let (ei, ej) = (true, false);
    Ok(match (aij_dual, aji_dual) {
        (0, 0) => (vec![(ei, 1, 0), (ej, 0, 1)], vec![(ej, 0, 1), (ei, 1, 0)]),
        (-1, -1) => (
            vec![(ei, 1, 0), (ej, 1, 1), (ei, 0, 1)],
            vec![(ej, 0, 1), (ei, 1, 1), (ej, 1, 0)],
        ),
        (-1, -2) => (
            vec![(ei, 1, 0), (ej, 2, 1), (ei, 1, 1), (ej, 0, 1)],
            vec![(ej, 0, 1), (ei, 1, 1), (ej, 2, 1), (ei, 1, 0)],
        ),
        (-1, -3) => (
            vec![
                (ei, 1, 0),
                (ej, 3, 1),
                (ei, 2, 1),
                (ej, 3, 2),
                (ei, 1, 1),
                (ej, 0, 1),
            ],
            vec![
                (ej, 0, 1),
                (ei, 1, 1),
                (ej, 3, 2),
                (ei, 2, 1),
                (ej, 3, 1),
                (ei, 1, 0),
            ],
        ),
        // The mirrored cases swap the roles of i and j.
        (-2, -1) | (-3, -1) => {
            let (l, r) = verma_words(aji_dual, aij_dual)?;
            let flip = |w: VermaWord| w.into_iter().map(|(s, a, b)| (!s, a, b)).collect();
            (flip(l), flip(r))
        }
        (a, b) => return Err(Error::UnsupportedCartanPair(a, b)),
    })
}

/// `s_i(x) = e_i^{1/α_i(γ(x))}(x)` as a self-map of the chart.
pub fn weyl_si(x: &GeometricCrystal, i: usize) -> Result<Vec<RatFun>> {
    x.check_index(i)?;
    let a = x.torus().root_char(i, x.gamma())?;
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    x.e_compose(i, &a.inv()?, &x.chart_vars_in(x.chart()))
}

/// `outer ∘ inner` for two chart self-maps.
pub fn compose_maps(outer: &[RatFun], inner: &[RatFun]) -> Result<Vec<RatFun>> {
    outer.iter().map(|g| g.substitute(inner)).collect()
}

/// Order of `s_i s_j` from the Cartan entries.
fn braid_order(aij: i32, aji: i32) -> Option<usize> {
    match aij * aji {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

/// Involutivity, braid relations and invariance of `f` for the `s_i`.
pub fn verify_weyl(x: &GeometricCrystal, checker: &Checker) -> VerificationReport {
    let r = x.rank();
    let chart = x.chart();
    let id = x.chart_vars_in(chart);
    let s: Vec<Result<Vec<RatFun>>> = (1..=r).into_par_iter().map(|i| weyl_si(x, i)).collect();
    let mut jobs: Vec<(String, Job<'_>)> = Vec::new();
    for i in 1..=r {
        let si = s[i - 1].clone();
        let id = id.clone();
        jobs.push((
            format!("involution[{i}]"),
            Box::new(move || {
                let si = si.clone()?;
                Ok(checker.check(&compose_maps(&si, &si)?, &id))
            }),
        ));
        let si = s[i - 1].clone();
        jobs.push((
            format!("f-invariance[{i}]"),
            Box::new(move || Ok(checker.check_one(&x.f().substitute(&si.clone()?)?, x.f()))),
        ));
    }
    for i in 1..=r {
        for j in i + 1..=r {
            let (si, sj) = (s[i - 1].clone(), s[j - 1].clone());
            let id = id.clone();
            jobs.push((
                format!("braid[{i},{j}]"),
                Box::new(move || {
                    let Some(m) = braid_order(x.cartan().a(i, j), x.cartan().a(j, i)) else {
                        return Ok(Status::NotApplicable {
                            reason: "infinite order".into(),
                        });
                    };
                    let (si, sj) = (si.clone()?, sj.clone()?);
                    // Alternating words of length m, composed right to left.
                    let word = |start_i: bool| -> Result<Vec<RatFun>> {
                        let mut acc = id.clone();
                        for k in 0..m {
                            let use_i = (k % 2 == 0) == start_i;
                            acc = compose_maps(if use_i { &si } else { &sj }, &acc)?;
                        }
                        Ok(acc)
                    };
                    Ok(checker.check(&word(true)?, &word(false)?))
                }),
            ));
        }
    }
    run_jobs(jobs)
}

/// Result of sampling the fixed locus of one `s_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub index: usize,
    pub on_locus: usize,
    pub on_locus_fixed: usize,
    pub off_locus: usize,
    pub off_locus_moved: usize,
    /// First misclassified point, if any.
    pub witness: Option<Vec<String>>,
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.on_locus_fixed == self.on_locus && self.off_locus_moved == self.off_locus
    }
}

/// The pullback `α_i(γ(x)) − 1` of the fixed-point equation on the torus.
pub fn fixed_locus_condition(x: &GeometricCrystal, i: usize) -> Result<RatFun> {
    Ok(x.torus()
        .root_char(i, x.gamma())?
        .sub(&RatFun::one(x.chart())))
}

/// Tests `s_i(x) = x ⟺ condition(x) = 0` on random points on and off the locus.
///
/// On-locus points are produced by solving `condition = 0` for a variable
/// in which its numerator is affine.
pub fn fixed_point_check(
    x: &GeometricCrystal,
    i: usize,
    condition: &RatFun,
    samples: usize,
    seed: u64,
) -> Result<FixedPointReport> {
    let si = weyl_si(x, i)?;
    let k = x.chart().len();
    let (v, sol) = affine_solve(condition).ok_or_else(|| {
        Error::InvalidArgument("cannot sample the locus of this condition".into())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FixedPointReport {
        index: i,
        on_locus: 0,
        on_locus_fixed: 0,
        off_locus: 0,
        off_locus_moved: 0,
        witness: None,
    };
    let fmt = |p: &[Rational]| p.iter().map(|q| q.to_string()).collect::<Vec<_>>();
    let image = |p: &[Rational]| -> Option<Vec<Rational>> {
        si.iter().map(|g| g.evaluate(p).ok()).collect()
    };
    let mut tries = 0;
    while rep.on_locus < samples && tries < 50 * samples + 100 {
        tries += 1;
        let mut p = random_point(&mut rng, k);
        let Ok(val) = sol.evaluate(&p) else { continue };
        if num_traits::Zero::is_zero(&val) {
            continue;
        }
        p[v] = val;
        if is_zero_at(condition, &p) != Some(true) {
            continue;
        }
        let Some(q) = image(&p) else { continue };
        rep.on_locus += 1;
        if q == p {
            rep.on_locus_fixed += 1;
        } else if rep.witness.is_none() {
            rep.witness = Some(fmt(&p));
        }
    }
    tries = 0;
    while rep.off_locus < samples && tries < 50 * samples + 100 {
        tries += 1;
        let p = random_point(&mut rng, k);
        if is_zero_at(condition, &p) != Some(false) {
            continue;
        }
        let Some(q) = image(&p) else { continue };
        rep.off_locus += 1;
        if q != p {
            rep.off_locus_moved += 1;
        } else if rep.witness.is_none() {
            rep.witness = Some(fmt(&p));
        }
    }
    Ok(rep)
}
