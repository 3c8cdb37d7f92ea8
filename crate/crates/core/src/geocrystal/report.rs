use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ratfun::{RatFun, Rational, VarContext};

/// Outcome of one checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    ProvedSymbolically,
    CheckedNumerically {
        points: usize,
    },
    /// `witness` assigns a rational value to every variable of the identity.
    Failed {
        witness: Vec<(String, String)>,
        detail: String,
    },
    NotApplicable {
        reason: String,
    },
}

impl Status {
    pub fn is_failure(&self) -> bool {
        matches!(self, Status::Failed { .. })
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Status::ProvedSymbolically)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::ProvedSymbolically => write!(f, "proved-symbolically"),
            Status::CheckedNumerically { points } => write!(f, "checked-numerically({points})"),
            Status::Failed { witness, detail } => {
                write!(f, "FAILED at (")?;
                for (k, (v, q)) in witness.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}={q}")?;
                }
                write!(f, "): {detail}")
            }
            Status::NotApplicable { reason } => write!(f, "not-applicable({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub axiom: String,
    #[serde(flatten)]
    pub status: Status,
}

/// A list of checked axioms in a fixed order, plus informational notes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn push(&mut self, axiom: impl Into<String>, status: Status) {
        self.entries.push(ReportEntry {
            axiom: axiom.into(),
            status,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        !self.entries.iter().any(|e| e.status.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status.is_failure())
    }

    pub fn status_of(&self, axiom: &str) -> Option<&Status> {
        self.entries
            .iter()
            .find(|e| e.axiom == axiom)
            .map(|e| &e.status)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{:<28} {}", e.axiom, e.status)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Decides rational-function identities, symbolically when affordable.
#[derive(Clone, Debug)]
pub struct Checker {
    /// Above this expanded term count, identities are only sampled.
    pub budget: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Checker {
    fn default() -> Self {
        Checker {
            budget: 1e6,
            samples: 100,
            seed: 0,
        }
    }
}

/// A random positive rational with small numerator and denominator.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=30).into(), rng.gen_range(1..=7).into())
}

pub fn random_point<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    (0..k).map(|_| random_rational(rng)).collect()
}

fn named_point(ctx: &VarContext, p: &[Rational]) -> Vec<(String, String)> {
    ctx.names()
        .iter()
        .cloned()
        .zip(p.iter().map(|q| q.to_string()))
        .collect()
}

fn eval_all(fs: &[RatFun], p: &[Rational]) -> Option<Vec<Rational>> {
    fs.iter().map(|f| f.evaluate(p).ok()).collect()
}

impl Checker {
    pub fn with_seed(seed: u64) -> Self {
        Checker {
            seed,
            ..Default::default()
        }
    }

    /// Checks `lhs[k] = rhs[k]` for every `k`; all functions share one context.
    pub fn check(&self, lhs: &[RatFun], rhs: &[RatFun]) -> Status {
        if lhs.len() != rhs.len() {
            return Status::Failed {
                witness: vec![],
                detail: format!("{} vs {} coordinates", lhs.len(), rhs.len()),
            };
        }
        let Some(ctx) = lhs.first().map(|f| f.ctx().clone()) else {
            return Status::ProvedSymbolically;
        };
        let size: f64 = lhs
            .iter()
            .chain(rhs)
            .map(|f| f.expanded_size_bound())
            .fold(0.0, f64::max);
        if size <= self.budget {
            match (0..lhs.len()).find(|&k| !lhs[k].equals(&rhs[k])) {
                None => Status::ProvedSymbolically,
                Some(k) => self.witness(&ctx, lhs, rhs, format!("coordinate {} differs", k + 1)),
            }
        } else {
            self.sample(&ctx, lhs, rhs)
        }
    }

    pub fn check_one(&self, lhs: &RatFun, rhs: &RatFun) -> Status {
        self.check(std::slice::from_ref(lhs), std::slice::from_ref(rhs))
    }

    fn sample(&self, ctx: &VarContext, lhs: &[RatFun], rhs: &[RatFun]) -> Status {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut checked = 0;
        let mut tries = 0;
        while checked < self.samples && tries < 20 * self.samples + 100 {
            tries += 1;
            let p = random_point(&mut rng, ctx.len());
            match (eval_all(lhs, &p), eval_all(rhs, &p)) {
                (Some(a), Some(b)) if a == b => checked += 1,
                (Some(_), Some(_)) => {
                    return Status::Failed {
                        witness: named_point(ctx, &p),
                        detail: "values differ (sampled check)".into(),
                    }
                }
                _ => {}
            }
        }
        Status::CheckedNumerically { points: checked }
    }

    /// Searches for a point where two functions known to differ take different values.
    fn witness(&self, ctx: &VarContext, lhs: &[RatFun], rhs: &[RatFun], detail: String) -> Status {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
        for _ in 0..1000 {
            let p = random_point(&mut rng, ctx.len());
            if let (Some(a), Some(b)) = (eval_all(lhs, &p), eval_all(rhs, &p)) {
                if a != b {
                    return Status::Failed {
                        witness: named_point(ctx, &p),
                        detail,
                    };
                }
            }
        }
        Status::Failed {
            witness: vec![],
            detail: format!("{detail}; no separating point found"),
        }
    }
}

/// Solves `condition = 0` for a variable in which its numerator is affine,
/// returning the index and the solution as a function of the others.
pub(crate) fn affine_solve(condition: &RatFun) -> Option<(usize, RatFun)> {
    let num = condition.numerator();
    let ctx = condition.ctx();
    'vars: for v in 0..ctx.len() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (e, c) in num.terms() {
            match e[v] {
                0 => b.push(RatFun::monomial(ctx, e, c.clone())),
                1 => {
                    let mut e2 = e.clone();
                    e2[v] = 0;
                    a.push(RatFun::monomial(ctx, &e2, c.clone()));
                }
                _ => continue 'vars,
            }
        }
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let a = RatFun::sum(&a.iter().collect::<Vec<_>>());
        let b = RatFun::sum(&b.iter().collect::<Vec<_>>());
        if let Ok(sol) = b.neg().div(&a) {
            if !sol.is_zero() {
                return Some((v, sol));
            }
        }
    }
    None
}

pub(crate) fn is_zero_at(f: &RatFun, p: &[Rational]) -> Option<bool> {
    f.evaluate(p).ok().map(|v| v.is_zero())
}
