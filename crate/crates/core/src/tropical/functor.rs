use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::TropMap;
use crate::error::Result;
use crate::ratfun::{pos_to_ratfun, PosExpr, RatFun, VarContext};

/// Outcome of [`functoriality_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorialityReport {
    pub pairs: usize,
    pub points: usize,
    /// First disagreement, described.
    pub mismatch: Option<String>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// A random subtraction-free map `T^k → T^k`.
pub fn random_positive_map<R: Rng>(
    rng: &mut R,
    ctx: &VarContext,
    depth: usize,
) -> Result<Vec<RatFun>> {
    (0..ctx.len())
        .map(|_| pos_to_ratfun(&PosExpr::random(rng, ctx.len(), depth), ctx))
        .collect()
}

/// Tests `Trop(g∘f) = Trop(g)∘Trop(f)` for `pairs` random positive maps,
/// each at `points` lattice points of `[−5, 5]^k`.
pub fn functoriality_check(pairs: usize, points: usize, seed: u64) -> Result<FunctorialityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for pair in 0..pairs {
        let k = rng.gen_range(1..=3);
        let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
        let ctx = VarContext::new(&names)?;
        let f = random_positive_map(&mut rng, &ctx, 2)?;
        let g = random_positive_map(&mut rng, &ctx, 2)?;
        let gf = g
            .iter()
            .map(|h| h.substitute(&f))
            .collect::<Result<Vec<_>>>()?;
        let (tf, tg, tgf) = (
            TropMap::from_ratfuns(&f)?,
            TropMap::from_ratfuns(&g)?,
            TropMap::from_ratfuns(&gf)?,
        );
        for _ in 0..points {
            let x: Vec<i64> = (0..k).map(|_| rng.gen_range(-5..=5)).collect();
            let lhs = tgf.eval(&x)?;
            let rhs = tg.eval(&tf.eval(&x)?)?;
            checked += 1;
            if lhs != rhs {
                return Ok(FunctorialityReport {
                    pairs: pair + 1,
                    points: checked,
                    mismatch: Some(format!(
                        "pair {pair} at {x:?}: Trop(g∘f) = {lhs:?}, Trop(g)∘Trop(f) = {rhs:?}"
                    )),
                });
            }
        }
    }
    Ok(FunctorialityReport {
        pairs,
        points: checked,
        mismatch: None,
    })
}
