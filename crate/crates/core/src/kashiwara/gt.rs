use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::crystal::{KashiwaraElement, TropCrystal};
use crate::error::{Error, Result};
use crate::ratfun::Rational;

/// A Gelfand–Tsetlin pattern; `rows[0]` is the top row, each next row is one shorter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GTPattern {
    pub rows: Vec<Vec<i64>>,
}

impl GTPattern {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.len() != n || rows.iter().enumerate().any(|(k, r)| r.len() != n - k) {
            return Err(Error::InvalidArgument(
                "GT rows must have lengths n, n-1, ..., 1".into(),
            ));
        }
        Ok(GTPattern { rows })
    }

    pub fn top(&self) -> &[i64] {
        &self.rows[0]
    }

    /// `rows[k][j] ≥ rows[k+1][j] ≥ rows[k][j+1]` throughout.
    pub fn is_interlacing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| (0..w[1].len()).all(|j| w[0][j] >= w[1][j] && w[1][j] >= w[0][j + 1]))
    }

    /// Row-sum differences, bottom row first: `wt_k = |row of length k| − |row of length k−1|`.
    pub fn weight(&self) -> Vec<i64> {
        let n = self.rows.len();
        let sum = |len: usize| {
            if len == 0 {
                0
            } else {
                self.rows[n - len].iter().sum::<i64>()
            }
        };
        (1..=n).map(|k| sum(k) - sum(k - 1)).collect()
    }
}

impl fmt::Display for GTPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "({})",
                    r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        write!(f, "{}", rows.join(" "))
    }
}

/// The triangle `(λ₁,λ₂,λ₃), (λ₂+m₁, λ₃+m₃), (λ₃+m₂)` attached to a `GL_3` point,
/// without checking membership.
///
/// The middle row's second entry is `λ₃+m₃`: interlacing then reproduces the
/// cone inequalities one for one. Reading it as `λ₂+m₃` would force `m₃ = 0`.
pub fn gt_rows(b: &KashiwaraElement) -> Result<GTPattern> {
    let (l, m) = (&b.lambda, &b.m);
    if l.len() != 3 || m.len() != 3 {
        return Err(Error::InvalidArgument(format!("{b} is not a GL3 point")));
    }
    GTPattern::new(vec![
        l.clone(),
        vec![l[1] + m[0], l[2] + m[2]],
        vec![l[2] + m[1]],
    ])
}

/// The GT pattern of a point of `B̃` for `GL_3`.
pub fn gt_bijection(t: &TropCrystal, b: &KashiwaraElement) -> Result<GTPattern> {
    if !t.membership(b)? {
        return Err(Error::InvalidArgument(format!("{b} is not in the cone")));
    }
    gt_rows(b)
}

/// Inverse of [`gt_rows`].
pub fn gt_to_element(p: &GTPattern) -> Result<KashiwaraElement> {
    if p.rows.len() != 3 {
        return Err(Error::InvalidArgument(
            "only GL3 patterns correspond to (λ; m)".into(),
        ));
    }
    let (l, r1, r2) = (&p.rows[0], &p.rows[1], &p.rows[2]);
    Ok(KashiwaraElement::new(
        l.clone(),
        vec![r1[0] - l[1], r2[0] - l[2], r1[1] - l[2]],
    ))
}

/// All interlacing patterns with the given top row.
pub fn gt_patterns(top: &[i64]) -> Vec<GTPattern> {
    fn below(row: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for j in 0..row.len() - 1 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (row[j + 1]..=row[j]).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
    fn go(rows: Vec<Vec<i64>>, out: &mut Vec<GTPattern>) {
        let last = rows.last().expect("nonempty");
        if last.len() <= 1 {
            out.push(GTPattern { rows });
            return;
        }
        for next in below(last) {
            let mut r = rows.clone();
            r.push(next);
            go(r, out);
        }
    }
    if top.is_empty() || top.windows(2).any(|w| w[0] < w[1]) {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(vec![top.to_vec()], &mut out);
    out
}

/// Multiset of GT weights with top row `λ`.
pub fn gt_weight_multiplicities(top: &[i64]) -> BTreeMap<Vec<i64>, usize> {
    let mut m = BTreeMap::new();
    for p in gt_patterns(top) {
        *m.entry(p.weight()).or_insert(0) += 1;
    }
    m
}

/// `∏_{i<j} (λ_i − λ_j + j − i)/(j − i)`; `None` unless `λ` is dominant.
pub fn weyl_dimension(lambda: &[i64]) -> Option<u128> {
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    let mut q = Rational::from_integer(BigInt::from(1));
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            let d = (j - i) as i64;
            q *= Rational::new(BigInt::from(lambda[i] - lambda[j] + d), BigInt::from(d));
        }
    }
    q.to_integer().to_u128()
}

/// Dominant weights of `GL_n` with `λ_n = 0` and `λ₁ ≤ max`.
pub fn dominant_weights(n: usize, max: i64) -> Vec<Vec<i64>> {
    fn go(prefix: Vec<i64>, n: usize, hi: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n - 1 {
            let mut p = prefix;
            p.push(0);
            out.push(p);
            return;
        }
        for v in (0..=hi).rev() {
            let mut p = prefix.clone();
            p.push(v);
            go(p, n, v, out);
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(Vec::new(), n, max, &mut out);
    }
    out.sort();
    out
}
