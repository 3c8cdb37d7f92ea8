//! Cartan and Weyl bookkeeping for type A.
//!
//! Indices of simple roots are 1-based, as in words like `(1,2,1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratfun::{RatFun, RatMatrix, VarContext};

/// A Cartan matrix with `a[i][j] = ⟨α_j, α_i^∨⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    matrix: Vec<Vec<i32>>,
}

impl CartanData {
    /// Validates a manually entered matrix.
    pub fn new(matrix: Vec<Vec<i32>>) -> Result<Self> {
        let r = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidArgument(
                    "Cartan matrix must be square".into(),
                ));
            }
            if row[i] != 2 {
                return Err(Error::InvalidArgument(format!(
                    "a_{{{0}{0}}} must be 2",
                    i + 1
                )));
            }
            for j in 0..r {
                if i != j && (row[j] > 0 || (row[j] == 0) != (matrix[j][i] == 0)) {
                    return Err(Error::InvalidArgument(format!(
                        "bad off-diagonal entry a_{{{}{}}}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(CartanData { matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// `a_{ij}` with 1-based indices.
    pub fn a(&self, i: usize, j: usize) -> i32 {
        self.matrix[i - 1][j - 1]
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.matrix
    }
}

/// Cartan matrix of type `A_{n−1}`, the one of `GL_n`.
pub fn cartan_a(n: usize) -> Result<CartanData> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "GL_{n} has no simple roots"
        )));
    }
    let r = n - 1;
    let matrix = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    Ok(CartanData { matrix })
}

/// One-line notation of `s_{w_1} ⋯ s_{w_ℓ}` acting on `{1..n}`, or `None`
/// if a letter is out of range.
pub fn word_permutation(word: &[usize], n: usize) -> Option<Vec<usize>> {
    let mut perm: Vec<usize> = (1..=n).collect();
    // perm = s_{w1}∘…∘s_{wk}; appending s_i on the right swaps positions i, i+1.
    for &i in word {
        if i == 0 || i >= n {
            return None;
        }
        perm.swap(i - 1, i);
    }
    Some(perm)
}

fn inversions(perm: &[usize]) -> usize {
    (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count()
}

/// True iff `word` is a reduced word of the longest element `w₀` of `S_n`.
pub fn validate_reduced_word(word: &[usize], n: usize) -> bool {
    if n < 2 || word.len() != n * (n - 1) / 2 {
        return false;
    }
    match word_permutation(word, n) {
        Some(p) => inversions(&p) == word.len() && p.iter().copied().eq((1..=n).rev()),
        None => false,
    }
}

/// Like [`validate_reduced_word`], as a `Result`.
pub fn check_reduced_word(word: &[usize], n: usize) -> Result<()> {
    if validate_reduced_word(word, n) {
        Ok(())
    } else {
        Err(Error::InvalidWord {
            word: word.to_vec(),
            n,
        })
    }
}

/// All reduced words of `w₀` in `S_n`, in lexicographic order.
pub fn reduced_words_w0(n: usize) -> Vec<Vec<usize>> {
    fn extend(
        n: usize,
        perm: &mut Vec<usize>,
        word: &mut Vec<usize>,
        len: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        for i in 1..n {
            // Right multiplication by s_i lengthens iff perm(i) < perm(i+1).
            if perm[i - 1] < perm[i] {
                perm.swap(i - 1, i);
                word.push(i);
                extend(n, perm, word, len, out);
                word.pop();
                perm.swap(i - 1, i);
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        extend(
            n,
            &mut (1..=n).collect(),
            &mut Vec::new(),
            n * (n - 1) / 2,
            &mut out,
        );
    }
    out
}

/// Parses a comma-separated word such as `1,2,1`.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad letter {t:?} in word {s:?}")))
        })
        .collect()
}

/// Simple roots and coroots of a split torus `G_m^k`, as integer vectors.
///
/// `α_i(t) = ∏ t_k^{roots[i][k]}` and `α_i^∨(c) = (c^{coroots[i][k]})_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusData {
    pub roots: Vec<Vec<i32>>,
    pub coroots: Vec<Vec<i32>>,
}

impl TorusData {
    /// The diagonal torus of `GL_n`: `α_i = α_i^∨ = e_i − e_{i+1}`.
    pub fn gl(n: usize) -> Self {
        let v = |i: usize| {
            (0..n)
                .map(|k| {
                    if k == i {
                        1
                    } else if k == i + 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        };
        let roots: Vec<Vec<i32>> = (0..n.saturating_sub(1)).map(v).collect();
        TorusData {
            coroots: roots.clone(),
            roots,
        }
    }

    pub fn dim(&self) -> usize {
        self.roots.first().map_or(0, Vec::len)
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    /// The Cartan matrix `⟨α_j, α_i^∨⟩` this torus data induces.
    pub fn cartan(&self) -> Result<CartanData> {
        let r = self.rank();
        CartanData::new(
            (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            self.roots[j]
                                .iter()
                                .zip(&self.coroots[i])
                                .map(|(a, b)| a * b)
                                .sum()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// `α_i(t)` for a torus element given by its coordinates; `i` is 1-based.
    pub fn root_char(&self, i: usize, t: &[RatFun]) -> Result<RatFun> {
        let ctx = t
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty torus element".into()))?
            .ctx()
            .clone();
        let mut out = RatFun::one(&ctx);
        for (tk, &e) in t.iter().zip(&self.roots[i - 1]) {
            if e != 0 {
                out = out.mul(&tk.pow(e)?);
            }
        }
        Ok(out)
    }

    /// `α_i^∨(c)·t`, coordinatewise.
    pub fn coroot_act(&self, i: usize, c: &RatFun, t: &[RatFun]) -> Result<Vec<RatFun>> {
        t.iter()
            .zip(&self.coroots[i - 1])
            .map(|(tk, &e)| {
                Ok(if e == 0 {
                    tk.clone()
                } else {
                    tk.mul(&c.pow(e)?)
                })
            })
            .collect()
    }

    /// Tropical coroot action: `γ̃ + n·α_i^∨`.
    pub fn coroot_shift(&self, i: usize, n: i64, g: &[i64]) -> Vec<i64> {
        g.iter()
            .zip(&self.coroots[i - 1])
            .map(|(x, &e)| x + n * e as i64)
            .collect()
    }

    /// Tropical pairing `⟨γ̃, α_i⟩`.
    pub fn root_pairing(&self, i: usize, g: &[i64]) -> i64 {
        g.iter()
            .zip(&self.roots[i - 1])
            .map(|(x, &e)| x * e as i64)
            .sum()
    }
}

/// `α_i^∨(c)` in `GL_n`: `c` at slot `i`, `c⁻¹` at slot `i+1`, 1 elsewhere.
pub fn coroot_embed(i: usize, c: &RatFun, n: usize) -> Result<RatMatrix> {
    if i == 0 || i >= n {
        return Err(Error::InvalidArgument(format!("no coroot {i} in GL_{n}")));
    }
    let ctx = c.ctx();
    let mut m = RatMatrix::identity(ctx, n);
    m.set(i - 1, i - 1, c.clone());
    m.set(i, i, c.inv()?);
    Ok(m)
}

/// `α_i(t) = t_i / t_{i+1}` for a diagonal element of `GL_n`.
pub fn root_char(i: usize, t: &[RatFun]) -> Result<RatFun> {
    if i == 0 || i >= t.len() {
        return Err(Error::InvalidArgument(format!(
            "no root {i} in GL_{}",
            t.len()
        )));
    }
    t[i - 1].div(&t[i])
}

/// Names `t1..tn` and `c1..cℓ`, the chart coordinates of `GL_n`.
pub fn chart_context(n: usize, len: usize) -> VarContext {
    let names: Vec<String> = (1..=n)
        .map(|k| format!("t{k}"))
        .chain((1..=len).map(|k| format!("c{k}")))
        .collect();
    VarContext::new(&names).expect("distinct names")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::parse_ratfun;

    #[test]
    fn cartan_matrices() {
        assert_eq!(cartan_a(2).unwrap().matrix(), &[vec![2]]);
        assert_eq!(cartan_a(3).unwrap().matrix(), &[vec![2, -1], vec![-1, 2]]);
        let a3 = cartan_a(4).unwrap();
        assert_eq!(a3.a(1, 2), -1);
        assert_eq!(a3.a(1, 3), 0);
        assert_eq!(a3.a(3, 2), -1);
        assert!(cartan_a(1).is_err());
        assert!(CartanData::new(vec![vec![2, -1], vec![0, 2]]).is_err());
        assert_eq!(TorusData::gl(4).cartan().unwrap(), a3);
    }

    #[test]
    fn reduced_words() {
        assert!(validate_reduced_word(&[1, 2, 1], 3));
        assert!(validate_reduced_word(&[2, 1, 2], 3));
        assert!(!validate_reduced_word(&[1, 1, 2], 3));
        assert!(validate_reduced_word(&[1, 2, 1, 3, 2, 1], 4));
        assert!(!validate_reduced_word(&[1, 2, 3], 3));
        assert!(!validate_reduced_word(&[1, 2, 1, 3, 2, 3], 4));
        assert_eq!(reduced_words_w0(3), vec![vec![1, 2, 1], vec![2, 1, 2]]);
        let w4 = reduced_words_w0(4);
        assert_eq!(w4.len(), 16);
        assert!(w4.iter().all(|w| validate_reduced_word(w, 4)));
    }

    #[test]
    fn prefixes_of_reduced_words_are_reduced() {
        for n in 2..=5 {
            for w in reduced_words_w0(n) {
                for k in 0..=w.len() {
                    assert_eq!(inversions(&word_permutation(&w[..k], n).unwrap()), k);
                }
            }
        }
    }

    #[test]
    fn coroots_and_roots() {
        let ctx = VarContext::new(&["c", "t1", "t2", "t3"]).unwrap();
        let c = parse_ratfun("c", &ctx).unwrap();
        let m = coroot_embed(1, &c, 2).unwrap();
        assert!(m.get(0, 0).equals(&c));
        assert!(m.get(1, 1).equals(&parse_ratfun("c^-1", &ctx).unwrap()));
        let t: Vec<RatFun> = ["t1", "t2", "t3"]
            .iter()
            .map(|s| parse_ratfun(s, &ctx).unwrap())
            .collect();
        assert!(root_char(1, &t)
            .unwrap()
            .equals(&parse_ratfun("t1/t2", &ctx).unwrap()));
        let torus = TorusData::gl(3);
        let cartan = cartan_a(3).unwrap();
        for i in 1..=2 {
            let ones = vec![RatFun::one(&ctx); 3];
            let image = torus.coroot_act(i, &c, &ones).unwrap();
            for j in 1..=2 {
                let v = torus.root_char(j, &image).unwrap();
                assert!(v.equals(&c.pow(cartan.a(i, j)).unwrap()));
            }
        }
    }

    #[test]
    fn parses_words() {
        assert_eq!(parse_word("1, 2,1").unwrap(), vec![1, 2, 1]);
        assert!(parse_word("1,x").is_err());
    }
}
