use std::fmt;

use super::context::VarContext;
use super::function::RatFun;
use super::Rational;
use crate::error::{Error, Result};

/// A square matrix of rational functions over one shared context.
///
/// Indices are 0-based throughout.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    ctx: VarContext,
    n: usize,
    entries: Vec<RatFun>,
}

impl RatMatrix {
    pub fn zeros(ctx: &VarContext, n: usize) -> Self {
        RatMatrix {
            ctx: ctx.clone(),
            n,
            entries: vec![RatFun::zero(ctx); n * n],
        }
    }

    pub fn identity(ctx: &VarContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n);
        for i in 0..n {
            m.set(i, i, RatFun::one(ctx));
        }
        m
    }

    pub fn diagonal(ctx: &VarContext, diag: Vec<RatFun>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ctx, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(ctx: &VarContext, rows: Vec<Vec<RatFun>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidArgument("matrix must be square".into()));
            }
            for e in row {
                ctx.check_same(e.ctx())?;
                entries.push(e);
            }
        }
        Ok(RatMatrix {
            ctx: ctx.clone(),
            n,
            entries,
        })
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFun {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFun) {
        self.entries[i * self.n + j] = v;
    }

    pub fn diag(&self) -> Vec<RatFun> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.n != other.n {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        self.ctx.check_same(&other.ctx)?;
        let n = self.n;
        let mut out = Self::zeros(&self.ctx, n);
        for i in 0..n {
            for j in 0..n {
                let prods: Vec<RatFun> = (0..n)
                    .filter(|&k| !self.get(i, k).is_zero() && !other.get(k, j).is_zero())
                    .map(|k| self.get(i, k).mul(other.get(k, j)))
                    .collect();
                let refs: Vec<&RatFun> = prods.iter().collect();
                if !refs.is_empty() {
                    out.set(i, j, RatFun::sum(&refs));
                }
            }
        }
        Ok(out)
    }

    /// Determinant of the submatrix on `rows` × `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<RatFun> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidArgument("minor needs |rows| = |cols|".into()));
        }
        if rows.iter().chain(cols).any(|&i| i >= self.n) {
            return Err(Error::InvalidArgument("minor index out of range".into()));
        }
        Ok(self.laplace(rows, cols))
    }

    pub fn det(&self) -> RatFun {
        let idx: Vec<usize> = (0..self.n).collect();
        self.laplace(&idx, &idx)
    }

    fn laplace(&self, rows: &[usize], cols: &[usize]) -> RatFun {
        match rows.len() {
            0 => RatFun::one(&self.ctx),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                // Expand along the column with the most zeros.
                let (best, _) = cols
                    .iter()
                    .enumerate()
                    .map(|(ci, &c)| {
                        (
                            ci,
                            rows.iter().filter(|&&r| self.get(r, c).is_zero()).count(),
                        )
                    })
                    .max_by_key(|&(_, z)| z)
                    .expect("nonempty");
                let c = cols[best];
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let mut parts = Vec::new();
                for (ri, &r) in rows.iter().enumerate() {
                    let a = self.get(r, c);
                    if a.is_zero() {
                        continue;
                    }
                    let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
                    let m = self.laplace(&sub_rows, &sub_cols);
                    if m.is_zero() {
                        continue;
                    }
                    let t = a.mul(&m);
                    parts.push(if (ri + best) % 2 == 1 { t.neg() } else { t });
                }
                if parts.is_empty() {
                    return RatFun::zero(&self.ctx);
                }
                let refs: Vec<&RatFun> = parts.iter().collect();
                RatFun::sum(&refs)
            }
        }
    }

    /// Inverse by Gauss–Jordan elimination over the field of rational functions.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(&self.ctx, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::DivisionByZero)?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv()?;
            for j in 0..n {
                let v = a.get(col, j).mul(&p);
                a.set(col, j, v);
                let w = inv.get(col, j).mul(&p);
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j).sub(&factor.mul(a.get(col, j)));
                    a.set(r, j, v);
                    let w = inv.get(r, j).sub(&factor.mul(inv.get(col, j)));
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    /// True if every entry strictly above the diagonal is identically zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn equals(&self, other: &RatMatrix) -> bool {
        self.n == other.n
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.equals(b))
    }

    pub fn map(&self, f: impl Fn(&RatFun) -> Result<RatFun>) -> Result<RatMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        let ctx = entries
            .first()
            .map_or_else(|| self.ctx.clone(), |e| e.ctx().clone());
        Ok(RatMatrix {
            ctx,
            n: self.n,
            entries,
        })
    }

    pub fn substitute(&self, images: &[RatFun]) -> Result<RatMatrix> {
        self.map(|e| e.substitute(images))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).evaluate(point))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::parse::parse_ratfun;

    fn ctx() -> VarContext {
        VarContext::new(&["a", "b", "c", "d"]).unwrap()
    }

    fn m(rows: &[&[&str]]) -> RatMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_ratfun(s, &ctx()).unwrap()).collect())
            .collect();
        RatMatrix::from_rows(&ctx(), rows).unwrap()
    }

    #[test]
    fn det_of_2x2() {
        let a = m(&[&["a", "b"], &["c", "d"]]);
        assert!(a.det().equals(&parse_ratfun("a*d - b*c", &ctx()).unwrap()));
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(&[&["a", "b"], &["c", "d"]]);
        assert!(RatMatrix::identity(&ctx(), 2).mul(&a).unwrap().equals(&a));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = m(&[&["a", "b", "0"], &["c", "d", "1"], &["1", "a", "b"]]);
        let inv = a.inverse().unwrap();
        assert!(inv.mul(&a).unwrap().equals(&RatMatrix::identity(&ctx(), 3)));
    }

    #[test]
    fn minors_and_triangularity() {
        let a = m(&[&["a", "0", "0"], &["b", "c", "0"], &["d", "a", "b"]]);
        assert!(a.is_lower_triangular());
        let mnr = a.minor(&[1, 2], &[0, 1]).unwrap();
        assert!(mnr.equals(&parse_ratfun("a*b - c*d", &ctx()).unwrap()));
        assert!(a.minor(&[0], &[0, 1]).is_err());
    }
}
