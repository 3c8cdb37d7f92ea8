use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered, immutable list of variable names shared by polynomials.
///
/// Cloning is cheap. Two contexts are compatible when their name lists are
/// equal, so independently built contexts with the same names interoperate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarContext(Arc<[String]>);

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::InvalidArgument(format!("bad variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate variable {n:?}")));
            }
        }
        Ok(VarContext(names.into()))
    }

    /// The context with no variables (constants only).
    pub fn empty() -> Self {
        VarContext(Arc::from(Vec::<String>::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// This context followed by `extra` variables.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self> {
        let mut names: Vec<String> = self.0.to_vec();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        VarContext::new(&names)
    }

    /// `count` names derived from `base` that do not clash with this context.
    pub fn fresh_names(&self, base: &str, count: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            let cand = if count == 1 && k == 0 {
                base.to_string()
            } else {
                format!("{base}_{}", k + 1)
            };
            k += 1;
            if self.index_of(&cand).is_none() && !out.contains(&cand) {
                out.push(cand);
            }
        }
        out
    }

    pub(crate) fn check_same(&self, other: &VarContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(VarContext::new(&["x", "x"]).is_err());
        assert!(VarContext::new(&["1x"]).is_err());
        assert!(VarContext::new(&["x_1", "_y"]).is_ok());
    }

    #[test]
    fn fresh_names_avoid_clashes() {
        let ctx = VarContext::new(&["d", "d_1"]).unwrap();
        assert_eq!(ctx.fresh_names("d", 1), vec!["d_2".to_string()]);
        assert_eq!(
            ctx.fresh_names("u", 2),
            vec!["u_1".to_string(), "u_2".to_string()]
        );
    }
}
