//! The tropicalization functor over (ℤ, min, +).
//!
//! Two tracks: [`trop_eval`] restricts any rational function to a
//! co-character curve and reads off the lowest degree; [`trop_structural`]
//! maps a subtraction-free expression node by node to a [`PLExpr`].

mod functor;
mod oracle;
mod pl;

pub use functor::{functoriality_check, random_positive_map, FunctorialityReport};
pub use oracle::{
    deg, pl_compare_on_box, pl_equal_on_box, trop_eval, trop_map_eval, trop_structural,
    BoxComparison, IntBox, PLFunction, TropFn, TropMap, EXHAUSTIVE_LIMIT,
};
pub use pl::{pl_eval, PLExpr, PLNode, PLProgram};
