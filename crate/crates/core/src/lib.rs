//! Decorated geometric crystals in exact arithmetic.
//!
//! The crate builds geometric crystals as rational maps in a toric chart,
//! verifies their axioms symbolically, tropicalizes them with the degree
//! functor, and enumerates the resulting Kashiwara crystals.

pub mod cartan;
pub mod error;
pub mod geocrystal;
pub mod kashiwara;
pub mod ratfun;
pub mod tropical;
pub mod unipotent;

pub use error::{Error, Result};
pub use ratfun::{RatFun, RatMatrix, Rational, VarContext};
