//! Decorated geometric crystals in chart coordinates and their verification.

mod crystal;
mod fixture;
mod report;
mod verify;

pub use crystal::{action_context, CrystalJson, GeometricCrystal, SCHEMA_VERSION};
pub use fixture::fixture_gl2xgl2;
pub use report::{random_point, random_rational, Checker, ReportEntry, Status, VerificationReport};
pub use verify::{
    compose_maps, fixed_locus_condition, fixed_point_check, verify_axioms, verify_verma,
    verify_weyl, verma_words, weyl_si, FixedPointReport,
};
