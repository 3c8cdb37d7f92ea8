//! Tropical crystals: the free crystal `Trop(X, θ)`, the cone `B̃ = {f̃ ≥ 0}`,
//! its crystal graphs, and the Gelfand–Tsetlin and Weyl-dimension oracles.

mod crystal;
mod graph;
mod gt;

pub use crystal::{
    closed_form_check, e_tilde, membership, tropicalize, verify_decorated_trop,
    verify_trop_properties, KashiwaraElement, TropCrystal, GL3_CLOSED_E, GL3_CLOSED_EPS,
    GL3_CLOSED_F, GL3_CLOSED_PHI,
};
pub use graph::{
    components, dim_table, dim_table_tsv, enumerate_b_lambda, gamma_multiplicities, graph_to_dot,
    graph_to_json, normality_check, weights_match_gt, Component, CrystalGraph, DimRow,
    NormalityFailure, NormalityReport,
};
pub use gt::{
    dominant_weights, gt_bijection, gt_patterns, gt_rows, gt_to_element, gt_weight_multiplicities,
    weyl_dimension, GTPattern,
};

pub const SCHEMA_VERSION: u32 = 1;
