//! Superpotential algebras of brane tilings.
//!
//! A brane tiling is a quiver embedded in a two-torus whose faces are
//! oriented cycles. This crate validates tilings, decides equivalence of
//! paths modulo the superpotential relations, searches for failures of
//! cancellation, contracts arrows, and computes the monomial rings attached
//! to an arrow labeling together with a geometric report on their spectra.

pub mod contraction;
pub mod error;
pub mod format;
pub mod geometry;
pub mod impression;
pub mod lattice;
pub mod monomial;
pub mod rewrite;
pub mod tiling;
pub mod toric;

pub use contraction::{
    check_adequacy, contract, remove_two_cycles, AdequacyReport, Condition1, Condition2,
    ContractionMap, TwoCycleRemoval,
};
pub use error::{ContractionFailure, Error, Result};
pub use format::TilingFile;
pub use impression::{square_labeling, verify_labeling, GridEmbedding, Labeling};
pub use monomial::Monomial;
pub use rewrite::{
    cancellativity_search, paths_equivalent, superpotential_relations, CancellativityVerdict,
    Equivalence, Relation, RewriteSystem, DEFAULT_BUDGET,
};
pub use tiling::{PathWord, Sign, TorusQuiver, ValidationReport, Vec2};
pub use toric::{compare_s_sprime, compute_rings, central_elements, RStructure, Rings, SComparison};
pub use geometry::{
    geometry_report, Ambient, Form, GeometryReport, SubalgebraPresentation, Uniqueness,
};
