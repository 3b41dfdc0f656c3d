//! Exact computation of spaces of modular local polynomials whose exceptional
//! set is the union of the geodesics attached to the binary quadratic forms of
//! a fixed positive discriminant.
//!
//! The pipeline runs in four stages, one module each:
//!
//! * [`geometry`]: exact rationals, quadratic forms, geodesics, SL2(Z) and its
//!   action on points `x + i*sqrt(s)`;
//! * [`arrangement`]: the geodesic arcs clipped to the capped standard
//!   fundamental domain, its faces, point location and boundary segments;
//! * [`gluing`]: the side-pairing multigraph on faces, its orbits, spanning
//!   forest and cycle elements;
//! * [`polyspace`]: slash matrices, exact fixed spaces and the assembled basis,
//!   with evaluation on the whole upper half-plane.

pub mod arrangement;
pub mod dsu;
pub mod error;
pub mod geometry;
pub mod gluing;
pub mod linalg;
pub mod polyspace;

pub use arrangement::{
    adjacent_sector_samples, build_arrangement, build_arrangement_with_cap, default_cap, BoundarySegments,
    FaceComplex, FaceId, Location,
};
pub use error::{MlpError, Result};
pub use geometry::{
    apply_mobius, enumerate_forms, eval_form, form_action, geodesic_of_form, is_even_square, reduce_point,
    AlgebraicPoint, ExactComplex, Geodesic, Mat2, QuadForm, Rational,
};
pub use gluing::{build_gluing_graph, GluingGraph};
pub use polyspace::{
    compute_space, compute_space_from, evaluate, fixed_space, fraction_string, slash_matrix, BasisElement,
    LocalPolySpace, PolyVec, SlashMatrix, Weight,
};
