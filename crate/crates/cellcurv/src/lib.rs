//! Discrete Ricci curvatures on regular quasiconvex cell complexes.
//!
//! Two curvatures live on the same object: the combinatorial (Bochner)
//! Ricci curvature of a vector, defined through differential forms on the
//! complex, and the Lin-Lu-Yau curvature of the face-incidence graph,
//! defined through exact optimal transport of lazy random-walk measures.
//! The library computes both, certifies the transport values with exact
//! primal/dual pairs, verifies the comparison identity between them, and
//! derives the diameter and spectral-gap bounds a positive curvature
//! minimum implies.
//!
//! Modules follow the pipeline:
//!
//! - [`complex`]: the immutable graded complex, builders, validation
//! - [`io`]: the `cell`/`face` text format
//! - [`forman`]: neighbor vectors and the closed-form curvature
//! - [`forms`]: 0-/1-forms, Laplacians, and the Bochner identity
//! - [`transport`]: measures, exact Wasserstein with certificates, the
//!   explicit coupling and dual witness around a vector
//! - [`lly`]: alpha-Ricci curvature, its limit, the comparison identity
//! - [`spectral`]: Laplacian spectrum and curvature-driven bounds

pub mod complex;
pub mod forman;
pub mod forms;
pub mod io;
pub mod lly;
pub mod rational;
pub mod spectral;
pub mod transport;

pub use complex::{
    build_interval_grid, build_path, build_simplex_boundary, build_torus_grid, product, validate,
    CellComplex, CellId, ComplexError, FaceVector, ValidationReport,
};
pub use rational::{display_rat, display_rat_decimal, parse_rat, Rat};
