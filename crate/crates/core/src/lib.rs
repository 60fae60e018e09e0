//! Homological invariants of finite-dimensional bound quiver algebras and a
//! reduction pipeline that shrinks an algebra while preserving its
//! singularity category and Gorenstein projective modules.

pub mod cli;
pub mod field;
pub mod gproj;
pub mod homology;
pub mod module_cat;
pub mod presentation;
pub mod reduction;
