//! Exhaustive search for convex pentagons admitting i-block transitive
//! tilings of the plane.
//!
//! The pipeline runs species → topological types → block forms →
//! labelings → boundary partitions → isohedral symbol applications →
//! exact equation systems → classification → closure realizability.

pub mod algebra;
pub mod blockforms;
pub mod boundary;
pub mod isohedral;
pub mod linalg;
pub mod matcher;
pub mod pipeline;
pub mod realizability;
pub mod render;
pub mod report;
pub mod species;

/// Exact scalar used by the equation systems.
pub type Rational = num_rational::Ratio<i128>;

/// Floating scalar used by the numeric realizability stage.
pub type Real = f64;
