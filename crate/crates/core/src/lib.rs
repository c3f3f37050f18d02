//! Dihedral symmetry reduction for ring central configurations.
//!
//! The crate constructs the dihedral group D_n and its action on the planar
//! configuration space of n equal masses on a regular n-gon (optionally with
//! an extra body at the center), builds the symmetry-adapted orthogonal
//! basis from explicit eigenvectors of the generators, and uses it to break
//! Hessians of the moment of inertia, the Newtonian potential, and their
//! scale-normalized product into blocks of size at most 2 (3 for the
//! centered ring). Closed-form block entries, a dense Jacobi eigensolver
//! oracle, the rotating-frame stability problem, and a degeneracy scan over
//! the central mass round out the toolkit.
//!
//! Everything is pure and immutable after construction. The mass-grid scan
//! is data parallel; enable the default `parallel` feature to run it on
//! rayon, or build with `--no-default-features` for the sequential
//! fallback.

pub mod block_spectrum;
pub mod dihedral;
pub mod fdcheck;
pub mod linalg;
pub mod nbody;
pub mod stability;
pub mod symmetry_basis;

mod error;
mod parallel;

pub use error::{Error, Result};
