//! Small dense linear algebra toolkit: matrix type, symmetric Jacobi
//! eigendecomposition, and general (nonsymmetric) eigenvalues.

mod general;
mod mat;
mod symmetric;

pub use general::{
    eig, eigenpair_residual, max_eigenpair_residual, refine_spectrum_clusters, sort_complex,
    SplitMix,
};
pub use mat::{axpy, dot, norm2, norm_inf, Mat};
pub use symmetric::{eigen_residual, eigh, SymEigen};
