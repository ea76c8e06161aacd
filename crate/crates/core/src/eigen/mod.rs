//! Exact sector spectra: dense for small sectors, Lanczos for the lowest
//! levels of larger ones, and crystal momenta of the eigenvectors.

mod dense;
mod lanczos;
mod spectrum;

pub use dense::{hermitian_eigenvalues, symmetric_eigen, tridiagonal_eigen, DenseMatrix, SymmetricEigen};
pub use lanczos::{lowest_eigenpairs, EigenPair, LanczosOptions, LinearOperator};
pub use spectrum::{
    degenerate_clusters, sector_spectrum, sector_spectrum_with, SectorOperator, SpectrumMode, SpectrumResult,
    CLUSTER_THRESHOLD, DENSE_RESIDUAL_BOUND, ITERATIVE_RESIDUAL_BOUND,
};
