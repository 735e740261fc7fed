//! Dense Hermitian linear algebra: construction, Jacobi spectral
//! decomposition, spectral functions, traces, Schatten norms, block
//! assembly and seeded PSD ensembles.

pub mod eigh;
pub mod io;
pub mod matrix;
pub mod random;
pub mod spectral;

pub use eigh::{eigh, eigh_with_cap, SpectralDecomposition};
pub use matrix::{
    block2x2, frobenius, mat_mul, split_blocks, trace_of, trace_of_product, GeneralMatrix,
    HermitianMatrix, C64,
};
pub use random::{random_psd, seeded_rng, Ensemble};
pub use spectral::{
    apply_spectral_function, power_trace, schatten_norm, schatten_power_sum, singular_values,
    Domain,
};
