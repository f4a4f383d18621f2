//! Exact dynamics of coupled nearest/next-nearest-neighbour XXZ chains and the
//! multipartite entanglement they generate.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! core: dense complex linear algebra, Hamiltonian construction, spectral time
//! evolution, the Meyer-Wallach / Scott entanglement measures and Haar-ensemble
//! averaging. File formats, plotting and the command line live in the
//! `xxz-runner` crate.
//!
//! Basis convention: basis index `n` stores qubit `k` in bit `k`, so qubit 0 is
//! the least-significant bit and `|n_{L-1} ... n_1 n_0>` reads left to right
//! from the most significant bit.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod ensemble;
pub mod entanglement;
mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod linalg;

pub use error::{Error, Result};

pub use ensemble::{
    EnsembleConfig, EntanglementTrajectory, GammaResult, entangling_power_trajectory,
    expected_entanglement, gamma_metric, sample_haar_product_state,
};
pub use entanglement::{EntanglementValue, linear_entropy, meyer_wallach, scott_measure};
pub use evolution::Propagator;
pub use hamiltonian::{
    ChainParams, HamiltonianVariant, HermitianOperator, build_boson, build_spin, total_magnetization,
};

pub use linalg::{ComplexMatrix, DensityMatrix, PureState, SpectralDecomposition};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Largest supported number of qubits / chain sites.
///
/// A dense operator at this size is `2^14 x 2^14` complex doubles (4 GiB).
pub const MAX_QUBITS: usize = 14;
