//! Open-boundary XXZ chains with nearest-neighbour (NN) and
//! next-nearest-neighbour (NNN) exchange, and their sum
//! `H_NN + lambda * H_NNN`.
//!
//! Spin operators are bare Pauli matrices (eigenvalues +-1). A bond `(j, j+d)`
//! contributes `(J/2) [X_j X_{j+d} + Y_j Y_{j+d} + mu Z_j Z_{j+d}]`, which in
//! hard-boson language is `J (b+_j b_{j+d} + h.c.) + J (mu/2)(2n_j - 1)(2n_{j+d} - 1)`.
//! Both constructions are provided; they agree to rounding.

use alloc::vec::Vec;

use crate::linalg::{ComplexMatrix, dim_for, kron};
use crate::{C64, Error, MAX_QUBITS, Result};

/// Physical parameters of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// Number of sites `L`.
    pub sites: usize,
    /// Exchange coupling `J`.
    pub coupling: f64,
    /// Anisotropy `mu` of the `ZZ` term.
    pub anisotropy: f64,
    /// Weight `lambda` of the NNN part in the coupled model.
    pub lambda: f64,
}

impl ChainParams {
    /// Checked constructor.
    pub fn new(sites: usize, coupling: f64, anisotropy: f64, lambda: f64) -> Result<Self> {
        let params = Self { sites, coupling, anisotropy, lambda };
        params.validate()?;
        Ok(params)
    }

    /// `L = 8, J = 1, mu = 1.5, lambda = 1`.
    pub fn reference() -> Self {
        Self { sites: 8, coupling: 1.0, anisotropy: 1.5, lambda: 1.0 }
    }

    /// Copy with a different `lambda`.
    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    /// Checks `2 <= L <= MAX_QUBITS`, finite couplings and `lambda >= 0`.
    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::DegenerateChain { sites: self.sites, what: "any bond" });
        }
        if self.sites > MAX_QUBITS {
            return Err(Error::SizeLimit { qubits: self.sites, max: MAX_QUBITS });
        }
        if !(self.coupling.is_finite() && self.anisotropy.is_finite() && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter("couplings must be finite"));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParameter("lambda must be non-negative"));
        }
        Ok(())
    }
}

/// Which Hamiltonian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HamiltonianVariant {
    /// Nearest-neighbour XXZ chain.
    NearestNeighbor,
    /// Next-nearest-neighbour XXZ chain.
    NextNearestNeighbor,
    /// `H_NN + lambda * H_NNN`.
    Coupled,
}

impl HamiltonianVariant {
    /// Short lowercase tag (`nn`, `nnn`, `coupled`).
    pub fn tag(self) -> &'static str {
        match self {
            Self::NearestNeighbor => "nn",
            Self::NextNearestNeighbor => "nnn",
            Self::Coupled => "coupled",
        }
    }

    fn check(self, sites: usize) -> Result<()> {
        match self {
            Self::NearestNeighbor => Ok(()),
            Self::NextNearestNeighbor | Self::Coupled if sites < 3 => {
                Err(Error::DegenerateChain { sites, what: "a next-nearest-neighbour bond" })
            }
            _ => Ok(()),
        }
    }
}

/// Dense Hermitian operator on a qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Wraps a matrix, checking its shape and Hermiticity (within 1e-12).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let num_qubits = crate::linalg::qubits_for(matrix.rows())
            .ok_or(Error::InvalidParameter("operator dimension is not a power of two"))?;
        let deviation = matrix.hermitian_deviation();
        if deviation > 1e-12 * matrix.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Zero operator on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        let dim = dim_for(num_qubits)?;
        Ok(Self { num_qubits, matrix: ComplexMatrix::zeros(dim, dim) })
    }

    /// Number of qubits acted on.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        Ok(Self { num_qubits: self.num_qubits, matrix: self.matrix.add_scaled(&other.matrix, factor)? })
    }
}

fn bond_range(sites: usize, distance: usize) -> core::ops::Range<usize> {
    0..sites.saturating_sub(distance)
}

/// Pauli string with `op` on sites `a` and `b`, identity elsewhere.
fn two_site(sites: usize, a: usize, b: usize, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    let mut m = ComplexMatrix::identity(1);
    // Most significant qubit first, so qubit 0 ends up on the lowest bit.
    for q in (0..sites).rev() {
        m = kron(&m, if q == a || q == b { op } else { &id })?;
    }
    Ok(m)
}

fn spin_chain(params: &ChainParams, distance: usize) -> Result<ComplexMatrix> {
    let dim = dim_for(params.sites)?;
    let paulis = [
        (ComplexMatrix::pauli_x(), 1.0),
        (ComplexMatrix::pauli_y(), 1.0),
        (ComplexMatrix::pauli_z(), params.anisotropy),
    ];
    let mut h = ComplexMatrix::zeros(dim, dim);
    for j in bond_range(params.sites, distance) {
        for (pauli, weight) in &paulis {
            let term = two_site(params.sites, j, j + distance, pauli)?;
            h = h.add_scaled(&term, 0.5 * params.coupling * weight)?;
        }
    }
    Ok(h)
}

fn boson_chain(params: &ChainParams, distance: usize) -> Result<ComplexMatrix> {
    let dim = dim_for(params.sites)?;
    let (j_coup, mu) = (params.coupling, params.anisotropy);
    let mut h = ComplexMatrix::zeros(dim, dim);
    for n in 0..dim {
        for j in bond_range(params.sites, distance) {
            let k = j + distance;
            let (nj, nk) = ((n >> j) & 1, (n >> k) & 1);
            let zj = 2.0 * nj as f64 - 1.0;
            let zk = 2.0 * nk as f64 - 1.0;
            h[(n, n)] += C64::new(j_coup * 0.5 * mu * zj * zk, 0.0);
            // b+_j b_k + b_j b+_k moves a single hard boson across the bond.
            if nj != nk {
                let m = n ^ (1 << j) ^ (1 << k);
                h[(m, n)] += C64::new(j_coup, 0.0);
            }
        }
    }
    Ok(h)
}

fn build_with(
    params: &ChainParams,
    variant: HamiltonianVariant,
    chain: fn(&ChainParams, usize) -> Result<ComplexMatrix>,
) -> Result<HermitianOperator> {
    params.validate()?;
    variant.check(params.sites)?;
    let matrix = match variant {
        HamiltonianVariant::NearestNeighbor => chain(params, 1)?,
        HamiltonianVariant::NextNearestNeighbor => chain(params, 2)?,
        HamiltonianVariant::Coupled => chain(params, 1)?.add_scaled(&chain(params, 2)?, params.lambda)?,
    };
    Ok(HermitianOperator { num_qubits: params.sites, matrix })
}

/// Builds the Hamiltonian from Kronecker products of Pauli matrices.
pub fn build_spin(params: &ChainParams, variant: HamiltonianVariant) -> Result<HermitianOperator> {
    build_with(params, variant, spin_chain)
}

/// Builds the Hamiltonian from hard-boson hopping and occupation terms acting
/// directly on basis states.
pub fn build_boson(params: &ChainParams, variant: HamiltonianVariant) -> Result<HermitianOperator> {
    build_with(params, variant, boson_chain)
}

/// `M = sum_j S^z_j` with `S^z_j = 2 n_j - 1`: diagonal entry `2 popcount(n) - L`.
pub fn total_magnetization(sites: usize) -> Result<HermitianOperator> {
    if sites == 0 {
        return Err(Error::DegenerateChain { sites, what: "a magnetization operator" });
    }
    let dim = dim_for(sites)?;
    let diag: Vec<C64> = (0..dim)
        .map(|n| C64::new(2.0 * (n as u64).count_ones() as f64 - sites as f64, 0.0))
        .collect();
    Ok(HermitianOperator { num_qubits: sites, matrix: ComplexMatrix::from_diagonal(&diag) })
}
