use alloc::vec;
use alloc::vec::Vec;

use super::{ComplexMatrix, dim_for};
use crate::{C64, Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Normalized state vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps `amplitudes`, which must have length `2^num_qubits` and unit norm.
    pub fn new(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_len(num_qubits, amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite);
        }
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_len(num_qubits, amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm_sqr == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / libm::sqrt(norm_sqr);
        amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = dim_for(num_qubits)?;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Tensor product `qubits[L-1] (x) ... (x) qubits[0]`; each entry is the
    /// (normalized) single-qubit state of the qubit with that index.
    pub fn product(qubits: &[[C64; 2]]) -> Result<Self> {
        let num_qubits = qubits.len();
        let dim = dim_for(num_qubits)?;
        let mut amplitudes = vec![C64::new(1.0, 0.0); dim];
        for (n, amp) in amplitudes.iter_mut().enumerate() {
            for (k, q) in qubits.iter().enumerate() {
                *amp *= q[(n >> k) & 1];
            }
        }
        Self::new(num_qubits, amplitudes)
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self { num_qubits, amplitudes }
    }

    /// Number of qubits.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Hilbert-space dimension `2^L`.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitudes indexed by basis state.
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `sum |a_i|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `<self|op|self>`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        let applied = op.apply(&self.amplitudes)?;
        Ok(self.amplitudes.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum())
    }

    /// Applies `u` to a single qubit.
    pub fn apply_single_qubit(&self, qubit: usize, u: [[C64; 2]; 2]) -> Result<Self> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        let bit = 1usize << qubit;
        let mut out = self.amplitudes.clone();
        for n in (0..self.dim()).filter(|n| n & bit == 0) {
            let (a0, a1) = (self.amplitudes[n], self.amplitudes[n | bit]);
            out[n] = u[0][0] * a0 + u[0][1] * a1;
            out[n | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(Self { num_qubits: self.num_qubits, amplitudes: out })
    }

    /// Relabels qubits: qubit `k` of `self` becomes qubit `perm[k]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let l = self.num_qubits;
        let mut seen = vec![false; l];
        if perm.len() != l {
            return Err(Error::DimensionMismatch { expected: l, found: perm.len() });
        }
        for &p in perm {
            if p >= l || core::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation"));
            }
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (n, &a) in self.amplitudes.iter().enumerate() {
            let m = (0..l).fold(0usize, |acc, k| acc | (((n >> k) & 1) << perm[k]));
            out[m] = a;
        }
        Ok(Self { num_qubits: l, amplitudes: out })
    }

    /// `e^{i theta} |self>`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let phase = C64::new(libm::cos(theta), libm::sin(theta));
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }
}

fn check_len(num_qubits: usize, len: usize) -> Result<()> {
    let dim = dim_for(num_qubits)?;
    if len != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: len });
    }
    Ok(())
}

/// Reduced state over a set of kept qubits.
///
/// Bit `b` of a row/column index corresponds to the `b`-th smallest kept qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace (both within 1e-12).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let num_qubits = super::qubits_for(matrix.rows())
            .ok_or(Error::InvalidParameter("density matrix dimension is not a power of two"))?;
        let deviation = matrix.hermitian_deviation();
        if deviation > NORM_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: tr.re });
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Number of qubits kept.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Reduced density matrix of `state` on the qubits in `keep`.
///
/// Index arithmetic on the flat amplitude vector: each full basis index is
/// split as `keep_offset[r] | env_offset[e]`, and
/// `rho[r, s] = sum_e psi[r|e] conj(psi[s|e])`.
pub fn partial_trace(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let l = state.num_qubits();
    if keep.is_empty() {
        return Err(Error::EmptySubsystem);
    }
    let mut mask = 0usize;
    for &q in keep {
        if q >= l {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: l });
        }
        mask |= 1 << q;
    }
    let kept: Vec<usize> = (0..l).filter(|q| mask >> q & 1 == 1).collect();
    let traced: Vec<usize> = (0..l).filter(|q| mask >> q & 1 == 0).collect();
    let keep_offsets = scatter_offsets(&kept);
    let env_offsets = scatter_offsets(&traced);

    let dk = keep_offsets.len();
    let psi = state.amplitudes();
    let mut rho = ComplexMatrix::zeros(dk, dk);
    let mut block = vec![C64::new(0.0, 0.0); dk];
    for &e in &env_offsets {
        for (b, &r) in block.iter_mut().zip(&keep_offsets) {
            *b = psi[r | e];
        }
        for (r, &br) in block.iter().enumerate() {
            if br == C64::new(0.0, 0.0) {
                continue;
            }
            for (s, &bs) in block.iter().enumerate() {
                rho[(r, s)] += br * bs.conj();
            }
        }
    }
    Ok(DensityMatrix { num_qubits: kept.len(), matrix: rho })
}

/// For each assignment `x` of the listed qubits, the full basis offset with
/// bit `b` of `x` deposited at position `qubits[b]`.
fn scatter_offsets(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|x| {
            qubits.iter().enumerate().fold(0usize, |acc, (b, &q)| acc | (((x >> b) & 1) << q))
        })
        .collect()
}

/// `tr(rho^2)`, evaluated as `sum_ij |rho_ij|^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let p: f64 = rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum();
    if p > 1.0 && p <= 1.0 + NORM_TOL { 1.0 } else { p }
}

/// Purities of every single-qubit marginal, without building density matrices.
pub(crate) fn single_site_purities(state: &PureState) -> Vec<f64> {
    let psi = state.amplitudes();
    (0..state.num_qubits())
        .map(|k| {
            let bit = 1usize << k;
            let (mut p0, mut p1, mut off) = (0.0, 0.0, C64::new(0.0, 0.0));
            for n in (0..psi.len()).filter(|n| n & bit == 0) {
                let (a0, a1) = (psi[n], psi[n | bit]);
                p0 += a0.norm_sqr();
                p1 += a1.norm_sqr();
                off += a0 * a1.conj();
            }
            let p = p0 * p0 + p1 * p1 + 2.0 * off.norm_sqr();
            if p > 1.0 && p <= 1.0 + NORM_TOL { 1.0 } else { p }
        })
        .collect()
}
