//! Unitary time evolution `U(t) = exp(-i H t)` through the spectral
//! decomposition of `H` (hbar = 1).

use alloc::vec::Vec;

use crate::hamiltonian::HermitianOperator;
use crate::linalg::{ComplexMatrix, PureState, SpectralDecomposition, eigh};
use crate::{C64, Error, Result};

/// Cached eigendecomposition of a Hamiltonian, reusable for any time and state.
#[derive(Debug, Clone)]
pub struct Propagator {
    num_qubits: usize,
    spectrum: SpectralDecomposition,
}

/// A state expressed in the eigenbasis of a [`Propagator`]; evolving it only
/// costs a phase per eigenvalue plus one basis change back.
#[derive(Debug, Clone)]
pub struct EigenCoefficients<'a> {
    propagator: &'a Propagator,
    coefficients: Vec<C64>,
}

#[inline]
fn phase(energy: f64, t: f64) -> C64 {
    let angle = energy * t;
    C64::new(libm::cos(angle), -libm::sin(angle))
}

impl Propagator {
    /// Diagonalizes `h` once.
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        Ok(Self { num_qubits: h.num_qubits(), spectrum: eigh(h.matrix())? })
    }

    /// The underlying decomposition.
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Number of qubits of the state space.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Dense `U(t)`.
    pub fn unitary(&self, t: f64) -> ComplexMatrix {
        self.spectrum.reassemble(|e| phase(e, t))
    }

    /// `V^dagger psi`.
    pub fn project<'a>(&'a self, psi: &PureState) -> Result<EigenCoefficients<'a>> {
        let dim = self.spectrum.dim();
        if psi.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: psi.dim() });
        }
        let v = self.spectrum.eigenvectors();
        let mut coefficients = alloc::vec![C64::new(0.0, 0.0); dim];
        for (r, &a) in psi.amplitudes().iter().enumerate() {
            for (c, &vrc) in coefficients.iter_mut().zip(v.row(r)) {
                *c += vrc.conj() * a;
            }
        }
        Ok(EigenCoefficients { propagator: self, coefficients })
    }

    /// `psi(t) = V exp(-i Lambda t) V^dagger psi0`.
    pub fn evolve(&self, psi0: &PureState, t: f64) -> Result<PureState> {
        Ok(self.project(psi0)?.at(t))
    }

    /// `evolve` at every time in an ascending, non-negative grid, projecting
    /// `psi0` onto the eigenbasis only once.
    pub fn evolve_grid(&self, psi0: &PureState, times: &[f64]) -> Result<Vec<PureState>> {
        check_grid(times)?;
        let coeffs = self.project(psi0)?;
        Ok(times.iter().map(|&t| coeffs.at(t)).collect())
    }
}

impl EigenCoefficients<'_> {
    /// The evolved state at time `t`.
    pub fn at(&self, t: f64) -> PureState {
        let spectrum = &self.propagator.spectrum;
        let rotated: Vec<C64> = spectrum
            .eigenvalues()
            .iter()
            .zip(&self.coefficients)
            .map(|(&e, &c)| c * phase(e, t))
            .collect();
        let v = spectrum.eigenvectors();
        let amplitudes = (0..spectrum.dim())
            .map(|r| v.row(r).iter().zip(&rotated).map(|(a, b)| a * b).sum())
            .collect();
        PureState::from_raw(self.propagator.num_qubits, amplitudes)
    }
}

/// Non-empty, ascending, starting at `t >= 0`.
pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if times.iter().any(|t| !t.is_finite()) || times[0] < 0.0 || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{ChainParams, HamiltonianVariant, build_spin};
    use core::f64::consts::FRAC_PI_2;

    fn coupled(sites: usize) -> HermitianOperator {
        build_spin(&ChainParams::new(sites, 1.0, 1.5, 1.0).unwrap(), HamiltonianVariant::Coupled).unwrap()
    }

    fn test_state(sites: usize) -> PureState {
        let dim = 1 << sites;
        PureState::normalized(
            sites,
            (0..dim).map(|i| C64::new(libm::sin(1.3 * i as f64 + 0.2), libm::cos(0.7 * i as f64))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn sigma_z_quarter_period() {
        let p = Propagator::new(&HermitianOperator::new(ComplexMatrix::pauli_z()).unwrap()).unwrap();
        let u = p.unitary(FRAC_PI_2);
        let expected = ComplexMatrix::from_diagonal(&[C64::new(0.0, -1.0), C64::new(0.0, 1.0)]);
        assert!(u.distance(&expected) < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let p = Propagator::new(&HermitianOperator::zero(3).unwrap()).unwrap();
        for t in [0.0, 1.0, 17.5] {
            assert!(p.unitary(t).distance(&ComplexMatrix::identity(8)) < 1e-15);
        }
    }

    #[test]
    fn unitary_at_zero_is_identity() {
        let p = Propagator::new(&coupled(4)).unwrap();
        assert!(p.unitary(0.0).distance(&ComplexMatrix::identity(16)) < 1e-12);
    }

    #[test]
    fn eigenvector_only_picks_up_phase() {
        let p = Propagator::new(&coupled(4)).unwrap();
        let k = 5;
        let v = PureState::new(4, p.spectrum().eigenvector(k)).unwrap();
        let t = 2.7;
        let out = p.evolve(&v, t).unwrap();
        let ph = phase(p.spectrum().eigenvalues()[k], t);
        for (a, b) in out.amplitudes().iter().zip(v.amplitudes()) {
            assert!((a - b * ph).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_at_zero_returns_input() {
        let p = Propagator::new(&coupled(4)).unwrap();
        let psi = test_state(4);
        let out = p.evolve(&psi, 0.0).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_matches_individual_calls() {
        let p = Propagator::new(&coupled(4)).unwrap();
        let psi = test_state(4);
        let grid = p.evolve_grid(&psi, &[1.0, 2.0, 3.0]).unwrap();
        for (state, t) in grid.iter().zip([1.0, 2.0, 3.0]) {
            let single = p.evolve(&psi, t).unwrap();
            assert_eq!(state, &single);
        }
        let dup = p.evolve_grid(&psi, &[0.5, 0.5]).unwrap();
        assert_eq!(dup[0], dup[1]);
        let zero = p.evolve_grid(&psi, &[0.0]).unwrap();
        assert!(zero[0].inner(&psi).unwrap().re > 1.0 - 1e-12);
    }

    #[test]
    fn grid_errors() {
        let p = Propagator::new(&coupled(3)).unwrap();
        let psi = test_state(3);
        assert_eq!(p.evolve_grid(&psi, &[]), Err(Error::EmptyGrid));
        assert_eq!(p.evolve_grid(&psi, &[2.0, 1.0]), Err(Error::InvalidGrid));
        assert_eq!(p.evolve_grid(&psi, &[-1.0, 1.0]), Err(Error::InvalidGrid));
        assert!(matches!(p.evolve(&test_state(4), 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn energy_conserved() {
        let h = coupled(5);
        let p = Propagator::new(&h).unwrap();
        let psi = test_state(5);
        let e0 = psi.expectation(h.matrix()).unwrap().re;
        for t in [1.0, 10.0, 100.0] {
            let e = p.evolve(&psi, t).unwrap().expectation(h.matrix()).unwrap().re;
            assert!((e - e0).abs() < 1e-10 * h.matrix().frobenius_norm());
        }
    }
}
