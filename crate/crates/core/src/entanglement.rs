//! Linear entropy across a bipartition, the Meyer-Wallach measure and the
//! Scott cluster generalization.

use alloc::vec::Vec;

use crate::linalg::{PureState, partial_trace, purity, single_site_purities};
use crate::{Error, Result};

/// Meyer-Wallach value of a state in both normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementValue {
    /// `Q = 2 (1 - mean_k tr rho_k^2)`, in `[0, 1]`.
    pub normalized_q: f64,
    /// `L * Q`, in `[0, L]`.
    pub extensive_q: f64,
}

/// Snap values within `1e-12` below zero to zero.
fn clamp_nonnegative(x: f64) -> f64 {
    if x < 0.0 && x > -1e-12 { 0.0 } else { x }
}

/// `S_L = eta (1 - tr rho_A^2)` with `eta = d / (d - 1)`, `d = min(d_A, d_B)`,
/// so maximally entangled states score 1.
pub fn linear_entropy(psi: &PureState, subsystem: &[usize]) -> Result<f64> {
    let l = psi.num_qubits();
    let rho = partial_trace(psi, subsystem)?;
    let size_a = rho.num_qubits();
    if size_a == l {
        return Err(Error::FullSubsystem);
    }
    let d = (1u64 << size_a.min(l - size_a)) as f64;
    let eta = d / (d - 1.0);
    Ok(clamp_nonnegative(eta * (1.0 - purity(&rho))))
}

/// Meyer-Wallach measure from the `L` single-site purities.
pub fn meyer_wallach(psi: &PureState) -> Result<EntanglementValue> {
    let l = psi.num_qubits();
    if l < 2 {
        return Err(Error::DegenerateChain { sites: l, what: "the Meyer-Wallach measure" });
    }
    let purities = single_site_purities(psi);
    let mean = purities.iter().sum::<f64>() / l as f64;
    let normalized_q = clamp_nonnegative(2.0 * (1.0 - mean));
    Ok(EntanglementValue { normalized_q, extensive_q: l as f64 * normalized_q })
}

/// Scott measure over all clusters of `m` sites:
/// `Q^m = 2^m / (2^m - 1) * (1 - mean_{|S| = m} tr rho_S^2)`, valid for
/// `1 <= m <= L/2`. `Q^1` is the Meyer-Wallach value.
pub fn scott_measure(psi: &PureState, m: usize) -> Result<f64> {
    let l = psi.num_qubits();
    if m == 0 || 2 * m > l {
        return Err(Error::ClusterSize { m, sites: l });
    }
    let mut total = 0.0;
    let mut count = 0usize;
    let mut cluster = Vec::with_capacity(m);
    for mask in 0usize..1 << l {
        if mask.count_ones() as usize != m {
            continue;
        }
        cluster.clear();
        cluster.extend((0..l).filter(|q| mask >> q & 1 == 1));
        total += purity(&partial_trace(psi, &cluster)?);
        count += 1;
    }
    let dm = (1u64 << m) as f64;
    Ok(clamp_nonnegative(dm / (dm - 1.0) * (1.0 - total / count as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn ghz(l: usize) -> PureState {
        let mut a = vec![C64::new(0.0, 0.0); 1 << l];
        a[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        a[(1 << l) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
        PureState::new(l, a).unwrap()
    }

    fn w3() -> PureState {
        let mut a = vec![C64::new(0.0, 0.0); 8];
        for k in 0..3 {
            a[1 << k] = C64::new(1.0 / libm::sqrt(3.0), 0.0);
        }
        PureState::new(3, a).unwrap()
    }

    #[test]
    fn product_state_has_zero_linear_entropy() {
        let s = PureState::basis(4, 0b0101).unwrap();
        assert_eq!(linear_entropy(&s, &[0, 1]).unwrap(), 0.0);
    }

    #[test]
    fn bell_is_maximal() {
        let s = ghz(2);
        assert!((linear_entropy(&s, &[0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w_state_single_site() {
        // rho_0 = diag(2/3, 1/3), purity 5/9.
        let got = linear_entropy(&w3(), &[0]).unwrap();
        assert!((got - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn linear_entropy_rejects_trivial_bipartitions() {
        let s = ghz(3);
        assert_eq!(linear_entropy(&s, &[]), Err(Error::EmptySubsystem));
        assert_eq!(linear_entropy(&s, &[0, 1, 2]), Err(Error::FullSubsystem));
    }

    #[test]
    fn meyer_wallach_reference_states() {
        let zero = meyer_wallach(&PureState::basis(5, 0).unwrap()).unwrap();
        assert_eq!(zero, EntanglementValue { normalized_q: 0.0, extensive_q: 0.0 });
        for l in 2..=8 {
            assert!((meyer_wallach(&ghz(l)).unwrap().normalized_q - 1.0).abs() < 1e-14);
        }
        let w = meyer_wallach(&w3()).unwrap();
        assert!((w.normalized_q - 8.0 / 9.0).abs() < 1e-14);
        assert!((w.extensive_q - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(w.extensive_q, 3.0 * w.normalized_q);
    }

    #[test]
    fn meyer_wallach_needs_two_qubits() {
        assert!(meyer_wallach(&PureState::basis(1, 0).unwrap()).is_err());
    }

    #[test]
    fn scott_two_site_ghz4() {
        assert!((scott_measure(&ghz(4), 2).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn scott_reduces_to_meyer_wallach() {
        let s = w3();
        let mw = meyer_wallach(&s).unwrap().normalized_q;
        assert!((scott_measure(&s, 1).unwrap() - mw).abs() < 1e-14);
    }

    #[test]
    fn scott_range_checked() {
        let s = ghz(4);
        assert_eq!(scott_measure(&s, 0), Err(Error::ClusterSize { m: 0, sites: 4 }));
        assert_eq!(scott_measure(&s, 3), Err(Error::ClusterSize { m: 3, sites: 4 }));
        assert_eq!(scott_measure(&PureState::basis(4, 3).unwrap(), 2).unwrap(), 0.0);
    }
}
