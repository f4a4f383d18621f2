mod common;

use common::{random_hermitian, random_state, rng};
use proptest::prelude::*;
use xxz_core::linalg::{eigh, partial_trace, purity};
use xxz_core::{C64, ChainParams, ComplexMatrix, HamiltonianVariant, PureState, build_spin};

/// rho[r, s] = sum over traced bits e of psi[r, e] conj(psi[s, e]), with the
/// full index assembled bit by bit from the kept and traced assignments.
fn partial_trace_oracle(psi: &PureState, keep: &[usize]) -> ComplexMatrix {
    let l = psi.num_qubits();
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..l).filter(|q| !kept.contains(q)).collect();
    let dk = 1 << kept.len();
    let mut rho = ComplexMatrix::zeros(dk, dk);
    for r in 0..dk {
        for s in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for e in 0..1usize << traced.len() {
                let mut ir = 0usize;
                let mut is = 0usize;
                for (b, &q) in kept.iter().enumerate() {
                    ir += ((r >> b) & 1) << q;
                    is += ((s >> b) & 1) << q;
                }
                for (b, &q) in traced.iter().enumerate() {
                    ir += ((e >> b) & 1) << q;
                    is += ((e >> b) & 1) << q;
                }
                acc += psi.amplitudes()[ir] * psi.amplitudes()[is].conj();
            }
            rho[(r, s)] = acc;
        }
    }
    rho
}

#[test]
fn partial_trace_matches_index_summation_oracle() {
    let psi = random_state(4, &mut rng(42));
    let fast = partial_trace(&psi, &[1, 3]).unwrap();
    let slow = partial_trace_oracle(&psi, &[1, 3]);
    let worst = fast.matrix().as_slice().iter().zip(slow.as_slice()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn eigh_trace_invariance_on_coupled_chain() {
    let h = build_spin(&ChainParams::new(4, 1.0, 1.5, 1.0).unwrap(), HamiltonianVariant::Coupled).unwrap();
    let dec = eigh(h.matrix()).unwrap();
    let sum: f64 = dec.eigenvalues().iter().sum();
    assert!((sum - h.matrix().trace().re).abs() < 1e-10);
}

#[test]
fn eigh_reconstructs_dim_256() {
    let h = build_spin(&ChainParams::reference(), HamiltonianVariant::Coupled).unwrap();
    let dec = eigh(h.matrix()).unwrap();
    let rel = dec.reconstruct().distance(h.matrix()) / h.matrix().frobenius_norm();
    assert!(rel < 1e-10, "reconstruction {rel}");
    let v = dec.eigenvectors();
    let gram = v.adjoint().matmul(v).unwrap();
    assert!(gram.distance(&ComplexMatrix::identity(256)) < 1e-10);

    let random = random_hermitian(256, &mut rng(5));
    let dec = eigh(&random).unwrap();
    let rel = dec.reconstruct().distance(&random) / random.frobenius_norm();
    assert!(rel < 1e-10, "random reconstruction {rel}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_has_unit_trace_and_matches_oracle(seed in any::<u64>(), sites in 2usize..=5, mask in 1u32..31) {
        let psi = random_state(sites, &mut rng(seed));
        let keep: Vec<usize> = (0..sites).filter(|q| mask >> q & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let rho = partial_trace(&psi, &keep).unwrap();
        prop_assert!((rho.matrix().trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        let slow = partial_trace_oracle(&psi, &keep);
        prop_assert!(rho.matrix().distance(&slow) < 1e-12);
        // Traced-out order must not matter.
        let mut reversed = keep.clone();
        reversed.reverse();
        prop_assert_eq!(&partial_trace(&psi, &reversed).unwrap(), &rho);
    }

    #[test]
    fn purity_complementarity(seed in any::<u64>(), sites in 2usize..=6, mask in 1u32..63) {
        let full = (1u32 << sites) - 1;
        let mask = mask & full;
        prop_assume!(mask != 0 && mask != full);
        let psi = random_state(sites, &mut rng(seed));
        let a: Vec<usize> = (0..sites).filter(|q| mask >> q & 1 == 1).collect();
        let b: Vec<usize> = (0..sites).filter(|q| mask >> q & 1 == 0).collect();
        let pa = purity(&partial_trace(&psi, &a).unwrap());
        let pb = purity(&partial_trace(&psi, &b).unwrap());
        prop_assert!((pa - pb).abs() < 1e-10);
        prop_assert!(pa >= 1.0 / (1u64 << a.len()) as f64 - 1e-12 && pa <= 1.0 + 1e-12);
    }

    #[test]
    fn eigh_contract_on_random_hermitian(seed in any::<u64>(), dim in 1usize..40) {
        let h = random_hermitian(dim, &mut rng(seed));
        let dec = eigh(&h).unwrap();
        let rel = dec.reconstruct().distance(&h) / h.frobenius_norm().max(1.0);
        prop_assert!(rel < 1e-10);
        prop_assert!(dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let v = dec.eigenvectors();
        prop_assert!(v.adjoint().matmul(v).unwrap().distance(&ComplexMatrix::identity(dim)) < 1e-10);
        // Norm preservation under the eigenvector unitary.
        let sites = dim.next_power_of_two().trailing_zeros() as usize;
        if dim.is_power_of_two() && sites >= 1 {
            let psi = random_state(sites, &mut rng(seed ^ 1));
            let out = v.apply(psi.amplitudes()).unwrap();
            let n: f64 = out.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
