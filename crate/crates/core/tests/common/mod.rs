#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use xxz_core::{C64, ComplexMatrix, PureState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn gaussian(rng: &mut impl RngCore) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Random (generally entangled) state.
pub fn random_state(sites: usize, rng: &mut impl RngCore) -> PureState {
    let amps = (0..1 << sites).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect();
    PureState::normalized(sites, amps).unwrap()
}

pub fn random_hermitian(dim: usize, rng: &mut impl RngCore) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(gaussian(rng), 0.0);
        for j in i + 1..dim {
            let z = C64::new(gaussian(rng), gaussian(rng));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random single-qubit unitary from a normalized quaternion.
pub fn random_su2(rng: &mut impl RngCore) -> [[C64; 2]; 2] {
    let q: Vec<f64> = (0..4).map(|_| gaussian(rng)).collect();
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0] / n, q[1] / n);
    let b = C64::new(q[2] / n, q[3] / n);
    [[a, -b.conj()], [b, a.conj()]]
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
