//! Monte-Carlo estimate of the entangling power `E(U(t))` over Haar-random
//! product initial states, its time average, and the oscillation metric
//! `gamma = (max - min) / time average` on a late-time window.
//!
//! Randomness is reproducible: sample `s` draws from a ChaCha8 generator
//! seeded with `seed_from_u64(seed)` and switched to stream `s`. Each qubit
//! takes two complex amplitudes, each the pair `(r cos theta, r sin theta)` from
//! one Box-Muller step (`r = sqrt(-2 ln u1)`, `theta = 2 pi u2`, with
//! `u = (next_u64 >> 11) * 2^-53` and `u1 = 1 - u`), and is then normalized.
//! Qubit 0 is drawn first. All transcendental functions come from `libm`, so
//! trajectories are bit-identical across platforms and worker counts.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::entanglement::meyer_wallach;
use crate::evolution::{Propagator, check_grid};
use crate::hamiltonian::HermitianOperator;
use crate::linalg::PureState;
use crate::{C64, Error, Result};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 7;

/// Settings of one ensemble average.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    /// Number of Haar product states.
    pub num_samples: usize,
    /// Base seed; sample `s` uses stream `s` of this seed.
    pub seed: u64,
    /// Ascending evaluation times, starting at `t >= 0`.
    pub times: Vec<f64>,
    /// Start of the averaging window.
    pub tau: f64,
    /// Record `L * Q` instead of `Q`.
    pub use_extensive: bool,
    /// Keep every sample's curve in the trajectory.
    pub retain_samples: bool,
}

impl EnsembleConfig {
    /// 100 samples, `t = 0, 1, ..., 100`, `tau = 20`, extensive measure.
    pub fn reference() -> Self {
        Self {
            num_samples: 100,
            seed: DEFAULT_SEED,
            times: time_grid(100.0, 1.0).expect("static grid"),
            tau: 20.0,
            use_extensive: true,
            retain_samples: false,
        }
    }

    /// Last grid time.
    pub fn t_max(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Checks sample count, grid shape and `tau` in `[t_first, t_last)`.
    pub fn validate(&self) -> Result<()> {
        if self.num_samples == 0 {
            return Err(Error::InvalidParameter("num_samples must be at least 1"));
        }
        check_grid(&self.times)?;
        if !(self.tau >= self.times[0] && self.tau < self.t_max()) {
            return Err(Error::InvalidParameter("tau must lie in [t_first, t_max)"));
        }
        Ok(())
    }
}

/// `t_i = i * dt` for `i = 0 ..= round(t_max / dt)`.
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite() && t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter("time grid needs dt > 0 and t_max >= 0"));
    }
    let steps = libm::round(t_max / dt) as usize;
    Ok((0..=steps).map(|i| i as f64 * dt).collect())
}

/// Random stream of sample `index`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn unit_interval(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard complex Gaussian `x + i y`, `x, y ~ N(0, 1)`, via Box-Muller.
fn complex_gaussian(rng: &mut impl RngCore) -> C64 {
    let u1 = 1.0 - unit_interval(rng);
    let u2 = unit_interval(rng);
    let r = libm::sqrt(-2.0 * libm::log(u1));
    let theta = TAU * u2;
    C64::new(r * libm::cos(theta), r * libm::sin(theta))
}

/// Haar-random single-qubit state.
pub fn sample_haar_qubit(rng: &mut impl RngCore) -> [C64; 2] {
    loop {
        let a = complex_gaussian(rng);
        let b = complex_gaussian(rng);
        let norm = libm::sqrt(a.norm_sqr() + b.norm_sqr());
        if norm > 0.0 {
            return [a / norm, b / norm];
        }
    }
}

/// Tensor product of `sites` independent Haar-random qubits.
pub fn sample_haar_product_state(sites: usize, rng: &mut impl RngCore) -> Result<PureState> {
    if sites == 0 {
        return Err(Error::InvalidParameter("need at least one qubit"));
    }
    let qubits: Vec<[C64; 2]> = (0..sites).map(|_| sample_haar_qubit(rng)).collect();
    PureState::product(&qubits)
}

/// Entanglement curve of sample `index`: draw its initial state, evolve over
/// the grid and evaluate Meyer-Wallach at each time.
pub fn sample_curve(propagator: &Propagator, cfg: &EnsembleConfig, index: usize) -> Result<Vec<f64>> {
    let sites = propagator.num_qubits();
    let mut rng = sample_stream(cfg.seed, index as u64);
    let psi0 = sample_haar_product_state(sites, &mut rng)?;
    let coefficients = propagator.project(&psi0)?;
    cfg.times
        .iter()
        .map(|&t| {
            let q = meyer_wallach(&coefficients.at(t))?;
            Ok(if cfg.use_extensive { q.extensive_q } else { q.normalized_q })
        })
        .collect()
}

/// Ensemble statistics of the entanglement over time.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementTrajectory {
    times: Vec<f64>,
    mean: Vec<f64>,
    stderr: Vec<f64>,
    per_sample: Option<Vec<Vec<f64>>>,
}

impl EntanglementTrajectory {
    /// Reduces per-sample curves (one row per sample, in sample order).
    ///
    /// `stderr` is the sample standard deviation over `sqrt(n)`, zero for a
    /// single sample.
    pub fn from_samples(times: Vec<f64>, samples: Vec<Vec<f64>>, retain: bool) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no samples"));
        }
        if let Some(row) = samples.iter().find(|r| r.len() != times.len()) {
            return Err(Error::DimensionMismatch { expected: times.len(), found: row.len() });
        }
        let n = samples.len() as f64;
        let mut mean = vec![0.0; times.len()];
        for row in &samples {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let stderr = if samples.len() < 2 {
            vec![0.0; times.len()]
        } else {
            let mut var = vec![0.0; times.len()];
            for row in &samples {
                for ((v, x), m) in var.iter_mut().zip(row).zip(&mean) {
                    *v += (x - m) * (x - m);
                }
            }
            var.iter().map(|v| libm::sqrt(v / (n - 1.0)) / libm::sqrt(n)).collect()
        };
        Ok(Self { times, mean, stderr, per_sample: retain.then_some(samples) })
    }

    /// Trajectory with a given mean and no spread, for synthetic inputs.
    pub fn from_mean(times: Vec<f64>, mean: Vec<f64>) -> Result<Self> {
        if mean.len() != times.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: mean.len() });
        }
        let stderr = vec![0.0; mean.len()];
        Ok(Self { times, mean, stderr, per_sample: None })
    }

    /// Rebuilds a trajectory from stored columns.
    pub fn from_parts(
        times: Vec<f64>,
        mean: Vec<f64>,
        stderr: Vec<f64>,
        per_sample: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let n = times.len();
        if mean.len() != n || stderr.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: mean.len().min(stderr.len()) });
        }
        if let Some(row) = per_sample.iter().flatten().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        Ok(Self { times, mean, stderr, per_sample })
    }

    /// Evaluation times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Ensemble mean per time.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Standard error of the mean per time.
    pub fn stderr(&self) -> &[f64] {
        &self.stderr
    }

    /// Per-sample curves, when retained.
    pub fn per_sample(&self) -> Option<&[Vec<f64>]> {
        self.per_sample.as_deref()
    }

    /// Indices of grid points with `t >= tau`.
    fn window(&self, tau: f64) -> Result<core::ops::Range<usize>> {
        let start = self.times.iter().position(|&t| t >= tau - 1e-12 * tau.abs().max(1.0));
        match start {
            Some(s) if self.times.len() - s >= 2 && self.times[self.times.len() - 1] > self.times[s] => {
                Ok(s..self.times.len())
            }
            _ => Err(Error::WindowTooShort { tau, t_max: self.times.last().copied().unwrap_or(tau) }),
        }
    }
}

/// Serial ensemble average of `Q(U(t) psi_s)` over `cfg.num_samples` Haar
/// product states `psi_s`.
pub fn entangling_power_trajectory(h: &HermitianOperator, cfg: &EnsembleConfig) -> Result<EntanglementTrajectory> {
    cfg.validate()?;
    let propagator = Propagator::new(h)?;
    let samples = (0..cfg.num_samples)
        .map(|s| sample_curve(&propagator, cfg, s))
        .collect::<Result<Vec<_>>>()?;
    EntanglementTrajectory::from_samples(cfg.times.clone(), samples, cfg.retain_samples)
}

/// Trapezoidal time average of the ensemble mean over the grid points in
/// `[tau, t_max]`.
pub fn expected_entanglement(traj: &EntanglementTrajectory, tau: f64) -> Result<f64> {
    let window = traj.window(tau)?;
    let t = &traj.times[window.clone()];
    let y = &traj.mean[window];
    let area: f64 = t.windows(2).zip(y.windows(2)).map(|(tw, yw)| 0.5 * (tw[1] - tw[0]) * (yw[0] + yw[1])).sum();
    Ok(area / (t[t.len() - 1] - t[0]))
}

/// Oscillation metric of a trajectory on `[tau, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResult {
    /// `(window_max - window_min) / window_time_average`.
    pub gamma: f64,
    /// Largest ensemble mean on the window.
    pub window_max: f64,
    /// Smallest ensemble mean on the window.
    pub window_min: f64,
    /// Trapezoidal time average on the window.
    pub window_time_average: f64,
    /// Window start.
    pub tau: f64,
    /// Window end.
    pub t_max: f64,
}

/// `gamma = (max - min) / time average` of the ensemble mean on `[tau, t_max]`.
pub fn gamma_metric(traj: &EntanglementTrajectory, tau: f64) -> Result<GammaResult> {
    let window = traj.window(tau)?;
    let y = &traj.mean[window];
    let window_max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let window_min = y.iter().copied().fold(f64::INFINITY, f64::min);
    let window_time_average = expected_entanglement(traj, tau)?;
    if window_time_average.is_nan() || window_time_average <= 0.0 {
        return Err(Error::DegenerateTrajectory);
    }
    Ok(GammaResult {
        gamma: (window_max - window_min) / window_time_average,
        window_max,
        window_min,
        window_time_average,
        tau,
        t_max: traj.times[traj.times.len() - 1],
    })
}
