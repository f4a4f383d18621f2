//! Parallel ensemble averaging on top of the serial core.

use rayon::prelude::*;
use xxz_core::ensemble::sample_curve;
use xxz_core::hamiltonian::build_spin;
use xxz_core::{ChainParams, EnsembleConfig, EntanglementTrajectory, HermitianOperator, Propagator};

use crate::config::VariantSpec;
use crate::error::{Result, RunError};

/// Produces the ensemble trajectory of one Hamiltonian variant.
pub trait TrajectorySource: Sync {
    fn trajectory(
        &self,
        chain: &ChainParams,
        variant: &VariantSpec,
        ensemble: &EnsembleConfig,
    ) -> Result<EntanglementTrajectory>;
}

/// Exact simulation with samples spread over a fixed-size thread pool.
///
/// Every sample draws from its own random stream and the per-sample curves are
/// collected in sample order before reduction, so the result does not depend
/// on the worker count.
#[derive(Debug, Clone, Copy)]
pub struct Simulator {
    pub workers: usize,
}

impl Simulator {
    pub fn new(workers: usize) -> Self {
        Self { workers: workers.max(1) }
    }

    /// Ensemble trajectory for an explicit Hamiltonian.
    pub fn run_operator(&self, h: &HermitianOperator, ensemble: &EnsembleConfig) -> Result<EntanglementTrajectory> {
        ensemble.validate()?;
        let propagator = Propagator::new(h)?;
        let curve = |s: usize| sample_curve(&propagator, ensemble, s);
        let samples = if self.workers == 1 {
            (0..ensemble.num_samples).map(curve).collect::<xxz_core::Result<Vec<_>>>()?
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers)
                .build()
                .map_err(|e| RunError::Config(format!("cannot start worker pool: {e}")))?;
            pool.install(|| (0..ensemble.num_samples).into_par_iter().map(curve).collect::<xxz_core::Result<Vec<_>>>())?
        };
        Ok(EntanglementTrajectory::from_samples(ensemble.times.clone(), samples, ensemble.retain_samples)?)
    }
}

impl TrajectorySource for Simulator {
    fn trajectory(
        &self,
        chain: &ChainParams,
        variant: &VariantSpec,
        ensemble: &EnsembleConfig,
    ) -> Result<EntanglementTrajectory> {
        let params = chain.with_lambda(variant.lambda);
        params.validate()?;
        let h = build_spin(&params, variant.variant)?;
        self.run_operator(&h, ensemble)
    }
}
