//! Kernel evolution spread over a thread pool.
//!
//! Output grid points are independent and each one is summed in a fixed
//! order, so the result is bit-identical to the serial propagation whatever
//! the thread count.

use std::env;

use qfho_core::{EvolutionParams, KernelPropagator, PhysicalParams, WaveFunction};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const NUM_THREADS_VAR: &str = "QFHO_NUM_THREADS";

/// A pool sized by `QFHO_NUM_THREADS`, or by the number of CPUs when unset.
pub fn thread_pool() -> Result<ThreadPool> {
    let threads = match env::var(NUM_THREADS_VAR) {
        Ok(value) => match value.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(Error::Usage(format!(
                    "{NUM_THREADS_VAR} must be a positive integer, got {value:?}"
                )))
            }
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))
}

/// Parallel counterpart of [`qfho_core::evolve_by_kernel`].
pub fn evolve_by_kernel(
    pool: &ThreadPool,
    params: &PhysicalParams,
    ep: &EvolutionParams,
    psi0: &WaveFunction,
) -> qfho_core::Result<WaveFunction> {
    psi0.check_normalized()?;
    psi0.check_boundary()?;
    let propagator = KernelPropagator::new(params, ep, psi0)?;
    let points: Vec<f64> = propagator.grid().points().collect();
    let amplitudes = pool.install(|| {
        points
            .par_iter()
            .map(|&q| propagator.amplitude_at(q))
            .collect()
    });
    propagator.finish(amplitudes)
}
