use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{Fft, Grid, WaveFunction};
use crate::classical::PhysicalParams;
use crate::error::{invalid, Error, Result};
use crate::force::ForceProfile;

/// Strang splitting `e^{−iV dt/2ħ} e^{−iT dt/ħ} e^{−iV dt/2ħ}` with
/// `V = ½mω²x² − f(t + dt/2) x`.
///
/// Sampling the force at the midpoint of the step keeps the scheme second
/// order for time-dependent forces. No stability condition applies to the
/// spectral scheme; accuracy wants `dt ≲ ½ m Δx²/ħ` for the fastest modes
/// that carry weight.
#[derive(Debug, Clone)]
pub struct SplitStepper {
    params: PhysicalParams,
    grid: Grid,
    dt: f64,
    fft: Fft,
    kinetic_phase: Vec<Complex64>,
    harmonic: Vec<f64>,
}

impl SplitStepper {
    pub fn new(params: &PhysicalParams, grid: &Grid, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("schedule.dt", "must be finite and > 0"));
        }
        let hbar = params.hbar();
        let m = params.mass();
        let kinetic_phase = (0..grid.len())
            .map(|j| {
                let k = grid.wavenumber(j);
                Complex64::from_polar(1.0, -hbar * k * k * dt / (2.0 * m))
            })
            .collect();
        let mw2 = m * params.omega() * params.omega();
        let harmonic = grid.points().map(|x| 0.5 * mw2 * x * x).collect();
        Ok(SplitStepper {
            params: *params,
            grid: *grid,
            dt,
            fft: Fft::new(grid.len()),
            kinetic_phase,
            harmonic,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `psi` from `psi.t()` by one step of `dt`.
    pub fn advance(&self, profile: &ForceProfile, psi: &mut WaveFunction) -> Result<()> {
        if *psi.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let t_mid = psi.t() + 0.5 * self.dt;
        let f = profile
            .eval(t_mid)
            .map_err(|source| Error::Force { t: t_mid, source })?;
        let scale = -0.5 * self.dt / self.params.hbar();
        let half_potential: Vec<Complex64> = self
            .grid
            .points()
            .zip(&self.harmonic)
            .map(|(x, v0)| Complex64::from_polar(1.0, scale * (v0 - f * x)))
            .collect();

        let data = psi.amplitudes_mut();
        for (z, phase) in data.iter_mut().zip(&half_potential) {
            *z *= phase;
        }
        self.fft.forward(data);
        for (z, phase) in data.iter_mut().zip(&self.kinetic_phase) {
            *z *= phase;
        }
        self.fft.inverse(data);
        for (z, phase) in data.iter_mut().zip(&half_potential) {
            *z *= phase;
        }
        psi.set_time(psi.t() + self.dt);
        Ok(())
    }
}

/// A single split-step of size `dt`.
pub fn step(
    params: &PhysicalParams,
    profile: &ForceProfile,
    psi: &WaveFunction,
    dt: f64,
) -> Result<WaveFunction> {
    let stepper = SplitStepper::new(params, psi.grid(), dt)?;
    let mut next = psi.clone();
    stepper.advance(profile, &mut next)?;
    Ok(next)
}

/// Evolves `psi0` to `psi0.t() + duration` in steps of `dt`, shortening the
/// last one to land on the end time. `observe` sees the state after every
/// step together with the step count.
///
/// The packet must stay clear of the periodic boundary at the start and at
/// the end of the run.
pub fn evolve<F>(
    params: &PhysicalParams,
    profile: &ForceProfile,
    psi0: &WaveFunction,
    duration: f64,
    dt: f64,
    mut observe: F,
) -> Result<WaveFunction>
where
    F: FnMut(usize, &WaveFunction) -> Result<()>,
{
    if !(duration.is_finite() && duration > 0.0) {
        return Err(invalid("schedule.t_end", "must be finite and > 0"));
    }
    psi0.check_boundary()?;
    let stepper = SplitStepper::new(params, psi0.grid(), dt)?;
    let t0 = psi0.t();
    let full_steps = (duration / dt).floor() as usize;
    let remainder = duration - full_steps as f64 * dt;
    let mut psi = psi0.clone();
    for k in 1..=full_steps {
        stepper.advance(profile, &mut psi)?;
        psi.set_time(t0 + k as f64 * dt);
        observe(k, &psi)?;
    }
    if remainder > 1e-9 * dt {
        let last = SplitStepper::new(params, psi0.grid(), remainder)?;
        last.advance(profile, &mut psi)?;
        psi.set_time(t0 + duration);
        observe(full_steps + 1, &psi)?;
    }
    psi.set_time(t0 + duration);
    psi.check_boundary()?;
    Ok(psi)
}
