//! Closed-form propagator `G(q, q′; t, 0) = ⟨q|U†|q′⟩`.
//!
//! The evolution operator factors into a harmonic rotation followed by a
//! translation. Inserting position states between the two factors gives
//!
//! ```text
//! G(q, q′; t) = e^{−iS/ħ} e^{iπ(q−λ)/ħ} K(q − λ, q′; ωt, mω)
//! K(q″, q′; θ, Δ) = √(Δ / 2πiħ sin θ) · exp[ iΔ/(2ħ sin θ) · ((q′² + q″²) cos θ − 2q′q″) ]
//! ```
//!
//! `K` is the free-oscillator kernel. The `i` under the square root is
//! required for unitarity, and the cross term carries a single power of `ħ`.
//! The square root is taken on the principal branch, which is the correct
//! branch for `0 < θ < π`; past the first caustic the kernel picks up Maslov
//! phases, so longer evolutions are composed from sub-caustic segments
//! (see [`evolve_composed`]).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::classical::{integrate_trajectory, PhysicalParams};
use crate::error::{invalid, Error, Result};
use crate::evolution::{evolution_params, EvolutionParams};
use crate::force::ForceProfile;
use crate::grid::{Grid, WaveFunction};

/// Smallest admissible `|sin ωt|`.
pub const CAUSTIC_EPSILON: f64 = 1e-6;

/// The kernel's shortest local wavelength must span at least this many grid
/// spacings for trapezoidal quadrature to be trusted.
pub const MIN_POINTS_PER_WAVELENGTH: f64 = 4.0;

/// Initial-state amplitudes below this fraction of the peak are treated as
/// outside the packet's support (skipped in quadrature and ignored by the
/// resolution guard).
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

fn check_caustic(theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s.abs() < CAUSTIC_EPSILON {
        Err(Error::CausticSingular { theta })
    } else {
        Ok(s)
    }
}

/// Rejects angles outside the first caustic window `(0, π)`.
fn check_first_window(theta: f64) -> Result<f64> {
    let s = check_caustic(theta)?;
    if theta <= 0.0 {
        return Err(invalid("t", "kernel times must be > 0"));
    }
    if theta >= PI {
        return Err(Error::CausticCrossed { theta });
    }
    Ok(s)
}

fn prefactor(delta: f64, hbar: f64, sin_theta: f64) -> Complex64 {
    (Complex64::new(delta, 0.0) / Complex64::new(0.0, 2.0 * PI * hbar * sin_theta)).sqrt()
}

fn quadratic_phase(delta: f64, hbar: f64, sin_theta: f64, cos_theta: f64, q2: f64, q1: f64) -> f64 {
    delta / (2.0 * hbar * sin_theta) * ((q1 * q1 + q2 * q2) * cos_theta - 2.0 * q1 * q2)
}

/// Free-oscillator kernel `⟨q″|e^{−iH₀t/ħ}|q′⟩` at rotation angle `θ` and
/// shear scale `Δ`. Evaluated on the principal branch for any `θ` away from
/// a caustic; that branch is the physical one only for `0 < θ < π`.
pub fn ho_kernel(
    params: &PhysicalParams,
    q2: f64,
    q1: f64,
    theta: f64,
    delta: f64,
) -> Result<Complex64> {
    let s = check_caustic(theta)?;
    let c = theta.cos();
    let hbar = params.hbar();
    let phase = quadratic_phase(delta, hbar, s, c, q2, q1);
    Ok(prefactor(delta, hbar, s) * Complex64::from_polar(1.0, phase))
}

/// Forced-oscillator propagator `G(q, q′; t, 0)` for `0 < ωt < π`.
pub fn forced_kernel(
    params: &PhysicalParams,
    ep: &EvolutionParams,
    q: f64,
    q_prime: f64,
) -> Result<Complex64> {
    let s = check_first_window(ep.theta)?;
    let c = ep.theta.cos();
    let hbar = params.hbar();
    let u = q - ep.lambda;
    let phase =
        -ep.action / hbar + ep.pi * u / hbar + quadratic_phase(ep.delta, hbar, s, c, u, q_prime);
    Ok(prefactor(ep.delta, hbar, s) * Complex64::from_polar(1.0, phase))
}

/// A point `(q, q′, t)` at which to evaluate the propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub q: f64,
    pub q_prime: f64,
    pub t: f64,
}

impl KernelQuery {
    pub fn evaluate(&self, params: &PhysicalParams, traj: &crate::Trajectory) -> Result<Complex64> {
        if self.t.is_nan() || self.t <= 0.0 {
            return Err(invalid("t", "kernel times must be > 0"));
        }
        let ep = evolution_params(params, traj, self.t)?;
        forced_kernel(params, &ep, self.q, self.q_prime)
    }
}

/// Trapezoidal quadrature of `G(q, x; t)` against a fixed initial state:
/// `ψ(q) = Σ_j G(q, x_j; t) ψ0(x_j) Δx`.
///
/// The `q′`-dependent part of the kernel is folded into per-point weights
/// once, so each output point costs one complex exponential per support
/// point. Output points are independent of each other.
#[derive(Debug, Clone)]
pub struct KernelPropagator {
    grid: Grid,
    t_out: f64,
    hbar: f64,
    ep: EvolutionParams,
    prefactor: Complex64,
    // Δ / 2ħ sin θ
    kappa: f64,
    cos_theta: f64,
    support: Vec<(f64, Complex64)>,
}

impl KernelPropagator {
    pub fn new(params: &PhysicalParams, ep: &EvolutionParams, psi0: &WaveFunction) -> Result<Self> {
        let s = check_first_window(ep.theta)?;
        let c = ep.theta.cos();
        let hbar = params.hbar();
        let grid = *psi0.grid();
        let dx = grid.spacing();
        let kappa = ep.delta / (2.0 * hbar * s);

        let peak = psi0
            .amplitudes()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let cutoff = peak * SUPPORT_THRESHOLD;
        let support: Vec<(f64, Complex64)> = grid
            .points()
            .zip(psi0.amplitudes())
            .filter(|(_, z)| z.norm() > cutoff)
            .map(|(x, &z)| (x, z * Complex64::from_polar(dx, kappa * c * x * x)))
            .collect();
        if support.is_empty() {
            return Err(invalid("psi0", "initial state is identically zero"));
        }

        // Local wavenumber of the kernel in x is 2κ(x cos θ − u), u = q − λ.
        let x_lo = support[0].0;
        let x_hi = support[support.len() - 1].0;
        let u_lo = grid.x_min() - ep.lambda;
        let u_hi = grid.point(grid.len() - 1) - ep.lambda;
        let span = [(u_lo, x_lo), (u_lo, x_hi), (u_hi, x_lo), (u_hi, x_hi)]
            .iter()
            .map(|&(u, x)| (x * c - u).abs())
            .fold(0.0, f64::max);
        if span > 0.0 {
            let wavelength = PI / (kappa * span);
            if wavelength < MIN_POINTS_PER_WAVELENGTH * dx {
                return Err(Error::GridTooCoarse {
                    wavelength,
                    spacing: dx,
                });
            }
        }

        Ok(KernelPropagator {
            grid,
            t_out: psi0.t() + ep.t,
            hbar,
            ep: *ep,
            prefactor: prefactor(ep.delta, hbar, s),
            kappa,
            cos_theta: c,
            support,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Time stamp of the propagated state.
    pub fn output_time(&self) -> f64 {
        self.t_out
    }

    pub fn amplitude_at(&self, q: f64) -> Complex64 {
        let u = q - self.ep.lambda;
        let k = 2.0 * self.kappa * u;
        let sum: Complex64 = self
            .support
            .iter()
            .map(|&(x, w)| w * Complex64::from_polar(1.0, -k * x))
            .sum();
        let outer = -self.ep.action / self.hbar
            + self.ep.pi * u / self.hbar
            + self.kappa * self.cos_theta * u * u;
        self.prefactor * Complex64::from_polar(1.0, outer) * sum
    }

    /// Assembles a wave function from amplitudes computed at every grid point
    /// (in grid order) and applies the boundary guard.
    pub fn finish(&self, amplitudes: Vec<Complex64>) -> Result<WaveFunction> {
        let psi = WaveFunction::new(self.grid, amplitudes, self.t_out)?;
        psi.check_boundary()?;
        Ok(psi)
    }

    pub fn propagate(&self) -> Result<WaveFunction> {
        let amplitudes = self.grid.points().map(|q| self.amplitude_at(q)).collect();
        self.finish(amplitudes)
    }
}

/// Evolves `psi0` by the propagator with parameters `ep`; the result lives on
/// the same grid.
pub fn evolve_by_kernel(
    params: &PhysicalParams,
    ep: &EvolutionParams,
    psi0: &WaveFunction,
) -> Result<WaveFunction> {
    psi0.check_normalized()?;
    psi0.check_boundary()?;
    KernelPropagator::new(params, ep, psi0)?.propagate()
}

/// Evolves `psi0` through consecutive segments of the given durations. Each
/// segment integrates its own trajectory from rest for the force re-based at
/// the segment's start time, so every kernel stays inside its first caustic
/// window.
pub fn evolve_composed(
    params: &PhysicalParams,
    profile: &ForceProfile,
    psi0: &WaveFunction,
    durations: &[f64],
    h: f64,
) -> Result<WaveFunction> {
    let mut psi = psi0.clone();
    for &duration in durations {
        let segment_profile = profile.shifted(psi.t());
        let traj = integrate_trajectory(params, &segment_profile, duration, h.min(duration))?;
        let ep = evolution_params(params, &traj, duration)?;
        psi = evolve_by_kernel(params, &ep, &psi)?;
    }
    Ok(psi)
}

/// Equal segment lengths covering `duration`, each spanning at most `0.8π`
/// of oscillator phase.
pub fn sub_caustic_segments(params: &PhysicalParams, duration: f64) -> Vec<f64> {
    let total = params.omega() * duration;
    let count = ((total / (0.8 * PI)).ceil() as usize).max(1);
    alloc::vec![duration / count as f64; count]
}
