//! Brute-force reference solver on a uniform periodic grid.
//!
//! Wave functions are sampled at `x_j = x_min + j Δx`, `j = 0..N`, with
//! `Δx = (x_max − x_min)/N` and `N` a power of two. The Strang split-step
//! scheme in [`SplitStepper`] is exactly unitary up to rounding and spectrally
//! accurate in space; it knows nothing about the closed-form solution and
//! serves as the reference for it.

mod fft;
mod split_step;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::classical::PhysicalParams;
use crate::error::{invalid, Error, Result};

pub use fft::Fft;
pub use split_step::{evolve, step, SplitStepper};

/// Relative amplitude allowed at the two outermost grid points.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Allowed `|‖ψ‖² − 1|` for operations that require a normalized state.
pub const NORM_TOLERANCE: f64 = 1e-5;

/// Largest imaginary part tolerated in the expectation of a Hermitian operator.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(invalid("grid.x_min/x_max", "need finite x_min < x_max"));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(invalid("grid.n", "must be a power of two >= 16"));
        }
        Ok(Grid { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn spacing(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }

    /// Angular wavenumber of FFT bin `j` (standard ordering, Nyquist negative).
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as isize;
        let j = j as isize;
        let signed = if j < n / 2 { j } else { j - n };
        2.0 * PI * signed as f64 / self.length()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    t: f64,
}

impl WaveFunction {
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>, t: f64) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(invalid("amplitudes", "length must equal the grid size"));
        }
        if amplitudes
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(invalid("amplitudes", "must be finite"));
        }
        Ok(WaveFunction {
            grid,
            amplitudes,
            t,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    /// `Σ |ψ_j|² Δx`
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let scale = 1.0 / self.norm();
        for z in &mut self.amplitudes {
            *z *= scale;
        }
        self
    }

    /// Largest `|ψ|` at the two outermost points relative to `max |ψ|`.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.amplitudes[0].norm();
        let last = self.amplitudes[self.amplitudes.len() - 1].norm();
        first.max(last) / peak
    }

    pub fn check_boundary(&self) -> Result<()> {
        let edge_ratio = self.edge_ratio();
        if edge_ratio < BOUNDARY_TOLERANCE {
            Ok(())
        } else {
            Err(Error::PacketTouchesBoundary { edge_ratio })
        }
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm_squared = self.norm_squared();
        if (norm_squared - 1.0).abs() <= NORM_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm_squared })
        }
    }

    /// Probability densities `|ψ_j|²`.
    pub fn density(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|z| z.norm_sqr())
    }
}

/// Normalized `ψ(x) ∝ exp(−(x − q0)²/4σ² + i p0 x / ħ)`.
///
/// With `σ = √(ħ/2mω)` this is a coherent state of the oscillator.
pub fn make_gaussian(grid: &Grid, q0: f64, p0: f64, sigma: f64, hbar: f64) -> Result<WaveFunction> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid("packet.sigma", "must be finite and > 0"));
    }
    if !(q0.is_finite() && p0.is_finite() && hbar.is_finite() && hbar > 0.0) {
        return Err(invalid(
            "packet",
            "q0, p0 and hbar must be finite, hbar > 0",
        ));
    }
    let last = grid.point(grid.len() - 1);
    let margin = (q0 - grid.x_min()).min(last - q0);
    if margin < 6.0 * sigma {
        let edge_ratio = (-(margin * margin) / (4.0 * sigma * sigma)).exp();
        return Err(Error::PacketTouchesBoundary { edge_ratio });
    }
    let amplitudes = grid
        .points()
        .map(|x| {
            let d = x - q0;
            Complex64::new(-(d * d) / (4.0 * sigma * sigma), p0 * x / hbar).exp()
        })
        .collect();
    Ok(WaveFunction::new(*grid, amplitudes, 0.0)?.normalized())
}

/// `⟨ψ1|ψ2⟩ = Σ ψ1_j* ψ2_j Δx`
pub fn overlap(psi1: &WaveFunction, psi2: &WaveFunction) -> Result<Complex64> {
    if psi1.grid != psi2.grid {
        return Err(Error::GridMismatch);
    }
    let sum: Complex64 = psi1
        .amplitudes
        .iter()
        .zip(&psi2.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(sum * psi1.grid.spacing())
}

pub fn expectation_q(psi: &WaveFunction) -> Result<f64> {
    psi.check_normalized()?;
    let dx = psi.grid.spacing();
    Ok(psi
        .grid
        .points()
        .zip(psi.density())
        .map(|(x, rho)| x * rho)
        .sum::<f64>()
        * dx)
}

/// `Σ ψ_j* (−iħ ∂ψ)_j Δx` with a spectral derivative.
pub fn expectation_p(psi: &WaveFunction, hbar: f64) -> Result<f64> {
    psi.check_normalized()?;
    let grid = psi.grid;
    let fft = Fft::new(grid.len());
    let mut p_psi = psi.amplitudes.clone();
    fft.forward(&mut p_psi);
    for (j, z) in p_psi.iter_mut().enumerate() {
        *z *= hbar * grid.wavenumber(j);
    }
    fft.inverse(&mut p_psi);
    let value: Complex64 = psi
        .amplitudes
        .iter()
        .zip(&p_psi)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        * grid.spacing();
    real_part(value)
}

/// `⟨p²/2m + ½mω²x² − f x⟩` for the force value `f` at the state's time.
pub fn expectation_energy(psi: &WaveFunction, params: &PhysicalParams, f: f64) -> Result<f64> {
    psi.check_normalized()?;
    let grid = psi.grid;
    let n = grid.len();
    let fft = Fft::new(n);
    let mut spectrum = psi.amplitudes.clone();
    fft.forward(&mut spectrum);
    let hbar = params.hbar();
    let m = params.mass();
    let w = params.omega();
    // Parseval: Σ_j |ψ_j|² = (1/N) Σ_k |ψ̂_k|².
    let kinetic = spectrum
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let k = grid.wavenumber(j);
            hbar * hbar * k * k / (2.0 * m) * z.norm_sqr()
        })
        .sum::<f64>()
        * grid.spacing()
        / n as f64;
    let potential = grid
        .points()
        .zip(psi.density())
        .map(|(x, rho)| (0.5 * m * w * w * x * x - f * x) * rho)
        .sum::<f64>()
        * grid.spacing();
    Ok(kinetic + potential)
}

fn real_part(value: Complex64) -> Result<f64> {
    if value.im.abs() > IMAGINARY_RESIDUE_TOLERANCE {
        Err(Error::ComplexExpectation {
            imaginary: value.im,
        })
    } else {
        Ok(value.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(-20.0, 20.0, 2048).unwrap()
    }

    #[test]
    fn grid_invariants() {
        assert!(Grid::new(1.0, 1.0, 64).is_err());
        assert!(Grid::new(0.0, 1.0, 8).is_err());
        assert!(Grid::new(0.0, 1.0, 100).is_err());
        let g = Grid::new(-1.0, 1.0, 16).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.point(15), 0.875);
        assert_eq!(g.wavenumber(8), -8.0 * PI);
        assert_eq!(g.wavenumber(1), PI);
    }

    #[test]
    fn centered_real_gaussian() {
        let psi = make_gaussian(&grid(), 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
        assert!(expectation_q(&psi).unwrap().abs() < 1e-12);
        assert!(expectation_p(&psi, 1.0).unwrap().abs() < 1e-12);
        assert!(psi.amplitudes().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn moving_gaussian_means() {
        // Oracle: the discrete sums Σ x|ψ|²Δx and Σ ψ*(−i∂ψ)Δx are the
        // defining integrals, exact for a band-limited Gaussian.
        let psi = make_gaussian(&grid(), 1.0, 2.0, 1.0 / 2f64.sqrt(), 1.0).unwrap();
        assert!((expectation_q(&psi).unwrap() - 1.0).abs() < 1e-10);
        assert!((expectation_p(&psi, 1.0).unwrap() - 2.0).abs() < 1e-10);

        let fast = make_gaussian(&grid(), -2.0, 5.0, 1.0, 1.0).unwrap();
        assert!((expectation_p(&fast, 1.0).unwrap() - 5.0).abs() < 1e-10);

        let scaled_hbar = make_gaussian(&grid(), 0.0, 3.0, 1.0, 0.5).unwrap();
        assert!((expectation_p(&scaled_hbar, 0.5).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_too_close_to_the_edge() {
        assert!(matches!(
            make_gaussian(&grid(), 17.0, 0.0, 1.0, 1.0),
            Err(Error::PacketTouchesBoundary { .. })
        ));
        assert!(make_gaussian(&grid(), 0.0, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn overlaps() {
        let even = make_gaussian(&grid(), 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((overlap(&even, &even).unwrap() - 1.0).norm() < 1e-12);

        // x·gaussian is odd about the origin; the grid is symmetric
        // about 0 apart from the single point at x_min.
        let odd: Vec<Complex64> = grid()
            .points()
            .zip(even.amplitudes())
            .map(|(x, z)| z * x)
            .collect();
        let odd = WaveFunction::new(grid(), odd, 0.0).unwrap().normalized();
        assert!(overlap(&even, &odd).unwrap().norm() < 1e-12);

        let other =
            make_gaussian(&Grid::new(-10.0, 10.0, 2048).unwrap(), 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(overlap(&even, &other), Err(Error::GridMismatch));
    }

    #[test]
    fn unnormalized_states_are_rejected() {
        let psi = make_gaussian(&grid(), 0.0, 0.0, 1.0, 1.0).unwrap();
        let doubled: Vec<Complex64> = psi.amplitudes().iter().map(|z| z * 2.0).collect();
        let doubled = WaveFunction::new(grid(), doubled, 0.0).unwrap();
        assert!(matches!(
            expectation_q(&doubled),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            expectation_p(&doubled, 1.0),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn ground_state_energy() {
        let params = PhysicalParams::natural();
        let psi = make_gaussian(&grid(), 0.0, 0.0, 0.5f64.sqrt(), 1.0).unwrap();
        assert!((expectation_energy(&psi, &params, 0.0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn boundary_guard() {
        let psi = make_gaussian(&grid(), 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(psi.check_boundary().is_ok());
        let near = make_gaussian(&grid(), 13.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            near.check_boundary(),
            Err(Error::PacketTouchesBoundary { .. })
        ));
    }
}
