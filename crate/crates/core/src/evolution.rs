//! Evolution-operator parameters and the Heisenberg-picture phase-space map.
//!
//! The harmonic rotation that remains after the translation is fixed in
//! closed form: `Δ = mω` and `θ = ωt`. Together with `(λ, π, S)` from the
//! trajectory these determine the evolution operator completely. Its action
//! on position and momentum is the affine symplectic map
//!
//! ```text
//! [q_H]   [  cos θ     sin θ / Δ ] [q]   [λ]
//! [p_H] = [ −Δ sin θ   cos θ     ] [p] + [π]
//! ```

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::classical::{PhysicalParams, Trajectory};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub t: f64,
    pub theta: f64,
    pub delta: f64,
    pub lambda: f64,
    pub pi: f64,
    pub action: f64,
}

impl EvolutionParams {
    /// Parameters of the unforced oscillator (`λ = π = S = 0`) at time `t`.
    pub fn free(params: &PhysicalParams, t: f64) -> Self {
        EvolutionParams {
            t,
            theta: params.omega() * t,
            delta: params.shear_scale(),
            lambda: 0.0,
            pi: 0.0,
            action: 0.0,
        }
    }
}

/// Looks up `(λ, π, S)` on the trajectory at `t` and attaches `θ = ωt`, `Δ = mω`.
pub fn evolution_params(
    params: &PhysicalParams,
    traj: &Trajectory,
    t: f64,
) -> Result<EvolutionParams> {
    let point = traj.at(t)?;
    Ok(EvolutionParams {
        t,
        theta: params.omega() * t,
        delta: params.shear_scale(),
        lambda: point.lambda,
        pi: point.pi,
        action: point.action,
    })
}

/// Affine phase-space map `x ↦ M x + ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMap {
    pub matrix: [[f64; 2]; 2],
    pub shift: [f64; 2],
}

impl SymplecticMap {
    pub fn identity() -> Self {
        SymplecticMap {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
            shift: [0.0, 0.0],
        }
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, q: f64, p: f64) -> (f64, f64) {
        let m = &self.matrix;
        (
            m[0][0] * q + m[0][1] * p + self.shift[0],
            m[1][0] * q + m[1][1] * p + self.shift[1],
        )
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &SymplecticMap) -> SymplecticMap {
        let a = &self.matrix;
        let b = &inner.matrix;
        let mut matrix = [[0.0; 2]; 2];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let (sq, sp) = self.apply(inner.shift[0], inner.shift[1]);
        SymplecticMap {
            matrix,
            shift: [sq, sp],
        }
    }
}

pub fn symplectic_map(ep: &EvolutionParams) -> SymplecticMap {
    let (s, c) = ep.theta.sin_cos();
    SymplecticMap {
        matrix: [[c, s / ep.delta], [-ep.delta * s, c]],
        shift: [ep.lambda, ep.pi],
    }
}

pub fn heisenberg_point(map: &SymplecticMap, q: f64, p: f64) -> (f64, f64) {
    map.apply(q, p)
}

/// Means of a state whose initial means are `(q0_mean, p0_mean)`; for a
/// quadratic Hamiltonian they follow the same affine map as the operators.
pub fn ehrenfest_expectations(map: &SymplecticMap, q0_mean: f64, p0_mean: f64) -> (f64, f64) {
    map.apply(q0_mean, p0_mean)
}
