//! Quantum forced harmonic oscillator
//!
//! The Hamiltonian `H = p²/2m + ½mω²q² − f(t)q` is reduced by a translation
//! in phase space followed by a harmonic rotation. All time dependence of the
//! evolution operator is then carried by classical parameters: a position
//! shift `λ(t)`, a momentum shift `π(t)`, an accumulated action `S(t)`, and
//! the rotation angle `θ = ωt` at shear scale `Δ = mω`.
//!
//! This crate computes those parameters ([`classical`]), the Heisenberg-picture
//! phase-space map they induce ([`evolution`]), the closed-form propagator
//! ([`kernel`]), and an independent split-step spectral solver of the
//! Schrödinger equation that every closed form is checked against ([`grid`]).
//! Driving forces, including parsed expressions in `t`, live in [`force`].
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classical;
pub mod error;
pub mod evolution;
pub mod force;
pub mod grid;
pub mod kernel;

pub use classical::{
    closed_form_constant_force, integrate_trajectory, lagrangian, trajectory_rhs, PhysicalParams,
    Trajectory, TrajectoryPoint,
};
pub use error::{Error, Result};
pub use evolution::{
    ehrenfest_expectations, evolution_params, heisenberg_point, symplectic_map, EvolutionParams,
    SymplecticMap,
};
pub use force::{parse_force_expression, ExpressionNode, ForceError, ForceProfile, ParseError};
pub use grid::{make_gaussian, overlap, Grid, SplitStepper, WaveFunction};
pub use kernel::{evolve_by_kernel, forced_kernel, ho_kernel, KernelPropagator};

pub use num_complex::Complex64;
