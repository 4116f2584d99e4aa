//! Classical transformation parameters.
//!
//! The translation that removes the `f q̂` term leaves behind three
//! conditions on its parameters:
//!
//! ```text
//! dλ/dt = π / m
//! dπ/dt = f(t) − mω²λ
//! dS/dt = 𝓛(λ, π, dλ/dt, f)
//! 𝓛     = π²/2m + ½mω²λ² − fλ − π·dλ/dt
//! ```
//!
//! with `λ = π = S = 0` at `t = 0` so that the evolution operator starts at
//! the identity. On shell (`π = m dλ/dt`) this 𝓛 is the negative of the
//! conventional Lagrangian `½m λ̇² − ½mω²λ² + fλ`, which is why the
//! propagator carries `exp(−iS/ħ)`.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::force::ForceProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mass: f64,
    omega: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        let check = |v: f64, field| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(field, "must be finite and > 0"))
            }
        };
        check(mass, "physical.mass")?;
        check(omega, "physical.omega")?;
        check(hbar, "physical.hbar")?;
        Ok(PhysicalParams { mass, omega, hbar })
    }

    /// `m = ω = ħ = 1`.
    pub fn natural() -> Self {
        PhysicalParams {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Shear scale `Δ = mω`.
    pub fn shear_scale(&self) -> f64 {
        self.mass * self.omega
    }
}

/// State of the parameter ODE; also used for its time derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParameterState {
    pub lambda: f64,
    pub pi: f64,
    pub action: f64,
}

impl ParameterState {
    fn axpy(self, h: f64, d: ParameterState) -> Self {
        ParameterState {
            lambda: self.lambda + h * d.lambda,
            pi: self.pi + h * d.pi,
            action: self.action + h * d.action,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub lambda: f64,
    pub pi: f64,
    pub action: f64,
}

impl TrajectoryPoint {
    pub fn state(&self) -> ParameterState {
        ParameterState {
            lambda: self.lambda,
            pi: self.pi,
            action: self.action,
        }
    }
}

/// The parameter Lagrangian `π²/2m + ½mω²λ² − fλ − π λ̇`, exactly as it
/// arises from the translation; see the module docs for its sign on shell.
pub fn lagrangian(params: &PhysicalParams, lambda: f64, pi: f64, lambda_dot: f64, f: f64) -> f64 {
    let m = params.mass;
    let w = params.omega;
    pi * pi / (2.0 * m) + 0.5 * m * w * w * lambda * lambda - f * lambda - pi * lambda_dot
}

pub fn trajectory_rhs(params: &PhysicalParams, state: ParameterState, f: f64) -> ParameterState {
    let m = params.mass;
    let w = params.omega;
    let lambda_dot = state.pi / m;
    ParameterState {
        lambda: lambda_dot,
        pi: f - m * w * w * state.lambda,
        action: lagrangian(params, state.lambda, state.pi, lambda_dot, f),
    }
}

/// Fixed-step samples of `(λ, π, S)` starting from rest at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: PhysicalParams,
    profile: ForceProfile,
    step: f64,
    samples: Vec<TrajectoryPoint>,
}

fn force_at(profile: &ForceProfile, t: f64) -> Result<f64> {
    profile.eval(t).map_err(|source| Error::Force { t, source })
}

/// Classical fourth-order Runge–Kutta with fixed step `h`; the last step is
/// shortened to land exactly on `t_end`. The action is integrated as a third
/// state component.
pub fn integrate_trajectory(
    params: &PhysicalParams,
    profile: &ForceProfile,
    t_end: f64,
    h: f64,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(invalid("schedule.t_end", "must be finite and > 0"));
    }
    if !(h.is_finite() && h > 0.0 && h <= t_end) {
        return Err(invalid("schedule.dt", "must satisfy 0 < h <= t_end"));
    }
    profile.validate()?;

    // Number of full steps; a remainder below 1e-9 h is treated as rounding.
    let ratio = t_end / h;
    let mut full_steps = ratio.floor() as usize;
    let remainder = t_end - full_steps as f64 * h;
    let partial = if remainder > 1e-9 * h {
        Some(remainder)
    } else {
        None
    };
    if partial.is_none() && full_steps == 0 {
        full_steps = 1;
    }

    let mut samples = Vec::with_capacity(full_steps + 2);
    let mut state = ParameterState::default();
    samples.push(TrajectoryPoint::default());
    let mut t = 0.0;
    for k in 0..full_steps {
        state = rk4_step(params, profile, t, state, h)?;
        t = if k + 1 == full_steps && partial.is_none() {
            t_end
        } else {
            (k + 1) as f64 * h
        };
        samples.push(point(t, state));
    }
    if let Some(dt) = partial {
        state = rk4_step(params, profile, t, state, dt)?;
        samples.push(point(t_end, state));
    }

    Ok(Trajectory {
        params: *params,
        profile: profile.clone(),
        step: h,
        samples,
    })
}

fn point(t: f64, s: ParameterState) -> TrajectoryPoint {
    TrajectoryPoint {
        t,
        lambda: s.lambda,
        pi: s.pi,
        action: s.action,
    }
}

fn rk4_step(
    params: &PhysicalParams,
    profile: &ForceProfile,
    t: f64,
    y: ParameterState,
    h: f64,
) -> Result<ParameterState> {
    let f0 = force_at(profile, t)?;
    let fm = force_at(profile, t + 0.5 * h)?;
    let f1 = force_at(profile, t + h)?;
    let k1 = trajectory_rhs(params, y, f0);
    let k2 = trajectory_rhs(params, y.axpy(0.5 * h, k1), fm);
    let k3 = trajectory_rhs(params, y.axpy(0.5 * h, k2), fm);
    let k4 = trajectory_rhs(params, y.axpy(h, k3), f1);
    Ok(ParameterState {
        lambda: y.lambda + h / 6.0 * (k1.lambda + 2.0 * k2.lambda + 2.0 * k3.lambda + k4.lambda),
        pi: y.pi + h / 6.0 * (k1.pi + 2.0 * k2.pi + 2.0 * k3.pi + k4.pi),
        action: y.action + h / 6.0 * (k1.action + 2.0 * k2.action + 2.0 * k3.action + k4.action),
    })
}

impl Trajectory {
    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn profile(&self) -> &ForceProfile {
        &self.profile
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn samples(&self) -> &[TrajectoryPoint] {
        &self.samples
    }

    pub fn horizon(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn last(&self) -> &TrajectoryPoint {
        &self.samples[self.samples.len() - 1]
    }

    /// `(λ, π, S)` at an arbitrary `t ∈ [0, horizon]`.
    ///
    /// Sample times are returned as stored. Between samples each component
    /// is a cubic Hermite interpolant whose end slopes come from
    /// [`trajectory_rhs`], which keeps the fourth-order accuracy of the
    /// integrator.
    pub fn at(&self, t: f64) -> Result<TrajectoryPoint> {
        let horizon = self.horizon();
        if !(0.0..=horizon).contains(&t) {
            return Err(Error::TimeOutOfRange { t, horizon });
        }
        let n = self.samples.len();
        // Samples are uniform except possibly for the final partial step.
        let mut i = ((t / self.step).floor() as usize).min(n - 2);
        while i + 1 < n - 1 && self.samples[i + 1].t <= t {
            i += 1;
        }
        while i > 0 && self.samples[i].t > t {
            i -= 1;
        }
        let a = self.samples[i];
        let b = self.samples[i + 1];
        if t == a.t {
            return Ok(a);
        }
        if t == b.t {
            return Ok(b);
        }
        let da = trajectory_rhs(&self.params, a.state(), force_at(&self.profile, a.t)?);
        let db = trajectory_rhs(&self.params, b.state(), force_at(&self.profile, b.t)?);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let hermite =
            |ya: f64, yb: f64, ma: f64, mb: f64| h00 * ya + h10 * h * ma + h01 * yb + h11 * h * mb;
        Ok(TrajectoryPoint {
            t,
            lambda: hermite(a.lambda, b.lambda, da.lambda, db.lambda),
            pi: hermite(a.pi, b.pi, da.pi, db.pi),
            action: hermite(a.action, b.action, da.action, db.action),
        })
    }
}

/// Exact `(λ, π, S)` for a constant force `f0` switched on at `t = 0`:
///
/// ```text
/// λ = (f0/mω²)(1 − cos ωt)
/// π = (f0/ω) sin ωt
/// 𝓛 = −(f0²/mω²) sin² ωt   on this solution
/// S = −(f0²/mω²)(t/2 − sin 2ωt / 4ω)
/// ```
pub fn closed_form_constant_force(params: &PhysicalParams, f0: f64, t: f64) -> TrajectoryPoint {
    let m = params.mass;
    let w = params.omega;
    let (s, c) = (w * t).sin_cos();
    let scale = f0 / (m * w * w);
    TrajectoryPoint {
        t,
        lambda: scale * (1.0 - c),
        pi: f0 / w * s,
        action: -f0 * scale * (0.5 * t - (2.0 * w * t).sin() / (4.0 * w)),
    }
}
