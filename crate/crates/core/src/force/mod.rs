//! Driving forces `f(t)`.
//!
//! A [`ForceProfile`] is immutable once built and evaluation is pure, so one
//! profile can be shared freely between the trajectory integrator, the grid
//! solver and concurrent readers.
//!
//! Forces only need to be piecewise continuous. Fixed-step integrators lose
//! their nominal order across a discontinuity of `f` (a tabulated profile is
//! only piecewise linear, so its kinks cost accuracy of order the table
//! spacing).

mod expr;
mod parse;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

pub use expr::{BinaryOp, EvalDomainError, ExpressionNode, UnaryOp};
pub use parse::{parse_force_expression, ParseError};

use expr::Literal;

#[derive(Debug, Clone, PartialEq)]
pub enum ForceError {
    /// Tabulated profiles do not extrapolate.
    OutOfTableRange {
        t: f64,
        first: f64,
        last: f64,
    },
    EvalDomain(EvalDomainError),
    /// A non-finite evaluation time.
    NonFiniteTime,
}

impl fmt::Display for ForceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForceError::OutOfTableRange { t, first, last } => {
                write!(f, "t = {t} lies outside the force table [{first}, {last}]")
            }
            ForceError::EvalDomain(e) => write!(f, "{e}"),
            ForceError::NonFiniteTime => f.write_str("force evaluated at a non-finite time"),
        }
    }
}

impl core::error::Error for ForceError {}

impl From<EvalDomainError> for ForceError {
    fn from(e: EvalDomainError) -> Self {
        ForceError::EvalDomain(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableError {
    TooFewSamples,
    NotStrictlyIncreasing { index: usize },
    NonFinite { index: usize },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::TooFewSamples => f.write_str("a force table needs at least 2 samples"),
            TableError::NotStrictlyIncreasing { index } => {
                write!(f, "sample {index} does not have a strictly increasing time")
            }
            TableError::NonFinite { index } => write!(f, "sample {index} is not finite"),
        }
    }
}

impl core::error::Error for TableError {}

/// Samples `(t, f)` with strictly increasing `t`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceTable {
    samples: Vec<(f64, f64)>,
}

impl ForceTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, TableError> {
        if samples.len() < 2 {
            return Err(TableError::TooFewSamples);
        }
        for (index, &(t, f)) in samples.iter().enumerate() {
            if !t.is_finite() || !f.is_finite() {
                return Err(TableError::NonFinite { index });
            }
            if index > 0 && t <= samples[index - 1].0 {
                return Err(TableError::NotStrictlyIncreasing { index });
            }
        }
        Ok(ForceTable { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn first_time(&self) -> f64 {
        self.samples[0].0
    }

    pub fn last_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn interpolate(&self, t: f64) -> Result<f64, ForceError> {
        let (first, last) = (self.first_time(), self.last_time());
        if !(first..=last).contains(&t) {
            return Err(ForceError::OutOfTableRange { t, first, last });
        }
        // Index of the first sample with time > t, clamped so that the
        // bracketing interval is [i-1, i].
        let upper = self
            .samples
            .partition_point(|&(ts, _)| ts <= t)
            .clamp(1, self.samples.len() - 1);
        let (t0, f0) = self.samples[upper - 1];
        let (t1, f1) = self.samples[upper];
        let w = (t - t0) / (t1 - t0);
        Ok(f0 + w * (f1 - f0))
    }

    fn shifted(&self, offset: f64) -> Self {
        ForceTable {
            samples: self.samples.iter().map(|&(t, f)| (t - offset, f)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForceProfile {
    Zero,
    Constant {
        amplitude: f64,
    },
    /// `amplitude · sin(frequency · t + phase)`
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// `amplitude · exp(−(t − center)² / 2width²)`
    GaussianPulse {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    Tabulated(ForceTable),
    Expression(ExpressionNode),
}

impl ForceProfile {
    pub fn constant(amplitude: f64) -> Self {
        ForceProfile::Constant { amplitude }
    }

    pub fn sinusoid(amplitude: f64, frequency: f64, phase: f64) -> Self {
        ForceProfile::Sinusoid {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn gaussian_pulse(amplitude: f64, center: f64, width: f64) -> Result<Self, crate::Error> {
        let profile = ForceProfile::GaussianPulse {
            amplitude,
            center,
            width,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_force_expression(text).map(ForceProfile::Expression)
    }

    /// Checks parameter invariants that the enum cannot enforce by itself.
    pub fn validate(&self) -> Result<(), crate::Error> {
        use crate::error::invalid;
        let finite = |v: f64, field| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(field, "must be finite"))
            }
        };
        match *self {
            ForceProfile::Zero | ForceProfile::Tabulated(_) | ForceProfile::Expression(_) => Ok(()),
            ForceProfile::Constant { amplitude } => finite(amplitude, "force.amplitude"),
            ForceProfile::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => {
                finite(amplitude, "force.amplitude")?;
                finite(frequency, "force.frequency")?;
                finite(phase, "force.phase")
            }
            ForceProfile::GaussianPulse {
                amplitude,
                center,
                width,
            } => {
                finite(amplitude, "force.amplitude")?;
                finite(center, "force.center")?;
                finite(width, "force.width")?;
                if width > 0.0 {
                    Ok(())
                } else {
                    Err(invalid("force.width", "must be > 0"))
                }
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64, ForceError> {
        if !t.is_finite() {
            return Err(ForceError::NonFiniteTime);
        }
        match self {
            ForceProfile::Zero => Ok(0.0),
            ForceProfile::Constant { amplitude } => Ok(*amplitude),
            ForceProfile::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => Ok(amplitude * (frequency * t + phase).sin()),
            ForceProfile::GaussianPulse {
                amplitude,
                center,
                width,
            } => {
                let d = t - center;
                Ok(amplitude * (-(d * d) / (2.0 * width * width)).exp())
            }
            ForceProfile::Tabulated(table) => table.interpolate(t),
            ForceProfile::Expression(node) => Ok(node.eval(t)?),
        }
    }

    /// The profile `s ↦ f(s + offset)`, used to re-base a trajectory at a
    /// later starting time.
    pub fn shifted(&self, offset: f64) -> Self {
        match self {
            ForceProfile::Zero => ForceProfile::Zero,
            ForceProfile::Constant { amplitude } => ForceProfile::constant(*amplitude),
            ForceProfile::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => ForceProfile::sinusoid(*amplitude, *frequency, phase + frequency * offset),
            ForceProfile::GaussianPulse {
                amplitude,
                center,
                width,
            } => ForceProfile::GaussianPulse {
                amplitude: *amplitude,
                center: center - offset,
                width: *width,
            },
            ForceProfile::Tabulated(table) => ForceProfile::Tabulated(table.shifted(offset)),
            ForceProfile::Expression(node) => ForceProfile::Expression(node.shifted(offset)),
        }
    }

    /// Infix text for profiles the expression grammar can express
    /// (everything except tables).
    pub fn to_expression(&self) -> Option<String> {
        use alloc::format;
        match self {
            ForceProfile::Zero => Some(String::from("0")),
            ForceProfile::Constant { amplitude } => Some(format!("{}", Literal(*amplitude))),
            ForceProfile::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => Some(format!(
                "{}*sin({}*t+{})",
                Literal(*amplitude),
                Literal(*frequency),
                Literal(*phase)
            )),
            ForceProfile::GaussianPulse {
                amplitude,
                center,
                width,
            } => Some(format!(
                "{}*exp(-((t-{})*(t-{}))/(2*{}*{}))",
                Literal(*amplitude),
                Literal(*center),
                Literal(*center),
                Literal(*width),
                Literal(*width)
            )),
            ForceProfile::Tabulated(_) => None,
            ForceProfile::Expression(node) => Some(format!("{node}")),
        }
    }
}
