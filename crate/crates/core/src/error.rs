use core::fmt;

use crate::force::ForceError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor argument violated its invariant.
    InvalidArgument {
        field: &'static str,
        reason: &'static str,
    },
    /// The driving force could not be evaluated at time `t`.
    Force {
        t: f64,
        source: ForceError,
    },
    /// A query time lies outside `[0, horizon]` of a trajectory.
    TimeOutOfRange {
        t: f64,
        horizon: f64,
    },
    /// `|sin θ|` is below the caustic threshold; the kernel is distributional there.
    CausticSingular {
        theta: f64,
    },
    /// A single kernel would have to be evaluated past the first caustic.
    CausticCrossed {
        theta: f64,
    },
    /// The kernel's local wavelength is under four grid spacings.
    GridTooCoarse {
        wavelength: f64,
        spacing: f64,
    },
    /// The packet reaches the grid edge (or would, for `make_gaussian`).
    PacketTouchesBoundary {
        edge_ratio: f64,
    },
    NotNormalized {
        norm_squared: f64,
    },
    /// An expectation value of a Hermitian operator came out with a
    /// non-negligible imaginary part.
    ComplexExpectation {
        imaginary: f64,
    },
    GridMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument { field, reason } => write!(f, "invalid {field}: {reason}"),
            Error::Force { t, source } => write!(f, "force evaluation failed at t = {t}: {source}"),
            Error::TimeOutOfRange { t, horizon } => {
                write!(f, "time {t} outside trajectory range [0, {horizon}]")
            }
            Error::CausticSingular { theta } => write!(
                f,
                "kernel is singular at a caustic (ωt mod π = {})",
                mod_pi(*theta)
            ),
            Error::CausticCrossed { theta } => write!(
                f,
                "ωt = {theta} crosses the caustic at π; compose sub-caustic segments instead"
            ),
            Error::GridTooCoarse {
                wavelength,
                spacing,
            } => write!(
                f,
                "grid too coarse: kernel wavelength {wavelength} is under 4 grid spacings of {spacing}"
            ),
            Error::PacketTouchesBoundary { edge_ratio } => write!(
                f,
                "wave packet touches the grid boundary (edge amplitude ratio {edge_ratio:e})"
            ),
            Error::NotNormalized { norm_squared } => {
                write!(f, "wave function is not normalized (‖ψ‖² = {norm_squared})")
            }
            Error::ComplexExpectation { imaginary } => {
                write!(f, "expectation value has imaginary residue {imaginary:e}")
            }
            Error::GridMismatch => write!(f, "wave functions live on different grids"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for errors that stem from the physics domain (caustics, grid
    /// resolution, boundary contact) rather than from malformed input.
    pub fn is_physics_domain(&self) -> bool {
        matches!(
            self,
            Error::CausticSingular { .. }
                | Error::CausticCrossed { .. }
                | Error::GridTooCoarse { .. }
                | Error::PacketTouchesBoundary { .. }
        )
    }
}

fn mod_pi(theta: f64) -> f64 {
    let r = theta % core::f64::consts::PI;
    if r < 0.0 {
        r + core::f64::consts::PI
    } else {
        r
    }
}

pub(crate) fn invalid(field: &'static str, reason: &'static str) -> Error {
    Error::InvalidArgument { field, reason }
}
