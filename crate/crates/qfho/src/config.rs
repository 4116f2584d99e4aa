//! Scenario files.
//!
//! A scenario is a TOML document with the sections `[physical]`, `[force]`,
//! `[grid]`, `[packet]` and `[schedule]`. `[grid]` and `[packet]` are only
//! required by the commands that evolve a wave function. Everything is
//! validated before any computation starts, and errors name the offending key
//! as `section.key`.
//!
//! ```toml
//! [physical]
//! mass = 1.0
//! omega = 1.0
//! hbar = 1.0
//!
//! [force]
//! kind = "sinusoid"      # zero | constant | sinusoid | gaussian_pulse | tabulated | expression
//! amplitude = 0.5
//! frequency = 0.8
//!
//! [grid]
//! x_min = -20.0
//! x_max = 20.0
//! n = 2048
//!
//! [packet]
//! q0 = 1.0
//! p0 = 0.0
//! sigma = 0.7071067811865476   # optional; defaults to the coherent width
//!
//! [schedule]
//! t_end = 2.5132741228718345
//! dt = 1e-3
//! stride = 500
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use qfho_core::force::ForceTable;
use qfho_core::{make_gaussian, ForceProfile, Grid, PhysicalParams, WaveFunction};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Scenario {
    pub physical: PhysicalParams,
    pub force: ForceProfile,
    pub grid: Option<Grid>,
    pub packet: Option<Packet>,
    pub schedule: Schedule,
}

/// Gaussian initial state `ψ ∝ exp(−(x − q0)²/4σ² + i p0 x/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub q0: f64,
    pub p0: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub t_end: f64,
    /// Step of both the trajectory integrator and the grid solver.
    pub dt: f64,
    /// Number of steps between consecutive output rows.
    pub stride: usize,
}

impl Scenario {
    /// Reads and validates a scenario; table paths resolve against the
    /// directory of `path`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Scenario::from_toml(&text, base)
    }

    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text)?;
        let physical =
            PhysicalParams::new(raw.physical.mass, raw.physical.omega, raw.physical.hbar)
                .map_err(|e| Error::compute("physical", e))?;
        let force = raw.force.build(base_dir)?;
        let grid = raw
            .grid
            .map(|g| Grid::new(g.x_min, g.x_max, g.n))
            .transpose()
            .map_err(|e| Error::compute("grid", e))?;
        let packet = raw.packet.map(|p| p.build(&physical)).transpose()?;
        let schedule = raw.schedule.build()?;
        Ok(Scenario {
            physical,
            force,
            grid,
            packet,
            schedule,
        })
    }

    pub fn require_grid(&self) -> Result<Grid> {
        self.grid
            .ok_or_else(|| Error::config("grid", "section [grid] is required by this command"))
    }

    pub fn require_packet(&self) -> Result<Packet> {
        self.packet
            .ok_or_else(|| Error::config("packet", "section [packet] is required by this command"))
    }

    /// The normalized initial packet on the scenario grid.
    pub fn initial_state(&self) -> Result<WaveFunction> {
        let grid = self.require_grid()?;
        let p = self.require_packet()?;
        make_gaussian(&grid, p.q0, p.p0, p.sigma, self.physical.hbar())
            .map_err(|e| Error::compute("initial packet", e))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    physical: RawPhysical,
    force: RawForce,
    grid: Option<RawGrid>,
    packet: Option<RawPacket>,
    schedule: RawSchedule,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysical {
    mass: f64,
    omega: f64,
    hbar: f64,
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum ForceKind {
    Zero,
    Constant,
    Sinusoid,
    GaussianPulse,
    Tabulated,
    Expression,
}

impl ForceKind {
    fn name(self) -> &'static str {
        match self {
            ForceKind::Zero => "zero",
            ForceKind::Constant => "constant",
            ForceKind::Sinusoid => "sinusoid",
            ForceKind::GaussianPulse => "gaussian_pulse",
            ForceKind::Tabulated => "tabulated",
            ForceKind::Expression => "expression",
        }
    }

    /// Keys each kind accepts besides `kind`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            ForceKind::Zero => &[],
            ForceKind::Constant => &["amplitude"],
            ForceKind::Sinusoid => &["amplitude", "frequency", "phase"],
            ForceKind::GaussianPulse => &["amplitude", "center", "width"],
            ForceKind::Tabulated => &["table"],
            ForceKind::Expression => &["expression"],
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForce {
    kind: ForceKind,
    amplitude: Option<f64>,
    frequency: Option<f64>,
    phase: Option<f64>,
    center: Option<f64>,
    width: Option<f64>,
    table: Option<PathBuf>,
    expression: Option<String>,
}

impl RawForce {
    fn build(self, base_dir: &Path) -> Result<ForceProfile> {
        let present = [
            ("amplitude", self.amplitude.is_some()),
            ("frequency", self.frequency.is_some()),
            ("phase", self.phase.is_some()),
            ("center", self.center.is_some()),
            ("width", self.width.is_some()),
            ("table", self.table.is_some()),
            ("expression", self.expression.is_some()),
        ];
        for (key, set) in present {
            if set && !self.kind.keys().contains(&key) {
                return Err(Error::config(
                    format!("force.{key}"),
                    format!("not used by kind \"{}\"", self.kind.name()),
                ));
            }
        }
        let required = |value: Option<f64>, key: &str| {
            value.ok_or_else(|| {
                Error::config(
                    format!("force.{key}"),
                    format!("required by kind \"{}\"", self.kind.name()),
                )
            })
        };

        let profile = match self.kind {
            ForceKind::Zero => ForceProfile::Zero,
            ForceKind::Constant => ForceProfile::constant(required(self.amplitude, "amplitude")?),
            ForceKind::Sinusoid => ForceProfile::sinusoid(
                required(self.amplitude, "amplitude")?,
                required(self.frequency, "frequency")?,
                self.phase.unwrap_or(0.0),
            ),
            ForceKind::GaussianPulse => ForceProfile::gaussian_pulse(
                required(self.amplitude, "amplitude")?,
                required(self.center, "center")?,
                required(self.width, "width")?,
            )
            .map_err(|e| Error::compute("force", e))?,
            ForceKind::Tabulated => {
                let table = self.table.as_deref().ok_or_else(|| {
                    Error::config("force.table", "required by kind \"tabulated\"")
                })?;
                ForceProfile::Tabulated(read_force_table(&base_dir.join(table))?)
            }
            ForceKind::Expression => {
                let text = self.expression.as_deref().ok_or_else(|| {
                    Error::config("force.expression", "required by kind \"expression\"")
                })?;
                ForceProfile::parse(text)
                    .map_err(|e| Error::config("force.expression", e.to_string()))?
            }
        };
        profile.validate().map_err(|e| Error::compute("force", e))?;
        Ok(profile)
    }
}

/// Reads a force table: CSV with header `t,f`, strictly increasing times.
pub fn read_force_table(path: &Path) -> Result<ForceTable> {
    let at =
        |message: String| Error::config("force.table", format!("{}: {message}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| at(e.to_string()))?;
    let headers = reader.headers().map_err(|e| at(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["t", "f"] {
        return Err(at("header must be `t,f`".into()));
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| at(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| at(format!("line {line}: expected two numbers")))
        };
        samples.push((field(0)?, field(1)?));
    }
    ForceTable::new(samples).map_err(|e| at(e.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPacket {
    q0: f64,
    p0: f64,
    sigma: Option<f64>,
}

impl RawPacket {
    fn build(self, physical: &PhysicalParams) -> Result<Packet> {
        if !self.q0.is_finite() {
            return Err(Error::config("packet.q0", "must be finite"));
        }
        if !self.p0.is_finite() {
            return Err(Error::config("packet.p0", "must be finite"));
        }
        let coherent = (physical.hbar() / (2.0 * physical.mass() * physical.omega())).sqrt();
        let sigma = self.sigma.unwrap_or(coherent);
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::config("packet.sigma", "must be finite and > 0"));
        }
        Ok(Packet {
            q0: self.q0,
            p0: self.p0,
            sigma,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    t_end: f64,
    dt: f64,
    stride: Option<usize>,
}

impl RawSchedule {
    fn build(self) -> Result<Schedule> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config("schedule.t_end", "must be finite and > 0"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.t_end) {
            return Err(Error::config("schedule.dt", "must satisfy 0 < dt <= t_end"));
        }
        let stride = self.stride.unwrap_or(1);
        if stride == 0 {
            return Err(Error::config("schedule.stride", "must be >= 1"));
        }
        Ok(Schedule {
            t_end: self.t_end,
            dt: self.dt,
            stride,
        })
    }
}
