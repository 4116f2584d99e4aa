//! The four experiments behind the command-line front end. Each `run_*`
//! function writes its CSV files into the output directory and returns a
//! one-line summary; the table-producing halves are public on their own.

use std::path::{Path, PathBuf};

use qfho_core::grid::{self, expectation_energy, expectation_p, expectation_q};
use qfho_core::{
    evolution_params, forced_kernel, integrate_trajectory, overlap, symplectic_map, ForceProfile,
    KernelPropagator, PhysicalParams, Trajectory, WaveFunction,
};
use rayon::ThreadPool;

use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::output::{self, output_file, write_table, write_trajectory, write_wavefunction};
use crate::parallel;

/// Minimum `|⟨ψ_oracle|ψ_kernel⟩|` is `1 − FIDELITY_TOLERANCE`.
pub const FIDELITY_TOLERANCE: f64 = 1e-6;
/// Maximum `|arg⟨ψ_oracle|ψ_kernel⟩|` in radians.
pub const PHASE_TOLERANCE: f64 = 1e-4;
/// Maximum deviation of `‖ψ_kernel‖` from one.
pub const KERNEL_NORM_TOLERANCE: f64 = 1e-6;
/// Maximum error of `⟨q⟩`, `⟨p⟩` against the Heisenberg-picture prediction.
pub const MEAN_TOLERANCE: f64 = 1e-4;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const KERNEL_FILE: &str = "kernel.csv";
pub const COMPARE_FILE: &str = "compare.csv";
pub const RUN_LOG_FILE: &str = "run_log.csv";
pub const KERNEL_STATE_FILE: &str = "wavefunction_kernel.csv";
pub const ORACLE_STATE_FILE: &str = "wavefunction_oracle.csv";
pub const HEISENBERG_FILE: &str = "heisenberg.csv";

#[derive(Debug, Clone)]
pub struct Options {
    pub out_dir: PathBuf,
}

fn context(what: &'static str) -> impl Fn(qfho_core::Error) -> Error {
    move |e| Error::compute(what, e)
}

fn trajectory(scenario: &Scenario, t_end: f64) -> Result<Trajectory> {
    let h = scenario.schedule.dt.min(t_end);
    integrate_trajectory(&scenario.physical, &scenario.force, t_end, h)
        .map_err(context("trajectory"))
}

/// Sample indices `0, stride, 2·stride, …` plus the last one.
fn strided(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    let last = len - 1;
    (0..len)
        .step_by(stride)
        .chain((!last.is_multiple_of(stride)).then_some(last))
}

pub fn run_trajectory(scenario: &Scenario, options: &Options) -> Result<String> {
    let traj = trajectory(scenario, scenario.schedule.t_end)?;
    write_trajectory(&output_file(&options.out_dir, TRAJECTORY_FILE)?, &traj)?;
    let last = traj.last();
    Ok(format!(
        "trajectory: {} samples; at t = {} λ = {:.12e}, π = {:.12e}, S = {:.12e}",
        traj.samples().len(),
        last.t,
        last.lambda,
        last.pi,
        last.action
    ))
}

/// `[q, q′, t, Re G, Im G]` over the Cartesian product of `q_list` and
/// `q_prime_list`, `q` varying slowest.
pub fn kernel_rows(
    scenario: &Scenario,
    q_list: &[f64],
    q_prime_list: &[f64],
    t: f64,
) -> Result<Vec<[f64; 5]>> {
    if q_list.is_empty() || q_prime_list.is_empty() {
        return Err(Error::Usage("both q and q′ lists must be non-empty".into()));
    }
    if let Some(bad) = q_list.iter().chain(q_prime_list).find(|v| !v.is_finite()) {
        return Err(Error::Usage(format!(
            "kernel positions must be finite, got {bad}"
        )));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Usage(format!(
            "kernel time must be finite and > 0, got {t}"
        )));
    }
    let traj = trajectory(scenario, t)?;
    let ep = evolution_params(&scenario.physical, &traj, t).map_err(context("kernel"))?;
    let mut rows = Vec::with_capacity(q_list.len() * q_prime_list.len());
    for &q in q_list {
        for &qp in q_prime_list {
            let g = forced_kernel(&scenario.physical, &ep, q, qp).map_err(context("kernel"))?;
            rows.push([q, qp, t, g.re, g.im]);
        }
    }
    Ok(rows)
}

pub fn run_kernel(
    scenario: &Scenario,
    q_list: &[f64],
    q_prime_list: &[f64],
    t: Option<f64>,
    options: &Options,
) -> Result<String> {
    let t = t.unwrap_or(scenario.schedule.t_end);
    let rows = kernel_rows(scenario, q_list, q_prime_list, t)?;
    let count = rows.len();
    write_table(
        &output_file(&options.out_dir, KERNEL_FILE)?,
        output::KERNEL_HEADER,
        rows,
    )?;
    Ok(format!("kernel: {count} values at t = {t}"))
}

/// `[t, M11, M12, M21, M22, ξ_q, ξ_p, det M]` at every `stride`-th
/// trajectory sample and at `t_end`.
pub fn heisenberg_rows(scenario: &Scenario) -> Result<Vec<[f64; 8]>> {
    let traj = trajectory(scenario, scenario.schedule.t_end)?;
    let samples = traj.samples();
    strided(samples.len(), scenario.schedule.stride)
        .map(|i| {
            let t = samples[i].t;
            let ep =
                evolution_params(&scenario.physical, &traj, t).map_err(context("heisenberg"))?;
            let map = symplectic_map(&ep);
            let [[m11, m12], [m21, m22]] = map.matrix;
            Ok([
                t,
                m11,
                m12,
                m21,
                m22,
                map.shift[0],
                map.shift[1],
                map.determinant(),
            ])
        })
        .collect()
}

pub fn run_heisenberg(scenario: &Scenario, options: &Options) -> Result<String> {
    let rows = heisenberg_rows(scenario)?;
    let worst = rows.iter().map(|r| (r[7] - 1.0).abs()).fold(0.0, f64::max);
    let count = rows.len();
    write_table(
        &output_file(&options.out_dir, HEISENBERG_FILE)?,
        output::HEISENBERG_HEADER,
        rows,
    )?;
    Ok(format!(
        "heisenberg: {count} rows; max |det M − 1| = {worst:.3e}"
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub t: f64,
    pub fidelity: f64,
    pub phase_error: f64,
    pub norm_kernel: f64,
    pub norm_oracle: f64,
    /// Larger of the kernel and oracle errors of `⟨q⟩` against `M·(q̄0, p̄0) + ξ`.
    pub q_mean_err: f64,
    pub p_mean_err: f64,
}

impl CompareRow {
    pub fn passes(&self) -> bool {
        self.fidelity >= 1.0 - FIDELITY_TOLERANCE
            && self.phase_error.abs() < PHASE_TOLERANCE
            && (self.norm_kernel - 1.0).abs() <= KERNEL_NORM_TOLERANCE
            && self.q_mean_err < MEAN_TOLERANCE
            && self.p_mean_err < MEAN_TOLERANCE
    }

    fn to_array(self) -> [f64; 7] {
        [
            self.t,
            self.fidelity,
            self.phase_error,
            self.norm_kernel,
            self.norm_oracle,
            self.q_mean_err,
            self.p_mean_err,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    /// `[t, ‖ψ‖, ⟨q⟩, ⟨p⟩, ⟨H⟩]` of the grid solution at every snapshot.
    pub run_log: Vec<[f64; 5]>,
    pub kernel_final: WaveFunction,
    pub oracle_final: WaveFunction,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CompareRow::passes)
    }

    pub fn summary(&self) -> String {
        let min_fidelity = self
            .rows
            .iter()
            .map(|r| r.fidelity)
            .fold(f64::INFINITY, f64::min);
        let max_phase = self
            .rows
            .iter()
            .map(|r| r.phase_error.abs())
            .fold(0.0, f64::max);
        let max_mean = self
            .rows
            .iter()
            .map(|r| r.q_mean_err.max(r.p_mean_err))
            .fold(0.0, f64::max);
        format!(
            "compare: {} snapshots; min fidelity 1 − {:.3e}, max |phase| {:.3e}, max mean error {:.3e}: {}",
            self.rows.len(),
            1.0 - min_fidelity,
            max_phase,
            max_mean,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn log_row(
    params: &PhysicalParams,
    force: &ForceProfile,
    psi: &WaveFunction,
) -> qfho_core::Result<[f64; 5]> {
    let t = psi.t();
    let f = force
        .eval(t)
        .map_err(|source| qfho_core::Error::Force { t, source })?;
    Ok([
        t,
        psi.norm(),
        expectation_q(psi)?,
        expectation_p(psi, params.hbar())?,
        expectation_energy(psi, params, f)?,
    ])
}

/// Evolves the scenario packet to `t_end` with the propagator and with the
/// grid solver, comparing the two at every `stride`-th solver step and at
/// `t_end`.
pub fn compare(scenario: &Scenario, pool: &ThreadPool) -> Result<CompareReport> {
    let params = &scenario.physical;
    let schedule = scenario.schedule;
    let psi0 = scenario.initial_state()?;
    let traj = trajectory(scenario, schedule.t_end)?;

    // Surface caustic and resolution problems at t_end before the long run.
    let ep_end = evolution_params(params, &traj, schedule.t_end).map_err(context("kernel"))?;
    KernelPropagator::new(params, &ep_end, &psi0).map_err(context("kernel at t_end"))?;

    let q0 = expectation_q(&psi0).map_err(context("initial packet"))?;
    let p0 = expectation_p(&psi0, params.hbar()).map_err(context("initial packet"))?;

    let mut snapshots = vec![psi0.clone()];
    let mut run_log =
        vec![log_row(params, &scenario.force, &psi0).map_err(context("grid solver"))?];
    let oracle_final = grid::evolve(
        params,
        &scenario.force,
        &psi0,
        schedule.t_end,
        schedule.dt,
        |k, psi| {
            if k % schedule.stride == 0 {
                run_log.push(log_row(params, &scenario.force, psi)?);
                snapshots.push(psi.clone());
            }
            Ok(())
        },
    )
    .map_err(context("grid solver"))?;
    if snapshots.last().map(WaveFunction::t) != Some(oracle_final.t()) {
        run_log
            .push(log_row(params, &scenario.force, &oracle_final).map_err(context("grid solver"))?);
        snapshots.push(oracle_final.clone());
    }

    let mut rows = Vec::with_capacity(snapshots.len());
    let mut kernel_final = psi0.clone();
    for oracle in &snapshots {
        let t = oracle.t().min(traj.horizon());
        let ep = evolution_params(params, &traj, t).map_err(context("kernel"))?;
        let kernel = if t == 0.0 {
            psi0.clone()
        } else {
            parallel::evolve_by_kernel(pool, params, &ep, &psi0).map_err(context("kernel"))?
        };
        let ov = overlap(oracle, &kernel).map_err(context("overlap"))?;
        let (q_pred, p_pred) = symplectic_map(&ep).apply(q0, p0);
        let q_err = |psi: &WaveFunction| expectation_q(psi).map(|q| (q - q_pred).abs());
        let p_err =
            |psi: &WaveFunction| expectation_p(psi, params.hbar()).map(|p| (p - p_pred).abs());
        let means = || -> qfho_core::Result<(f64, f64)> {
            Ok((
                q_err(&kernel)?.max(q_err(oracle)?),
                p_err(&kernel)?.max(p_err(oracle)?),
            ))
        };
        let (q_mean_err, p_mean_err) = means().map_err(context("expectation values"))?;
        rows.push(CompareRow {
            t: oracle.t(),
            fidelity: ov.norm(),
            phase_error: ov.arg(),
            norm_kernel: kernel.norm(),
            norm_oracle: oracle.norm(),
            q_mean_err,
            p_mean_err,
        });
        kernel_final = kernel;
    }

    Ok(CompareReport {
        rows,
        run_log,
        kernel_final,
        oracle_final,
    })
}

/// Writes the comparison tables and final states; fails with
/// [`Error::ThresholdsFailed`] if any snapshot misses a threshold.
pub fn run_compare(scenario: &Scenario, options: &Options) -> Result<String> {
    let pool = parallel::thread_pool()?;
    let report = compare(scenario, &pool)?;
    let dir: &Path = &options.out_dir;
    write_table(
        &output_file(dir, COMPARE_FILE)?,
        output::COMPARE_HEADER,
        report.rows.iter().map(|r| r.to_array()),
    )?;
    write_table(
        &output_file(dir, RUN_LOG_FILE)?,
        output::RUN_LOG_HEADER,
        report.run_log.iter().copied(),
    )?;
    write_wavefunction(&output_file(dir, KERNEL_STATE_FILE)?, &report.kernel_final)?;
    write_wavefunction(&output_file(dir, ORACLE_STATE_FILE)?, &report.oracle_final)?;
    let summary = report.summary();
    if report.passed() {
        Ok(summary)
    } else {
        Err(Error::ThresholdsFailed(summary))
    }
}
