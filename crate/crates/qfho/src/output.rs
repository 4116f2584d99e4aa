//! CSV tables with fixed headers. Every number is written in scientific
//! notation with 17 significant digits, so values round-trip exactly and
//! identical inputs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use qfho_core::{Trajectory, WaveFunction};

use crate::error::{Error, Result};

pub const TRAJECTORY_HEADER: [&str; 4] = ["t", "lambda", "pi", "S"];
pub const KERNEL_HEADER: [&str; 5] = ["q", "q_prime", "t", "re", "im"];
pub const WAVEFUNCTION_HEADER: [&str; 4] = ["x", "re", "im", "prob_density"];
pub const RUN_LOG_HEADER: [&str; 5] = ["t", "norm", "q_mean", "p_mean", "energy"];
pub const COMPARE_HEADER: [&str; 7] = [
    "t",
    "fidelity",
    "phase_error",
    "norm_kernel",
    "norm_oracle",
    "q_mean_err",
    "p_mean_err",
];
pub const HEISENBERG_HEADER: [&str; 8] = ["t", "M11", "M12", "M21", "M22", "xi_q", "xi_p", "detM"];

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `header` followed by one row per entry of `rows`.
pub fn write_table<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl IntoIterator<Item = [f64; N]>,
) -> Result<()> {
    let fail = |source: csv::Error| Error::Write {
        path: path.to_path_buf(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(fail)?;
    writer.write_record(header).map_err(fail)?;
    for row in rows {
        writer
            .write_record(row.iter().map(|&v| format_value(v)))
            .map_err(fail)?;
    }
    writer.flush().map_err(|e| fail(e.into()))
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    write_table(
        path,
        TRAJECTORY_HEADER,
        traj.samples()
            .iter()
            .map(|s| [s.t, s.lambda, s.pi, s.action]),
    )
}

pub fn write_wavefunction(path: &Path, psi: &WaveFunction) -> Result<()> {
    write_table(
        path,
        WAVEFUNCTION_HEADER,
        psi.grid()
            .points()
            .zip(psi.amplitudes())
            .map(|(x, z)| [x, z.re, z.im, z.norm_sqr()]),
    )
}

/// Creates the output directory if needed and returns the path of `name`
/// inside it.
pub fn output_file(dir: &Path, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.to_path_buf(),
        source: source.into(),
    })?;
    Ok(dir.join(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        for v in [
            0.0,
            -0.0,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
        ] {
            let s = format_value(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_value(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn table_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_table(&path, ["a", "b"], [[1.0, -0.5], [0.0, 2.0]]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "a,b\n1.0000000000000000e0,-5.0000000000000000e-1\n0.0000000000000000e0,2.0000000000000000e0\n"
        );
    }
}
