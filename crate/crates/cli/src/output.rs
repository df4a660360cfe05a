//! Plain-text `key: value` reports, trajectory CSVs and atomic file writes.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use horizon_core::dynamics::energy_unchecked;
use horizon_core::{MassDistribution, PhysicalConstants, Trajectory};

use crate::CliError;

pub const CSV_HEADER: [&str; 9] = ["t", "ux", "uy", "uz", "vx", "vy", "vz", "energy", "dist_to_closure"];

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn constants(&mut self, consts: &PhysicalConstants) -> &mut Self {
        self.line("G", format_args!("{:e}", consts.g))
            .line("c", format_args!("{:e}", consts.c))
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes via a sibling temporary file and a rename, so readers never see
/// a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(io)?;
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn trajectory_csv(
    dist: &MassDistribution,
    traj: &Trajectory,
    consts: &PhysicalConstants,
) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(fail)?;
    for s in &traj.samples {
        let e = energy_unchecked(dist, s, consts);
        let row = [
            s.t,
            s.u.x,
            s.u.y,
            s.u.z,
            s.v.x,
            s.v.y,
            s.v.z,
            e,
            dist.dist_to_closure(s.u),
        ];
        w.write_record(row.iter().map(|&x| num(x))).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn csv_file_name(index: usize) -> String {
    format!("launch_{index:03}.csv")
}
