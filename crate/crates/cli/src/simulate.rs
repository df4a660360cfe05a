//! `simulate`: integrate every configured launch, write one CSV each and a
//! report with terminations, drift and the applicable confinement bound.

use std::path::Path;

use horizon_core::dynamics::{energy, energy_drift, integrate};
use horizon_core::potential::potential;
use horizon_core::theorems::{confinement_distance_general, confinement_radius_spherical, ConfinementBound};
use horizon_core::{Error, MassDistribution, PhysicalConstants, QuadratureOptions, State, Termination, Trajectory};
use rayon::prelude::*;

use crate::config::{Launch, ScenarioConfig};
use crate::output::{csv_file_name, num, trajectory_csv, write_atomic, Report};
use crate::{pool, CliError};

pub struct Bound {
    pub bound: ConfinementBound,
    /// Largest attained value of the bounded quantity.
    pub attained: f64,
}

/// The confinement bound applicable to a launch, or `None` when the launch
/// is at or above escape (the theorem does not apply).
pub fn applicable_bound(
    body: &MassDistribution,
    launch: &Launch,
    consts: &PhysicalConstants,
    opts: &QuadratureOptions,
) -> Result<Option<ConfinementBound>, CliError> {
    let result = match body.spherical() {
        Some((center, _)) => {
            confinement_radius_spherical(body.total_mass(), launch.u0.distance(center), launch.v0.norm(), consts)
        }
        None => confinement_distance_general(body, launch.u0, launch.v0, consts, opts),
    };
    match result {
        Ok(b) => Ok(Some(b)),
        Err(Error::AtOrAboveEscape { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `max ||u − c||` for spherical bodies, `max dist(u, Ω̄)` otherwise.
pub fn attained(body: &MassDistribution, traj: &Trajectory) -> f64 {
    match body.spherical() {
        Some((center, _)) => traj.max_distance_from(center),
        None => traj.max_dist_to_closure(body),
    }
}

/// About two periods of the bound orbit of semi-major axis GM/(2η), or a
/// fixed multiple of the free-fall time when the launch is unbound.
pub fn auto_t_end(
    body: &MassDistribution,
    launch: &Launch,
    consts: &PhysicalConstants,
    opts: &QuadratureOptions,
) -> f64 {
    let gm = consts.g * body.total_mass();
    let u = potential(body, launch.u0, consts, opts).unwrap_or(0.0);
    let eta = u - 0.5 * launch.v0.norm_squared();
    let scale = if eta > 0.0 {
        gm / (2.0 * eta)
    } else {
        body.bounding_ball(0.0)
            .map(|b| b.radius)
            .unwrap_or(0.0)
            .max(launch.u0.norm())
            .max(1e-300)
    };
    let period = std::f64::consts::TAU * (scale * scale * scale / gm).sqrt();
    if eta > 0.0 {
        2.0 * period
    } else {
        100.0 * period
    }
}

struct LaunchResult {
    launch: Launch,
    traj: Trajectory,
    e0: f64,
    drift: f64,
    bound: Option<Bound>,
}

pub fn run(config_path: &Path) -> Result<String, CliError> {
    let config = ScenarioConfig::load(config_path)?;
    let consts = config.constants()?;
    let body = config.body()?;
    let quad = config.quadrature()?;
    let launches = config.launches(&body, &consts)?;
    if launches.is_empty() {
        return Err(CliError::Config("simulate needs at least one launch".into()));
    }
    config.integration(1.0)?;
    for l in &launches {
        if !(body.dist_to_closure(l.u0) > 0.0) {
            return Err(Error::InsideBody { point: l.u0 }.into());
        }
    }

    let results: Vec<LaunchResult> = pool()?.install(|| {
        launches
            .par_iter()
            .map(|l| -> Result<LaunchResult, CliError> {
                let opts = config.integration(auto_t_end(&body, l, &consts, &quad))?;
                let initial = State::new(0.0, l.u0, l.v0);
                let e0 = energy(&body, &initial, &consts)?;
                let traj = integrate(&body, &initial, &opts, &consts)?;
                let drift = energy_drift(&body, &traj, &consts);
                let bound = applicable_bound(&body, l, &consts, &quad)?.map(|bound| Bound {
                    bound,
                    attained: attained(&body, &traj),
                });
                Ok(LaunchResult {
                    launch: *l,
                    traj,
                    e0,
                    drift,
                    bound,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    // Everything is computed before anything touches the file system.
    let mut csvs = Vec::new();
    if let Some(dir) = &config.outputs.csv_path {
        for (i, r) in results.iter().enumerate() {
            csvs.push((dir.join(csv_file_name(i)), trajectory_csv(&body, &r.traj, &consts)?));
        }
    }

    let mut report = Report::new();
    report
        .line("command", "simulate")
        .constants(&consts)
        .line("body", body.kind())
        .line("mass", num(body.total_mass()));
    report.line("launches", results.len());
    for (i, r) in results.iter().enumerate() {
        report.line("launch", i);
        report.line("u0", r.launch.u0).line("v0", r.launch.v0);
        report.line("initial energy", num(r.e0));
        report.line("termination", r.traj.termination.name());
        match r.traj.termination {
            Termination::CollapsedIntoBody { t_hit } => report.line("t_hit", num(t_hit)),
            Termination::EscapedFarField { t_exit } => report.line("t_exit", num(t_exit)),
            _ => report.line("t_final", num(r.traj.last().t)),
        };
        report.line("samples", r.traj.samples.len());
        report.line("energy drift", format_args!("{:.3e}", r.drift));
        match &r.bound {
            Some(b) => {
                let rho = b.attained / b.bound.radius_bound;
                report.line("eta", num(b.bound.eta));
                report.line("bound", num(b.bound.radius_bound));
                let held = if rho < 1.0 { "yes" } else { "no" };
                let cmp = if rho < 1.0 { "<" } else { ">=" };
                report.line(
                    "bound held",
                    format_args!("{held} (max attained / bound = {rho:.6} {cmp} 1)"),
                );
            }
            None => {
                report.line("bound held", "n/a (launch at or above escape speed)");
            }
        }
        if let Some((path, _)) = csvs.get(i) {
            report.line("csv", path.display());
        }
    }

    for (path, bytes) in &csvs {
        write_atomic(path, bytes)?;
    }
    let text = report.render();
    if let Some(path) = &config.outputs.report_path {
        write_atomic(path, text.as_bytes())?;
    }
    Ok(text)
}
