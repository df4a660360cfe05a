//! `verify`: seeded random sub-escape launches, each checked sample by
//! sample against its confinement bound.

use std::path::Path;

use horizon_core::dynamics::integrate;
use horizon_core::potential::potential;
use horizon_core::{Error, MassDistribution, PhysicalConstants, QuadratureOptions, State, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Launch, ScenarioConfig};
use crate::output::{write_atomic, Report};
use crate::simulate::{applicable_bound, attained, auto_t_end};
use crate::{pool, CliError};

/// Relative slack allowed over the bound: integration error only.
const SPHERICAL_SLACK: f64 = 1e-6;
const GENERAL_SLACK: f64 = 1e-5;

fn unit_direction(rng: &mut impl Rng) -> Vector3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vector3::new(s * phi.cos(), s * phi.sin(), z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Verdict {
    Held(f64),
    Violated(f64),
    OutOfHypothesis,
}

fn random_launches(
    body: &MassDistribution,
    launch_radius: f64,
    n: usize,
    seed: u64,
    consts: &PhysicalConstants,
    quad: &QuadratureOptions,
) -> Result<Vec<Launch>, CliError> {
    let center = match body.spherical() {
        Some((c, _)) => c,
        None => body.bounding_ball(0.0)?.center,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u0 = center + unit_direction(&mut rng) * launch_radius;
            let escape = (2.0 * potential(body, u0, consts, quad)?).sqrt();
            // Uniform in (0, 0.99·escape).
            let speed = loop {
                let s = rng.gen_range(0.0..0.99) * escape;
                if s > 0.0 {
                    break s;
                }
            };
            Ok(Launch {
                u0,
                v0: unit_direction(&mut rng) * speed,
            })
        })
        .collect()
}

pub fn run(config_path: &Path, sweeps: usize, seed: u64) -> Result<(String, bool), CliError> {
    if sweeps == 0 {
        return Err(CliError::Config("--sweeps must be at least 1".into()));
    }
    let config = ScenarioConfig::load(config_path)?;
    let consts = config.constants()?;
    let body = config.body()?;
    let quad = config.quadrature()?;
    let configured = config.launches(&body, &consts)?;
    config.integration(1.0)?;

    let bb = body.bounding_ball(0.0)?;
    let default_radius = if bb.radius > 0.0 { 2.0 * bb.radius } else { 1.0 };
    let launch_radius = config.verify.launch_radius.unwrap_or(default_radius);
    let reach = match body.spherical() {
        Some((_, r)) => r,
        None => bb.radius,
    };
    if !(launch_radius.is_finite() && launch_radius > reach) {
        return Err(CliError::Config(format!(
            "verify.launch_radius must exceed {reach} so launches start outside the body"
        )));
    }
    for l in &configured {
        if !(body.dist_to_closure(l.u0) > 0.0) {
            return Err(Error::InsideBody { point: l.u0 }.into());
        }
    }

    let mut launches = configured.clone();
    launches.extend(random_launches(&body, launch_radius, sweeps, seed, &consts, &quad)?);
    let slack = if body.spherical().is_some() {
        SPHERICAL_SLACK
    } else {
        GENERAL_SLACK
    };

    let verdicts: Vec<Verdict> = pool()?.install(|| {
        launches
            .par_iter()
            .map(|l| -> Result<Verdict, CliError> {
                let Some(bound) = applicable_bound(&body, l, &consts, &quad)? else {
                    return Ok(Verdict::OutOfHypothesis);
                };
                let opts = config.integration(auto_t_end(&body, l, &consts, &quad))?;
                let traj = integrate(&body, &State::new(0.0, l.u0, l.v0), &opts, &consts)?;
                let rho = attained(&body, &traj) / bound.radius_bound;
                Ok(if rho <= 1.0 + slack {
                    Verdict::Held(rho)
                } else {
                    Verdict::Violated(rho)
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut report = Report::new();
    report
        .line("command", "verify")
        .line("seed", seed)
        .line("sweeps", sweeps)
        .constants(&consts);
    report
        .line("body", body.kind())
        .line("launch radius", format_args!("{launch_radius:e}"));
    report.line("configured launches", configured.len());
    let (mut held, mut violated, mut skipped, mut worst) = (0, 0, 0, 0.0f64);
    for (i, v) in verdicts.iter().enumerate() {
        let origin = if i < configured.len() { "config" } else { "random" };
        let line = match v {
            Verdict::Held(rho) => {
                held += 1;
                worst = worst.max(*rho);
                format!("{origin} held (ratio {rho:.9})")
            }
            Verdict::Violated(rho) => {
                violated += 1;
                worst = worst.max(*rho);
                format!("{origin} VIOLATED (ratio {rho:.9})")
            }
            Verdict::OutOfHypothesis => {
                skipped += 1;
                format!("{origin} out-of-hypothesis (at or above escape speed)")
            }
        };
        report.line(&format!("launch {i}"), line);
    }
    report
        .line("held", held)
        .line("violated", violated)
        .line("out-of-hypothesis", skipped);
    report.line("max ratio", format_args!("{worst:.9}"));
    let pass = violated == 0;
    report.line("result", if pass { "PASS" } else { "FAIL" });

    let text = report.render();
    if let Some(path) = &config.outputs.report_path {
        write_atomic(path, text.as_bytes())?;
    }
    Ok((text, pass))
}
