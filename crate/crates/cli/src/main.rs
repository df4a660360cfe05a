//! `newton-horizon`: scenario-driven front end for the horizon-core library.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure (including a failed
//! verify sweep), 2 configuration error, 3 geometry error, 4 criterion
//! misuse.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use horizon_core::theorems::{classify_black_hole, cosmology_report};
use horizon_core::{Ball, Criterion, PhysicalConstants, Vector3};

use config::ScenarioConfig;
use output::{num, write_atomic, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] horizon_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use horizon_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::BadParameters(_) | E::InvalidDistribution(_)) => 2,
            CliError::Core(E::InsideBody { .. } | E::NotContaining { .. } | E::DegenerateSupport) => 3,
            CliError::Core(E::WrongShape(_)) => 4,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

/// Thread pool capped by NEWTON_HORIZON_THREADS when set.
pub fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("NEWTON_HORIZON_THREADS") {
        let n: usize =
            v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::Config(format!("NEWTON_HORIZON_THREADS must be a positive integer, got {v:?}"))
            })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Io(e.to_string()))
}

#[derive(Parser)]
#[command(
    name = "newton-horizon",
    version,
    about = "Newtonian dark bodies: trajectories, confinement and light trapping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured launches; writes CSVs and a report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Apply a light-trapping criterion to a ball containing the body.
    Classify {
        #[arg(long)]
        config: PathBuf,
        /// One of max-pair-distance, diameter, density-ball,
        /// density-symmetric, density-asymmetric, or "all".
        #[arg(long)]
        criterion: String,
        /// Ball center as x,y,z. Defaults to the bounding-ball center.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        ball_center: Option<Vec<f64>>,
        /// Ball radius. Defaults to the smallest radius containing the body
        /// plus --padding.
        #[arg(long)]
        ball_radius: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        padding: f64,
    },
    /// Compare a cosmological density with the light-trapping threshold.
    Cosmology {
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        density: f64,
        /// Override the gravitational constant.
        #[arg(long = "G")]
        g: Option<f64>,
        /// Override the speed of light.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Seeded random sub-escape launches checked against the confinement bound.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 200)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn classify(
    config_path: &std::path::Path,
    criterion: &str,
    center: Option<Vec<f64>>,
    radius: Option<f64>,
    padding: f64,
) -> Result<String, CliError> {
    let config = ScenarioConfig::load(config_path)?;
    let consts = config.constants()?;
    let body = config.body()?;
    let criteria: Vec<Criterion> = if criterion == "all" {
        Criterion::ALL.to_vec()
    } else {
        vec![criterion
            .parse()
            .map_err(|e: horizon_core::Error| CliError::Config(e.to_string()))?]
    };
    if !(padding.is_finite() && padding >= 0.0) {
        return Err(CliError::Config("--padding must be non-negative".into()));
    }
    let ball = match (center, radius) {
        (None, None) => body.bounding_ball(padding)?,
        (c, r) => {
            let center = match c {
                Some(v) if v.len() == 3 => Vector3::new(v[0], v[1], v[2]),
                Some(_) => return Err(CliError::Config("--ball-center takes x,y,z".into())),
                None => body.bounding_ball(0.0)?.center,
            };
            let radius = r.unwrap_or_else(|| body.max_dist_over_closure(center) + padding);
            Ball::new(center, radius).map_err(|e| CliError::Config(e.to_string()))?
        }
    };

    let mut report = Report::new();
    report
        .line("command", "classify")
        .constants(&consts)
        .line("body", body.kind());
    report.line("mass", num(body.total_mass()));
    report
        .line("ball center", ball.center)
        .line("ball radius", num(ball.radius));
    for c in criteria {
        let v = classify_black_hole(&body, &ball, c, &consts)?;
        report.line("criterion", c);
        let label = if v.is_black_hole {
            "BLACK HOLE"
        } else {
            "not a black hole"
        };
        report.line("verdict", format_args!("{label} (margin {:.2})", v.margin));
        report.line("margin", num(v.margin));
        report
            .line("attained", num(v.attained))
            .line("required", num(v.required));
        match v.photon_confinement_radius {
            Some(r) => report.line("photon_confinement_radius", num(r)),
            None => report.line("photon_confinement_radius", "none"),
        };
    }
    let text = report.render();
    if let Some(path) = &config.outputs.report_path {
        write_atomic(path, text.as_bytes())?;
    }
    Ok(text)
}

fn cosmology(radius: f64, density: f64, g: Option<f64>, c: Option<f64>) -> Result<String, CliError> {
    let d = PhysicalConstants::default();
    let consts =
        PhysicalConstants::new(g.unwrap_or(d.g), c.unwrap_or(d.c)).map_err(|e| CliError::Config(e.to_string()))?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::Config("--radius must be positive".into()));
    }
    if !(density.is_finite() && density >= 0.0) {
        return Err(CliError::Config("--density must be non-negative".into()));
    }
    let rep = cosmology_report(radius, density, &consts)?;
    let mut report = Report::new();
    report.line("command", "cosmology").constants(&consts);
    report
        .line("radius", format_args!("{radius:e}"))
        .line("density", format_args!("{density:e}"));
    report.line("K", format_args!("{:.6e}", rep.k));
    report.line("threshold", format_args!("{:.6e}", rep.threshold));
    report.line("ratio", format_args!("{:.6e}", rep.ratio));
    report.line("verdict", if rep.verdict { "BLACK HOLE" } else { "not a black hole" });
    Ok(report.render())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config } => simulate::run(&config).map(|t| (t, true)),
        Command::Classify {
            config,
            criterion,
            ball_center,
            ball_radius,
            padding,
        } => classify(&config, &criterion, ball_center, ball_radius, padding).map(|t| (t, true)),
        Command::Cosmology { radius, density, g, c } => cosmology(radius, density, g, c).map(|t| (t, true)),
        Command::Verify { config, sweeps, seed } => verify::run(&config, sweeps, seed),
    };
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
