//! Scenario files (TOML) and their conversion into core types.

use std::path::{Path, PathBuf};

use horizon_core::{
    BallUnion, IntegrationOptions, MassDistribution, PhysicalConstants, PointMass, QuadratureOptions, RadialProfile,
    Shell, UniformBall, Vector3, VoxelGrid, VoxelMethod,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub constants: ConstantsConfig,
    pub body: BodyConfig,
    #[serde(default)]
    pub launches: Vec<LaunchConfig>,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    #[serde(rename = "G")]
    pub g: Option<f64>,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyConfig {
    PointMass {
        center: [f64; 3],
        mass: f64,
    },
    UniformBall {
        center: [f64; 3],
        radius: f64,
        mass: Option<f64>,
        density: Option<f64>,
    },
    RadialProfile {
        center: [f64; 3],
        shells: Vec<ShellConfig>,
    },
    BallUnion {
        balls: Vec<MemberConfig>,
    },
    VoxelGrid {
        origin: [f64; 3],
        cell_size: f64,
        dims: [usize; 3],
        /// Flattened with x fastest: index i + nx·(j + ny·k).
        densities: Vec<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellConfig {
    pub outer_radius: f64,
    pub density: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberConfig {
    pub center: [f64; 3],
    pub radius: f64,
    pub mass: Option<f64>,
    pub density: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum VelocitySpec {
    Vector([f64; 3]),
    Keyword(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaunchConfig {
    pub u0: [f64; 3],
    /// A velocity vector, or the keyword "photon_radial".
    pub v0: Option<VelocitySpec>,
    pub speed: Option<f64>,
    pub direction: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub t_end: Option<f64>,
    pub escape_radius_factor: Option<f64>,
    pub max_steps: Option<usize>,
    pub max_step: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<u32>,
    /// "exact" or "adaptive".
    pub voxel_method: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Distance of random launch points from the bounding-ball center.
    /// Defaults to twice the bounding radius.
    pub launch_radius: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    /// Directory receiving launch_000.csv, launch_001.csv, ...
    pub csv_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
}

/// A launch resolved against a body and constants.
#[derive(Debug, Clone, Copy)]
pub struct Launch {
    pub u0: Vector3,
    pub v0: Vector3,
}

fn vec3(a: [f64; 3]) -> Vector3 {
    Vector3::from_array(a)
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::parse(&text)?;
        // Relative output paths are taken from the config file's directory.
        if let Some(dir) = path.parent() {
            let outputs = &mut config.outputs;
            for p in [&mut outputs.csv_path, &mut outputs.report_path].into_iter().flatten() {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| config_error(e.to_string()))
    }

    pub fn constants(&self) -> Result<PhysicalConstants, CliError> {
        let d = PhysicalConstants::default();
        PhysicalConstants::new(self.constants.g.unwrap_or(d.g), self.constants.c.unwrap_or(d.c))
            .map_err(|e| config_error(e.to_string()))
    }

    pub fn body(&self) -> Result<MassDistribution, CliError> {
        let invalid = |e: horizon_core::Error| config_error(format!("body: {e}"));
        Ok(match &self.body {
            BodyConfig::PointMass { center, mass } => PointMass::new(vec3(*center), *mass).map_err(invalid)?.into(),
            BodyConfig::UniformBall {
                center,
                radius,
                mass,
                density,
            } => uniform_ball(*center, *radius, *mass, *density)?.into(),
            BodyConfig::RadialProfile { center, shells } => RadialProfile::from_shells(
                vec3(*center),
                shells
                    .iter()
                    .map(|s| Shell {
                        outer_radius: s.outer_radius,
                        density: s.density,
                    })
                    .collect(),
            )
            .map_err(invalid)?
            .into(),
            BodyConfig::BallUnion { balls } => BallUnion::new(
                balls
                    .iter()
                    .map(|b| uniform_ball(b.center, b.radius, b.mass, b.density))
                    .collect::<Result<_, _>>()?,
            )
            .map_err(invalid)?
            .into(),
            BodyConfig::VoxelGrid {
                origin,
                cell_size,
                dims,
                densities,
            } => VoxelGrid::new(vec3(*origin), *cell_size, *dims, densities.clone())
                .map_err(invalid)?
                .into(),
        })
    }

    /// Integration options with `t_end` left at `fallback_t_end` when the
    /// file does not set it.
    pub fn integration(&self, fallback_t_end: f64) -> Result<IntegrationOptions, CliError> {
        let d = IntegrationOptions::default();
        let c = &self.integration;
        let opts = IntegrationOptions {
            rel_tol: c.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: c.abs_tol.unwrap_or(d.abs_tol),
            t_end: c.t_end.unwrap_or(fallback_t_end),
            escape_radius_factor: c.escape_radius_factor.unwrap_or(d.escape_radius_factor),
            max_steps: c.max_steps.unwrap_or(d.max_steps),
            max_step: c.max_step.unwrap_or(d.max_step),
        };
        opts.validate().map_err(|e| config_error(format!("integration: {e}")))?;
        Ok(opts)
    }

    pub fn quadrature(&self) -> Result<QuadratureOptions, CliError> {
        let d = QuadratureOptions::default();
        let c = &self.quadrature;
        let voxel_method = match c.voxel_method.as_deref() {
            None | Some("exact") => VoxelMethod::Exact,
            Some("adaptive") => VoxelMethod::Adaptive,
            Some(other) => return Err(config_error(format!("quadrature: unknown voxel_method {other:?}"))),
        };
        let opts = QuadratureOptions {
            rel_tol: c.rel_tol.unwrap_or(d.rel_tol),
            max_subdivisions: c.max_subdivisions.unwrap_or(d.max_subdivisions),
            voxel_method,
        };
        opts.validate().map_err(|e| config_error(format!("quadrature: {e}")))?;
        Ok(opts)
    }

    /// Resolves every launch. Photon launches leave at speed c, directed
    /// away from the body's center (bounding-ball center for non-spherical
    /// bodies).
    pub fn launches(&self, body: &MassDistribution, consts: &PhysicalConstants) -> Result<Vec<Launch>, CliError> {
        self.launches
            .iter()
            .enumerate()
            .map(|(i, l)| resolve_launch(i, l, body, consts))
            .collect()
    }
}

fn uniform_ball(
    center: [f64; 3],
    radius: f64,
    mass: Option<f64>,
    density: Option<f64>,
) -> Result<UniformBall, CliError> {
    let ball = match (mass, density) {
        (Some(m), None) => UniformBall::new(vec3(center), radius, m),
        (None, Some(d)) => UniformBall::with_density(vec3(center), radius, d),
        _ => return Err(config_error("uniform ball needs exactly one of mass or density")),
    };
    ball.map_err(|e| config_error(format!("body: {e}")))
}

fn resolve_launch(
    i: usize,
    l: &LaunchConfig,
    body: &MassDistribution,
    consts: &PhysicalConstants,
) -> Result<Launch, CliError> {
    let u0 = vec3(l.u0);
    let err = |msg: &str| config_error(format!("launch {i}: {msg}"));
    if !u0.is_finite() {
        return Err(err("u0 must be finite"));
    }
    let v0 = match (&l.v0, l.speed, l.direction) {
        (Some(VelocitySpec::Vector(v)), None, None) => vec3(*v),
        (Some(VelocitySpec::Keyword(k)), None, None) if k == "photon_radial" => {
            let center = match body.spherical() {
                Some((c, _)) => c,
                None => body.bounding_ball(0.0).map_err(|e| err(&e.to_string()))?.center,
            };
            let n = (u0 - center)
                .normalized()
                .ok_or_else(|| err("photon_radial needs u0 away from the body center"))?;
            n * consts.c
        }
        (Some(VelocitySpec::Keyword(k)), None, None) => return Err(err(&format!("unknown velocity keyword {k:?}"))),
        (None, Some(speed), Some(dir)) => {
            if !(speed.is_finite() && speed >= 0.0) {
                return Err(err("speed must be finite and non-negative"));
            }
            let n = vec3(dir).normalized().ok_or_else(|| err("direction must be nonzero"))?;
            n * speed
        }
        _ => return Err(err("give exactly one of v0 or speed + direction")),
    };
    if !v0.is_finite() {
        return Err(err("v0 must be finite"));
    }
    Ok(Launch { u0, v0 })
}
