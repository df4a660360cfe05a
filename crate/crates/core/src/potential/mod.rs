//! The specific potential U(u) = ∫_Ω Gμ(x)/||u − x|| dx and the
//! acceleration field a(u) = ∇U = −∫_Ω Gμ(x)(u − x)/||u − x||³ dx.
//!
//! Spherical bodies use the shell theorem (GM/||u − c||). Ball unions are
//! the superposition of their members' closed forms. Voxel grids are summed
//! cell by cell, either with the exact box formulas ([`VoxelMethod::Exact`],
//! the default) or with adaptive octree quadrature
//! ([`VoxelMethod::Adaptive`]).
//!
//! All public entry points evaluate exterior points only and return
//! [`Error::InsideBody`] otherwise.

mod prism;
mod quadrature;

use crate::constants::PhysicalConstants;
use crate::distributions::{MassDistribution, VoxelGrid};
use crate::error::{Error, Result};
use crate::vector::Vector3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VoxelMethod {
    /// Closed-form box integrals, Gauss-Legendre for far cells.
    #[default]
    Exact,
    /// Adaptive 2-point Gauss octree quadrature to `rel_tol`.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    /// Maximum octree depth below a voxel cell.
    pub max_subdivisions: u32,
    pub voxel_method: VoxelMethod,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_subdivisions: 12,
            voxel_method: VoxelMethod::Exact,
        }
    }
}

impl QuadratureOptions {
    pub fn adaptive() -> Self {
        Self {
            voxel_method: VoxelMethod::Adaptive,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::BadParameters(format!(
                "rel_tol must be in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::BadParameters("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

fn exterior(dist: &MassDistribution, u: Vector3) -> Result<f64> {
    let delta = dist.dist_to_closure(u);
    if delta > 0.0 && u.is_finite() {
        Ok(delta)
    } else {
        Err(Error::InsideBody { point: u })
    }
}

fn point_potential(g: f64, mass: f64, center: Vector3, u: Vector3) -> f64 {
    g * mass / u.distance(center)
}

fn point_field(g: f64, mass: f64, center: Vector3, u: Vector3) -> Vector3 {
    let d = u - center;
    let r2 = d.norm_squared();
    d * (-g * mass / (r2 * r2.sqrt()))
}

fn voxel_exact_potential(grid: &VoxelGrid, u: Vector3) -> f64 {
    grid.occupied_cells()
        .map(|(corner, rho)| rho * prism::cube_inverse_distance(corner, grid.cell_size(), u))
        .sum()
}

fn voxel_exact_field(grid: &VoxelGrid, u: Vector3) -> Vector3 {
    grid.occupied_cells().fold(Vector3::ZERO, |acc, (corner, rho)| {
        acc + prism::cube_attraction(corner, grid.cell_size(), u) * rho
    })
}

/// U(u) without the exterior check.
///
/// Spherical bodies and ball unions use their exterior closed forms, which
/// continue the exterior potential smoothly into the body; voxel grids use
/// the exact box integrals, valid everywhere except on cell corners. The
/// integrator relies on this to evaluate stages that overshoot the surface.
pub(crate) fn potential_extended(dist: &MassDistribution, u: Vector3, g: f64) -> f64 {
    match dist {
        MassDistribution::PointMass(p) => point_potential(g, p.mass(), p.center(), u),
        MassDistribution::UniformBall(b) => point_potential(g, b.mass(), b.center(), u),
        MassDistribution::RadialProfile(p) => point_potential(g, p.mass(), p.center(), u),
        MassDistribution::BallUnion(un) => un
            .balls()
            .iter()
            .map(|b| point_potential(g, b.mass(), b.center(), u))
            .sum(),
        MassDistribution::VoxelGrid(grid) => g * voxel_exact_potential(grid, u),
    }
}

/// a(u) without the exterior check; see [`potential_extended`].
pub(crate) fn field_extended(dist: &MassDistribution, u: Vector3, g: f64) -> Vector3 {
    match dist {
        MassDistribution::PointMass(p) => point_field(g, p.mass(), p.center(), u),
        MassDistribution::UniformBall(b) => point_field(g, b.mass(), b.center(), u),
        MassDistribution::RadialProfile(p) => point_field(g, p.mass(), p.center(), u),
        MassDistribution::BallUnion(un) => un
            .balls()
            .iter()
            .fold(Vector3::ZERO, |acc, b| acc + point_field(g, b.mass(), b.center(), u)),
        MassDistribution::VoxelGrid(grid) => voxel_exact_field(grid, u) * g,
    }
}

/// The specific potential U(u) > 0 at an exterior point, in J/kg.
pub fn potential(
    dist: &MassDistribution,
    u: Vector3,
    consts: &PhysicalConstants,
    opts: &QuadratureOptions,
) -> Result<f64> {
    exterior(dist, u)?;
    match (dist, opts.voxel_method) {
        (MassDistribution::VoxelGrid(grid), VoxelMethod::Adaptive) => {
            opts.validate()?;
            let [v] = quadrature::integrate(grid, opts, |x| [1.0 / x.distance(u)])?;
            Ok(consts.g * v)
        }
        _ => Ok(potential_extended(dist, u, consts.g)),
    }
}

/// The gravitational acceleration at an exterior point, in m/s².
pub fn field(
    dist: &MassDistribution,
    u: Vector3,
    consts: &PhysicalConstants,
    opts: &QuadratureOptions,
) -> Result<Vector3> {
    exterior(dist, u)?;
    match (dist, opts.voxel_method) {
        (MassDistribution::VoxelGrid(grid), VoxelMethod::Adaptive) => {
            opts.validate()?;
            let a = quadrature::integrate(grid, opts, |x| {
                let d = x - u;
                let r2 = d.norm_squared();
                (d / (r2 * r2.sqrt())).to_array()
            })?;
            Ok(Vector3::from_array(a) * consts.g)
        }
        _ => Ok(field_extended(dist, u, consts.g)),
    }
}

/// `(GM / max_dist_over_closure(u), GM / dist_to_closure(u))`, which
/// brackets U(u) at every exterior point.
pub fn potential_bounds(dist: &MassDistribution, u: Vector3, consts: &PhysicalConstants) -> Result<(f64, f64)> {
    let delta = exterior(dist, u)?;
    let gm = consts.g * dist.total_mass();
    Ok((gm / dist.max_dist_over_closure(u), gm / delta))
}
