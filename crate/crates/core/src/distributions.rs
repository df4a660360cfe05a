//! Mass distributions: the body Ω, its density μ, and the geometric queries
//! (distance to the closure, farthest point, enclosing ball) that the
//! confinement bounds and black-hole criteria are built from.
//!
//! Every distribution is immutable once constructed. Constructors validate
//! the invariants (non-negative densities, positive total mass, finite
//! geometry), so every query below is infallible unless noted.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::vector::Vector3;

fn ball_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

fn check_point(name: &str, p: Vector3) -> Result<()> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{name} must be finite, got {p}")))
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{name} must be positive, got {x}")))
    }
}

/// A closed ball `{x : ||x - center|| <= radius}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vector3,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector3, radius: f64) -> Result<Self> {
        check_point("ball center", center)?;
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::BadParameters(format!("ball radius must be >= 0, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.radius)
    }

    pub fn contains(&self, p: Vector3) -> bool {
        self.center.distance(p) <= self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    center: Vector3,
    mass: f64,
}

impl PointMass {
    pub fn new(center: Vector3, mass: f64) -> Result<Self> {
        check_point("center", center)?;
        check_positive("mass", mass)?;
        Ok(Self { center, mass })
    }

    pub fn center(&self) -> Vector3 {
        self.center
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// A ball of constant density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformBall {
    center: Vector3,
    radius: f64,
    mass: f64,
}

impl UniformBall {
    pub fn new(center: Vector3, radius: f64, mass: f64) -> Result<Self> {
        check_point("center", center)?;
        check_positive("radius", radius)?;
        check_positive("mass", mass)?;
        Ok(Self { center, radius, mass })
    }

    pub fn with_density(center: Vector3, radius: f64, density: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        check_positive("density", density)?;
        Self::new(center, radius, density * ball_volume(radius))
    }

    pub fn center(&self) -> Vector3 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn density(&self) -> f64 {
        self.mass / ball_volume(self.radius)
    }

    pub fn as_ball(&self) -> Ball {
        Ball {
            center: self.center,
            radius: self.radius,
        }
    }
}

/// One shell of a [`RadialProfile`]: constant density from the previous
/// shell's outer radius (or the center) out to `outer_radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub outer_radius: f64,
    pub density: f64,
}

/// A spherically symmetric, piecewise-constant density profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    center: Vector3,
    radius: f64,
    shells: Vec<Shell>,
}

impl RadialProfile {
    pub fn new(center: Vector3, radius: f64, shells: Vec<Shell>) -> Result<Self> {
        check_point("center", center)?;
        check_positive("radius", radius)?;
        if shells.is_empty() {
            return Err(Error::InvalidDistribution(
                "radial profile needs at least one shell".into(),
            ));
        }
        let mut inner = 0.0;
        for s in &shells {
            if !(s.outer_radius.is_finite() && s.outer_radius > inner) {
                return Err(Error::InvalidDistribution(format!(
                    "shell radii must be strictly increasing, got {} after {inner}",
                    s.outer_radius
                )));
            }
            if !(s.density.is_finite() && s.density >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "shell density must be >= 0, got {}",
                    s.density
                )));
            }
            inner = s.outer_radius;
        }
        if inner != radius {
            return Err(Error::InvalidDistribution(format!(
                "last shell radius {inner} must equal the body radius {radius}"
            )));
        }
        let profile = Self { center, radius, shells };
        if profile.mass() <= 0.0 {
            return Err(Error::InvalidDistribution("total mass must be positive".into()));
        }
        Ok(profile)
    }

    /// Builds a profile whose radius is the last shell's outer radius.
    pub fn from_shells(center: Vector3, shells: Vec<Shell>) -> Result<Self> {
        let radius = shells.last().map_or(0.0, |s| s.outer_radius);
        Self::new(center, radius, shells)
    }

    pub fn center(&self) -> Vector3 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn mass(&self) -> f64 {
        let mut inner = 0.0_f64;
        let mut mass = 0.0;
        for s in &self.shells {
            mass += 4.0 / 3.0 * PI * (s.outer_radius.powi(3) - inner.powi(3)) * s.density;
            inner = s.outer_radius;
        }
        mass
    }

    /// Density at distance `r` from the center (zero outside the body).
    pub fn density_at(&self, r: f64) -> f64 {
        self.shells
            .iter()
            .find(|s| r <= s.outer_radius)
            .map_or(0.0, |s| s.density)
    }
}

/// Superposition of uniform balls. Overlaps are allowed and their mass adds.
#[derive(Debug, Clone, PartialEq)]
pub struct BallUnion {
    balls: Vec<UniformBall>,
}

impl BallUnion {
    pub fn new(balls: Vec<UniformBall>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::InvalidDistribution("ball union needs at least one ball".into()));
        }
        Ok(Self { balls })
    }

    pub fn balls(&self) -> &[UniformBall] {
        &self.balls
    }

    /// Measure of the union of the member balls.
    ///
    /// Exact when the members are pairwise disjoint. Overlapping members
    /// are handled by integrating the merged chord length along z over a
    /// 1024² midpoint grid in (x, y); relative accuracy is about 1e-5.
    pub fn union_volume(&self) -> f64 {
        let disjoint = self.balls.iter().enumerate().all(|(i, a)| {
            self.balls[i + 1..]
                .iter()
                .all(|b| a.center.distance(b.center) >= a.radius + b.radius)
        });
        if disjoint {
            return self.balls.iter().map(|b| ball_volume(b.radius)).sum();
        }

        const N: usize = 1024;
        let (lo, hi) = self.aabb();
        let dx = (hi.x - lo.x) / N as f64;
        let dy = (hi.y - lo.y) / N as f64;
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(self.balls.len());
        let mut volume = 0.0;
        for i in 0..N {
            let x = lo.x + (i as f64 + 0.5) * dx;
            for j in 0..N {
                let y = lo.y + (j as f64 + 0.5) * dy;
                intervals.clear();
                for b in &self.balls {
                    let rho2 = (x - b.center.x).powi(2) + (y - b.center.y).powi(2);
                    let h2 = b.radius * b.radius - rho2;
                    if h2 > 0.0 {
                        let h = h2.sqrt();
                        intervals.push((b.center.z - h, b.center.z + h));
                    }
                }
                volume += merged_length(&mut intervals) * dx * dy;
            }
        }
        volume
    }

    fn aabb(&self) -> (Vector3, Vector3) {
        let mut lo = Vector3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for b in &self.balls {
            let r = Vector3::new(b.radius, b.radius, b.radius);
            lo = lo.component_min(b.center - r);
            hi = hi.component_max(b.center + r);
        }
        (lo, hi)
    }
}

fn merged_length(intervals: &mut [(f64, f64)]) -> f64 {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for &(a, b) in intervals.iter() {
        current = match current {
            Some((s, e)) if a <= e => Some((s, e.max(b))),
            Some((s, e)) => {
                total += e - s;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((s, e)) = current {
        total += e - s;
    }
    total
}

/// A regular grid of cubic cells with piecewise-constant density.
///
/// Cell `(i, j, k)` spans `origin + cell_size * [i, i+1] x [j, j+1] x [k, k+1]`
/// and its density is stored at `i + nx * (j + ny * k)`. The closure of the
/// support is the union of the closed boxes of cells with positive density.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    origin: Vector3,
    cell_size: f64,
    dims: [usize; 3],
    densities: Vec<f64>,
}

impl VoxelGrid {
    pub fn new(origin: Vector3, cell_size: f64, dims: [usize; 3], densities: Vec<f64>) -> Result<Self> {
        check_point("origin", origin)?;
        check_positive("cell_size", cell_size)?;
        if dims.contains(&0) {
            return Err(Error::InvalidDistribution(format!(
                "grid dims must be positive, got {dims:?}"
            )));
        }
        let n = dims[0] * dims[1] * dims[2];
        if densities.len() != n {
            return Err(Error::InvalidDistribution(format!(
                "expected {n} densities for dims {dims:?}, got {}",
                densities.len()
            )));
        }
        if let Some(d) = densities.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "cell density must be >= 0, got {d}"
            )));
        }
        if !densities.iter().any(|&d| d > 0.0) {
            return Err(Error::InvalidDistribution("total mass must be positive".into()));
        }
        Ok(Self {
            origin,
            cell_size,
            dims,
            densities,
        })
    }

    pub fn origin(&self) -> Vector3 {
        self.origin
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn density(&self, i: usize, j: usize, k: usize) -> f64 {
        self.densities[i + self.dims[0] * (j + self.dims[1] * k)]
    }

    /// Occupied cells as `(lower corner, density)`, in storage order.
    pub fn occupied_cells(&self) -> impl Iterator<Item = (Vector3, f64)> + '_ {
        let [nx, ny, _] = self.dims;
        let h = self.cell_size;
        self.densities
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0.0)
            .map(move |(idx, &d)| {
                let i = idx % nx;
                let j = (idx / nx) % ny;
                let k = idx / (nx * ny);
                let corner = self.origin + Vector3::new(i as f64, j as f64, k as f64) * h;
                (corner, d)
            })
    }

    pub fn occupied_count(&self) -> usize {
        self.densities.iter().filter(|&&d| d > 0.0).count()
    }

    pub fn mass(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.cell_size.powi(3)
    }

    fn occupied_aabb(&self) -> (Vector3, Vector3) {
        let h = Vector3::new(self.cell_size, self.cell_size, self.cell_size);
        let mut lo = Vector3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for (corner, _) in self.occupied_cells() {
            lo = lo.component_min(corner);
            hi = hi.component_max(corner + h);
        }
        (lo, hi)
    }
}

fn box_distance(lo: Vector3, hi: Vector3, u: Vector3) -> f64 {
    let gap = |l: f64, h: f64, x: f64| (l - x).max(0.0).max(x - h);
    Vector3::new(gap(lo.x, hi.x, u.x), gap(lo.y, hi.y, u.y), gap(lo.z, hi.z, u.z)).norm()
}

fn box_max_distance(lo: Vector3, hi: Vector3, u: Vector3) -> f64 {
    let far = |l: f64, h: f64, x: f64| (x - l).abs().max((x - h).abs());
    Vector3::new(far(lo.x, hi.x, u.x), far(lo.y, hi.y, u.y), far(lo.z, hi.z, u.z)).norm()
}

/// The body Ω with its density μ.
#[derive(Debug, Clone, PartialEq)]
pub enum MassDistribution {
    PointMass(PointMass),
    UniformBall(UniformBall),
    RadialProfile(RadialProfile),
    BallUnion(BallUnion),
    VoxelGrid(VoxelGrid),
}

impl From<PointMass> for MassDistribution {
    fn from(p: PointMass) -> Self {
        Self::PointMass(p)
    }
}

impl From<UniformBall> for MassDistribution {
    fn from(b: UniformBall) -> Self {
        Self::UniformBall(b)
    }
}

impl From<RadialProfile> for MassDistribution {
    fn from(p: RadialProfile) -> Self {
        Self::RadialProfile(p)
    }
}

impl From<BallUnion> for MassDistribution {
    fn from(u: BallUnion) -> Self {
        Self::BallUnion(u)
    }
}

impl From<VoxelGrid> for MassDistribution {
    fn from(g: VoxelGrid) -> Self {
        Self::VoxelGrid(g)
    }
}

impl MassDistribution {
    /// M = ∫_Ω μ dx.
    pub fn total_mass(&self) -> f64 {
        match self {
            Self::PointMass(p) => p.mass,
            Self::UniformBall(b) => b.mass,
            Self::RadialProfile(p) => p.mass(),
            Self::BallUnion(u) => u.balls.iter().map(|b| b.mass).sum(),
            Self::VoxelGrid(g) => g.mass(),
        }
    }

    /// Center and radius for spherically symmetric bodies (including the
    /// radius-0 point mass).
    pub fn spherical(&self) -> Option<(Vector3, f64)> {
        match self {
            Self::PointMass(p) => Some((p.center, 0.0)),
            Self::UniformBall(b) => Some((b.center, b.radius)),
            Self::RadialProfile(p) => Some((p.center, p.radius)),
            Self::BallUnion(_) | Self::VoxelGrid(_) => None,
        }
    }

    /// Euclidean distance from `u` to the closure Ω̄; zero iff `u ∈ Ω̄`.
    pub fn dist_to_closure(&self, u: Vector3) -> f64 {
        match self {
            Self::PointMass(p) => u.distance(p.center),
            Self::UniformBall(b) => (u.distance(b.center) - b.radius).max(0.0),
            Self::RadialProfile(p) => (u.distance(p.center) - p.radius).max(0.0),
            Self::BallUnion(un) => un
                .balls
                .iter()
                .map(|b| (u.distance(b.center) - b.radius).max(0.0))
                .fold(f64::INFINITY, f64::min),
            Self::VoxelGrid(g) => {
                let h = Vector3::new(g.cell_size, g.cell_size, g.cell_size);
                g.occupied_cells()
                    .map(|(lo, _)| box_distance(lo, lo + h, u))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// max over x ∈ Ω̄ of ||u − x||.
    pub fn max_dist_over_closure(&self, u: Vector3) -> f64 {
        match self {
            Self::PointMass(p) => u.distance(p.center),
            Self::UniformBall(b) => u.distance(b.center) + b.radius,
            Self::RadialProfile(p) => u.distance(p.center) + p.radius,
            Self::BallUnion(un) => un
                .balls
                .iter()
                .map(|b| u.distance(b.center) + b.radius)
                .fold(0.0, f64::max),
            Self::VoxelGrid(g) => {
                let h = Vector3::new(g.cell_size, g.cell_size, g.cell_size);
                g.occupied_cells()
                    .map(|(lo, _)| box_max_distance(lo, lo + h, u))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// A closed ball containing Ω̄, grown by `padding`.
    ///
    /// Spherical bodies return their own ball. Unions and grids are centered
    /// on their axis-aligned bounding box, which keeps the radius within √3
    /// of the minimal enclosing radius.
    pub fn bounding_ball(&self, padding: f64) -> Result<Ball> {
        if !(padding.is_finite() && padding >= 0.0) {
            return Err(Error::BadParameters(format!("padding must be >= 0, got {padding}")));
        }
        let center = match self {
            Self::PointMass(_) | Self::UniformBall(_) | Self::RadialProfile(_) => {
                let (c, r) = self.spherical().expect("spherical variant");
                return Ok(Ball {
                    center: c,
                    radius: r + padding,
                });
            }
            Self::BallUnion(u) => {
                let (lo, hi) = u.aabb();
                (lo + hi) * 0.5
            }
            Self::VoxelGrid(g) => {
                let (lo, hi) = g.occupied_aabb();
                (lo + hi) * 0.5
            }
        };
        Ok(Ball {
            center,
            radius: self.max_dist_over_closure(center) + padding,
        })
    }

    /// |Ω|, the measure of the support.
    pub fn volume(&self) -> Result<f64> {
        match self {
            Self::PointMass(_) => Err(Error::DegenerateSupport),
            Self::UniformBall(b) => Ok(ball_volume(b.radius)),
            Self::RadialProfile(p) => Ok(ball_volume(p.radius)),
            Self::BallUnion(u) => Ok(u.union_volume()),
            Self::VoxelGrid(g) => Ok(g.occupied_count() as f64 * g.cell_size.powi(3)),
        }
    }

    /// d = M / |Ω|.
    pub fn average_density(&self) -> Result<f64> {
        Ok(self.total_mass() / self.volume()?)
    }

    /// The same distribution shifted rigidly by `shift`.
    pub fn translated(&self, shift: Vector3) -> Self {
        match self {
            Self::PointMass(p) => Self::PointMass(PointMass {
                center: p.center + shift,
                ..*p
            }),
            Self::UniformBall(b) => Self::UniformBall(UniformBall {
                center: b.center + shift,
                ..*b
            }),
            Self::RadialProfile(p) => Self::RadialProfile(RadialProfile {
                center: p.center + shift,
                ..p.clone()
            }),
            Self::BallUnion(u) => Self::BallUnion(BallUnion {
                balls: u
                    .balls
                    .iter()
                    .map(|b| UniformBall {
                        center: b.center + shift,
                        ..*b
                    })
                    .collect(),
            }),
            Self::VoxelGrid(g) => Self::VoxelGrid(VoxelGrid {
                origin: g.origin + shift,
                ..g.clone()
            }),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::PointMass(_) => "point_mass",
            Self::UniformBall(_) => "uniform_ball",
            Self::RadialProfile(_) => "radial_profile",
            Self::BallUnion(_) => "ball_union",
            Self::VoxelGrid(_) => "voxel_grid",
        }
    }
}
