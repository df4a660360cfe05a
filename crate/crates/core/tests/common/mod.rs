#![allow(dead_code)]

use horizon_core::{BallUnion, MassDistribution, PointMass, RadialProfile, Shell, UniformBall, Vector3, VoxelGrid};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn v(x: f64, y: f64, z: f64) -> Vector3 {
    Vector3::new(x, y, z)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_direction(rng: &mut impl Rng) -> Vector3 {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    v(s * phi.cos(), s * phi.sin(), z)
}

pub fn two_ball_union() -> MassDistribution {
    BallUnion::new(vec![
        UniformBall::new(v(0.0, 0.0, 0.0), 1.0, 1.0).unwrap(),
        UniformBall::new(v(4.0, 0.0, 0.0), 1.0, 1.0).unwrap(),
    ])
    .unwrap()
    .into()
}

/// 4×4×4 grid of unit cells with a deterministic, uneven density pattern
/// and two empty cells.
pub fn voxel_4x4x4() -> MassDistribution {
    let mut densities = Vec::with_capacity(64);
    for k in 0..4 {
        for j in 0..4 {
            for i in 0..4 {
                densities.push(1.0 + 0.25 * ((i + 2 * j + 3 * k) % 5) as f64);
            }
        }
    }
    densities[5] = 0.0;
    densities[42] = 0.0;
    VoxelGrid::new(v(-2.0, -2.0, -2.0), 1.0, [4, 4, 4], densities)
        .unwrap()
        .into()
}

pub fn radial_profile() -> MassDistribution {
    RadialProfile::from_shells(
        v(0.3, -0.2, 0.1),
        vec![
            Shell {
                outer_radius: 0.4,
                density: 5.0,
            },
            Shell {
                outer_radius: 0.9,
                density: 2.0,
            },
            Shell {
                outer_radius: 1.5,
                density: 0.5,
            },
        ],
    )
    .unwrap()
    .into()
}

/// One of each variant.
pub fn zoo() -> Vec<MassDistribution> {
    vec![
        PointMass::new(v(0.5, 0.0, -0.5), 2.0).unwrap().into(),
        UniformBall::new(v(-0.3, 0.2, 0.0), 1.2, 3.0).unwrap().into(),
        radial_profile(),
        two_ball_union(),
        voxel_4x4x4(),
    ]
}

/// Independent membership test for Ω̄, written from the variant
/// definitions rather than through the distance queries.
pub fn in_closure(d: &MassDistribution, x: Vector3) -> bool {
    match d {
        MassDistribution::PointMass(p) => x == p.center(),
        MassDistribution::UniformBall(b) => (x - b.center()).norm() <= b.radius(),
        MassDistribution::RadialProfile(p) => (x - p.center()).norm() <= p.radius(),
        MassDistribution::BallUnion(u) => u.balls().iter().any(|b| (x - b.center()).norm() <= b.radius()),
        MassDistribution::VoxelGrid(g) => {
            let rel = (x - g.origin()) / g.cell_size();
            let dims = g.dims();
            // Closed boxes: points on a shared face belong to either cell.
            let candidates = |c: f64, n: usize| -> Vec<usize> {
                let f = c.floor();
                let mut out = Vec::new();
                for idx in [f as i64 - 1, f as i64] {
                    if idx >= 0 && (idx as usize) < n && c >= idx as f64 && c <= idx as f64 + 1.0 {
                        out.push(idx as usize);
                    }
                }
                out
            };
            for i in candidates(rel.x, dims[0]) {
                for j in candidates(rel.y, dims[1]) {
                    for k in candidates(rel.z, dims[2]) {
                        if g.density(i, j, k) > 0.0 {
                            return true;
                        }
                    }
                }
            }
            false
        }
    }
}

/// Axis-aligned box enclosing Ω̄, from the variant definitions.
pub fn aabb(d: &MassDistribution) -> (Vector3, Vector3) {
    match d {
        MassDistribution::PointMass(p) => (p.center(), p.center()),
        MassDistribution::UniformBall(b) => {
            let r = v(b.radius(), b.radius(), b.radius());
            (b.center() - r, b.center() + r)
        }
        MassDistribution::RadialProfile(p) => {
            let r = v(p.radius(), p.radius(), p.radius());
            (p.center() - r, p.center() + r)
        }
        MassDistribution::BallUnion(u) => {
            let mut lo = v(f64::INFINITY, f64::INFINITY, f64::INFINITY);
            let mut hi = -lo;
            for b in u.balls() {
                let r = v(b.radius(), b.radius(), b.radius());
                lo = lo.component_min(b.center() - r);
                hi = hi.component_max(b.center() + r);
            }
            (lo, hi)
        }
        MassDistribution::VoxelGrid(g) => {
            let [nx, ny, nz] = g.dims();
            let ext = v(nx as f64, ny as f64, nz as f64) * g.cell_size();
            (g.origin(), g.origin() + ext)
        }
    }
}

/// Rejection sampler for Ω̄.
pub fn sample_closure(d: &MassDistribution, n: usize, rng: &mut impl Rng) -> Vec<Vector3> {
    if let MassDistribution::PointMass(p) = d {
        return vec![p.center(); n];
    }
    let (lo, hi) = aabb(d);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = v(
            rng.gen_range(lo.x..=hi.x),
            rng.gen_range(lo.y..=hi.y),
            rng.gen_range(lo.z..=hi.z),
        );
        if in_closure(d, x) {
            out.push(x);
        }
    }
    out
}

/// A random exterior point at clearance in `[min_gap, max_gap]` from Ω̄'s
/// bounding region, measured from the implementation's distance query.
pub fn exterior_point(d: &MassDistribution, min_gap: f64, max_gap: f64, rng: &mut impl Rng) -> Vector3 {
    let bb = d.bounding_ball(0.0).unwrap();
    loop {
        let r = bb.radius + rng.gen_range(0.0..max_gap);
        let u = bb.center + unit_direction(rng) * r.max(1e-3);
        let gap = d.dist_to_closure(u);
        if gap >= min_gap && gap <= max_gap {
            return u;
        }
        // Points far inside the bounding ball can still be exterior (voxel
        // holes, the gap between union members); try closer in too.
        let u = bb.center + unit_direction(rng) * rng.gen_range(0.0..bb.radius + max_gap);
        let gap = d.dist_to_closure(u);
        if gap >= min_gap && gap <= max_gap {
            return u;
        }
    }
}

/// Brute-force midpoint potential ∫ μ/‖u − x‖ over a voxel grid, splitting
/// every cell into `n³` subcells. Since 1/r is harmonic the O(h²) error
/// term cancels and n = 100 is accurate to well below 1e-6.
pub fn brute_force_voxel_potential(d: &MassDistribution, u: Vector3, g: f64, n: usize) -> f64 {
    let MassDistribution::VoxelGrid(grid) = d else {
        panic!("voxel grid expected")
    };
    let [nx, ny, nz] = grid.dims();
    let h = grid.cell_size() / n as f64;
    let mut total = 0.0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let rho = grid.density(i, j, k);
                if rho == 0.0 {
                    continue;
                }
                let corner = grid.origin() + v(i as f64, j as f64, k as f64) * grid.cell_size();
                let mut cell = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let x = corner + v(a as f64 + 0.5, b as f64 + 0.5, c as f64 + 0.5) * h;
                            cell += 1.0 / (x - u).norm();
                        }
                    }
                }
                total += rho * cell;
            }
        }
    }
    g * total * h.powi(3)
}

/// Potential of a radial profile at distance `r` from its center computed
/// directly in spherical coordinates, ∫ρ(s) 2π s² ∫₋₁¹ (r² + s² − 2rsμ)^{-1/2} dμ ds,
/// with Gauss-Legendre in both variables (no shell theorem involved).
pub fn spherical_quadrature_potential(p: &horizon_core::RadialProfile, r: f64, g: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(48);
    let mut total = 0.0;
    let mut inner = 0.0;
    for shell in p.shells() {
        let (a, b) = (inner, shell.outer_radius);
        inner = b;
        if shell.density == 0.0 {
            continue;
        }
        for (xs, ws) in nodes.iter().zip(&weights) {
            let s = 0.5 * (b - a) * xs + 0.5 * (b + a);
            let mut angular = 0.0;
            for (xm, wm) in nodes.iter().zip(&weights) {
                angular += wm / (r * r + s * s - 2.0 * r * s * xm).sqrt();
            }
            total += 0.5 * (b - a) * ws * shell.density * 2.0 * std::f64::consts::PI * s * s * angular;
        }
    }
    g * total
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Central-difference gradient of `f` with step `h`.
pub fn central_gradient(f: impl Fn(Vector3) -> f64, u: Vector3, h: f64) -> Vector3 {
    let e = [v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(0.0, 0.0, 1.0)];
    let d: Vec<f64> = e.iter().map(|&e| (f(u + e * h) - f(u - e * h)) / (2.0 * h)).collect();
    v(d[0], d[1], d[2])
}
