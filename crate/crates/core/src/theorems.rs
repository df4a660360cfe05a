//! Closed-form results: escape speeds, confinement radii, the radial
//! parabolic and bounded solutions, light-trapping criteria for a ball B
//! containing the body, and the cosmological density estimate.
//!
//! Every criterion uses a strict inequality. At exact equality the verdict
//! is negative and the margin is 1.

use std::f64::consts::PI;
use std::fmt;

use crate::constants::PhysicalConstants;
use crate::distributions::{Ball, MassDistribution};
use crate::error::{Error, Result};
use crate::potential::{self, QuadratureOptions};
use crate::vector::Vector3;

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("{name} must be positive, got {x}")))
    }
}

/// What the confinement radius is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Bounds ||u(t) − center||.
    SphericalFromCenter,
    /// Bounds dist(u(t), Ω̄).
    GeneralFromClosure,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfinementBound {
    /// The energy defect η = −E > 0, J/kg.
    pub eta: f64,
    /// GM/η, m.
    pub radius_bound: f64,
    pub frame: Frame,
}

/// √(2GM/R).
pub fn escape_speed_spherical(mass: f64, radius: f64, consts: &PhysicalConstants) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("radius", radius)?;
    Ok((2.0 * consts.g * mass / radius).sqrt())
}

/// Bound on ||u(t)|| for a launch from the sphere of radius `radius` around
/// a spherical body of mass `mass` at sub-escape speed `v0_speed`.
pub fn confinement_radius_spherical(
    mass: f64,
    radius: f64,
    v0_speed: f64,
    consts: &PhysicalConstants,
) -> Result<ConfinementBound> {
    require_positive("mass", mass)?;
    require_positive("radius", radius)?;
    if !(v0_speed.is_finite() && v0_speed >= 0.0) {
        return Err(Error::BadParameters(format!("speed must be >= 0, got {v0_speed}")));
    }
    let gm = consts.g * mass;
    let speed_sq = v0_speed * v0_speed;
    let threshold = 2.0 * gm / radius;
    if speed_sq >= threshold {
        return Err(Error::AtOrAboveEscape { speed_sq, threshold });
    }
    let eta = gm / radius - 0.5 * speed_sq;
    Ok(ConfinementBound {
        eta,
        radius_bound: gm / eta,
        frame: Frame::SphericalFromCenter,
    })
}

/// Bound on dist(u(t), Ω̄) for an arbitrary body, from the exact potential
/// at the launch point.
pub fn confinement_distance_general(
    dist: &MassDistribution,
    u0: Vector3,
    v0: Vector3,
    consts: &PhysicalConstants,
    opts: &QuadratureOptions,
) -> Result<ConfinementBound> {
    let u = potential::potential(dist, u0, consts, opts)?;
    general_bound(dist, u, v0, consts)
}

/// The looser bound obtained by replacing U(u₀) with its lower estimate
/// GM / max‖u₀ − x‖.
pub fn confinement_distance_from_lower_bound(
    dist: &MassDistribution,
    u0: Vector3,
    v0: Vector3,
    consts: &PhysicalConstants,
) -> Result<ConfinementBound> {
    let (lower, _) = potential::potential_bounds(dist, u0, consts)?;
    general_bound(dist, lower, v0, consts)
}

fn general_bound(dist: &MassDistribution, u: f64, v0: Vector3, consts: &PhysicalConstants) -> Result<ConfinementBound> {
    let speed_sq = v0.norm_squared();
    let threshold = 2.0 * u;
    if !(speed_sq < threshold) {
        return Err(Error::AtOrAboveEscape { speed_sq, threshold });
    }
    let eta = u - 0.5 * speed_sq;
    Ok(ConfinementBound {
        eta,
        radius_bound: consts.g * dist.total_mass() / eta,
        frame: Frame::GeneralFromClosure,
    })
}

/// Lower estimate of the escape speed at u₀: √(2GM / max‖u₀ − x‖).
pub fn escape_speed_lower_bound(dist: &MassDistribution, u0: Vector3, consts: &PhysicalConstants) -> Result<f64> {
    let (lower, _) = potential::potential_bounds(dist, u0, consts)?;
    Ok((2.0 * lower).sqrt())
}

/// The same estimate written through the average density,
/// √(|Ω| · 2Gd / max‖u₀ − x‖).
pub fn escape_speed_lower_bound_from_density(
    dist: &MassDistribution,
    u0: Vector3,
    consts: &PhysicalConstants,
) -> Result<f64> {
    potential::potential_bounds(dist, u0, consts)?;
    let volume = dist.volume()?;
    let d = dist.average_density()?;
    Ok((volume * 2.0 * consts.g * d / dist.max_dist_over_closure(u0)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialBranch {
    /// Outgoing, unbounded.
    Plus,
    /// Infalling, reaches the body in finite time.
    Minus,
}

/// Time for the infalling zero-energy radial solution to fall from
/// `launch_radius` to `body_radius`: (2/3)(R^{3/2} − r^{3/2})/√γ.
pub fn collapse_time(launch_radius: f64, body_radius: f64, gamma: f64) -> Result<f64> {
    require_positive("launch radius", launch_radius)?;
    require_positive("gamma", gamma)?;
    if !(body_radius >= 0.0 && body_radius <= launch_radius) {
        return Err(Error::BadParameters(format!(
            "body radius must lie in [0, {launch_radius}], got {body_radius}"
        )));
    }
    Ok(2.0 / 3.0 * (launch_radius.powf(1.5) - body_radius.powf(1.5)) / gamma.sqrt())
}

/// Zero-energy radial solution y±(t) = (R^{3/2} ± (3/2)√γ t)^{2/3} with
/// γ = 2GM. The minus branch is defined up to its collapse onto
/// `body_radius` (the center when `None`).
pub fn parabolic_radial(
    launch_radius: f64,
    gamma: f64,
    branch: RadialBranch,
    t: f64,
    body_radius: Option<f64>,
) -> Result<f64> {
    require_positive("launch radius", launch_radius)?;
    require_positive("gamma", gamma)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::BadParameters(format!("t must be >= 0, got {t}")));
    }
    let drift = 1.5 * gamma.sqrt() * t;
    let base = launch_radius.powf(1.5);
    match branch {
        RadialBranch::Plus => Ok((base + drift).powf(2.0 / 3.0)),
        RadialBranch::Minus => {
            let t_collapse = collapse_time(launch_radius, body_radius.unwrap_or(0.0), gamma)?;
            if t > t_collapse {
                return Err(Error::DomainExceeded { t, t_collapse });
            }
            Ok((base - drift).max(0.0).powf(2.0 / 3.0))
        }
    }
}

/// The maximum γ/(2η) reached by the bounded outgoing radial solution
/// launched from `launch_radius` with defect η.
pub fn radial_apex(launch_radius: f64, gamma: f64, eta: f64) -> Result<f64> {
    require_positive("launch radius", launch_radius)?;
    require_positive("gamma", gamma)?;
    require_positive("eta", eta)?;
    // Launch speed² = γ/R − 2η must be non-negative.
    if gamma / launch_radius - 2.0 * eta < -1e-12 * gamma / launch_radius {
        return Err(Error::BadParameters(format!(
            "eta {eta} exceeds the at-rest value {}",
            gamma / (2.0 * launch_radius)
        )));
    }
    Ok(gamma / (2.0 * eta))
}

/// The sufficient conditions for a ball B ⊇ Ω̄ to trap light.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// c² · max_{u∈B} max_{x∈Ω̄} ‖u − x‖ < 2GM.
    MaxPairDistance,
    /// c² · diam(B) < 2GM.
    Diameter,
    /// d > c² diam(B) / (2G|Ω|).
    DensityBall,
    /// Spherical body, B = Ω̄: d > (3/8π) c² / (G r²).
    DensitySymmetric,
    /// d > (3/4π) c² / (G r²) = K / r², d averaged over B.
    DensityAsymmetric,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::MaxPairDistance,
        Criterion::Diameter,
        Criterion::DensityBall,
        Criterion::DensitySymmetric,
        Criterion::DensityAsymmetric,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::MaxPairDistance => "max-pair-distance",
            Self::Diameter => "diameter",
            Self::DensityBall => "density-ball",
            Self::DensitySymmetric => "density-symmetric",
            Self::DensityAsymmetric => "density-asymmetric",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::BadParameters(format!("unknown criterion {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleVerdict {
    pub criterion: Criterion,
    pub is_black_hole: bool,
    /// attained / required; the verdict is positive iff this exceeds 1.
    pub margin: f64,
    pub attained: f64,
    pub required: f64,
    /// Bound on dist(u(t), Ω̄) for light entering B, when the criterion
    /// provides one and passes.
    pub photon_confinement_radius: Option<f64>,
}

fn verdict(criterion: Criterion, attained: f64, required: f64, length: Option<f64>) -> BlackHoleVerdict {
    let is_black_hole = attained > required;
    let margin = attained / required;
    BlackHoleVerdict {
        criterion,
        is_black_hole,
        margin,
        attained,
        required,
        photon_confinement_radius: length
            .filter(|_| is_black_hole)
            .map(|l| l / (1.0 - required / attained)),
    }
}

/// Applies `criterion` to the ball `ball`, which must contain Ω̄.
pub fn classify_black_hole(
    dist: &MassDistribution,
    ball: &Ball,
    criterion: Criterion,
    consts: &PhysicalConstants,
) -> Result<BlackHoleVerdict> {
    let reach = dist.max_dist_over_closure(ball.center);
    if ball.radius < reach * (1.0 - 1e-12) {
        return Err(Error::NotContaining {
            required: reach,
            radius: ball.radius,
        });
    }
    let (g, c2) = (consts.g, consts.c * consts.c);
    let two_gm = 2.0 * g * dist.total_mass();
    let diam = ball.diameter();
    match criterion {
        Criterion::MaxPairDistance => {
            let max_pair = reach + ball.radius;
            Ok(verdict(criterion, two_gm, c2 * max_pair, Some(max_pair)))
        }
        Criterion::Diameter => Ok(verdict(criterion, two_gm, c2 * diam, Some(diam))),
        Criterion::DensityBall => {
            let volume = dist.volume()?;
            let d = dist.total_mass() / volume;
            Ok(verdict(criterion, d, c2 * diam / (2.0 * g * volume), None))
        }
        Criterion::DensitySymmetric => {
            let (center, r) = dist
                .spherical()
                .filter(|&(_, r)| r > 0.0)
                .ok_or_else(|| Error::WrongShape(format!("{} is not a spherical body", dist.kind())))?;
            if center.distance(ball.center) > 1e-12 * r || (ball.radius - r).abs() > 1e-12 * r {
                return Err(Error::WrongShape("the ball must coincide with the body closure".into()));
            }
            let d = dist.average_density()?;
            Ok(verdict(criterion, d, 3.0 / (8.0 * PI) * c2 / (g * r * r), None))
        }
        Criterion::DensityAsymmetric => {
            let r = ball.radius;
            if r <= 0.0 {
                return Err(Error::WrongShape("the ball must have positive radius".into()));
            }
            let d = dist.total_mass() / ball.volume();
            Ok(verdict(criterion, d, 3.0 / (4.0 * PI) * c2 / (g * r * r), None))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosmologyReport {
    /// K = (3/4π) c²/G, kg/m.
    pub k: f64,
    /// K / r², kg/m³.
    pub threshold: f64,
    pub ratio: f64,
    pub verdict: bool,
}

/// Compares `density` with the asymmetric light-trapping threshold of a
/// ball of radius `radius`.
pub fn cosmology_report(radius: f64, density: f64, consts: &PhysicalConstants) -> Result<CosmologyReport> {
    require_positive("radius", radius)?;
    if !(density.is_finite() && density >= 0.0) {
        return Err(Error::BadParameters(format!("density must be >= 0, got {density}")));
    }
    let k = 3.0 / (4.0 * PI) * consts.c * consts.c / consts.g;
    let threshold = k / (radius * radius);
    let ratio = density / threshold;
    Ok(CosmologyReport {
        k,
        threshold,
        ratio,
        verdict: ratio > 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::UniformBall;

    fn unit() -> PhysicalConstants {
        PhysicalConstants::unit()
    }

    #[test]
    fn escape_speed_examples() {
        assert_eq!(escape_speed_spherical(1.0, 2.0, &unit()).unwrap(), 1.0);
        let a = escape_speed_spherical(3.0, 1.0, &unit()).unwrap();
        let b = escape_speed_spherical(3.0, 4.0, &unit()).unwrap();
        assert!((a / b - 2.0).abs() < 1e-15);
        assert!(escape_speed_spherical(0.0, 1.0, &unit()).is_err());
    }

    #[test]
    fn confinement_examples() {
        let b = confinement_radius_spherical(1.0, 1.0, 1.0, &unit()).unwrap();
        assert_eq!(b.eta, 0.5);
        assert_eq!(b.radius_bound, 2.0);
        assert_eq!(b.frame, Frame::SphericalFromCenter);
        let rest = confinement_radius_spherical(1.0, 3.0, 0.0, &unit()).unwrap();
        assert!((rest.radius_bound - 3.0).abs() < 1e-15);
        let at = confinement_radius_spherical(1.0, 1.0, 2.0f64.sqrt(), &unit());
        assert!(matches!(at, Err(Error::AtOrAboveEscape { .. })), "{at:?}");
    }

    #[test]
    fn parabolic_examples() {
        for branch in [RadialBranch::Plus, RadialBranch::Minus] {
            assert_eq!(parabolic_radial(1.7, 2.0, branch, 0.0, None).unwrap(), 1.7);
        }
        let y = parabolic_radial(1.0, 1.0, RadialBranch::Plus, 2.0, None).unwrap();
        assert!((y - 4f64.powf(2.0 / 3.0)).abs() < 1e-15);
        assert!((collapse_time(1.0, 0.0, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(
            parabolic_radial(1.0, 1.0, RadialBranch::Minus, 2.0 / 3.0, None).unwrap(),
            0.0
        );
        assert!(matches!(
            parabolic_radial(1.0, 1.0, RadialBranch::Minus, 0.7, None),
            Err(Error::DomainExceeded { .. })
        ));
        // With a body radius the branch ends on the surface.
        let t = collapse_time(1.0, 0.25, 1.0).unwrap();
        assert!((t - 2.0 / 3.0 * 0.875).abs() < 1e-15);
        let y = parabolic_radial(1.0, 1.0, RadialBranch::Minus, t, Some(0.25)).unwrap();
        assert!((y - 0.25).abs() < 1e-14);
        assert!(parabolic_radial(1.0, 1.0, RadialBranch::Minus, t + 1e-9, Some(0.25)).is_err());
    }

    #[test]
    fn apex_examples() {
        assert_eq!(radial_apex(1.0, 2.0, 0.5).unwrap(), 2.0);
        assert_eq!(radial_apex(4.0, 2.0, 2.0 / 8.0).unwrap(), 4.0);
        assert!(radial_apex(1.0, 2.0, 1.5).is_err());
        assert!(radial_apex(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn diameter_criterion_examples() {
        let c = unit();
        let ball = Ball::new(Vector3::ZERO, 1.0).unwrap();
        // 2GM = 1.1 c² diam
        let body: MassDistribution = UniformBall::new(Vector3::ZERO, 1.0, 1.1).unwrap().into();
        let v = classify_black_hole(&body, &ball, Criterion::Diameter, &c).unwrap();
        assert!(v.is_black_hole);
        assert!((v.margin - 1.1).abs() < 1e-15);
        assert!((v.photon_confinement_radius.unwrap() - 22.0).abs() < 1e-12);
        let light: MassDistribution = UniformBall::new(Vector3::ZERO, 1.0, 0.9).unwrap().into();
        let v = classify_black_hole(&light, &ball, Criterion::Diameter, &c).unwrap();
        assert!(!v.is_black_hole);
        assert!((v.margin - 0.9).abs() < 1e-15);
        assert!(v.photon_confinement_radius.is_none());
    }

    #[test]
    fn equality_is_not_a_black_hole() {
        let c = unit();
        let ball = Ball::new(Vector3::ZERO, 1.0).unwrap();
        let body: MassDistribution = UniformBall::new(Vector3::ZERO, 1.0, 1.0).unwrap().into();
        let v = classify_black_hole(&body, &ball, Criterion::Diameter, &c).unwrap();
        assert!(!v.is_black_hole);
        assert_eq!(v.margin, 1.0);
    }

    #[test]
    fn containment_is_checked() {
        let body: MassDistribution = UniformBall::new(Vector3::ZERO, 1.0, 1.0).unwrap().into();
        let small = Ball::new(Vector3::ZERO, 0.5).unwrap();
        let r = classify_black_hole(&body, &small, Criterion::Diameter, &unit());
        assert!(matches!(r, Err(Error::NotContaining { .. })));
    }

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert!("nonsense".parse::<Criterion>().is_err());
    }

    #[test]
    fn cosmology_zero_density() {
        let r = cosmology_report(4e26, 0.0, &PhysicalConstants::default()).unwrap();
        assert_eq!(r.ratio, 0.0);
        assert!(!r.verdict);
        assert!(cosmology_report(0.0, 1.0, &PhysicalConstants::default()).is_err());
    }
}
