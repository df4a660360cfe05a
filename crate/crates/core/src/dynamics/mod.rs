//! Test-particle motion u″ = ∇U(u) outside the body.
//!
//! [`integrate`] advances the first-order system (u′ = v, v′ = a(u)) with an
//! adaptive DOP853 stepper. After every accepted step it looks for three
//! events and localises the earliest one on the 7th-order dense output:
//!
//! - contact with the closure Ω̄ (`dist_to_closure` reaching 0),
//! - escape (`dist_to_closure` above `escape_radius_factor` body radii with
//!   non-negative energy),
//! - an optional caller-supplied stop function crossing from positive to
//!   non-positive ([`integrate_until`]).

mod dop853;

use crate::constants::PhysicalConstants;
use crate::distributions::MassDistribution;
use crate::error::{Error, Result};
use crate::potential::{field_extended, potential_extended};
use crate::vector::Vector3;

use dop853::{Dense, State6, Tolerances};

/// Instantaneous state of the test particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    /// Time, s.
    pub t: f64,
    /// Position, m.
    pub u: Vector3,
    /// Velocity, m/s.
    pub v: Vector3,
}

impl State {
    pub fn new(t: f64, u: Vector3, v: Vector3) -> Self {
        Self { t, u, v }
    }

    fn to_array(self) -> State6 {
        [self.u.x, self.u.y, self.u.z, self.v.x, self.v.y, self.v.z]
    }

    fn from_array(t: f64, y: &State6) -> Self {
        Self {
            t,
            u: Vector3::new(y[0], y[1], y[2]),
            v: Vector3::new(y[3], y[4], y[5]),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.u.is_finite() && self.v.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integration horizon, s.
    pub t_end: f64,
    /// Escape is declared beyond this many bounding-ball radii from Ω̄.
    pub escape_radius_factor: f64,
    pub max_steps: usize,
    /// Upper bound on the step size, s. Infinite by default; a finite cap
    /// densifies the samples without changing the error control.
    pub max_step: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            t_end: 1.0,
            escape_radius_factor: 1e3,
            max_steps: 1_000_000,
            max_step: f64::INFINITY,
        }
    }
}

impl IntegrationOptions {
    pub fn with_t_end(t_end: f64) -> Self {
        Self {
            t_end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.rel_tol) || !positive(self.abs_tol) {
            return Err(Error::BadParameters("tolerances must be positive".into()));
        }
        if !positive(self.t_end) {
            return Err(Error::BadParameters(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !(self.escape_radius_factor.is_finite() && self.escape_radius_factor > 1.0) {
            return Err(Error::BadParameters(format!(
                "escape_radius_factor must exceed 1, got {}",
                self.escape_radius_factor
            )));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::BadParameters(format!(
                "max_step must be positive, got {}",
                self.max_step
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::BadParameters("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    ReachedTEnd,
    /// The particle reached Ω̄; `t_hit` is the maximal existence time.
    CollapsedIntoBody {
        t_hit: f64,
    },
    EscapedFarField {
        t_exit: f64,
    },
    /// The stop function of [`integrate_until`] crossed zero.
    StopCondition {
        t_stop: f64,
    },
    /// `max_steps` exhausted, or the step size underflowed.
    StepLimit,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ReachedTEnd => "ReachedTEnd",
            Self::CollapsedIntoBody { .. } => "CollapsedIntoBody",
            Self::EscapedFarField { .. } => "EscapedFarField",
            Self::StopCondition { .. } => "StopCondition",
            Self::StepLimit => "StepLimit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// One sample per accepted step, starting with the initial state. The
    /// final sample sits on the terminating event when there is one.
    pub samples: Vec<State>,
    pub termination: Termination,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.samples.last().expect("trajectory is never empty")
    }

    /// Largest `||u − center||` over the samples.
    pub fn max_distance_from(&self, center: Vector3) -> f64 {
        self.samples.iter().map(|s| s.u.distance(center)).fold(0.0, f64::max)
    }

    /// Largest `dist_to_closure(u)` over the samples.
    pub fn max_dist_to_closure(&self, dist: &MassDistribution) -> f64 {
        self.samples
            .iter()
            .map(|s| dist.dist_to_closure(s.u))
            .fold(0.0, f64::max)
    }
}

/// Specific energy E = ½||v||² − U(u), J/kg.
pub fn energy(dist: &MassDistribution, state: &State, consts: &PhysicalConstants) -> Result<f64> {
    if !(dist.dist_to_closure(state.u) > 0.0) {
        return Err(Error::InsideBody { point: state.u });
    }
    Ok(energy_extended(dist, state, consts.g))
}

/// As [`energy`] without the exterior check. On Ω̄ itself this is the
/// limit of the exterior value; spherical bodies continue as a point mass
/// inside.
pub fn energy_unchecked(dist: &MassDistribution, state: &State, consts: &PhysicalConstants) -> f64 {
    energy_extended(dist, state, consts.g)
}

fn energy_extended(dist: &MassDistribution, state: &State, g: f64) -> f64 {
    0.5 * state.v.norm_squared() - potential_extended(dist, state.u, g)
}

/// max over samples of |E(t) − E(0)| / max(|E(0)|, ½||v₀||²).
///
/// The collapse sample sits on the surface, where the exterior potential
/// is still defined, so it is included.
pub fn energy_drift(dist: &MassDistribution, traj: &Trajectory, consts: &PhysicalConstants) -> f64 {
    let Some(first) = traj.samples.first() else {
        return 0.0;
    };
    let e0 = energy_extended(dist, first, consts.g);
    let mut scale = e0.abs().max(0.5 * first.v.norm_squared());
    if scale == 0.0 {
        scale = potential_extended(dist, first.u, consts.g);
    }
    traj.samples
        .iter()
        .map(|s| (energy_extended(dist, s, consts.g) - e0).abs() / scale)
        .fold(0.0, f64::max)
}

/// d||v||/dt at the initial state, v·a/||v||.
pub fn initial_speed_rate(dist: &MassDistribution, initial: &State, consts: &PhysicalConstants) -> Result<f64> {
    if !(dist.dist_to_closure(initial.u) > 0.0) {
        return Err(Error::InsideBody { point: initial.u });
    }
    let speed = initial.v.norm();
    if speed == 0.0 {
        return Err(Error::BadParameters("speed derivative is undefined at rest".into()));
    }
    let a = field_extended(dist, initial.u, consts.g);
    Ok(initial.v.dot(a) / speed)
}

/// Whether the speed is strictly decreasing at t = 0. Rates within
/// 1e-12·||a|| of zero (circular motion) count as not decreasing.
pub fn initial_speed_decreasing(dist: &MassDistribution, initial: &State, consts: &PhysicalConstants) -> Result<bool> {
    let rate = initial_speed_rate(dist, initial, consts)?;
    let a = field_extended(dist, initial.u, consts.g).norm();
    Ok(rate < -1e-12 * a)
}

/// Integrates from `initial` until `t_end`, contact with Ω̄, escape, or the
/// step limit.
pub fn integrate(
    dist: &MassDistribution,
    initial: &State,
    opts: &IntegrationOptions,
    consts: &PhysicalConstants,
) -> Result<Trajectory> {
    Integrator::new(dist, opts, consts)?.run(initial, None::<fn(&State) -> f64>)
}

/// As [`integrate`], additionally stopping when `stop(state)` goes from
/// positive to non-positive (e.g. `u·v` for the apex of a radial launch).
pub fn integrate_until<S: Fn(&State) -> f64>(
    dist: &MassDistribution,
    initial: &State,
    opts: &IntegrationOptions,
    consts: &PhysicalConstants,
    stop: S,
) -> Result<Trajectory> {
    Integrator::new(dist, opts, consts)?.run(initial, Some(stop))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EventKind {
    Collapse,
    Escape,
    Stop,
}

struct Integrator<'a> {
    dist: &'a MassDistribution,
    opts: &'a IntegrationOptions,
    g: f64,
    escape_distance: f64,
}

/// Screening points for contact events inside a step.
const SCREEN: [f64; 3] = [0.25, 0.5, 0.75];

impl<'a> Integrator<'a> {
    fn new(dist: &'a MassDistribution, opts: &'a IntegrationOptions, consts: &PhysicalConstants) -> Result<Self> {
        opts.validate()?;
        Ok(Self {
            dist,
            opts,
            g: consts.g,
            escape_distance: 0.0,
        })
    }

    fn rhs(&self, y: &State6) -> State6 {
        let a = field_extended(self.dist, Vector3::new(y[0], y[1], y[2]), self.g);
        [y[3], y[4], y[5], a.x, a.y, a.z]
    }

    fn clearance(&self, y: &State6) -> f64 {
        self.dist.dist_to_closure(Vector3::new(y[0], y[1], y[2]))
    }

    fn run<S: Fn(&State) -> f64>(mut self, initial: &State, stop: Option<S>) -> Result<Trajectory> {
        if !initial.is_finite() {
            return Err(Error::BadParameters("initial state must be finite".into()));
        }
        if !(self.dist.dist_to_closure(initial.u) > 0.0) {
            return Err(Error::InsideBody { point: initial.u });
        }
        let bb = self.dist.bounding_ball(0.0)?;
        let length = if bb.radius > 0.0 {
            bb.radius
        } else {
            initial.u.distance(bb.center)
        };
        self.escape_distance = self.opts.escape_radius_factor * length;

        let tol = Tolerances {
            rtol: self.opts.rel_tol,
            atol: self.opts.abs_tol,
        };
        let f = |y: &State6| self.rhs(y);
        let t_end = initial.t + self.opts.t_end;
        let time_tol = 1e-12 * self.opts.t_end;

        let mut t = initial.t;
        let mut y = initial.to_array();
        let mut k1 = f(&y);
        let mut h = dop853::initial_step(&f, &y, &k1, &tol, self.opts.t_end).min(self.opts.max_step);
        let mut samples = vec![*initial];
        let mut stop_prev = stop.as_ref().map(|s| s(initial));
        let mut accepted = 0usize;
        let mut rejected = 0usize;
        let mut last_rejected = false;

        let finish = |samples: Vec<State>, termination, accepted, rejected| Trajectory {
            samples,
            termination,
            accepted_steps: accepted,
            rejected_steps: rejected,
        };

        loop {
            if accepted + rejected >= self.opts.max_steps {
                return Ok(finish(samples, Termination::StepLimit, accepted, rejected));
            }
            let remaining = t_end - t;
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h <= 1e-15 * t.abs().max(self.opts.t_end) {
                return Ok(finish(samples, Termination::StepLimit, accepted, rejected));
            }

            let trial = dop853::trial(&f, &y, &k1, h, &tol);
            if trial.err > 1.0 {
                rejected += 1;
                last_rejected = true;
                h = dop853::next_step_after_reject(&trial).min(self.opts.max_step);
                continue;
            }
            accepted += 1;
            let t_new = if last { t_end } else { t + h };
            let y_new = trial.y_new;
            let k_new = f(&y_new);
            let state_new = State::from_array(t_new, &y_new);

            // Candidate events as brackets [t, t_b] with the event function
            // positive at t and non-positive at t_b.
            let mut events: Vec<(EventKind, f64)> = Vec::new();
            let clearance_new = self.clearance(&y_new);
            if clearance_new <= 0.0 {
                events.push((EventKind::Collapse, t_new));
            } else if let Some(s) = SCREEN
                .iter()
                .find(|&&s| self.clearance(&dop853::hermite(&y, &k1, &y_new, &k_new, h, s)) <= 0.0)
            {
                events.push((EventKind::Collapse, t + s * h));
            }
            if clearance_new > self.escape_distance && energy_extended(self.dist, &state_new, self.g) >= 0.0 {
                events.push((EventKind::Escape, t_new));
            }
            if let (Some(stop), Some(prev)) = (stop.as_ref(), stop_prev) {
                let now = stop(&state_new);
                if prev > 0.0 && now <= 0.0 {
                    events.push((EventKind::Stop, t_new));
                }
                stop_prev = Some(now);
            }

            if !events.is_empty() {
                let dense = Dense::new(&f, t, &y, &trial, &k_new);
                let mut earliest: Option<(EventKind, f64)> = None;
                for (kind, t_b) in events {
                    let phi = |tau: f64| -> f64 {
                        let yy = dense.eval(tau);
                        match kind {
                            EventKind::Collapse => self.clearance(&yy),
                            EventKind::Escape => self.escape_distance - self.clearance(&yy),
                            EventKind::Stop => stop.as_ref().expect("stop event")(&State::from_array(tau, &yy)),
                        }
                    };
                    // The Hermite screen can be wrong; trust the dense output.
                    if phi(t_b) > 0.0 {
                        continue;
                    }
                    let root = find_crossing(&phi, t, t_b, time_tol);
                    if earliest.is_none_or(|(_, te)| root < te) {
                        earliest = Some((kind, root));
                    }
                }
                if let Some((kind, t_event)) = earliest {
                    samples.push(State::from_array(t_event, &dense.eval(t_event)));
                    let termination = match kind {
                        EventKind::Collapse => Termination::CollapsedIntoBody { t_hit: t_event },
                        EventKind::Escape => Termination::EscapedFarField { t_exit: t_event },
                        EventKind::Stop => Termination::StopCondition { t_stop: t_event },
                    };
                    return Ok(finish(samples, termination, accepted, rejected));
                }
            }

            samples.push(state_new);
            let mut h_new = dop853::next_step_after_accept(&trial).min(self.opts.max_step);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            t = t_new;
            y = y_new;
            k1 = k_new;
            h = h_new;
            if last {
                return Ok(finish(samples, Termination::ReachedTEnd, accepted, rejected));
            }
        }
    }
}

/// First crossing of `phi` in `(a, b]`, given `phi(a) > 0 >= phi(b)`.
/// Illinois false position, returning a time where `phi <= 0` within `tol`
/// of the crossing.
fn find_crossing(phi: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = phi(a);
    let mut fb = phi(b);
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = phi(c);
        if fc > 0.0 {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    b
}
