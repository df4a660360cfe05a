//! Newtonian potential and attraction of a homogeneous rectangular box.
//!
//! Near cells use the closed-form antiderivatives of 1/r and ξ/r³ over a
//! box; far cells, where those closed forms lose digits to cancellation,
//! use a Gauss-Legendre product rule whose order is picked from the
//! distance-to-size ratio so the truncation error stays near 1e-14.

use crate::vector::Vector3;

/// Below this center-distance / cell-size ratio the closed form is used.
const CLOSED_FORM_RATIO: f64 = 6.0;

const GL2: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];
const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];
const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_86),
    (-0.339_981_043_584_856_26, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_26, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_86),
];
const GL5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

fn gauss_rule(ratio: f64) -> &'static [(f64, f64)] {
    if ratio < 20.0 {
        &GL5
    } else if ratio < 80.0 {
        &GL4
    } else if ratio < 500.0 {
        &GL3
    } else {
        &GL2
    }
}

/// ln(c + r) with r = sqrt(c² + rest_sq), evaluated without cancellation
/// for negative c.
fn log_plus(c: f64, r: f64, rest_sq: f64) -> f64 {
    if c >= 0.0 {
        (c + r).ln()
    } else {
        (rest_sq / (r - c)).ln()
    }
}

/// a·b·ln(c + r), zero when the prefactor vanishes.
fn log_term(a: f64, b: f64, c: f64, r: f64, rest_sq: f64) -> f64 {
    let ab = a * b;
    if ab == 0.0 {
        0.0
    } else {
        ab * log_plus(c, r, rest_sq)
    }
}

/// a·atan(b·c / (a·r)) with the a → 0 limit.
fn atan_term(a: f64, b: f64, c: f64, r: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * (b * c / (a * r)).atan()
    }
}

/// Antiderivative F with ∂³F/∂x∂y∂z = 1/r.
fn inverse_distance_antiderivative(x: f64, y: f64, z: f64) -> f64 {
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let r = (x2 + y2 + z2).sqrt();
    log_term(x, y, z, r, x2 + y2) + log_term(y, z, x, r, y2 + z2) + log_term(z, x, y, r, z2 + x2)
        - 0.5 * x * atan_term(x, y, z, r)
        - 0.5 * y * atan_term(y, z, x, r)
        - 0.5 * z * atan_term(z, x, y, r)
}

/// Antiderivative H with ∂²H/∂y∂z = 1/r, as a function of (x; y, z).
fn attraction_antiderivative(x: f64, y: f64, z: f64) -> f64 {
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let r = (x2 + y2 + z2).sqrt();
    log_term(y, 1.0, z, r, x2 + y2) + log_term(z, 1.0, y, r, x2 + z2) - atan_term(x, y, z, r)
}

/// Sum of `f` over the eight corners of `[lo, hi]` with alternating signs,
/// i.e. the triple definite integral of ∂³f.
fn corner_sum(lo: Vector3, hi: Vector3, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let xs = [(lo.x, -1.0), (hi.x, 1.0)];
    let ys = [(lo.y, -1.0), (hi.y, 1.0)];
    let zs = [(lo.z, -1.0), (hi.z, 1.0)];
    let mut total = 0.0;
    for &(x, sx) in &xs {
        for &(y, sy) in &ys {
            for &(z, sz) in &zs {
                total += sx * sy * sz * f(x, y, z);
            }
        }
    }
    total
}

/// ∫_box dξ / |ξ| for a box given relative to the field point.
fn closed_form_potential(lo: Vector3, hi: Vector3) -> f64 {
    corner_sum(lo, hi, inverse_distance_antiderivative)
}

/// ∫_box ξ / |ξ|³ dξ for a box given relative to the field point.
fn closed_form_attraction(lo: Vector3, hi: Vector3) -> Vector3 {
    // ∫ ξ_x/r³ dx = -1/r, so each component is minus the corner sum of the
    // antiderivative with that axis in the first slot.
    let ax = -corner_sum(lo, hi, attraction_antiderivative);
    let ay = -corner_sum(lo, hi, |x, y, z| attraction_antiderivative(y, z, x));
    let az = -corner_sum(lo, hi, |x, y, z| attraction_antiderivative(z, x, y));
    Vector3::new(ax, ay, az)
}

fn gauss_potential(lo: Vector3, size: f64, rule: &[(f64, f64)]) -> f64 {
    let half = 0.5 * size;
    let mid = lo + Vector3::new(half, half, half);
    let mut sum = 0.0;
    for &(a, wa) in rule {
        for &(b, wb) in rule {
            for &(c, wc) in rule {
                let p = mid + Vector3::new(a, b, c) * half;
                sum += wa * wb * wc / p.norm_squared().sqrt();
            }
        }
    }
    sum * half.powi(3)
}

fn gauss_attraction(lo: Vector3, size: f64, rule: &[(f64, f64)]) -> Vector3 {
    let half = 0.5 * size;
    let mid = lo + Vector3::new(half, half, half);
    let mut sum = Vector3::ZERO;
    for &(a, wa) in rule {
        for &(b, wb) in rule {
            for &(c, wc) in rule {
                let p = mid + Vector3::new(a, b, c) * half;
                let r2 = p.norm_squared();
                sum += p * (wa * wb * wc / (r2 * r2.sqrt()));
            }
        }
    }
    sum * half.powi(3)
}

/// ∫_cell dx / |x − u| for the cube `[corner, corner + size]³`.
pub(crate) fn cube_inverse_distance(corner: Vector3, size: f64, u: Vector3) -> f64 {
    let lo = corner - u;
    let half = Vector3::new(0.5 * size, 0.5 * size, 0.5 * size);
    let ratio = (lo + half).norm() / size;
    if ratio < CLOSED_FORM_RATIO {
        closed_form_potential(lo, lo + Vector3::new(size, size, size))
    } else {
        gauss_potential(lo, size, gauss_rule(ratio))
    }
}

/// ∫_cell (x − u) / |x − u|³ dx for the cube `[corner, corner + size]³`.
pub(crate) fn cube_attraction(corner: Vector3, size: f64, u: Vector3) -> Vector3 {
    let lo = corner - u;
    let half = Vector3::new(0.5 * size, 0.5 * size, 0.5 * size);
    let ratio = (lo + half).norm() / size;
    if ratio < CLOSED_FORM_RATIO {
        closed_form_attraction(lo, lo + Vector3::new(size, size, size))
    } else {
        gauss_attraction(lo, size, gauss_rule(ratio))
    }
}
