use crate::error::{Error, Result};

/// CODATA 2018 Newtonian constant of gravitation, m³/(kg·s²).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Gravitational constant, m³/(kg·s²).
    pub g: f64,
    /// Speed of light, m/s.
    pub c: f64,
}

impl PhysicalConstants {
    pub fn new(g: f64, c: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::BadParameters(format!("G must be positive, got {g}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::BadParameters(format!("c must be positive, got {c}")));
        }
        Ok(Self { g, c })
    }

    /// G = c = 1, for nondimensional scenarios.
    pub fn unit() -> Self {
        Self { g: 1.0, c: 1.0 }
    }

    pub fn with_g(g: f64) -> Result<Self> {
        Self::new(g, SPEED_OF_LIGHT)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            g: GRAVITATIONAL_CONSTANT,
            c: SPEED_OF_LIGHT,
        }
    }
}
