use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mass distribution: {0}")]
    InvalidDistribution(String),

    #[error("point {point} lies inside the body closure")]
    InsideBody { point: crate::Vector3 },

    #[error("support has zero volume")]
    DegenerateSupport,

    #[error("quadrature did not reach rel_tol {rel_tol:e} (estimated error {estimate:e})")]
    ToleranceNotMet { rel_tol: f64, estimate: f64 },

    #[error("launch speed² {speed_sq:e} is not below the escape threshold {threshold:e}")]
    AtOrAboveEscape { speed_sq: f64, threshold: f64 },

    #[error("time {t} is past the collapse time {t_collapse}")]
    DomainExceeded { t: f64, t_collapse: f64 },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("ball does not contain the body closure (needs radius >= {required}, has {radius})")]
    NotContaining { required: f64, radius: f64 },

    #[error("criterion requires a different body shape: {0}")]
    WrongShape(String),
}
