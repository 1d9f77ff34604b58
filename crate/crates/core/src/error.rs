use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The discriminant cubic has more than one real root; the caller gets all of them.
    #[error("multiple critical points (discriminant {discriminant:e}); real roots in beta^2: {roots:?}")]
    MultiCritical { discriminant: f64, roots: Vec<f64> },

    #[error("exact critical route needs a nonzero Duffing strength; use the harmonic route")]
    HarmonicRouteRequired,

    #[error("no stationary state: drift matrix has max Re(eig) = {max_real:e}")]
    NoStationaryState { max_real: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("optimal-detuning solve failed: {0}")]
    OptimalDetuning(String),

    #[error("mean-field integration failed: {0}")]
    Integration(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),
}
