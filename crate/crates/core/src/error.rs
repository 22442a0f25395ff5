use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A population of exactly 0 or 1 maps to an infinite inverse temperature.
    #[error("population {p_plus} maps to an infinite inverse temperature")]
    InfiniteInverseTemperature { p_plus: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("degenerate spectrum: eigenvalue gap {gap:e} is below threshold")]
    Degenerate { gap: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// The integrator leaked more norm than the unitarity budget allows.
    #[error("propagation with {steps} steps accumulated unitarity drift {drift:e} (limit {limit:e})")]
    Accuracy { steps: usize, drift: f64, limit: f64 },

    /// Efficiency was requested outside the heat-engine regime.
    #[error("not a heat engine: work {work:e}, hot heat {q_hot:e}")]
    NotAnEngine { work: f64, q_hot: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
