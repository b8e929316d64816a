use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("initial coin amplitudes are not normalized: |a|^2 + |b|^2 = {norm}")]
    NotNormalized { norm: f64 },
    #[error("coin operator is not unitary (max deviation of U^dagger U from I is {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("{steps} steps from support radius {radius} would reach the lattice edge at t_max = {t_max}")]
    TruncationViolation { steps: usize, radius: usize, t_max: usize },
    #[error("counts table has no H/V events to normalize against")]
    EmptyCounts,
    #[error("non-positive value {value} at t = {t} in power-law fit range")]
    NonPositiveData { t: usize, value: f64 },
    #[error("power-law fit needs at least {needed} points in range, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("malformed counts table at line {line}: {reason}")]
    MalformedCounts { line: usize, reason: String },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
