use thiserror::Error;

/// Domain errors shared by every module in the crate.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// so front-ends can match on errors without parsing messages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("probability entries sum to {sum}, expected 1 within 1e-9")]
    SumNotOne { sum: f64 },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("degree {degree} is below the minimum {min} for this operation")]
    DegreeTooSmall { degree: usize, min: usize },
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("unknown graph '{0}'")]
    UnknownGraph(String),
    #[error("window exceeds the vertex cap: at least {count} vertices, cap {cap}")]
    RadiusTooLarge { count: usize, cap: usize },
    #[error("window radius {radius} too small, need at least {needed}")]
    RadiusTooSmall { radius: u32, needed: u32 },
    #[error("shell {shell} lies outside the window of radius {radius}")]
    ShellOutOfRange { shell: u32, radius: u32 },
    #[error("probability vectors are not comparable in the tail-sum order")]
    NotComparable,
    #[error("k = {k} out of range for degree {d}")]
    KOutOfRange { k: usize, d: usize },
    #[error("mean cluster size diverges at p2 = 1")]
    P2IsOne,
    #[error("no positive choice size: p0 = 1")]
    NoPositiveSupport,
    #[error("skeleton count overflows 128-bit integers at n_exterior = {0}")]
    Overflow(u32),
    #[error("event support too large: {bits} state bits, limit {max}")]
    SupportTooLarge { bits: usize, max: usize },
    #[error("direction components sum to {0}, expected 0 within 1e-12")]
    DirectionNotTangent(f64),
    #[error("perturbed vector leaves the probability simplex at entry {0}")]
    SimplexExit(usize),
    #[error("event failed the randomized increasingness check")]
    NotIncreasing,
    #[error("fewer than two shells had enough successes to fit a decay rate")]
    AllZeroReach,
    #[error("parameter {name} = {value} outside [0, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NegativeEntry { .. } => "negative_entry",
            Error::SumNotOne { .. } => "sum_not_one",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::DegreeTooSmall { .. } => "degree_too_small",
            Error::DegreeTooLarge { .. } => "degree_too_large",
            Error::UnknownGraph(_) => "unknown_graph",
            Error::RadiusTooLarge { .. } => "radius_too_large",
            Error::RadiusTooSmall { .. } => "radius_too_small",
            Error::ShellOutOfRange { .. } => "shell_out_of_range",
            Error::NotComparable => "not_comparable",
            Error::KOutOfRange { .. } => "k_out_of_range",
            Error::P2IsOne => "p2_is_one",
            Error::NoPositiveSupport => "no_positive_support",
            Error::Overflow(_) => "overflow",
            Error::SupportTooLarge { .. } => "support_too_large",
            Error::DirectionNotTangent(_) => "direction_not_tangent",
            Error::SimplexExit(_) => "simplex_exit",
            Error::NotIncreasing => "not_increasing",
            Error::AllZeroReach => "all_zero_reach",
            Error::ParameterOutOfRange { .. } => "parameter_out_of_range",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
