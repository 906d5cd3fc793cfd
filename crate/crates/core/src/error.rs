use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the open unit disk (|λ| = {0})")]
    PointOutsideDisk(f64),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("negative value {0} where a nonnegative one is required")]
    NegativeValue(f64),
    #[error("constant c must be positive, got {0}")]
    InvalidC(f64),
    #[error("harmonic function is not certified positive: {0}")]
    NonPositiveHarmonic(String),
    #[error("contraction ratio {0} outside (0, 1)")]
    RatioOutOfRange(f64),
    #[error("system has no maps")]
    EmptySystem,
    #[error("rendering would produce {0} points, above the guard")]
    ExplosionGuard(f64),
    #[error("bad address: map index {index} with {maps} maps")]
    BadAddress { index: usize, maps: usize },
    #[error("could not place {0} disjoint disks in the unit disk")]
    DiskPackingFailed(usize),
    #[error("arity mismatch: {0}")]
    BadArity(String),
    #[error("point cloud has fewer than two distinct points")]
    DegenerateCloud,
    #[error("scale index {0} exceeds the representable dyadic range")]
    ScaleOverflow(u32),
    #[error("regression window has {0} scales, at least 3 needed")]
    WindowTooSmall(usize),
    #[error("dimension {0} outside (0, 2]")]
    DimOutOfRange(f64),
    #[error("area {0} outside [0, π] for the capacity-normalised case")]
    AreaOutOfRange(f64),
    #[error("k = {0} outside [0, 1)")]
    KOutOfRange(f64),
    #[error("δ = {0} outside (0, 1]")]
    DeltaOutOfRange(f64),
    #[error("circle of radius {radius} about |λ0| = {center} leaves the unit disk")]
    CircleOutsideDomain { center: f64, radius: f64 },
    #[error("subset has fewer than two points")]
    DegenerateSubset,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable variant name, used by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::PointOutsideDisk(_) => "PointOutsideDisk",
            Error::NonFinite(_) => "NonFinite",
            Error::NegativeValue(_) => "NegativeValue",
            Error::InvalidC(_) => "InvalidC",
            Error::NonPositiveHarmonic(_) => "NonPositiveHarmonic",
            Error::RatioOutOfRange(_) => "RatioOutOfRange",
            Error::EmptySystem => "EmptySystem",
            Error::ExplosionGuard(_) => "ExplosionGuard",
            Error::BadAddress { .. } => "BadAddress",
            Error::DiskPackingFailed(_) => "DiskPackingFailed",
            Error::BadArity(_) => "BadArity",
            Error::DegenerateCloud => "DegenerateCloud",
            Error::ScaleOverflow(_) => "ScaleOverflow",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::DimOutOfRange(_) => "DimOutOfRange",
            Error::AreaOutOfRange(_) => "AreaOutOfRange",
            Error::KOutOfRange(_) => "KOutOfRange",
            Error::DeltaOutOfRange(_) => "DeltaOutOfRange",
            Error::CircleOutsideDomain { .. } => "CircleOutsideDomain",
            Error::DegenerateSubset => "DegenerateSubset",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Config(_) => "ConfigError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
