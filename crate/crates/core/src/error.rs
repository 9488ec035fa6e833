use thiserror::Error;

/// Errors raised while reading a TTP benchmark file.
#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("missing header field `{0}`")]
    MissingHeader(&'static str),
    #[error("unsupported edge weight type `{0}`")]
    UnsupportedEdgeWeight(String),
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("{section} lists {found} records, header declares {declared}")]
    CountMismatch {
        section: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("item {item} is placed at city 1, which holds no items")]
    ItemAtStartCity { item: usize },
    #[error("item {item} references unknown city {city}")]
    UnknownCity { item: usize, city: usize },
    #[error("knapsack capacity must be positive")]
    NonPositiveCapacity,
    #[error("item {item} has non-positive weight")]
    NonPositiveWeight { item: usize },
    #[error("invalid speeds: min {min}, max {max}")]
    InvalidSpeeds { min: f64, max: f64 },
    #[error("instance needs at least 3 cities, found {0}")]
    TooFewCities(usize),
    #[error("unexpected end of input in {0}")]
    UnexpectedEof(&'static str),
}

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum TtpError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("city {city} is out of range 1..={n}")]
    CityOutOfRange { city: usize, n: usize },
    #[error("item {item} is out of range 1..={m}")]
    ItemOutOfRange { item: usize, m: usize },
    #[error("invalid tour: {0}")]
    InvalidTour(String),
    #[error("packing weight {weight} exceeds capacity {capacity}")]
    CapacityExceeded { weight: u64, capacity: u64 },
    #[error("solution objective {z} is below the quality threshold {z_min}")]
    BelowThreshold { z: f64, z_min: f64 },
    #[error("{rejections} consecutive offspring rejected; quality threshold {z_min} is too tight")]
    ThresholdTooTight { rejections: u64, z_min: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = TtpError> = std::result::Result<T, E>;
