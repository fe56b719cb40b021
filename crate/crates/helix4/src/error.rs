use crate::minkowski::CausalCharacter;

/// Crate-wide error type. Variants map onto CLI exit-code classes:
/// input/format errors exit with 10, geometric/domain rejections with 11,
/// numerical blow-ups with 12 (see `cli::exit_code_for_error`).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot normalize a (near-)null vector")]
    NullVector,

    #[error("grid too short: need at least {needed} points, got {got}")]
    GridTooShort { needed: usize, got: usize },

    #[error("grid spacing is not uniform")]
    NonUniformGrid,

    #[error("derivative order {order} unsupported")]
    OrderUnsupported { order: usize },

    #[error("empty input sequence")]
    EmptyInput,

    #[error("parameter {s} outside curve domain [{min}, {max}]")]
    OutOfDomain { s: f64, min: f64, max: f64 },

    #[error("non-finite state encountered during integration at s = {s}")]
    NonFiniteState { s: f64 },

    #[error("curve is not spacelike: velocity is {character:?} at s = {s}")]
    NotSpacelike { character: CausalCharacter, s: f64 },

    #[error("curve is not unit speed at s = {s}: g(x',x') = {speed_sq}")]
    NotUnitSpeed { s: f64, speed_sq: f64 },

    #[error("curvature k{index} vanishes at s = {s}; Frenet frame undefined")]
    CurvatureVanishes { index: u8, s: f64 },

    #[error("frame sign constant flips at s = {s}; degenerate point on the curve")]
    SignFlip { s: f64 },

    #[error("signature rule violated: (eps1, eps2) = (-1, -1) is not admissible")]
    SignatureRuleViolation,

    #[error("k1 = k2 * (C1*eta + C2*mu) crosses zero at s = {s}")]
    RatioSignViolation { s: f64 },

    #[error("exponential profile requires D > 0")]
    NonPositiveD,

    #[error("exponential fit requires k1/k2 > 0 throughout")]
    NonPositiveRatio,

    #[error("exponential characterization applies to eps1 = +1 only")]
    WrongEpsilon,

    #[error("basis Gram matrix ill-conditioned (cond = {cond:.3e}); theta range too small")]
    IllConditioned { cond: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("parameter column not strictly increasing at line {line}")]
    NonMonotoneParameter { line: usize },

    #[error("expected 4 coordinate columns, got {got} at line {line}")]
    DimensionMismatch { line: usize, got: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
