use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the tube-formula machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid self-similar system: {0}")]
    InvalidSystem(String),

    #[error("invalid fractal string: {0}")]
    InvalidString(String),

    #[error("invalid Steiner-like representation: {0}")]
    InvalidRep(String),

    #[error("dimension mismatch: string/system has d = {string}, generator has d = {generator}")]
    DimensionMismatch { string: usize, generator: usize },

    #[error("non-finite coefficient sample at eps = {eps}")]
    NonFiniteSample { eps: f64 },

    #[error("string cannot be materialized down to relative scale {floor}")]
    UnmaterializableString { floor: f64 },

    #[error("s = {s} is a pole of the scaling zeta function")]
    AtPole { s: Complex64 },

    #[error("s = {s} is not a located pole (|1 - phi(s)| = {residual})")]
    NotAPole { s: Complex64, residual: f64 },

    #[error("Re(s) = {re} must exceed the abscissa {abscissa} by at least {margin}")]
    AbscissaViolation { re: f64, abscissa: f64, margin: f64 },

    #[error("s = {s} lies within the guard band of the integer pole {k}")]
    IntegerSingularity { s: Complex64, k: usize },

    #[error("pole at {omega} is not simple (|phi'| = {derivative})")]
    NotSimple { omega: Complex64, derivative: f64 },

    #[error("scaling complex dimension {omega} coincides with the integer {k} (double pole unsupported)")]
    ScalingIntegerCollision { omega: Complex64, k: usize },

    #[error("root count mismatch: argument principle gives {expected}, Newton found {found}")]
    BoxCountMismatch { expected: i64, found: i64 },

    #[error("numerical procedure did not converge: {0}")]
    NonConvergent(String),

    #[error("eps = {eps} outside the open range (0, g) with g = {g}")]
    EpsOutOfRange { eps: f64, g: f64 },

    #[error("generator is not monophase")]
    NotMonophase,

    #[error("screen Re s = {sigma} passes within the guard margin of a pole or integer at Re s = {pole_re}")]
    ScreenThroughPole { sigma: f64, pole_re: f64 },

    #[error("screen abscissa {sigma} requires a monophase generator (need sigma < 0)")]
    ScreenPlacement { sigma: f64 },

    #[error("scale enumeration exceeded the bound of {limit} distinct values")]
    Explosion { limit: usize },

    #[error("no closed-form tail is available for this string")]
    TailUnavailable,

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("seed violates the Descartes relation (|F(a)| = {residual})")]
    InvalidSeed { residual: f64 },

    #[error("expression error: {0}")]
    Grammar(String),

    #[error("representation failed validation: {0}")]
    ValidationFailure(String),

    #[error("unknown builtin generator `{0}`")]
    UnknownName(String),

    #[error("recurrence has no base function")]
    NoBase,

    #[error("symmetric dimension sum is not real: Im = {imag}, Re = {real}")]
    NonRealSum { imag: f64, real: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
