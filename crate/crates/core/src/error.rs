use alloc::string::String;
use core::fmt;

/// Errors raised by the counting and asymptotic pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A weight was zero or negative.
    InvalidWeights,
    /// A walk length beyond the configured enumeration cap.
    ResourceLimit { requested: usize, cap: usize },
    /// A diagonal coefficient beyond the series-expansion cap.
    SeriesCap { requested: usize, cap: usize },
    /// A sampled series is too short or contains a zero term.
    DegenerateSeries(String),
    /// A closed-form expression hit a vanishing denominator.
    DegenerateDenominator,
    /// Two routes to the same quantity disagree (an internal bug).
    Inconsistent(String),
    /// The phase jet has a non-vanishing gradient at the expansion point.
    NotCritical { gradient: f64 },
    /// The Hessian of the phase is numerically singular.
    SingularHessian,
    /// Every constant C_0..C_M was below the zero threshold.
    OrderExhausted { order: usize },
    /// The zero test for C_j changed when the working precision was doubled.
    UnstableZeroTest { index: usize },
    /// A residue was requested on an axis whose coordinate is not 1.
    AxisMismatch,
    /// Numerator splitting found no telescoping decomposition.
    NoSplit,
    /// No asymptotic recipe matches the regime.
    UnhandledRegime,
    /// A precision outside the supported range.
    Precision(u32),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWeights => write!(f, "weights must be strictly positive"),
            Error::ResourceLimit { requested, cap } => {
                write!(
                    f,
                    "walk length {requested} exceeds the enumeration cap {cap}"
                )
            }
            Error::SeriesCap { requested, cap } => {
                write!(f, "diagonal index {requested} exceeds the series cap {cap}")
            }
            Error::DegenerateSeries(msg) => write!(f, "degenerate series: {msg}"),
            Error::DegenerateDenominator => write!(f, "closed-form denominator vanishes"),
            Error::Inconsistent(msg) => write!(f, "inconsistent result: {msg}"),
            Error::NotCritical { gradient } => {
                write!(
                    f,
                    "phase gradient {gradient:e} does not vanish at the expansion point"
                )
            }
            Error::SingularHessian => write!(f, "phase Hessian is singular"),
            Error::OrderExhausted { order } => {
                write!(f, "all expansion constants vanish up to order {order}")
            }
            Error::UnstableZeroTest { index } => {
                write!(
                    f,
                    "zero test for C_{index} is not stable under doubled precision"
                )
            }
            Error::AxisMismatch => write!(f, "residue axis coordinate is not 1"),
            Error::NoSplit => write!(f, "no numerator split applies"),
            Error::UnhandledRegime => write!(f, "no asymptotic recipe for this regime"),
            Error::Precision(bits) => write!(f, "unsupported precision of {bits} bits"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
