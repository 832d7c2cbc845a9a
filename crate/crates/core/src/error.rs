use core::fmt;

/// Failures raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Polynomial has degree zero or a vanishing leading coefficient.
    InvalidPolynomial,
    /// Root refinement did not reach the residual target.
    NonConvergence { residual: f64, iterations: usize },
    /// `|p(r)|` exceeds the divisibility tolerance.
    NotDivisible { remainder: f64 },
    /// Measure parameters out of range.
    InvalidMeasure(&'static str),
    /// A root of `f` sits on (or numerically near) the unit circle, or the
    /// reciprocal pairing failed.
    DegenerateFactorization { detail: &'static str, value: f64 },
    /// Boundary identity check failed on the circle samples.
    IdentityResidual { residual: f64 },
    /// Geometry of the outside roots disagrees with the cos theta trichotomy.
    CaseMismatch { cos_theta: f64, detail: &'static str },
    /// Gram matrix too ill-conditioned to invert.
    SingularGram { condition: f64 },
    /// Kernel argument outside the open unit disk.
    OutsideDomain,
    /// Bivariate expansion left a non-polynomial remainder, or the `w = 0`
    /// row/column did not vanish.
    ResidualNonPolynomial { residual: f64 },
    /// Matrix has an eigenvalue below the PSD tolerance.
    NotPsd { min_eigenvalue: f64 },
    /// Cholesky pivot at or below tolerance.
    NotPd { pivot: f64, index: usize },
    /// Poles are closer than the confluence threshold.
    ConfluentPoles { separation: f64 },
    /// Taylor rows do not reach the requested depth.
    InsufficientRows { have: usize, need: usize },
    /// Operation requires a different factorization case.
    WrongCase { expected: &'static str },
    /// Operation only defined for unit weights (or two atoms).
    UnsupportedMeasure(&'static str),
    /// Square matrix expected, or dimensions disagree.
    DimensionMismatch,
    /// Singular linear system.
    Singular,
    /// No refuting minor found up to `l_max` for a non-antipodal pair.
    Inconclusive { l_max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPolynomial => write!(f, "polynomial must have degree >= 1 and nonzero leading coefficient"),
            Error::NonConvergence { residual, iterations } => {
                write!(f, "root refinement did not converge after {iterations} iterations (residual {residual:e})")
            }
            Error::NotDivisible { remainder } => write!(f, "not divisible: remainder {remainder:e}"),
            Error::InvalidMeasure(why) => write!(f, "invalid measure: {why}"),
            Error::DegenerateFactorization { detail, value } => {
                write!(f, "degenerate factorization: {detail} ({value:e})")
            }
            Error::IdentityResidual { residual } => {
                write!(f, "boundary identity residual {residual:e} exceeds tolerance")
            }
            Error::CaseMismatch { cos_theta, detail } => {
                write!(f, "case mismatch at cos theta = {cos_theta}: {detail}")
            }
            Error::SingularGram { condition } => write!(f, "Gram matrix singular (condition {condition:e})"),
            Error::OutsideDomain => write!(f, "kernel arguments must lie in the open unit disk"),
            Error::ResidualNonPolynomial { residual } => {
                write!(f, "bivariate expansion left a remainder {residual:e}")
            }
            Error::NotPsd { min_eigenvalue } => write!(f, "matrix not PSD (min eigenvalue {min_eigenvalue:e})"),
            Error::NotPd { pivot, index } => write!(f, "Cholesky pivot {index} is {pivot:e}"),
            Error::ConfluentPoles { separation } => {
                write!(f, "poles are confluent (separation {separation:e}); use the confluent minor test")
            }
            Error::InsufficientRows { have, need } => write!(f, "need {need} Taylor rows, have {have}"),
            Error::WrongCase { expected } => write!(f, "operation requires the {expected} case"),
            Error::UnsupportedMeasure(why) => write!(f, "unsupported measure: {why}"),
            Error::DimensionMismatch => write!(f, "matrix dimensions do not match"),
            Error::Singular => write!(f, "singular linear system"),
            Error::Inconclusive { l_max } => write!(f, "no refuting minor found for l <= {l_max}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
