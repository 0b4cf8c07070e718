use std::fmt;

/// Errors surfaced by the library.
///
/// Variants carry enough context to reproduce the failing call; `BoundViolated`
/// additionally embeds a JSON description of the offending instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `p` passed to a field constructor is not prime.
    NotPrime(u64),
    /// A table, enumeration, or cyclotomic order exceeds its configured cap.
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    /// Discrete log (or inversion) of the zero element.
    ZeroArgument,
    /// Two arguments live over different fields.
    FieldMismatch,
    /// A character required to be nontrivial is trivial.
    TrivialCharacter,
    /// `change_order` target is not a multiple of the current order.
    NotDivisible { from: u64, to: u64 },
    /// Coefficient matrix has lower rank than required.
    RankDeficient { rank: usize, required: usize },
    /// Operation requires a codimension-1 subspace with no zero coefficients.
    NotAHyperplane(String),
    /// Recovered polynomial degree disagrees with the predicted degree, or the
    /// surplus power sums are inconsistent with the recovered coefficients.
    DegreeMismatch(String),
    /// Subspace is neither in general position nor in general position among
    /// its translates.
    NotInPosition,
    /// Root finder failed to reach the target residual.
    NonConvergence { iterations: u32, residual: f64 },
    /// A proved sum bound failed numerically; carries the instance for replay.
    BoundViolated { detail: String, instance_json: String },
    /// Newton coefficients failed the algebraic-integrality check.
    NonIntegralCoefficient { index: usize },
    /// Campaign configuration failed validation.
    ConfigInvalid(String),
    /// Catch-all precondition violation (sizes, empty inputs, ...).
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Error::*;
        match self {
            NotPrime(p) => write!(f, "{p} is not prime"),
            CapExceeded { what, value, cap } => {
                write!(f, "{what} = {value} exceeds cap {cap}")
            }
            ZeroArgument => write!(f, "zero element has no discrete log"),
            FieldMismatch => write!(f, "arguments belong to different fields"),
            TrivialCharacter => write!(f, "character must be nontrivial"),
            NotDivisible { from, to } => {
                write!(f, "cannot lift root of unity: {from} does not divide {to}")
            }
            RankDeficient { rank, required } => {
                write!(f, "matrix rank {rank}, required {required}")
            }
            NotAHyperplane(why) => write!(f, "not an admissible hyperplane: {why}"),
            DegreeMismatch(why) => write!(f, "degree mismatch: {why}"),
            NotInPosition => {
                write!(f, "subspace is not in general position among its translates")
            }
            NonConvergence { iterations, residual } => {
                write!(f, "root finder stalled after {iterations} iterations, residual {residual:.3e}")
            }
            BoundViolated { detail, .. } => write!(f, "bound violated: {detail}"),
            NonIntegralCoefficient { index } => {
                write!(f, "coefficient e_{index} is not an algebraic integer")
            }
            ConfigInvalid(why) => write!(f, "invalid configuration: {why}"),
            InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
