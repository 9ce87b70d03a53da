//! Error type shared by all modules.

use std::fmt;

/// Failure modes of the toolkit's fallible operations.
///
/// Structural mistakes (arity mismatches between values that were already
/// validated) are treated as programmer errors and panic; this enum covers
/// the mathematically meaningful failures a caller can hit with valid input.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Composition target has a nonzero constant term.
    NonzeroConstantTerm,
    /// A linear part (or matrix) that must be invertible is singular.
    SingularLinearPart,
    /// Division by a series with zero constant term, or by the zero scalar.
    NotInvertible,
    /// `wedge_top` called with a number of series different from the arity.
    WedgeCountMismatch { expected: usize, got: usize },
    /// Derivation index out of `1..=n`.
    IndexOutOfRange { index: usize, arity: usize },
    /// Group presentation is not closed: composing the two named elements
    /// leaves the claimed element list.
    GroupNotClosed { left: usize, right: usize },
    /// `average_linearizer` precondition: some claimed element has order
    /// exceeding the size of the element list.
    OrderExceedsGroup { element: usize },
    /// Conjugated map is not diagonal, or an eigenvalue fails the required
    /// m-th power identity.
    NotDiagonalizable(String),
    /// Matrix rows are linearly dependent where independence is required.
    DependentRows,
    /// No invertible column submatrix was found in `eigen_ratio`.
    NoInvertibleColumns,
    /// Jordan blocks larger than 2x2 are not supported.
    UnsupportedJordanBlock(usize),
    /// Input vector field is not homogeneous where required.
    NotHomogeneous,
    /// Homogeneous components share a common factor (or the cheap
    /// certificate could not rule one out).
    CommonFactor(String),
    /// Blow-up of a field that is nonsingular at the origin.
    NonsingularOrigin,
    /// Chart transition produced genuine denominators.
    DenominatorsDoNotClear,
    /// Adaptive integrator step size underflowed; carries last valid time.
    StepSizeUnderflow { t: f64 },
    /// Exact search requested on the float backend.
    ExactBackendRequired,
    /// `finite_order_test` bound too large.
    FactorialBoundTooLarge { max: u32, got: u32 },
    /// Rational-function numerator/denominator degree mismatch.
    DegreeMismatch { num: usize, den: usize },
    /// Input value failed validation (manifest schema and friends).
    BadInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonzeroConstantTerm => {
                write!(f, "composition target has a nonzero constant term")
            }
            Error::SingularLinearPart => write!(f, "linear part is singular"),
            Error::NotInvertible => write!(f, "value is not invertible"),
            Error::WedgeCountMismatch { expected, got } => {
                write!(f, "wedge_top expects {expected} series, got {got}")
            }
            Error::IndexOutOfRange { index, arity } => {
                write!(f, "variable index {index} out of range 1..={arity}")
            }
            Error::GroupNotClosed { left, right } => write!(
                f,
                "element list not closed under composition: product of elements {left} and {right} is missing"
            ),
            Error::OrderExceedsGroup { element } => write!(
                f,
                "element {element} has order exceeding the claimed group size"
            ),
            Error::NotDiagonalizable(why) => write!(f, "not diagonalizable: {why}"),
            Error::DependentRows => write!(f, "matrix rows are linearly dependent"),
            Error::NoInvertibleColumns => {
                write!(f, "no invertible column submatrix found")
            }
            Error::UnsupportedJordanBlock(n) => {
                write!(f, "Jordan blocks of size {n} > 2 are not supported")
            }
            Error::NotHomogeneous => write!(f, "vector field is not homogeneous"),
            Error::CommonFactor(why) => write!(f, "common-factor check failed: {why}"),
            Error::NonsingularOrigin => {
                write!(f, "origin is not singular (order 0); blow-up undefined")
            }
            Error::DenominatorsDoNotClear => {
                write!(f, "chart transition denominators do not clear")
            }
            Error::StepSizeUnderflow { t } => {
                write!(f, "integrator step size underflow at t = {t}")
            }
            Error::ExactBackendRequired => {
                write!(f, "operation requires the exact scalar backend")
            }
            Error::FactorialBoundTooLarge { max, got } => {
                write!(f, "factorial bound {got} exceeds supported maximum {max}")
            }
            Error::DegreeMismatch { num, den } => write!(
                f,
                "numerator degree {num} differs from denominator degree {den}"
            ),
            Error::BadInput(why) => write!(f, "invalid input: {why}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
