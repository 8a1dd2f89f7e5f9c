use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain {
        what: &'static str,
        value: f64,
    },
    /// Malformed input data (lengths, ordering, non-finite entries).
    InvalidInput(&'static str),
    /// A sampled weight carries no derivatives and analytic mode was requested.
    DerivativeUnavailable,
    InsufficientGrid {
        nodes: usize,
        required: usize,
    },
    NonUniformGrid,
    InvalidGrid {
        intervals: usize,
        minimum: usize,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    NoConvergence {
        iterations: usize,
        residual: f64,
    },
    /// Coupling below −⅛, where the inverse-square problem loses its
    /// unique self-adjoint realization.
    UnphysicalCoupling {
        lambda: f64,
    },
    /// `dW/dλ` diverges at `m = 0`.
    Divergence {
        m: i32,
    },
    Precondition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DerivativeUnavailable => {
                write!(f, "weight derivatives unavailable; request finite-difference derivative mode")
            }
            Error::InsufficientGrid { nodes, required } => {
                write!(f, "finite-difference derivatives need at least {required} nodes, got {nodes}")
            }
            Error::NonUniformGrid => {
                write!(f, "finite-difference derivatives need uniformly spaced nodes")
            }
            Error::InvalidGrid { intervals, minimum } => {
                write!(f, "grid needs at least {minimum} subintervals, got {intervals}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::NoConvergence { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (last residual {residual:e})")
            }
            Error::UnphysicalCoupling { lambda } => write!(
                f,
                "coupling lambda = {lambda} is below -1/8; the inverse-square problem is not well posed there"
            ),
            Error::Divergence { m } => write!(
                f,
                "dW/dlambda diverges for m = {m}: the exact derivative (n + 1/2 + s)/s blows up as \
                 s = sqrt(2 lambda + 1/4) -> 0, and the discrete <1/sin^2> grows without bound \
                 under grid refinement"
            ),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
