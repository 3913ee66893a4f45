use core::fmt;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects of different spatial dimension were combined.
    DimensionMismatch { expected: usize, found: usize },
    /// Dimension outside `1..=MAX_DIM`.
    UnsupportedDimension(usize),
    /// A vector did not have the length required by the plan or table.
    LengthMismatch { expected: usize, found: usize },
    /// Expansion order below the order of the PDE.
    OrderBelowPde { order: usize, pde_order: usize },
    /// Every PDE coefficient is zero.
    DegeneratePde,
    /// Kernel evaluated at (or numerically at) its singular point.
    Singular,
    /// The plan was built for a different PDE than the kernel satisfies.
    PlanKernelMismatch,
    /// A derivative table of insufficient order was supplied.
    TableOrder { required: usize, found: usize },
    /// FFT shapes of a table and a plan disagree.
    ShapeMismatch,
    /// A point lies outside the root box of a tree.
    OutsideRoot { index: usize },
    /// Invalid argument with a short explanation.
    Invalid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnsupportedDimension(d) => write!(f, "unsupported dimension {d}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::OrderBelowPde { order, pde_order } => {
                write!(f, "order below PDE order ({order} < {pde_order})")
            }
            Error::DegeneratePde => write!(f, "degenerate PDE: all coefficients are zero"),
            Error::Singular => write!(f, "kernel evaluated at its singular point"),
            Error::PlanKernelMismatch => write!(f, "plan was built for a different PDE than the kernel"),
            Error::TableOrder { required, found } => {
                write!(f, "derivative table order {found} is below the required {required}")
            }
            Error::ShapeMismatch => write!(f, "FFT shape mismatch"),
            Error::OutsideRoot { index } => write!(f, "point {index} lies outside the root box"),
            Error::Invalid(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
