use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input description.
    Parse,
    /// A mathematical hypothesis of the requested operation does not hold.
    Precondition,
    /// The computation would exceed a configured resource cap.
    ResourceCap,
    /// An iterative oracle did not converge.
    Convergence,
}

/// Index tuples carried by errors are 1-based, as they are reported to users.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order must be at least 1")]
    InvalidOrder,
    #[error("dimension must be at least 1")]
    InvalidDim,
    #[error("index tuple {tuple:?} has {len} components, expected {order}")]
    IndexArity {
        tuple: Vec<usize>,
        len: usize,
        order: usize,
    },
    #[error("index tuple {tuple:?} out of range 1..={dim}")]
    IndexOutOfRange { tuple: Vec<usize>, dim: usize },
    #[error("duplicate index tuple {0:?}")]
    DuplicateIndex(Vec<usize>),
    #[error("dense data holds {got} entries, expected {expected}")]
    DenseLength { got: usize, expected: usize },
    #[error(
        "dense storage of {dim}^{order} entries exceeds the limit of {limit}; use sparse storage"
    )]
    DenseTooLarge {
        order: usize,
        dim: usize,
        limit: usize,
    },
    #[error("non-finite entry at {0:?}")]
    NonFinite(Vec<usize>),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("left factor must have order at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("{what}: expected order {expected}, got {got}")]
    WrongOrder {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("vector length {got} does not match dimension {dim}")]
    LengthMismatch { got: usize, dim: usize },
    #[error("result would hold up to {estimate} entries, above the cap of {cap}")]
    EntryCapExceeded { estimate: u128, cap: usize },
    #[error("{0} is not nonnegative")]
    NotNonnegative(&'static str),
    #[error("r_{row}({operand}) = 0")]
    ZeroRowSum { operand: &'static str, row: usize },
    #[error("scaling vector must be positive, got d_{index} = {value}")]
    NonPositiveScaling { index: usize, value: f64 },
    #[error("power must be at least 1")]
    InvalidPower,
    #[error("exponent mu_k overflows a signed 64-bit integer")]
    ExponentOverflow,
    #[error("tensor is not weakly irreducible")]
    NotWeaklyIrreducible,
    #[error("vertex {vertex} lies on no circuit")]
    NotWeaklyConnected { vertex: usize },
    #[error("more than {cap} circuits")]
    CircuitCapExceeded { cap: usize },
    #[error(
        "digraph on {vertices} vertices with {arcs} arcs is too dense for circuit enumeration"
    )]
    DigraphTooDense { vertices: usize, arcs: usize },
    #[error("product pattern may hide cancellations and the product is too large to materialize (superset estimate has {arcs} arcs)")]
    InexactProductPattern { arcs: usize },
    #[error("bound {0} is not representable as a finite number")]
    BoundOverflow(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("power iteration broke down: {0}")]
    Breakdown(String),
    #[error(
        "power iteration did not converge after {iterations} iterations (interval width {width:e})"
    )]
    NotConverged { iterations: usize, width: f64 },
    #[error("root finder did not converge in {0} sweeps")]
    RootsNotConverged(usize),
    #[error("eigenvalue {value} fails its residual check ({residual:e} > {bound:e})")]
    ResidualTooLarge {
        value: String,
        residual: f64,
        bound: f64,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Parse(_)
            | InvalidOrder
            | InvalidDim
            | IndexArity { .. }
            | IndexOutOfRange { .. }
            | DuplicateIndex(_)
            | DenseLength { .. }
            | NonFinite(_) => ErrorKind::Parse,
            DenseTooLarge { .. }
            | EntryCapExceeded { .. }
            | ExponentOverflow
            | CircuitCapExceeded { .. }
            | DigraphTooDense { .. }
            | InexactProductPattern { .. }
            | BoundOverflow(_) => ErrorKind::ResourceCap,
            Breakdown(_) | NotConverged { .. } | RootsNotConverged(_) | ResidualTooLarge { .. } => {
                ErrorKind::Convergence
            }
            _ => ErrorKind::Precondition,
        }
    }
}
