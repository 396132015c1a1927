use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no primitive direction: zero vector")]
    ZeroVector,

    #[error("not unimodular: determinant is {0}")]
    NotUnimodular(String),

    #[error("polyhedron is unbounded along direction ({0})")]
    Unbounded(String),

    #[error("closure restricted to polytopes: unbounded along ({0})")]
    ClosureUnbounded(String),

    #[error("polyhedron is empty")]
    Empty,

    #[error("no inscribed box: polyhedron is not full-dimensional")]
    NoInscribedBox,

    #[error("polyhedron has no integer points")]
    NoIntegerPoints,

    #[error("polytope is not centrally symmetric about the given center")]
    NotSymmetric,

    #[error("not a face of the polyhedron")]
    NotAFace,

    #[error("inequality is not valid for the integer hull")]
    InvalidForIntegerHull,

    #[error("point is not in the polyhedron")]
    PointOutside,

    #[error("point is not in the relative interior")]
    NotInRelativeInterior,

    #[error("polytope is not relatively lattice-free: integer point ({0}) in its relative interior")]
    NotRelativelyLatticeFree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { msg, .. } => Error::Parse { line, msg },
            other => other,
        }
    }
}
