use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Domain or rectangle bounds are not strictly ordered.
    InvalidDomain(String),
    /// Builtin field name not in the catalog.
    UnknownBuiltin(String),
    /// Builtin called with the wrong number of parameters.
    BadArity {
        name: String,
        expected: usize,
        got: usize,
    },
    /// Parameter value outside the accepted range for the builtin.
    InvalidParam(String),
    /// Evaluation point outside the field's domain.
    OutOfDomain { x: f64, y: f64 },
    /// Descriptor string could not be parsed; carries the offending token.
    BadDescriptor(String),
    /// Grid file parse failure with 1-based line and column.
    GridParse {
        line: usize,
        col: usize,
        msg: String,
    },
    /// Triangulation violates nonoverlap/cover/degeneracy constraints.
    InvalidTriangulation(String),
    /// Two quasi-linear functions do not share a usable mesh.
    IncompatibleMeshes,
    /// Rectangle containment precondition failed (distinct from a false verdict).
    ContainmentViolated,
    /// Any other precondition violation.
    InvalidInput(String),
    /// Resource guard exceeded (e.g. oracle size limit).
    SizeGuard(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDomain(msg) => write!(f, "invalid domain: {msg}"),
            Error::UnknownBuiltin(name) => write!(f, "unknown builtin field `{name}`"),
            Error::BadArity {
                name,
                expected,
                got,
            } => write!(f, "builtin `{name}` expects {expected} parameter(s), got {got}"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::OutOfDomain { x, y } => write!(f, "point ({x}, {y}) outside field domain"),
            Error::BadDescriptor(tok) => write!(f, "unparseable field descriptor at `{tok}`"),
            Error::GridParse { line, col, msg } => {
                write!(f, "grid file parse error at line {line}, column {col}: {msg}")
            }
            Error::InvalidTriangulation(msg) => write!(f, "invalid triangulation: {msg}"),
            Error::IncompatibleMeshes => write!(f, "quasi-linear functions have incompatible meshes"),
            Error::ContainmentViolated => {
                write!(f, "rectangle union containment precondition violated")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::SizeGuard(msg) => write!(f, "size guard exceeded: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
