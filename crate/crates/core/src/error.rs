use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge {index} is a self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} has endpoint {vertex}, but the graph has only {n} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{what} is {actual}, above the limit of {limit}")]
    GuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("parameter {name} = {value} is out of range (expected {expected})")]
    Parameter {
        name: &'static str,
        value: String,
        expected: &'static str,
    },
    #[error("edge subset is not even; odd vertices {0:?}")]
    NotEven(Vec<usize>),
    #[error("state has {0} odd vertices and lies outside the worm state space")]
    OutsideWormSpace(usize),
    #[error("edge subsets are not nested: {0}")]
    NotNested(String),
    #[error("malformed transition: {0}")]
    MalformedTransition(String),
    #[error("{0} is not in the image of the path encoding for this transition")]
    NotInImage(String),
    #[error("holes must be two distinct vertices, got {0} twice")]
    CoincidentHoles(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot combine weights held in different arithmetic modes")]
    ModeMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error comes from a size guard rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}
