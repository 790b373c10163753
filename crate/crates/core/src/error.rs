use thiserror::Error;

use crate::vertex::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u32),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u32, u32),
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not surjective")]
    NotSurjective,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("block Γ^N_N is not invertible for N = {0:?}")]
    NotInvertibleBlock(Vec<Vertex>),
    #[error("vertex set contains input vertices: {0:?}")]
    InvalidSubset(Vec<Vertex>),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("vertex collision: {0}")]
    VertexCollision(Vertex),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(Vertex),
    #[error("graph is not basic")]
    NotBasic,
    #[error("graph is not admissible (g1={g1}, g2={g2}, g3={g3})")]
    NotAdmissible { g1: bool, g2: bool, g3: bool },
    #[error("operation requires d = 2, got d = {0}")]
    NotBinary(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("oracle size cap exceeded: {requested} amplitudes > {cap}")]
    SizeCap { requested: u128, cap: u64 },
    #[error("outcome has zero probability")]
    ZeroProbability,
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
