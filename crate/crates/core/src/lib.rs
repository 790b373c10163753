//! Qudit graph states, graph codes and measurement-based computation over
//! prime fields.
//!
//! The symbolic layer ([`field`], [`graph`], [`weyl`], [`pipeline`]) works with
//! exact finite-field data. The [`oracle`] module is a dense Hilbert-space
//! simulator used to check every operator identity numerically.

pub mod error;
#[macro_use]
pub mod vertex;
pub mod field;
pub mod graph;
pub mod weyl;
pub mod oracle;
pub mod pipeline;
pub mod io;

pub use error::{Error, Result};
pub use field::{FdMatrix, FdScalar, FdVector};
pub use graph::{BinaryCase, RemovabilityClass, VertexRole, WeightedGraph};
pub use pipeline::{BasisChoice, EliminationOrder, MeasurementStrategy, ReductionTrace, RunRecord};
pub use vertex::{Vertex, VertexSet};
