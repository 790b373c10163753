//! JSON graph documents and DOT export.

mod document;
mod dot;

pub use document::{
    emit_graph, parse_basis_tag, parse_graph, strategy_tags, BasisTag, EdgeEntry, GraphDocument, StrategyEntry,
    VertexEntry,
};
pub use dot::export_dot;
