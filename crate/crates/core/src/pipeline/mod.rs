//! Measurement-based computation on graph states: graph measurements are
//! turned into x-basis measurements, measuring vertices are eliminated by
//! Schur complements, and simulated runs undo the measurement randomness
//! with Weyl corrections.

mod eliminate;
mod persistency;
mod run;
mod strategy;

pub use eliminate::{
    eliminate, eliminate_with, standard_encoding, verify_reduction, EliminationCase, EliminationOrder,
    FourierRecord, IdentityCheck, ReductionReport, ReductionStep, ReductionTrace,
};
pub use persistency::{measure_vertex, persistency_search, persistency_upper_bound, PersistencyWitness};
pub use run::{check_compensation, run, standard_output, CompensationReport, RunRecord};
pub use strategy::{
    measurement_graph, strategy_to_x_graph, x_graph_unchecked, x_measure_deviation, BasisChoice,
    MeasurementStrategy, XGraph,
};
