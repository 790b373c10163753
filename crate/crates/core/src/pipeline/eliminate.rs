use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FdMatrix, FdVector};
use crate::graph::{VertexRole, WeightedGraph};
use crate::oracle::{encoding_operator, fit_phase, fourier, LinearMap};
use crate::vertex::{Vertex, VertexSet};

/// Which case of the removal algorithm a step used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EliminationCase {
    /// (i) a self-linked measuring vertex.
    #[serde(rename = "i")]
    SelfLink,
    /// (ii) two linked measuring vertices.
    #[serde(rename = "ii")]
    MeasuringPair,
    /// (iii) a measuring vertex and an output neighbour, exchanged for a fresh output.
    #[serde(rename = "iii")]
    OutputExchange,
}

impl fmt::Display for EliminationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EliminationCase::SelfLink => "i",
            EliminationCase::MeasuringPair => "ii",
            EliminationCase::OutputExchange => "iii",
        })
    }
}

/// Local Fourier transform F[C] with C = 1^m_k, taking the old output k to
/// the fresh output m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierRecord {
    pub old_output: Vertex,
    pub new_output: Vertex,
    /// Connecting graph block, rows {m}, cols {k}.
    pub connecting: FdMatrix,
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub eliminated: VertexSet,
    pub case: EliminationCase,
    pub graph_after: WeightedGraph,
    pub fourier_record: Option<FourierRecord>,
}

#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub initial: WeightedGraph,
    pub steps: Vec<ReductionStep>,
    pub final_graph: WeightedGraph,
}

impl ReductionTrace {
    /// The connecting blocks of all Fourier transforms, in application order.
    pub fn accumulated_fourier(&self) -> Vec<&FourierRecord> {
        self.steps.iter().filter_map(|s| s.fourier_record.as_ref()).collect()
    }

    /// Graph before step `s`.
    pub fn graph_before(&self, s: usize) -> &WeightedGraph {
        if s == 0 {
            &self.initial
        } else {
            &self.steps[s - 1].graph_after
        }
    }
}

/// Order in which measuring vertices are removed. For an explicit list the
/// case for each vertex is still chosen by precedence (i), (ii), (iii);
/// vertices already removed as partners are skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum EliminationOrder {
    #[default]
    Default,
    Explicit(Vec<Vertex>),
}

fn lowest_neighbour(g: &WeightedGraph, n: Vertex, role: VertexRole) -> Option<Vertex> {
    g.neighbours(n).iter().find(|&v| g.role(v) == Some(role))
}

/// Case and partner for removing `n`, by precedence.
fn classify(g: &WeightedGraph, n: Vertex) -> Result<(EliminationCase, Option<Vertex>)> {
    if g.has_self_link(n) {
        Ok((EliminationCase::SelfLink, None))
    } else if let Some(k) = lowest_neighbour(g, n, VertexRole::Measuring) {
        Ok((EliminationCase::MeasuringPair, Some(k)))
    } else if let Some(k) = lowest_neighbour(g, n, VertexRole::Output) {
        Ok((EliminationCase::OutputExchange, Some(k)))
    } else {
        Err(Error::NotBasic)
    }
}

fn next_default(g: &WeightedGraph) -> Option<Vertex> {
    let m = g.measuring();
    let looped = m.iter().find(|&v| g.has_self_link(v));
    looped
        .or_else(|| m.iter().find(|&v| lowest_neighbour(g, v, VertexRole::Measuring).is_some()))
        .or_else(|| m.iter().next())
}

fn step(g: &WeightedGraph, n: Vertex) -> Result<ReductionStep> {
    let (case, partner) = classify(g, n)?;
    let (eliminated, graph_after, fourier_record) = match (case, partner) {
        (EliminationCase::SelfLink, _) => {
            let set = VertexSet::from_iter_dedup([n]);
            (set.clone(), g.schur_complement(&set)?, None)
        }
        (EliminationCase::MeasuringPair, Some(k)) => {
            let set = VertexSet::new([n, k])?;
            (set.clone(), g.schur_complement(&set)?, None)
        }
        (EliminationCase::OutputExchange, Some(k)) => {
            let m = g.vertices().max().map_or(0, |v| v + 1);
            let joined = g.join_connecting(&[(k, m)], &[1])?;
            let set = VertexSet::new([n, k])?;
            let connecting =
                FdMatrix::from_rows(VertexSet::from_iter_dedup([m]), VertexSet::from_iter_dedup([k]), g.modulus(), &[vec![1]])?;
            let rec = FourierRecord { old_output: k, new_output: m, connecting };
            (set.clone(), joined.schur_complement(&set)?, Some(rec))
        }
        _ => unreachable!("pair cases always carry a partner"),
    };
    if !graph_after.is_basic() {
        return Err(Error::NotBasic);
    }
    Ok(ReductionStep { eliminated, case, graph_after, fourier_record })
}

/// Removes all measuring vertices with the default order.
pub fn eliminate(g: &WeightedGraph) -> Result<ReductionTrace> {
    eliminate_with(g, &EliminationOrder::Default)
}

pub fn eliminate_with(g: &WeightedGraph, order: &EliminationOrder) -> Result<ReductionTrace> {
    if !g.is_basic() {
        return Err(Error::NotBasic);
    }
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut cur = g.clone();
    match order {
        EliminationOrder::Default => {
            while let Some(n) = next_default(&cur) {
                let s = step(&cur, n)?;
                cur = s.graph_after.clone();
                steps.push(s);
            }
        }
        EliminationOrder::Explicit(list) => {
            for &n in list {
                if steps.iter().any(|s| s.eliminated.contains(n)) {
                    continue;
                }
                if cur.role(n) != Some(VertexRole::Measuring) {
                    return Err(Error::PreconditionViolated(format!("vertex {n} is not a measuring vertex")));
                }
                let s = step(&cur, n)?;
                cur = s.graph_after.clone();
                steps.push(s);
            }
            let left = cur.measuring();
            if !left.is_empty() {
                return Err(Error::PreconditionViolated(format!("order leaves measuring vertices {left}")));
            }
        }
    }
    Ok(ReductionTrace { initial: g.clone(), steps, final_graph: cur })
}

/// Oracle comparison of one map identity A = κB.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub kappa: (f64, f64),
    pub deviation: f64,
}

impl IdentityCheck {
    fn new(label: String, a: &LinearMap, b: &LinearMap) -> Result<Self> {
        let (k, deviation) = fit_phase(a, b)?;
        Ok(Self { label, kappa: (k.re, k.im), deviation })
    }

    pub fn kappa(&self) -> Complex64 {
        Complex64::new(self.kappa.0, self.kappa.1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub steps: Vec<IdentityCheck>,
    pub end_to_end: IdentityCheck,
}

impl ReductionReport {
    pub fn max_deviation(&self) -> f64 {
        self.steps.iter().chain([&self.end_to_end]).map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// u_[Γ|0^{IK}] with K the measuring vertices.
pub fn standard_encoding(g: &WeightedGraph) -> Result<LinearMap> {
    encoding_operator(g, &FdVector::zeros(g.inputs().union(&g.measuring()), g.modulus()))
}

fn apply_fourier(rec: &FourierRecord, u: &LinearMap) -> Result<LinearMap> {
    let d = u.modulus();
    let codomain = u.codomain().difference(rec.connecting.cols()).union(rec.connecting.rows());
    let f = LinearMap::from_fn(d, u.codomain().clone(), codomain, |s| fourier(&rec.connecting, s))?;
    f.compose(u)
}

/// Checks F·u_[Γ_s] = κ u_[Γ_{s+1}] for every step and the composed identity
/// from the initial to the final graph.
pub fn verify_reduction(trace: &ReductionTrace) -> Result<ReductionReport> {
    let mut checks = Vec::new();
    let first = standard_encoding(&trace.initial)?;
    let mut prev = first.clone();
    let mut acc = first;
    for (s, st) in trace.steps.iter().enumerate() {
        let mut lhs = prev;
        if let Some(rec) = &st.fourier_record {
            lhs = apply_fourier(rec, &lhs)?;
            acc = apply_fourier(rec, &acc)?;
        }
        let rhs = standard_encoding(&st.graph_after)?;
        checks.push(IdentityCheck::new(format!("step {} remove {} ({})", s + 1, st.eliminated, st.case), &lhs, &rhs)?);
        prev = rhs;
    }
    let end_to_end = IdentityCheck::new("end to end".into(), &acc, &prev)?;
    Ok(ReductionReport { steps: checks, end_to_end })
}
