use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FdMatrix, FdVector};
use crate::graph::{VertexRole, WeightedGraph};
use crate::oracle::{cluster_state, encoding_operator, sqrt_d_pow, LinearMap};
use crate::vertex::{Vertex, VertexSet};

/// Measurement basis chosen for one measuring vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisChoice {
    XBasis,
    /// y-type basis; the weight of the added self-link.
    YBasis(u32),
    ZBasis,
    /// Graph without inputs and with exactly one output vertex, which is
    /// identified with the measured vertex.
    GraphBasis(WeightedGraph),
}

impl BasisChoice {
    /// Tag used in graph documents: `x`, `y:n`, `z`, `graph`.
    pub fn tag(&self) -> String {
        match self {
            BasisChoice::XBasis => "x".into(),
            BasisChoice::YBasis(n) => format!("y:{n}"),
            BasisChoice::ZBasis => "z".into(),
            BasisChoice::GraphBasis(_) => "graph".into(),
        }
    }
}

/// One basis per measuring vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeasurementStrategy {
    bases: BTreeMap<Vertex, BasisChoice>,
}

impl MeasurementStrategy {
    pub fn new() -> Self {
        Self::default()
    }

    /// x-basis at every measuring vertex of `g`.
    pub fn all_x(g: &WeightedGraph) -> Self {
        Self { bases: g.measuring().iter().map(|v| (v, BasisChoice::XBasis)).collect() }
    }

    pub fn with(mut self, v: Vertex, basis: BasisChoice) -> Self {
        self.bases.insert(v, basis);
        self
    }

    pub fn set(&mut self, v: Vertex, basis: BasisChoice) {
        self.bases.insert(v, basis);
    }

    pub fn get(&self, v: Vertex) -> Option<&BasisChoice> {
        self.bases.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &BasisChoice)> {
        self.bases.iter().map(|(&v, b)| (v, b))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::from_iter_dedup(self.bases.keys().copied())
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

/// Result of replacing graph measurements by x-basis measurements.
#[derive(Clone, Debug)]
pub struct XGraph {
    /// Γ − Z_LΛ; auxiliary vertices of Λ are measuring vertices here.
    pub graph: WeightedGraph,
    /// Composite measurement graph Λ on M ∪ K ∪ L.
    pub measurement_graph: WeightedGraph,
    /// Λ^{MK}_L.
    pub outcome_shift: FdMatrix,
}

impl XGraph {
    /// The equivalent x-basis outcome p^I − Λ^{MK}_L q^L on I ∪ M ∪ K.
    pub fn x_outcome(&self, p_in: &FdVector, q_syn: &FdVector) -> Result<FdVector> {
        let ik = self.graph.inputs().union(&self.graph.measuring());
        let shift = self.outcome_shift.mul_vec(q_syn)?.reindex(&ik);
        p_in.reindex(&ik).sub(&shift)
    }
}

fn lowest_unused(taken: &mut VertexSet) -> Vertex {
    let v = (1..).find(|v| !taken.contains(*v)).expect("finite graph");
    *taken = taken.union(&VertexSet::from_iter_dedup([v]));
    v
}

/// Builds the composite measurement graph Λ for `strategy`. Auxiliary ids are
/// the lowest unused positive ones (in measuring-vertex order), syndromes follow.
pub fn measurement_graph(g: &WeightedGraph, strategy: &MeasurementStrategy) -> Result<WeightedGraph> {
    let d = g.modulus();
    let m = g.measuring();
    if strategy.vertices() != m {
        return Err(Error::InvalidStrategy(format!(
            "strategy covers {} but the measuring vertices are {m}",
            strategy.vertices()
        )));
    }
    // Per-vertex blocks with placeholder ids (aux/syndrome lists in order).
    let mut blocks = Vec::new();
    for (v, basis) in strategy.iter() {
        let block = match basis {
            BasisChoice::XBasis => WeightedGraph::x_measurement(d, v, u32::MAX)?,
            BasisChoice::YBasis(n) => WeightedGraph::y_measurement(d, v, u32::MAX, *n)?,
            BasisChoice::ZBasis => WeightedGraph::z_measurement(d, v, u32::MAX - 1, u32::MAX)?,
            BasisChoice::GraphBasis(lam) => {
                if lam.modulus() != d {
                    return Err(Error::FieldMismatch(lam.modulus(), d));
                }
                let outs = lam.outputs();
                if !lam.inputs().is_empty() || outs.len() != 1 {
                    return Err(Error::InvalidStrategy(format!(
                        "graph basis at {v} needs no inputs and exactly one output"
                    )));
                }
                lam.require_admissible()?;
                let mut map = BTreeMap::new();
                map.insert(outs.as_slice()[0], v);
                // Park the other vertices far away to avoid clashes with v.
                for (n, w) in lam.vertices().iter().filter(|&w| w != outs.as_slice()[0]).enumerate() {
                    map.insert(w, u32::MAX - 2 * lam.len() as u32 + n as u32);
                }
                lam.relabel(&map)?
            }
        };
        blocks.push(block);
    }
    let mut taken = g.vertices().clone();
    let mut fresh = BTreeMap::new();
    for role in [VertexRole::Auxiliary, VertexRole::Syndrome] {
        for (b, block) in blocks.iter().enumerate() {
            for w in block.with_role(role).iter() {
                fresh.insert((b, w), lowest_unused(&mut taken));
            }
        }
    }
    let mut lam = WeightedGraph::new(d, m.iter().map(|v| (v, VertexRole::Output)))?;
    for (b, block) in blocks.iter().enumerate() {
        let map: BTreeMap<Vertex, Vertex> =
            block.vertices().iter().filter_map(|w| fresh.get(&(b, w)).map(|&n| (w, n))).collect();
        lam = lam.plus(&block.relabel(&map)?)?;
    }
    Ok(lam)
}

/// Γ − Z_LΛ for an explicit measurement graph Λ whose outputs are the
/// measuring vertices of Γ. No basic-ness check.
pub fn x_graph_unchecked(g: &WeightedGraph, lam: &WeightedGraph) -> Result<XGraph> {
    if g.modulus() != lam.modulus() {
        return Err(Error::FieldMismatch(g.modulus(), lam.modulus()));
    }
    let m = g.measuring();
    if !lam.inputs().is_empty() || lam.outputs() != m {
        return Err(Error::InvalidStrategy(format!(
            "measurement graph must have no inputs and outputs {m}, found {}",
            lam.outputs()
        )));
    }
    lam.require_admissible()?;
    let extra = lam.vertices().difference(&m);
    if let Some(v) = extra.iter().find(|&v| g.contains(v)) {
        return Err(Error::VertexCollision(v));
    }
    let (k, l) = (lam.auxiliaries(), lam.syndromes());
    let mut g0 = g.minus(&lam.delete_vertices(&l))?;
    for v in k.iter() {
        g0.set_role(v, VertexRole::Measuring)?;
    }
    let outcome_shift = lam.block(&m.union(&k), &l);
    Ok(XGraph { graph: g0, measurement_graph: lam.clone(), outcome_shift })
}

/// Replaces the strategy's graph measurements by x-basis measurements on
/// Γ_0 = Γ − Z_LΛ. Fails with `NotBasic` when Γ_0 is not basic.
pub fn strategy_to_x_graph(g: &WeightedGraph, strategy: &MeasurementStrategy) -> Result<XGraph> {
    let lam = measurement_graph(g, strategy)?;
    let xg = x_graph_unchecked(g, &lam)?;
    if !xg.graph.is_basic() {
        return Err(Error::NotBasic);
    }
    Ok(xg)
}

/// max-entry deviation between v*_[Λ|q^L] u_[Γ|p^I] and
/// √d^{−|L|} u_[Γ−Z_LΛ | p^I − Λ^{MK}_L q^L], both as maps H_I → H_J.
pub fn x_measure_deviation(g: &WeightedGraph, lam: &WeightedGraph, p_in: &FdVector, q_syn: &FdVector) -> Result<f64> {
    let d = g.modulus();
    let xg = x_graph_unchecked(g, lam)?;
    let (i, j, m) = (g.inputs(), g.outputs(), g.measuring());
    let mut open = g.clone();
    for v in m.iter() {
        open.set_role(v, VertexRole::Output)?;
    }
    let u = encoding_operator(&open, p_in)?;
    let psi = cluster_state(lam, q_syn)?;
    let lhs = LinearMap::from_fn(d, i.clone(), j.clone(), |s| u.apply(s)?.contract(&psi))?;
    let rhs = encoding_operator(&xg.graph, &xg.x_outcome(p_in, q_syn)?)?
        .scale(Complex64::new(sqrt_d_pow(d, -(lam.syndromes().len() as i32)), 0.0));
    lhs.max_abs_diff(&rhs)
}
