use std::collections::{BTreeMap, HashSet};

use super::eliminate::eliminate;
use super::strategy::{strategy_to_x_graph, BasisChoice, MeasurementStrategy};
use crate::error::{Error, Result};
use crate::graph::{VertexRole, WeightedGraph};
use crate::vertex::Vertex;

/// Shortest measurement sequence found and the graph it leaves behind.
#[derive(Clone, Debug)]
pub struct PersistencyWitness {
    pub measurements: Vec<(Vertex, BasisChoice)>,
    pub final_graph: WeightedGraph,
}

impl PersistencyWitness {
    pub fn bound(&self) -> usize {
        self.measurements.len()
    }
}

/// Measures the output vertex `v` of a graph state in `basis` and returns the
/// graph state left on the remaining vertices.
pub fn measure_vertex(g: &WeightedGraph, v: Vertex, basis: BasisChoice) -> Result<WeightedGraph> {
    let mut h = g.clone();
    h.set_role(v, VertexRole::Measuring)?;
    let xg = strategy_to_x_graph(&h, &MeasurementStrategy::new().with(v, basis))?;
    Ok(eliminate(&xg.graph)?.final_graph)
}

fn canonical(g: &WeightedGraph) -> WeightedGraph {
    let map: BTreeMap<Vertex, Vertex> = g.vertices().iter().enumerate().map(|(n, v)| (v, n as Vertex)).collect();
    g.relabel(&map).expect("bijective relabelling")
}

/// Breadth-first search over single-vertex X, Y(1), Z measurements for the
/// shortest sequence leaving no links between distinct vertices.
pub fn persistency_search(g: &WeightedGraph, budget: usize) -> Result<Option<PersistencyWitness>> {
    if g.modulus() != 2 {
        return Err(Error::NotBinary(g.modulus()));
    }
    if g.outputs() != *g.vertices() {
        return Err(Error::PreconditionViolated("persistency needs a graph state: output vertices only".into()));
    }
    let done = |h: &WeightedGraph| h.is_totally_disconnected();
    if done(g) {
        return Ok(Some(PersistencyWitness { measurements: Vec::new(), final_graph: g.clone() }));
    }
    let mut seen = HashSet::from([canonical(g)]);
    let mut frontier = vec![(g.clone(), Vec::new())];
    for _ in 0..budget {
        let mut next = Vec::new();
        for (h, path) in &frontier {
            for v in h.vertices().iter().filter(|&v| !h.neighbours(v).is_empty()) {
                for basis in [BasisChoice::XBasis, BasisChoice::YBasis(1), BasisChoice::ZBasis] {
                    let after = match measure_vertex(h, v, basis.clone()) {
                        Ok(a) => a,
                        Err(Error::NotBasic) => continue,
                        Err(e) => return Err(e),
                    };
                    let mut p: Vec<(Vertex, BasisChoice)> = path.clone();
                    p.push((v, basis));
                    if done(&after) {
                        return Ok(Some(PersistencyWitness { measurements: p, final_graph: after }));
                    }
                    if seen.insert(canonical(&after)) {
                        next.push((after, p));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Length of the shortest sequence within `budget`, if any.
pub fn persistency_upper_bound(g: &WeightedGraph, budget: usize) -> Result<Option<usize>> {
    Ok(persistency_search(g, budget)?.map(|w| w.bound()))
}
