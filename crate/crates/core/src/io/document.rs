use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::graph::{default_loop_phase, VertexRole, WeightedGraph};
use crate::pipeline::{BasisChoice, MeasurementStrategy};
use crate::vertex::Vertex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: Vertex,
    pub role: VertexRole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub i: Vertex,
    pub j: Vertex,
    pub weight: u32,
    /// Loop phase in Z_{2d}; self-links only, omitted when it is the default lift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyEntry {
    pub vertex: Vertex,
    /// `x`, `y:n`, `z` or `graph:<file>`.
    pub basis: String,
}

/// On-disk form of a weighted graph with an optional measurement strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub d: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strategy: Vec<StrategyEntry>,
}

fn perr(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

/// Parsed basis tag; graph bases keep their file reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisTag {
    X,
    Y(u32),
    Z,
    Graph(String),
}

pub fn parse_basis_tag(tag: &str, d: u32) -> std::result::Result<BasisTag, String> {
    match tag {
        "x" => Ok(BasisTag::X),
        "z" => Ok(BasisTag::Z),
        "y" => Ok(BasisTag::Y(1)),
        _ => {
            if let Some(n) = tag.strip_prefix("y:") {
                let n: u32 = n.parse().map_err(|_| format!("bad self-link weight in {tag:?}"))?;
                if n == 0 || n >= d {
                    return Err(format!("self-link weight {n} outside 1..{}", d - 1));
                }
                Ok(BasisTag::Y(n))
            } else if let Some(f) = tag.strip_prefix("graph:") {
                if f.is_empty() {
                    return Err("graph basis needs a file name".into());
                }
                Ok(BasisTag::Graph(f.to_string()))
            } else {
                Err(format!("unknown basis {tag:?}; expected x, y:n, z or graph:<file>"))
            }
        }
    }
}

impl GraphDocument {
    /// Reads JSON text; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<GraphDocument> {
        serde_json::from_str(text)
            .map_err(|e| perr(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    /// Canonical pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serialises");
        s.push('\n');
        s
    }

    pub fn from_graph(g: &WeightedGraph) -> GraphDocument {
        let d = g.modulus();
        let vertices = g.roles().iter().map(|(&id, &role)| VertexEntry { id, role }).collect();
        let edges = g
            .edges()
            .into_iter()
            .map(|(i, j, weight)| {
                let ph = g.loop_phase(i);
                let phase = (i == j && ph != default_loop_phase(weight, d)).then_some(ph);
                EdgeEntry { i, j, weight, phase }
            })
            .collect();
        GraphDocument { d, vertices, edges, strategy: Vec::new() }
    }

    pub fn with_strategy(mut self, entries: impl IntoIterator<Item = (Vertex, String)>) -> GraphDocument {
        self.strategy = entries.into_iter().map(|(vertex, basis)| StrategyEntry { vertex, basis }).collect();
        self.strategy.sort_by_key(|e| e.vertex);
        self
    }

    /// Validates the document and builds the graph.
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let d = self.d;
        if !is_prime(d) {
            return Err(perr("d", format!("{d} is not a prime")));
        }
        let mut ids = BTreeSet::new();
        for (n, v) in self.vertices.iter().enumerate() {
            if !ids.insert(v.id) {
                return Err(perr(format!("vertices[{n}].id"), format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut g = WeightedGraph::new(d, self.vertices.iter().map(|v| (v.id, v.role)))?;
        let mut seen = BTreeSet::new();
        for (n, e) in self.edges.iter().enumerate() {
            let at = |f: &str| format!("edges[{n}].{f}");
            for (f, v) in [("i", e.i), ("j", e.j)] {
                if !ids.contains(&v) {
                    return Err(perr(at(f), format!("unknown vertex {v}")));
                }
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(perr(format!("edges[{n}]"), format!("duplicate edge {}–{}", e.i, e.j)));
            }
            let zero_ok = e.i == e.j && e.phase.is_some_and(|p| p != 0);
            if e.weight >= d || (e.weight == 0 && !zero_ok) {
                return Err(perr(at("weight"), format!("weight {} outside 1..{}", e.weight, d - 1)));
            }
            g.set_weight(e.i, e.j, e.weight as i64)?;
            if let Some(p) = e.phase {
                if e.i != e.j {
                    return Err(perr(at("phase"), "phase is only allowed on self-links"));
                }
                if p >= 2 * d || p % d != e.weight {
                    return Err(perr(at("phase"), format!("phase {p} is not a lift of weight {} in Z_{}", e.weight, 2 * d)));
                }
                g.set_loop_phase(e.i, p as i64).map_err(|e| perr(at("phase"), e.to_string()))?;
            }
        }
        Ok(g)
    }

    /// Strategy entries after validation; graph bases are returned by file name.
    pub fn strategy_tags(&self, g: &WeightedGraph) -> Result<Vec<(Vertex, BasisTag)>> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (n, e) in self.strategy.iter().enumerate() {
            if g.role(e.vertex) != Some(VertexRole::Measuring) {
                return Err(perr(format!("strategy[{n}].vertex"), format!("vertex {} is not measuring", e.vertex)));
            }
            if !seen.insert(e.vertex) {
                return Err(perr(format!("strategy[{n}].vertex"), format!("vertex {} listed twice", e.vertex)));
            }
            let tag = parse_basis_tag(&e.basis, self.d).map_err(|m| perr(format!("strategy[{n}].basis"), m))?;
            out.push((e.vertex, tag));
        }
        Ok(out)
    }

    /// The strategy, loading graph bases through `load`; `None` when the
    /// document has no strategy.
    pub fn strategy(
        &self,
        g: &WeightedGraph,
        mut load: impl FnMut(&str) -> Result<WeightedGraph>,
    ) -> Result<Option<MeasurementStrategy>> {
        if self.strategy.is_empty() {
            return Ok(None);
        }
        let mut s = MeasurementStrategy::new();
        for (v, tag) in self.strategy_tags(g)? {
            let basis = match tag {
                BasisTag::X => BasisChoice::XBasis,
                BasisTag::Y(n) => BasisChoice::YBasis(n),
                BasisTag::Z => BasisChoice::ZBasis,
                BasisTag::Graph(f) => BasisChoice::GraphBasis(load(&f)?),
            };
            s.set(v, basis);
        }
        Ok(Some(s))
    }
}

/// Parses a document without graph bases.
pub fn parse_graph(text: &str) -> Result<(WeightedGraph, Option<MeasurementStrategy>)> {
    let doc = GraphDocument::from_json(text)?;
    let g = doc.to_graph()?;
    let s = doc.strategy(&g, |f| Err(perr("strategy", format!("graph basis {f:?} needs a file loader"))))?;
    Ok((g, s))
}

/// Canonical text of a graph (no strategy).
pub fn emit_graph(g: &WeightedGraph) -> String {
    GraphDocument::from_graph(g).to_json()
}

/// Tags for a strategy whose bases are all x, y or z.
pub fn strategy_tags(s: &MeasurementStrategy) -> Option<BTreeMap<Vertex, String>> {
    s.iter()
        .map(|(v, b)| match b {
            BasisChoice::GraphBasis(_) => None,
            other => Some((v, other.tag())),
        })
        .collect()
}
