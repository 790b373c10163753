#![allow(dead_code)]

use graphclust::{Vertex, VertexRole, WeightedGraph};
use rand::Rng;

/// Graph with the given roles and a symmetric adjacency written row by row
/// in the order of `roles`.
pub fn from_matrix(d: u32, roles: &[(Vertex, VertexRole)], rows: &[&[i64]]) -> WeightedGraph {
    let mut g = WeightedGraph::new(d, roles.iter().copied()).unwrap();
    for (a, row) in rows.iter().enumerate() {
        for (b, &w) in row.iter().enumerate().skip(a) {
            g.set_weight(roles[a].0, roles[b].0, w).unwrap();
        }
    }
    g
}

/// Fills every pair (self-links included, unless `no_loops` contains the
/// vertex) with a uniform weight. For d = 2 a self-link gets loop phase 1 or 3.
pub fn randomize_edges(g: &mut WeightedGraph, rng: &mut impl Rng, no_loops: &[Vertex]) {
    let d = g.modulus();
    let vs: Vec<Vertex> = g.vertices().iter().collect();
    for (a, &u) in vs.iter().enumerate() {
        for &v in &vs[a..] {
            if u == v && no_loops.contains(&u) {
                continue;
            }
            g.set_weight(u, v, rng.gen_range(0..d) as i64).unwrap();
            if u == v && d == 2 && g.weight(u, u) == 1 && rng.gen_bool(0.5) {
                g.set_loop_phase(u, 3).unwrap();
            }
        }
    }
}

/// Random graph with roles drawn for vertices 1..=n and random edges.
pub fn random_graph(d: u32, roles: &[VertexRole], rng: &mut impl Rng) -> WeightedGraph {
    let mut g = WeightedGraph::new(d, roles.iter().enumerate().map(|(k, &r)| (k as Vertex + 1, r))).unwrap();
    randomize_edges(&mut g, rng, &[]);
    g
}

/// Random input/measuring/output role list with at least one output.
pub fn random_roles(n: usize, rng: &mut impl Rng) -> Vec<VertexRole> {
    use VertexRole::*;
    let mut roles: Vec<VertexRole> = (0..n).map(|_| [Input, Measuring, Output][rng.gen_range(0..3)]).collect();
    if !roles.contains(&Output) {
        roles[n - 1] = Output;
    }
    roles
}
