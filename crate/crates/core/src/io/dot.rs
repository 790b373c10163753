use std::fmt::Write;

use crate::graph::{default_loop_phase, VertexRole, WeightedGraph};

fn shape(role: VertexRole) -> &'static str {
    match role {
        VertexRole::Input => "box",
        VertexRole::Output => "doublecircle",
        VertexRole::Measuring => "circle",
        VertexRole::Auxiliary => "diamond",
        VertexRole::Syndrome => "triangle",
    }
}

/// Undirected DOT rendering: node shape by role, edge label = weight,
/// self-links as loops (labelled with the loop phase when it is not the default).
pub fn export_dot(g: &WeightedGraph) -> String {
    let d = g.modulus();
    let mut out = String::from("graph G {\n");
    for (v, role) in g.roles() {
        writeln!(out, "  {v} [label=\"{v}\", shape={}];", shape(*role)).unwrap();
    }
    for (i, j, w) in g.edges() {
        let ph = g.loop_phase(i);
        let label = if i == j && ph != default_loop_phase(w, d) { format!("{w} (phase {ph})") } else { w.to_string() };
        writeln!(out, "  {i} -- {j} [label=\"{label}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}
