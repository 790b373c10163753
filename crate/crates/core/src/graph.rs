//! Weighted graphs with vertex roles over F_d.
//!
//! Besides the symmetric F_d adjacency matrix every vertex carries a loop
//! phase: the self-link weight lifted to Z_{2d}. It is what the quadratic
//! character τ actually sees. For odd d it is the even lift of the self-link
//! weight and carries no extra information; for d = 2 it distinguishes a
//! self-link worth `i` (phase 1) from one worth `-i` (phase 3), and a
//! weight-0 self-link with sign −1 (phase 2).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{add_mod, check_prime, sub_mod, FdMatrix, FdVector};
use crate::vertex::{Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexRole {
    Input,
    Output,
    Measuring,
    Auxiliary,
    Syndrome,
}

impl VertexRole {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexRole::Input => "input",
            VertexRole::Output => "output",
            VertexRole::Measuring => "measuring",
            VertexRole::Auxiliary => "auxiliary",
            VertexRole::Syndrome => "syndrome",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovabilityClass {
    Removable,
    PreRemovable,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub g1: bool,
    pub g2: bool,
    pub g3: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.g1 && self.g2 && self.g3
    }
}

/// Which d = 2 rewrite rule to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryCase {
    SelfLoop(Vertex),
    Pair(Vertex, Vertex),
}

/// Loop phase that a self-link of weight `w` gets when none is given.
pub fn default_loop_phase(w: u32, d: u32) -> u32 {
    if d == 2 || w % 2 == 0 {
        w
    } else {
        w + d
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    d: u32,
    roles: BTreeMap<Vertex, VertexRole>,
    adj: FdMatrix,
    phases: Vec<u32>,
}

impl WeightedGraph {
    /// Graph without edges.
    pub fn new(d: u32, roles: impl IntoIterator<Item = (Vertex, VertexRole)>) -> Result<Self> {
        check_prime(d)?;
        let mut map = BTreeMap::new();
        for (v, r) in roles {
            if map.insert(v, r).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let vs = VertexSet::from_iter_dedup(map.keys().copied());
        let n = vs.len();
        Ok(Self { d, roles: map, adj: FdMatrix::zeros(vs.clone(), vs, d), phases: vec![0; n] })
    }

    pub fn empty(d: u32) -> Result<Self> {
        Self::new(d, [])
    }

    /// Builder form of [`set_weight`](Self::set_weight) for literals in tests and examples.
    pub fn with_edges(mut self, edges: &[(Vertex, Vertex, i64)]) -> Result<Self> {
        for &(i, j, w) in edges {
            self.set_weight(i, j, w)?;
        }
        Ok(self)
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn vertices(&self) -> &VertexSet {
        self.adj.rows()
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.roles.contains_key(&v)
    }

    pub fn role(&self, v: Vertex) -> Option<VertexRole> {
        self.roles.get(&v).copied()
    }

    pub fn roles(&self) -> &BTreeMap<Vertex, VertexRole> {
        &self.roles
    }

    pub fn set_role(&mut self, v: Vertex, role: VertexRole) -> Result<()> {
        let slot = self.roles.get_mut(&v).ok_or(Error::UnknownVertex(v))?;
        *slot = role;
        Ok(())
    }

    pub fn with_role(&self, role: VertexRole) -> VertexSet {
        VertexSet::from_iter_dedup(self.roles.iter().filter(|(_, &r)| r == role).map(|(&v, _)| v))
    }

    pub fn inputs(&self) -> VertexSet {
        self.with_role(VertexRole::Input)
    }

    pub fn outputs(&self) -> VertexSet {
        self.with_role(VertexRole::Output)
    }

    pub fn measuring(&self) -> VertexSet {
        self.with_role(VertexRole::Measuring)
    }

    pub fn auxiliaries(&self) -> VertexSet {
        self.with_role(VertexRole::Auxiliary)
    }

    pub fn syndromes(&self) -> VertexSet {
        self.with_role(VertexRole::Syndrome)
    }

    pub fn adjacency(&self) -> &FdMatrix {
        &self.adj
    }

    /// Block Γ^A_B.
    pub fn block(&self, a: &VertexSet, b: &VertexSet) -> FdMatrix {
        self.adj.block(a, b)
    }

    pub fn weight(&self, i: Vertex, j: Vertex) -> u32 {
        self.adj.get(i, j)
    }

    /// Loop phase of `v` in Z_{2d} (zero for unknown vertices).
    pub fn loop_phase(&self, v: Vertex) -> u32 {
        self.vertices().position(v).map_or(0, |k| self.phases[k])
    }

    fn pos(&self, v: Vertex) -> Result<usize> {
        self.vertices().position(v).ok_or(Error::UnknownVertex(v))
    }

    /// Sets the weight of edge i–j (both directions). A self-link also resets
    /// the loop phase to its default lift.
    pub fn set_weight(&mut self, i: Vertex, j: Vertex, w: i64) -> Result<()> {
        let (a, b) = (self.pos(i)?, self.pos(j)?);
        let w = w.rem_euclid(self.d as i64) as u32;
        self.adj.set_at(a, b, w);
        self.adj.set_at(b, a, w);
        if a == b {
            self.phases[a] = default_loop_phase(w, self.d);
        }
        Ok(())
    }

    /// Sets the loop phase of `v`; its residue mod d becomes the self-link weight.
    /// For odd d the phase must be even.
    pub fn set_loop_phase(&mut self, v: Vertex, phase: i64) -> Result<()> {
        let a = self.pos(v)?;
        let ph = phase.rem_euclid(2 * self.d as i64) as u32;
        if self.d % 2 == 1 && ph % 2 == 1 {
            return Err(Error::PreconditionViolated(format!(
                "loop phase {ph} at vertex {v} must be even for d = {}",
                self.d
            )));
        }
        self.phases[a] = ph;
        self.adj.set_at(a, a, ph % self.d);
        Ok(())
    }

    /// Neighbours of `v` other than itself, ascending.
    pub fn neighbours(&self, v: Vertex) -> VertexSet {
        VertexSet::from_iter_dedup(self.vertices().iter().filter(|&u| u != v && self.weight(u, v) != 0))
    }

    pub fn has_self_link(&self, v: Vertex) -> bool {
        self.weight(v, v) != 0
    }

    /// Edges i ≤ j with nonzero weight or a non-default loop phase.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, u32)> {
        let vs = self.vertices().as_slice();
        let mut out = Vec::new();
        for (a, &i) in vs.iter().enumerate() {
            for (b, &j) in vs.iter().enumerate().skip(a) {
                let w = self.adj.at(a, b);
                if w != 0 || (a == b && self.phases[a] != 0) {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Number of off-diagonal edges.
    pub fn edge_count(&self) -> usize {
        self.edges().iter().filter(|e| e.0 != e.1).count()
    }

    /// True when no two distinct vertices are linked.
    pub fn is_totally_disconnected(&self) -> bool {
        self.edge_count() == 0
    }

    /// Quadratic character exponent of τ(Γ|q) in Z_{2d}, with q zero-extended
    /// or restricted to the vertices of the graph.
    pub fn tau_exponent(&self, q: &FdVector) -> u32 {
        let two_d = 2 * self.d as u64;
        let vs = self.vertices().as_slice();
        let qs: Vec<u64> = vs.iter().map(|&v| q.get(v) as u64).collect();
        let mut e = 0u64;
        for a in 0..vs.len() {
            if qs[a] == 0 {
                continue;
            }
            e = (e + self.phases[a] as u64 * qs[a] * qs[a]) % two_d;
            for b in (a + 1)..vs.len() {
                e = (e + 2 * self.adj.at(a, b) as u64 * qs[a] * qs[b]) % two_d;
            }
        }
        e as u32
    }

    /// Graph on `keep`, roles and phases inherited.
    pub fn induced(&self, keep: &VertexSet) -> Result<WeightedGraph> {
        if let Some(v) = keep.iter().find(|&v| !self.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(WeightedGraph {
            d: self.d,
            roles: keep.iter().map(|v| (v, self.roles[&v])).collect(),
            adj: self.adj.block(keep, keep),
            phases: keep.iter().map(|v| self.loop_phase(v)).collect(),
        })
    }

    /// Removes `l` (vertices not in the graph are ignored).
    pub fn delete_vertices(&self, l: &VertexSet) -> WeightedGraph {
        self.induced(&self.vertices().difference(l)).expect("subset of own vertices")
    }

    /// Γ ± Λ on the union of vertex sets; shared vertices keep the roles of
    /// `self`. Loop phases add in Z_{2d}.
    fn combine(&self, other: &WeightedGraph, negate: bool) -> Result<WeightedGraph> {
        if self.d != other.d {
            return Err(Error::FieldMismatch(self.d, other.d));
        }
        let d = self.d;
        let mut roles = other.roles.clone();
        roles.extend(self.roles.iter().map(|(&v, &r)| (v, r)));
        let vs = VertexSet::from_iter_dedup(roles.keys().copied());
        let a = self.adj.block(&vs, &vs);
        let b = other.adj.block(&vs, &vs);
        let adj = if negate { a.sub(&b)? } else { a.add(&b)? };
        let phases = vs
            .iter()
            .map(|v| {
                let (x, y) = (self.loop_phase(v), other.loop_phase(v));
                if negate {
                    sub_mod(x, y, 2 * d)
                } else {
                    add_mod(x, y, 2 * d)
                }
            })
            .collect();
        Ok(WeightedGraph { d, roles, adj, phases })
    }

    pub fn plus(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.combine(other, false)
    }

    pub fn minus(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        self.combine(other, true)
    }

    pub fn is_basic(&self) -> bool {
        self.basic_block().is_injective()
    }

    /// Γ^{KJ}_{IK} with K the measuring vertices.
    pub fn basic_block(&self) -> FdMatrix {
        let (i, j, k) = (self.inputs(), self.outputs(), self.measuring());
        self.block(&k.union(&j), &i.union(&k))
    }

    /// Conditions (G1)–(G3) for I/J/K/L = input/output/auxiliary/syndrome.
    pub fn validate_admissible(&self) -> AdmissibilityReport {
        let (i, j, k, l) = (self.inputs(), self.outputs(), self.auxiliaries(), self.syndromes());
        let g1 = i.len() + l.len() == j.len();
        let g2 = g1 && {
            let m = self.block(&j.union(&k), &i.union(&k).union(&l));
            m.nrows() == m.ncols() && m.rank() == m.nrows()
        };
        let g3 = self.block(&l, &l).is_zero() && l.iter().all(|v| self.loop_phase(v) == 0);
        AdmissibilityReport { g1, g2, g3 }
    }

    pub fn require_admissible(&self) -> Result<()> {
        let r = self.validate_admissible();
        if r.admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible { g1: r.g1, g2: r.g2, g3: r.g3 })
        }
    }

    fn check_elimination_set(&self, n: &VertexSet) -> Result<()> {
        if let Some(v) = n.iter().find(|&v| !self.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        let bad = n.intersection(&self.inputs());
        if !bad.is_empty() {
            return Err(Error::InvalidSubset(bad.as_slice().to_vec()));
        }
        Ok(())
    }

    pub fn removability_class(&self, n: &VertexSet) -> Result<RemovabilityClass> {
        self.check_elimination_set(n)?;
        if self.block(n, n).inverse().is_err() {
            return Ok(RemovabilityClass::Neither);
        }
        if n.is_disjoint(&self.outputs()) {
            Ok(RemovabilityClass::Removable)
        } else {
            Ok(RemovabilityClass::PreRemovable)
        }
    }

    /// X_N Γ = Γ^{N̄}_{N̄} − Γ^{N̄}_N Γ̄^N_N Γ^N_{N̄}.
    pub fn schur_complement(&self, n: &VertexSet) -> Result<WeightedGraph> {
        self.check_elimination_set(n)?;
        let d = self.d;
        let nbar = self.vertices().difference(n);
        let inv = self
            .block(n, n)
            .inverse()
            .map_err(|_| Error::NotInvertibleBlock(n.as_slice().to_vec()))?;
        // y_v = Γ̄^N_N Γ^N_v for every surviving v, as columns of Y.
        let y = inv.mul(&self.block(n, &nbar))?;
        let correction = self.block(&nbar, n).mul(&y)?;
        let mut out = self.induced(&nbar)?;
        out.adj = out.adj.sub(&correction)?;
        for (c, v) in nbar.iter().enumerate() {
            let w = out.adj.at(c, c);
            out.phases[c] = if d == 2 {
                let yv: Vec<u32> = (0..n.len()).map(|r| y.at(r, c)).collect();
                sub_mod(self.loop_phase(v), self.binary_quadratic_form(n, &yv), 4)
            } else {
                default_loop_phase(w, d)
            };
        }
        Ok(out)
    }

    /// Q_N(y) = Σ a_i y_i + 2 Σ_{i<j} Γ_ij y_i y_j mod 4 for y ∈ F_2^N.
    fn binary_quadratic_form(&self, n: &VertexSet, y: &[u32]) -> u32 {
        let ns = n.as_slice();
        let mut q = 0;
        for a in 0..ns.len() {
            if y[a] == 0 {
                continue;
            }
            q += self.loop_phase(ns[a]);
            for b in (a + 1)..ns.len() {
                q += 2 * self.weight(ns[a], ns[b]) * y[b];
            }
        }
        q % 4
    }

    /// Γ + ν̂: each pair (n, m) adds a fresh output vertex m linked to n with
    /// the given weight; n becomes measuring.
    pub fn join_connecting(&self, pairs: &[(Vertex, Vertex)], weights: &[u32]) -> Result<WeightedGraph> {
        if weights.len() != pairs.len() {
            return Err(Error::IndexMismatch("one weight per connecting pair".into()));
        }
        let mut fresh = Vec::new();
        for &(n, m) in pairs {
            if self.contains(m) || fresh.contains(&m) {
                return Err(Error::VertexCollision(m));
            }
            if self.role(n) != Some(VertexRole::Output) {
                return Err(Error::PreconditionViolated(format!("vertex {n} is not an output")));
            }
            fresh.push(m);
        }
        let extra = WeightedGraph::new(self.d, fresh.iter().map(|&m| (m, VertexRole::Output)))?;
        let mut g = self.plus(&extra)?;
        for (&(n, m), &w) in pairs.iter().zip(weights) {
            g.set_weight(n, m, w as i64)?;
            g.set_role(n, VertexRole::Measuring)?;
        }
        Ok(g)
    }

    /// Graphical d = 2 rewrite rules. Rule (i) removes a self-linked vertex n
    /// and toggles every link among its neighbours (self-links included);
    /// rule (ii) removes two linked vertices n, k without self-links and
    /// toggles a link between each neighbour of n and each neighbour of k.
    pub fn binary_rule(&self, case: BinaryCase) -> Result<WeightedGraph> {
        if self.d != 2 {
            return Err(Error::NotBinary(self.d));
        }
        match case {
            BinaryCase::SelfLoop(n) => {
                self.check_elimination_set(&VertexSet::from_iter_dedup([n]))?;
                if !self.has_self_link(n) {
                    return Err(Error::PreconditionViolated(format!("vertex {n} has no self-link")));
                }
                let nb = self.neighbours(n);
                let a_n = self.loop_phase(n);
                let mut g = self.delete_vertices(&VertexSet::from_iter_dedup([n]));
                for u in nb.iter() {
                    for w in nb.iter().filter(|&w| w > u) {
                        g.set_weight(u, w, (g.weight(u, w) + 1) as i64)?;
                    }
                    g.set_loop_phase(u, g.loop_phase(u) as i64 - a_n as i64)?;
                }
                Ok(g)
            }
            BinaryCase::Pair(n, k) => {
                self.check_elimination_set(&VertexSet::new([n, k])?)?;
                if self.weight(n, k) == 0 || self.has_self_link(n) || self.has_self_link(k) {
                    return Err(Error::PreconditionViolated(format!(
                        "vertices {n}, {k} must be linked and without self-links"
                    )));
                }
                let removed = VertexSet::new([n, k])?;
                let nb_n = self.neighbours(n).difference(&removed);
                let nb_k = self.neighbours(k).difference(&removed);
                let (a_n, a_k) = (self.loop_phase(n), self.loop_phase(k));
                let mut g = self.delete_vertices(&removed);
                for u in nb_n.iter() {
                    for w in nb_k.iter().filter(|&w| w != u) {
                        g.set_weight(u, w, (g.weight(u, w) + 1) as i64)?;
                    }
                }
                for v in nb_n.union(&nb_k).iter() {
                    let (in_n, in_k) = (nb_n.contains(v) as u32, nb_k.contains(v) as u32);
                    let shift = a_n * in_k + a_k * in_n + 2 * in_n * in_k;
                    g.set_loop_phase(v, g.loop_phase(v) as i64 - shift as i64)?;
                }
                Ok(g)
            }
        }
    }

    /// X measurement graph: m (output) – l (syndrome), weight 1.
    pub fn x_measurement(d: u32, m: Vertex, l: Vertex) -> Result<WeightedGraph> {
        WeightedGraph::new(d, [(m, VertexRole::Output), (l, VertexRole::Syndrome)])?.with_edges(&[(m, l, 1)])
    }

    /// Y measurement graph: X graph plus a self-link of weight `n` at m.
    pub fn y_measurement(d: u32, m: Vertex, l: Vertex, n: u32) -> Result<WeightedGraph> {
        WeightedGraph::x_measurement(d, m, l)?.with_edges(&[(m, m, n as i64)])
    }

    /// Z measurement graph: path m – k – l with k auxiliary.
    pub fn z_measurement(d: u32, m: Vertex, k: Vertex, l: Vertex) -> Result<WeightedGraph> {
        WeightedGraph::new(d, [(m, VertexRole::Output), (k, VertexRole::Auxiliary), (l, VertexRole::Syndrome)])?
            .with_edges(&[(m, k, 1), (k, l, 1)])
    }

    /// Relabels vertices through `map` (vertices not in the map keep their id).
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Result<WeightedGraph> {
        let f = |v: Vertex| map.get(&v).copied().unwrap_or(v);
        let mut g = WeightedGraph::new(self.d, self.roles.iter().map(|(&v, &r)| (f(v), r)))?;
        for (i, j, w) in self.edges() {
            g.set_weight(f(i), f(j), w as i64)?;
            if i == j {
                g.set_loop_phase(f(i), self.loop_phase(i) as i64)?;
            }
        }
        Ok(g)
    }
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "WeightedGraph d={}", self.d)?;
        for (v, r) in &self.roles {
            writeln!(f, "  {v}: {} (phase {})", r.as_str(), self.loop_phase(*v))?;
        }
        write!(f, "{:?}", self.adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use VertexRole::*;

    /// Γ_0 of the two-input, two-output worked example.
    pub(crate) fn example_one() -> WeightedGraph {
        WeightedGraph::new(
            2,
            [(1, Input), (2, Input), (3, Measuring), (4, Measuring), (5, Measuring), (6, Measuring), (7, Output), (8, Output)],
        )
        .unwrap()
        .with_edges(&[(1, 3, 1), (2, 4, 1), (3, 4, 1), (3, 5, 1), (4, 6, 1), (5, 7, 1), (6, 8, 1)])
        .unwrap()
    }

    #[test]
    fn measurement_graphs_are_admissible() {
        for d in [2, 3, 5, 7] {
            assert!(WeightedGraph::x_measurement(d, 1, 2).unwrap().validate_admissible().admissible());
            assert!(WeightedGraph::y_measurement(d, 1, 2, 1).unwrap().validate_admissible().admissible());
            assert!(WeightedGraph::z_measurement(d, 1, 2, 3).unwrap().validate_admissible().admissible());
        }
    }

    #[test]
    fn syndrome_edge_breaks_g3() {
        let g = WeightedGraph::new(2, [(1, Output), (2, Output), (3, Syndrome), (4, Syndrome)])
            .unwrap()
            .with_edges(&[(1, 3, 1), (2, 4, 1), (3, 4, 1)])
            .unwrap();
        let r = g.validate_admissible();
        assert!(r.g1 && r.g2 && !r.g3);
    }

    #[test]
    fn basic_examples() {
        assert!(example_one().is_basic());
        let iso = WeightedGraph::new(2, [(1, Input), (2, Output), (3, Measuring)])
            .unwrap()
            .with_edges(&[(1, 2, 1)])
            .unwrap();
        assert!(!iso.is_basic());
        let wire = WeightedGraph::new(2, [(1, Input), (2, Output)]).unwrap().with_edges(&[(1, 2, 1)]).unwrap();
        assert!(wire.is_basic());
    }

    #[test]
    fn removability_examples() {
        let g = example_one();
        assert_eq!(g.removability_class(&vset![3, 4]).unwrap(), RemovabilityClass::Removable);
        assert_eq!(g.removability_class(&vset![3]).unwrap(), RemovabilityClass::Neither);
        assert_eq!(g.removability_class(&vset![1, 3]), Err(Error::InvalidSubset(vec![1])));
        let looped = g.clone().with_edges(&[(5, 5, 1)]).unwrap();
        assert_eq!(looped.removability_class(&vset![5]).unwrap(), RemovabilityClass::Removable);
        let out = g.clone().with_edges(&[(7, 7, 1)]).unwrap();
        assert_eq!(out.removability_class(&vset![7]).unwrap(), RemovabilityClass::PreRemovable);
    }

    #[test]
    fn example_one_schur_steps() {
        let g1 = example_one().schur_complement(&vset![3, 4]).unwrap();
        assert_eq!(g1.vertices(), &vset![1, 2, 5, 6, 7, 8]);
        assert_eq!(
            g1.adjacency().to_rows(),
            vec![
                vec![0, 1, 0, 1, 0, 0],
                vec![1, 0, 1, 0, 0, 0],
                vec![0, 1, 0, 1, 1, 0],
                vec![1, 0, 1, 0, 0, 1],
                vec![0, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0],
            ]
        );
        let g2 = g1.schur_complement(&vset![5, 6]).unwrap();
        assert_eq!(
            g2.adjacency().to_rows(),
            vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 1], vec![0, 1, 1, 0]]
        );
        assert_eq!(g2.inputs(), vset![1, 2]);
        assert_eq!(g2.outputs(), vset![7, 8]);
    }

    #[test]
    fn schur_without_links_is_deletion() {
        let mut roles: Vec<(Vertex, VertexRole)> = example_one().roles().iter().map(|(&v, &r)| (v, r)).collect();
        roles.push((9, Measuring));
        let mut g = WeightedGraph::new(2, roles).unwrap();
        for (i, j, w) in example_one().edges() {
            g.set_weight(i, j, w as i64).unwrap();
        }
        g.set_weight(9, 9, 1).unwrap();
        assert_eq!(g.schur_complement(&vset![9]).unwrap(), example_one());
    }

    #[test]
    fn delete_and_join() {
        let g = example_one();
        assert_eq!(g.delete_vertices(&VertexSet::empty()), g);
        assert!(g.delete_vertices(g.vertices()).is_empty());
        let joined = g.join_connecting(&[(7, 20)], &[1]).unwrap();
        assert_eq!(joined.role(7), Some(Measuring));
        assert_eq!(joined.role(20), Some(Output));
        assert_eq!(joined.weight(7, 20), 1);
        assert_eq!(g.join_connecting(&[(7, 8)], &[1]), Err(Error::VertexCollision(8)));
        let mut back = joined.delete_vertices(&vset![20]);
        back.set_role(7, Output).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn binary_rules_match_schur() {
        // Self-linked n = 1 with neighbours 2, 3, 4.
        let g = WeightedGraph::new(2, [(1, Measuring), (2, Output), (3, Output), (4, Measuring)])
            .unwrap()
            .with_edges(&[(1, 1, 1), (1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1)])
            .unwrap();
        let r = g.binary_rule(BinaryCase::SelfLoop(1)).unwrap();
        assert_eq!(r, g.schur_complement(&vset![1]).unwrap());
        assert_eq!(r.weight(2, 3), 0);
        assert_eq!(r.weight(2, 4), 1);
        assert!(r.has_self_link(2));

        let h = WeightedGraph::new(2, [(1, Measuring), (2, Measuring), (3, Output), (4, Output), (5, Output)])
            .unwrap()
            .with_edges(&[(1, 2, 1), (1, 3, 1), (2, 4, 1), (2, 5, 1)])
            .unwrap();
        let r = h.binary_rule(BinaryCase::Pair(1, 2)).unwrap();
        assert_eq!(r, h.schur_complement(&vset![1, 2]).unwrap());
        assert_eq!((r.weight(3, 4), r.weight(3, 5), r.weight(4, 5)), (1, 1, 0));

        let lone = WeightedGraph::new(2, [(1, Measuring), (2, Output)]).unwrap().with_edges(&[(1, 1, 1)]).unwrap();
        assert_eq!(lone.binary_rule(BinaryCase::SelfLoop(1)).unwrap(), lone.delete_vertices(&vset![1]));
        assert_eq!(
            WeightedGraph::empty(3).unwrap().binary_rule(BinaryCase::SelfLoop(1)),
            Err(Error::NotBinary(3))
        );
    }

    #[test]
    fn tau_exponents() {
        let g = WeightedGraph::new(2, [(1, Output)]).unwrap().with_edges(&[(1, 1, 1)]).unwrap();
        assert_eq!(g.tau_exponent(&FdVector::from_entries(vset![1], 2, [1]).unwrap()), 1);
        // Odd d: even lift makes τ a function of q mod d.
        let h = WeightedGraph::new(3, [(1, Output)]).unwrap().with_edges(&[(1, 1, 1)]).unwrap();
        assert_eq!(h.loop_phase(1), 4);
        let e1 = h.tau_exponent(&FdVector::from_entries(vset![1], 3, [1]).unwrap());
        let e2 = h.tau_exponent(&FdVector::from_entries(vset![1], 3, [2]).unwrap());
        assert_eq!((e1, e2), (4, 4));
    }
}
