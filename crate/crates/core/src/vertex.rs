//! Vertex identifiers and canonically ordered vertex sets.

use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A set of distinct vertices kept in ascending order.
///
/// Every matrix and vector in the crate is indexed through a `VertexSet`, so
/// the ascending order is the single source of truth for block extraction and
/// configuration enumeration.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from arbitrary order, rejecting duplicates.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Self(v))
    }

    /// Builds a set, silently merging duplicates.
    pub fn from_iter_dedup(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Position of `v` in the canonical order.
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn max(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        Self::from_iter_dedup(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        Self(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        Self(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Shorthand used throughout the tests: `vset![1, 2, 3]`.
#[macro_export]
macro_rules! vset {
    () => { $crate::vertex::VertexSet::empty() };
    ($($v:expr),+ $(,)?) => {
        $crate::vertex::VertexSet::new([$($v as $crate::vertex::Vertex),+]).expect("duplicate vertex in vset!")
    };
}
