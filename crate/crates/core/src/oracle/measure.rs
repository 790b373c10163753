use rand::Rng;

use super::{cluster_state, StateVector};
use crate::error::{Error, Result};
use crate::field::FdVector;
use crate::graph::WeightedGraph;
use crate::vertex::VertexSet;

/// Local measurement basis on a set M of vertices.
#[derive(Clone, Debug)]
pub enum MeasurementBasis {
    X,
    Z,
    /// Basis {Ψ_[Λ|q^L]} of a graph without inputs whose outputs are M;
    /// outcomes are labelled by syndrome configurations q^L.
    Graph(WeightedGraph),
}

#[derive(Clone, Debug)]
pub struct MeasurementResult {
    pub outcome: FdVector,
    pub probability: f64,
    /// Basis vector on M that was found.
    pub basis_vector: StateVector,
    /// Normalised state of the unmeasured vertices.
    pub remainder: StateVector,
}

impl MeasurementResult {
    /// The collapsed state on the whole support.
    pub fn collapsed(&self) -> Result<StateVector> {
        self.basis_vector.tensor(&self.remainder)
    }
}

fn outcome_index(basis: &MeasurementBasis, m: &VertexSet) -> Result<VertexSet> {
    match basis {
        MeasurementBasis::X | MeasurementBasis::Z => Ok(m.clone()),
        MeasurementBasis::Graph(lam) => {
            if !lam.inputs().is_empty() || &lam.outputs() != m {
                return Err(Error::PreconditionViolated(format!(
                    "graph basis must have no inputs and outputs {m}"
                )));
            }
            lam.require_admissible()?;
            Ok(lam.syndromes())
        }
    }
}

fn basis_vector(basis: &MeasurementBasis, label: &FdVector, m: &VertexSet) -> Result<StateVector> {
    match basis {
        MeasurementBasis::X => StateVector::x_basis(&label.reindex(m)),
        MeasurementBasis::Z => StateVector::z_basis(&label.reindex(m)),
        MeasurementBasis::Graph(lam) => cluster_state(lam, label),
    }
}

/// Deterministic restriction to one outcome; fails for impossible outcomes.
pub fn postselect(basis: &MeasurementBasis, m: &VertexSet, psi: &StateVector, outcome: &FdVector) -> Result<MeasurementResult> {
    if !m.is_subset(psi.support()) {
        return Err(Error::IndexMismatch(format!("measured set {m} outside {}", psi.support())));
    }
    let idx = outcome_index(basis, m)?;
    if outcome.index() != &idx {
        return Err(Error::IndexMismatch(format!("outcome on {} but expected {}", outcome.index(), idx)));
    }
    let b = basis_vector(basis, outcome, m)?;
    let mut rest = psi.contract(&b)?;
    let norm = rest.norm();
    let probability = norm * norm / (psi.norm() * psi.norm());
    if probability < 1e-14 {
        return Err(Error::ZeroProbability);
    }
    rest.normalize();
    Ok(MeasurementResult { outcome: outcome.clone(), probability, basis_vector: b, remainder: rest })
}

/// Samples an outcome from the Born probabilities.
pub fn measure_projective(
    basis: &MeasurementBasis,
    m: &VertexSet,
    psi: &StateVector,
    rng: &mut impl Rng,
) -> Result<MeasurementResult> {
    let idx = outcome_index(basis, m)?;
    let d = psi.modulus();
    let mut candidates = Vec::new();
    for label in FdVector::enumerate(&idx, d) {
        match postselect(basis, m, psi, &label) {
            Ok(r) => candidates.push(r),
            Err(Error::ZeroProbability) => {}
            Err(e) => return Err(e),
        }
    }
    let total: f64 = candidates.iter().map(|r| r.probability).sum();
    let mut x = rng.gen::<f64>() * total;
    let last = candidates.len().checked_sub(1).ok_or(Error::ZeroProbability)?;
    for (n, r) in candidates.iter().enumerate() {
        if x < r.probability || n == last {
            return Ok(r.clone());
        }
        x -= r.probability;
    }
    unreachable!("loop returns on the last candidate")
}
