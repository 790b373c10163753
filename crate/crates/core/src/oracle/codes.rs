use num_complex::Complex64;
use serde::Serialize;

use super::{
    apply_dynamics, apply_weyl, checked_dim, digits, embed_x, embed_z, restrict_x, sqrt_d_pow,
    LinearMap, StateVector,
};
use crate::error::{Error, Result};
use crate::field::{neg_mod, FdVector};
use crate::graph::WeightedGraph;
use crate::weyl::{tau, WeylLabel};

/// u_[Γ|p^{IK}] = √d^{|IK|} Φ*_[p^{IK}] u(Γ) Φ_[KJ] : H_I → H_J, with K the
/// measuring vertices.
pub fn encoding_operator(g: &WeightedGraph, p: &FdVector) -> Result<LinearMap> {
    let d = g.modulus();
    let (i, j, k) = (g.inputs(), g.outputs(), g.measuring());
    let ik = i.union(&k);
    if p.index() != &ik {
        return Err(Error::IndexMismatch(format!("outcome on {} but I∪K = {}", p.index(), ik)));
    }
    checked_dim(d, g.len())?;
    let kj = FdVector::zeros(k.union(&j), d);
    let pref = Complex64::new(sqrt_d_pow(d, ik.len() as i32), 0.0);
    LinearMap::from_fn(d, i, j, |psi| {
        let full = apply_dynamics(g, &embed_x(&kj, psi)?)?;
        Ok(restrict_x(p, &full)?.scale(pref))
    })
}

/// v_[Λ|q^L] = √d^{|JK|} Φ*_[IKL] u(Λ) Φ_[JK] Π_[q^L] : H_I → H_J.
pub fn graph_code_isometry(lam: &WeightedGraph, ql: &FdVector) -> Result<LinearMap> {
    lam.require_admissible()?;
    let d = lam.modulus();
    let (i, j, k, l) = (lam.inputs(), lam.outputs(), lam.auxiliaries(), lam.syndromes());
    if ql.index() != &l {
        return Err(Error::IndexMismatch(format!("syndrome label on {} but L = {}", ql.index(), l)));
    }
    checked_dim(d, lam.len())?;
    let jk = FdVector::zeros(j.union(&k), d);
    let ikl = FdVector::zeros(i.union(&k).union(&l), d);
    let pref = Complex64::new(sqrt_d_pow(d, jk.len() as i32), 0.0);
    LinearMap::from_fn(d, i, j, |psi| {
        let full = apply_dynamics(lam, &embed_x(&jk, &embed_z(ql, psi)?)?)?;
        Ok(restrict_x(&ikl, &full)?.scale(pref))
    })
}

/// The same isometry from the explicit sum
/// ⟨q^J|v|q^I⟩ = √d^{−|JK|} Σ_{q^K} τ(Λ|q^I, q^J, q^K, −q^L);
/// the syndrome configuration enters negated because ζ_[q^L] is supported at −q^L.
pub fn graph_code_isometry_explicit(lam: &WeightedGraph, ql: &FdVector) -> Result<LinearMap> {
    lam.require_admissible()?;
    let d = lam.modulus();
    let (i, j, k, l) = (lam.inputs(), lam.outputs(), lam.auxiliaries(), lam.syndromes());
    if ql.index() != &l {
        return Err(Error::IndexMismatch(format!("syndrome label on {} but L = {}", ql.index(), l)));
    }
    checked_dim(d, lam.len())?;
    let mut m = LinearMap::zeros(d, i.clone(), j.clone())?;
    let pref = sqrt_d_pow(d, -((j.len() + k.len()) as i32));
    let mut q = FdVector::zeros(lam.vertices().clone(), d);
    for (v, x) in ql.iter() {
        q.set(v, neg_mod(x, d) as i64);
    }
    for b in 0..checked_dim(d, i.len())? {
        for (v, x) in i.iter().zip(digits(b, i.len(), d)) {
            q.set(v, x as i64);
        }
        for a in 0..checked_dim(d, j.len())? {
            for (v, x) in j.iter().zip(digits(a, j.len(), d)) {
                q.set(v, x as i64);
            }
            let mut s = Complex64::new(0.0, 0.0);
            for qk in FdVector::enumerate(&k, d) {
                for (v, x) in qk.iter() {
                    q.set(v, x as i64);
                }
                s += tau(lam, &q).to_complex();
            }
            m.set_entry(a, b, s * pref);
        }
    }
    Ok(m)
}

/// Ψ_[Λ|q^L] = √d^{|JK|} Φ*_[KL] u(Λ)(ξ_[JK] ⊗ ζ_[q^L]) for graphs without inputs.
pub fn cluster_state(lam: &WeightedGraph, ql: &FdVector) -> Result<StateVector> {
    if !lam.inputs().is_empty() {
        return Err(Error::PreconditionViolated("cluster states need a graph without input vertices".into()));
    }
    let v = graph_code_isometry(lam, ql)?;
    v.apply(&StateVector::scalar(lam.modulus(), Complex64::new(1.0, 0.0)))
}

/// Maximal deviations found while checking the decomposition of H_J into the
/// ranges of the graph-code isometries.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub characters: usize,
    pub stabilizers: usize,
    pub isometry: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub eigenvalues: f64,
    pub construction_agreement: f64,
}

impl StabilizerReport {
    pub fn max_deviation(&self) -> f64 {
        [self.isometry, self.orthogonality, self.completeness, self.eigenvalues, self.construction_agreement]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// Checks isometry, mutual orthogonality, completeness and the character
/// eigenvalue equations w(Λ^J_{JK}q^{JK}|−q^J) v_[q^L] = τ(Λ|q^{JKL}) v_[q^L]
/// for all q^{JK} ∈ ker Λ^{IK}_{JK}. The position part is −q^J because our
/// shift moves arguments forward.
pub fn check_stabilizer_decomposition(lam: &WeightedGraph) -> Result<StabilizerReport> {
    lam.require_admissible()?;
    let d = lam.modulus();
    let (i, j, k, l) = (lam.inputs(), lam.outputs(), lam.auxiliaries(), lam.syndromes());
    let jk = j.union(&k);
    let labels: Vec<FdVector> = FdVector::enumerate(&l, d).collect();
    let isos: Vec<LinearMap> = labels.iter().map(|q| graph_code_isometry(lam, q)).collect::<Result<_>>()?;

    let mut report = StabilizerReport {
        characters: labels.len(),
        stabilizers: 0,
        isometry: 0.0,
        orthogonality: 0.0,
        completeness: 0.0,
        eigenvalues: 0.0,
        construction_agreement: 0.0,
    };
    let zero = LinearMap::zeros(d, i.clone(), i.clone())?;
    let mut sum = LinearMap::zeros(d, j.clone(), j.clone())?;
    for (a, va) in isos.iter().enumerate() {
        report.isometry = report.isometry.max(va.isometry_deviation());
        let explicit = graph_code_isometry_explicit(lam, &labels[a])?;
        report.construction_agreement = report.construction_agreement.max(va.max_abs_diff(&explicit)?);
        for vb in isos.iter().skip(a + 1) {
            report.orthogonality = report.orthogonality.max(va.adjoint().compose(vb)?.max_abs_diff(&zero)?);
        }
        sum = sum.add(&va.compose(&va.adjoint())?)?;
    }
    report.completeness = sum.max_abs_diff(&LinearMap::identity(d, j.clone())?)?;

    let kernel = lam.block(&i.union(&k), &jk).kernel_elements();
    report.stabilizers = kernel.len();
    let lam_j = lam.block(&j, &jk);
    for qjk in &kernel {
        let w = WeylLabel::new(lam_j.mul_vec(qjk)?, qjk.restrict(&j).neg())?;
        for (ql, v) in labels.iter().zip(&isos) {
            let mut point = qjk.reindex(lam.vertices());
            for (vx, x) in ql.iter() {
                point.set(vx, x as i64);
            }
            let eig = tau(lam, &point).to_complex();
            let wv = LinearMap::from_fn(d, j.clone(), j.clone(), |s| apply_weyl(&w, s))?.compose(v)?;
            report.eigenvalues = report.eigenvalues.max(wv.max_abs_diff(&v.scale(eig))?);
        }
    }
    Ok(report)
}
