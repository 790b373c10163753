//! Symbolic discrete Weyl algebra.
//!
//! Convention: the shift acts as (x(q)ψ)(y) = ψ(y + q), the multiplier as
//! (z(p)ψ)(y) = χ(p|y)ψ(y), and w(p|q) = z(p)x(q). With it
//! w(p₁|q₁)w(p₂|q₂) = χ(p₂|q₁) w(p₁+p₂|q₁+q₂).

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{sub_mod, FdMatrix, FdVector};
use crate::graph::WeightedGraph;

/// exp(πi·e/d) with e taken mod 2d.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    e: u32,
    d: u32,
}

impl PhaseExponent {
    pub fn new(e: i64, d: u32) -> Self {
        Self { e: e.rem_euclid(2 * d as i64) as u32, d }
    }

    pub fn one(d: u32) -> Self {
        Self { e: 0, d }
    }

    pub fn exponent(self) -> u32 {
        self.e
    }

    pub fn modulus(self) -> u32 {
        self.d
    }

    pub fn mul(self, o: PhaseExponent) -> PhaseExponent {
        debug_assert_eq!(self.d, o.d);
        Self::new(self.e as i64 + o.e as i64, self.d)
    }

    pub fn conj(self) -> PhaseExponent {
        Self::new(-(self.e as i64), self.d)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI * self.e as f64 / self.d as f64)
    }
}

impl fmt::Debug for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(πi·{}/{})", self.e, self.d)
    }
}

/// χ(p|q) = exp(2πi⟨p,q⟩/d).
pub fn chi(p: &FdVector, q: &FdVector) -> Result<PhaseExponent> {
    Ok(PhaseExponent::new(2 * p.dot(q)? as i64, p.modulus()))
}

/// τ(Γ|q); q is zero-extended to the vertices of Γ.
pub fn tau(g: &WeightedGraph, q: &FdVector) -> PhaseExponent {
    PhaseExponent::new(g.tau_exponent(q) as i64, g.modulus())
}

/// ⟨p₁,q₂⟩ − ⟨p₂,q₁⟩.
pub fn symplectic_form(v1: (&FdVector, &FdVector), v2: (&FdVector, &FdVector)) -> Result<u32> {
    let d = v1.0.modulus();
    Ok(sub_mod(v1.0.dot(v2.1)?, v2.0.dot(v1.1)?, d))
}

/// phase · w(p|q).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylLabel {
    pub p: FdVector,
    pub q: FdVector,
    pub phase: PhaseExponent,
}

impl WeylLabel {
    pub fn new(p: FdVector, q: FdVector) -> Result<Self> {
        if p.index() != q.index() {
            return Err(Error::IndexMismatch(format!("p on {} but q on {}", p.index(), q.index())));
        }
        if p.modulus() != q.modulus() {
            return Err(Error::FieldMismatch(p.modulus(), q.modulus()));
        }
        let d = p.modulus();
        Ok(Self { p, q, phase: PhaseExponent::one(d) })
    }

    pub fn identity(support: crate::vertex::VertexSet, d: u32) -> Self {
        let z = FdVector::zeros(support, d);
        Self { p: z.clone(), q: z, phase: PhaseExponent::one(d) }
    }

    pub fn with_phase(mut self, phase: PhaseExponent) -> Self {
        self.phase = phase;
        self
    }

    pub fn support(&self) -> &crate::vertex::VertexSet {
        self.p.index()
    }

    pub fn modulus(&self) -> u32 {
        self.p.modulus()
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.phase.e == 0
    }

    /// (c·w(p|q))* = c̄·χ(p|q)·w(−p|−q).
    pub fn adjoint(&self) -> WeylLabel {
        let c = chi(&self.p, &self.q).expect("same index");
        WeylLabel { p: self.p.neg(), q: self.q.neg(), phase: self.phase.conj().mul(c) }
    }
}

impl fmt::Debug for WeylLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·w({:?} | {:?})", self.phase, self.p, self.q)
    }
}

/// Product w₁·w₂.
pub fn weyl_compose(w1: &WeylLabel, w2: &WeylLabel) -> Result<WeylLabel> {
    if w1.support() != w2.support() {
        return Err(Error::IndexMismatch(format!("{} vs {}", w1.support(), w2.support())));
    }
    let c = chi(&w2.p, &w1.q)?;
    Ok(WeylLabel { p: w1.p.add(&w2.p)?, q: w1.q.add(&w2.q)?, phase: w1.phase.mul(w2.phase).mul(c) })
}

/// Θ: outcome p^{IK} ↦ (A p | B p) ∈ F_d^J × F_d^J.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompensationMap {
    #[serde(serialize_with = "ser_matrix")]
    pub a: FdMatrix,
    #[serde(serialize_with = "ser_matrix")]
    pub b: FdMatrix,
}

fn ser_matrix<S: serde::Serializer>(m: &FdMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("FdMatrix", 3)?;
    st.serialize_field("rows", m.rows().as_slice())?;
    st.serialize_field("cols", m.cols().as_slice())?;
    st.serialize_field("entries", &m.to_rows())?;
    st.end()
}

/// Θ = (Γ^J_{KJ}·R | −R^J) with R the canonical right inverse of Γ^{IK}_{KJ}.
pub fn compensation_map(g: &WeightedGraph) -> Result<CompensationMap> {
    if !g.is_basic() {
        return Err(Error::NotBasic);
    }
    let (i, j, k) = (g.inputs(), g.outputs(), g.measuring());
    let ik = i.union(&k);
    let kj = k.union(&j);
    let r = g.block(&ik, &kj).right_inverse()?;
    let a = g.block(&j, &kj).mul(&r)?;
    let b = r.block(&j, &ik).neg();
    Ok(CompensationMap { a, b })
}

/// s = w(Θ p^{IK}) on the outputs.
pub fn byproduct(theta: &CompensationMap, outcome: &FdVector) -> Result<WeylLabel> {
    WeylLabel::new(theta.a.mul_vec(outcome)?, theta.b.mul_vec(outcome)?)
}
