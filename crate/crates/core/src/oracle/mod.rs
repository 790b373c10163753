//! Dense brute-force simulator on C^(d^n).
//!
//! A [`StateVector`] stores the function values ψ(q) of an element of
//! H_S = L²(F_d^S) with the normalised inner product
//! ⟨ψ,φ⟩ = d^{-|S|} Σ_q conj ψ(q) φ(q), so every √d prefactor matches the
//! algebraic formulas literally. Configurations are enumerated little-endian
//! in the canonical vertex order (first vertex fastest).
//!
//! A [`LinearMap`] H_A → H_B is stored as a matrix in the orthonormal ket
//! basis |q⟩ = ζ-type delta functions √d^n δ_q.

mod codes;
mod measure;
mod ops;

pub use codes::{
    cluster_state, encoding_operator, graph_code_isometry, graph_code_isometry_explicit,
    check_stabilizer_decomposition, StabilizerReport,
};
pub use measure::{measure_projective, postselect, MeasurementBasis, MeasurementResult};
pub use ops::{apply_dynamics, apply_weyl, fourier};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{neg_mod, FdVector};
use crate::vertex::VertexSet;
use crate::weyl::PhaseExponent;

pub const DEFAULT_MAX_AMPLITUDES: u64 = 1 << 20;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Amplitude cap, overridable through `GRAPHCLUST_MAX_AMPLITUDES`.
pub fn max_amplitudes() -> u64 {
    std::env::var("GRAPHCLUST_MAX_AMPLITUDES")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_AMPLITUDES)
}

/// d^n, refusing sizes above the cap.
pub fn checked_dim(d: u32, n: usize) -> Result<usize> {
    let cap = max_amplitudes();
    let requested = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(Error::SizeCap { requested, cap });
    }
    Ok(requested as usize)
}

pub(crate) fn sqrt_d_pow(d: u32, k: i32) -> f64 {
    (d as f64).sqrt().powi(k)
}

/// Primitive d-th root of unity raised to `k`.
pub(crate) fn omega(d: u32, k: u64) -> Complex64 {
    PhaseExponent::new(2 * (k % d as u64) as i64, d).to_complex()
}

/// Offsets of every configuration of `sub` inside the little-endian layout of
/// `sup`, enumerated in `sub`'s own little-endian order.
pub(crate) fn offsets(sub: &VertexSet, sup: &VertexSet, d: u32) -> Vec<usize> {
    let strides: Vec<usize> = sub
        .iter()
        .map(|v| (d as usize).pow(sup.position(v).expect("sub-support") as u32))
        .collect();
    let mut out = vec![0usize];
    for &s in &strides {
        let prev = std::mem::take(&mut out);
        out.reserve(prev.len() * d as usize);
        for digit in 0..d as usize {
            // Earlier vertices stay the fast index.
            out.extend(prev.iter().map(|&o| o + digit * s));
        }
    }
    out
}

/// Digits of configuration `idx` over `n` vertices.
pub(crate) fn digits(mut idx: usize, n: usize, d: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push((idx % d as usize) as u32);
        idx /= d as usize;
    }
    out
}

pub(crate) fn index_of(digits: &[u32], d: u32) -> usize {
    digits.iter().rev().fold(0usize, |acc, &x| acc * d as usize + x as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    d: u32,
    support: VertexSet,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(support: VertexSet, d: u32) -> Result<Self> {
        let n = checked_dim(d, support.len())?;
        Ok(Self { d, support, amps: vec![Complex64::new(0.0, 0.0); n] })
    }

    /// The one-dimensional space H_∅ with value `c`.
    pub fn scalar(d: u32, c: Complex64) -> Self {
        Self { d, support: VertexSet::empty(), amps: vec![c] }
    }

    pub fn from_fn(support: VertexSet, d: u32, f: impl Fn(&[u32]) -> Complex64) -> Result<Self> {
        let n = checked_dim(d, support.len())?;
        let amps = (0..n).map(|i| f(&digits(i, support.len(), d))).collect();
        Ok(Self { d, support, amps })
    }

    /// Function values in configuration order.
    pub fn from_values(support: VertexSet, d: u32, amps: Vec<Complex64>) -> Result<Self> {
        let n = checked_dim(d, support.len())?;
        if amps.len() != n {
            return Err(Error::IndexMismatch(format!("{} values for dimension {n}", amps.len())));
        }
        Ok(Self { d, support, amps })
    }

    /// ξ_[p](q) = χ(p|q).
    pub fn x_basis(p: &FdVector) -> Result<Self> {
        let d = p.modulus();
        let pe = p.entries().to_vec();
        Self::from_fn(p.index().clone(), d, |q| {
            omega(d, pe.iter().zip(q).map(|(&a, &b)| a as u64 * b as u64).sum())
        })
    }

    /// ζ_[q] = x(q)ζ_[0]: the delta function of height √d^{|S|} at −q.
    pub fn z_basis(q: &FdVector) -> Result<Self> {
        let d = q.modulus();
        let mut s = Self::zeros(q.index().clone(), d)?;
        let at: Vec<u32> = q.entries().iter().map(|&e| neg_mod(e, d)).collect();
        let k = index_of(&at, d);
        s.amps[k] = Complex64::new(sqrt_d_pow(d, q.len() as i32), 0.0);
        Ok(s)
    }

    /// Orthonormal ket |q⟩ (function value √d^n at configuration q).
    pub fn ket(support: VertexSet, d: u32, idx: usize) -> Result<Self> {
        let mut s = Self::zeros(support, d)?;
        let n = s.support.len();
        s.amps[idx] = Complex64::new(sqrt_d_pow(d, n as i32), 0.0);
        Ok(s)
    }

    /// Normalised state with independent Gaussian-like coefficients from `rng`.
    pub fn random(support: VertexSet, d: u32, rng: &mut impl rand::Rng) -> Result<Self> {
        let mut s = Self::zeros(support, d)?;
        for a in s.amps.iter_mut() {
            *a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        s.normalize();
        Ok(s)
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn support(&self) -> &VertexSet {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// ψ at the configuration q (indexed by the support).
    pub fn value_at(&self, q: &FdVector) -> Complex64 {
        let dig: Vec<u32> = self.support.iter().map(|v| q.get(v)).collect();
        self.amps[index_of(&dig, self.d)]
    }

    pub fn inner(&self, o: &StateVector) -> Result<Complex64> {
        self.check_same(o)?;
        let s: Complex64 = self.amps.iter().zip(&o.amps).map(|(a, b)| a.conj() * b).sum();
        Ok(s / self.dim() as f64)
    }

    pub fn norm(&self) -> f64 {
        (self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() / self.dim() as f64).sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector { amps: self.amps.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &StateVector) -> Result<StateVector> {
        self.check_same(o)?;
        Ok(StateVector { amps: self.amps.iter().zip(&o.amps).map(|(a, b)| a - b).collect(), ..self.clone() })
    }

    pub fn max_abs_diff(&self, o: &StateVector) -> Result<f64> {
        self.check_same(o)?;
        let scale = sqrt_d_pow(self.d, self.support.len() as i32);
        Ok(self.amps.iter().zip(&o.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale)
    }

    /// |⟨ψ,φ⟩| for normalised inputs.
    pub fn fidelity(&self, o: &StateVector) -> Result<f64> {
        Ok(self.inner(o)?.norm() / (self.norm() * o.norm()))
    }

    fn check_same(&self, o: &StateVector) -> Result<()> {
        if self.d != o.d {
            return Err(Error::FieldMismatch(self.d, o.d));
        }
        if self.support != o.support {
            return Err(Error::IndexMismatch(format!("supports {} vs {}", self.support, o.support)));
        }
        Ok(())
    }

    /// ψ ⊗ φ on the disjoint union of supports.
    pub fn tensor(&self, o: &StateVector) -> Result<StateVector> {
        if self.d != o.d {
            return Err(Error::FieldMismatch(self.d, o.d));
        }
        if !self.support.is_disjoint(&o.support) {
            return Err(Error::IndexMismatch("tensor factors overlap".into()));
        }
        let support = self.support.union(&o.support);
        let mut out = StateVector::zeros(support.clone(), self.d)?;
        let oa = offsets(&self.support, &support, self.d);
        let ob = offsets(&o.support, &support, self.d);
        for (i, &a) in oa.iter().enumerate() {
            for (j, &b) in ob.iter().enumerate() {
                out.amps[a + b] = self.amps[i] * o.amps[j];
            }
        }
        Ok(out)
    }

    /// Partial inner product ∫dq^A conj φ(q^A) ψ(·, q^A), leaving H_{S∖A}.
    pub fn contract(&self, phi: &StateVector) -> Result<StateVector> {
        if self.d != phi.d {
            return Err(Error::FieldMismatch(self.d, phi.d));
        }
        if !phi.support.is_subset(&self.support) {
            return Err(Error::IndexMismatch(format!("{} is not inside {}", phi.support, self.support)));
        }
        let rest = self.support.difference(&phi.support);
        let mut out = StateVector::zeros(rest.clone(), self.d)?;
        let oa = offsets(&phi.support, &self.support, self.d);
        let ob = offsets(&rest, &self.support, self.d);
        let norm = phi.dim() as f64;
        for (j, &b) in ob.iter().enumerate() {
            let s: Complex64 = oa.iter().enumerate().map(|(i, &a)| phi.amps[i].conj() * self.amps[a + b]).sum();
            out.amps[j] = s / norm;
        }
        Ok(out)
    }

    /// Same function with the support renamed vertex-by-vertex (order preserving).
    pub fn relabel(&self, to: &VertexSet) -> Result<StateVector> {
        if to.len() != self.support.len() {
            return Err(Error::IndexMismatch("relabel needs equal sizes".into()));
        }
        Ok(StateVector { support: to.clone(), ..self.clone() })
    }
}

/// Φ_[p^A]: ψ ↦ ψ ⊗ ξ_[p^A].
pub fn embed_x(p: &FdVector, psi: &StateVector) -> Result<StateVector> {
    psi.tensor(&StateVector::x_basis(p)?)
}

/// Π_[q^A]: ψ ↦ ψ ⊗ ζ_[q^A].
pub fn embed_z(q: &FdVector, psi: &StateVector) -> Result<StateVector> {
    psi.tensor(&StateVector::z_basis(q)?)
}

/// Φ*_[p^A].
pub fn restrict_x(p: &FdVector, psi: &StateVector) -> Result<StateVector> {
    psi.contract(&StateVector::x_basis(p)?)
}

/// Π*_[q^A].
pub fn restrict_z(q: &FdVector, psi: &StateVector) -> Result<StateVector> {
    psi.contract(&StateVector::z_basis(q)?)
}

/// Dense matrix of a linear map H_domain → H_codomain in the ket bases.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    d: u32,
    domain: VertexSet,
    codomain: VertexSet,
    rows: usize,
    cols: usize,
    mat: Vec<Complex64>,
}

impl LinearMap {
    pub fn zeros(d: u32, domain: VertexSet, codomain: VertexSet) -> Result<Self> {
        let cols = checked_dim(d, domain.len())?;
        let rows = checked_dim(d, codomain.len())?;
        checked_dim(d, domain.len() + codomain.len())?;
        Ok(Self { d, domain, codomain, rows, cols, mat: vec![Complex64::new(0.0, 0.0); rows * cols] })
    }

    pub fn identity(d: u32, support: VertexSet) -> Result<Self> {
        let mut m = Self::zeros(d, support.clone(), support)?;
        for i in 0..m.rows {
            m.mat[i * m.cols + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Matrix of the map `f`, probed on every ket of the domain.
    pub fn from_fn(
        d: u32,
        domain: VertexSet,
        codomain: VertexSet,
        f: impl Fn(&StateVector) -> Result<StateVector>,
    ) -> Result<Self> {
        let mut m = Self::zeros(d, domain.clone(), codomain.clone())?;
        let scale = sqrt_d_pow(d, -(codomain.len() as i32));
        for b in 0..m.cols {
            let out = f(&StateVector::ket(domain.clone(), d, b)?)?;
            if out.support != codomain {
                return Err(Error::IndexMismatch(format!("map produced {} not {}", out.support, codomain)));
            }
            for a in 0..m.rows {
                m.mat[a * m.cols + b] = out.amps[a] * scale;
            }
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    pub fn codomain(&self) -> &VertexSet {
        &self.codomain
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        self.mat[a * self.cols + b]
    }

    pub fn set_entry(&mut self, a: usize, b: usize, v: Complex64) {
        self.mat[a * self.cols + b] = v;
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.support != self.domain || psi.d != self.d {
            return Err(Error::IndexMismatch(format!("map domain {} vs state {}", self.domain, psi.support)));
        }
        let in_scale = sqrt_d_pow(self.d, -(self.domain.len() as i32));
        let out_scale = sqrt_d_pow(self.d, self.codomain.len() as i32);
        let mut out = StateVector::zeros(self.codomain.clone(), self.d)?;
        for a in 0..self.rows {
            let s: Complex64 = (0..self.cols).map(|b| self.mat[a * self.cols + b] * psi.amps[b]).sum();
            out.amps[a] = s * in_scale * out_scale;
        }
        Ok(out)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.codomain != self.domain {
            return Err(Error::IndexMismatch(format!("compose {} after {}", self.domain, other.codomain)));
        }
        let mut out = LinearMap::zeros(self.d, other.domain.clone(), self.codomain.clone())?;
        for a in 0..self.rows {
            for t in 0..self.cols {
                let x = self.mat[a * self.cols + t];
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..other.cols {
                    out.mat[a * out.cols + b] += x * other.mat[t * other.cols + b];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> LinearMap {
        let mut out = LinearMap {
            d: self.d,
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            rows: self.cols,
            cols: self.rows,
            mat: vec![Complex64::new(0.0, 0.0); self.mat.len()],
        };
        for a in 0..self.rows {
            for b in 0..self.cols {
                out.mat[b * out.cols + a] = self.mat[a * self.cols + b].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> LinearMap {
        LinearMap { mat: self.mat.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &LinearMap) -> Result<LinearMap> {
        self.check_shape(o)?;
        Ok(LinearMap { mat: self.mat.iter().zip(&o.mat).map(|(a, b)| a + b).collect(), ..self.clone() })
    }

    fn check_shape(&self, o: &LinearMap) -> Result<()> {
        if self.domain != o.domain || self.codomain != o.codomain || self.d != o.d {
            return Err(Error::IndexMismatch("linear maps have different shapes".into()));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, o: &LinearMap) -> Result<f64> {
        self.check_shape(o)?;
        Ok(self.mat.iter().zip(&o.mat).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// max |(M*M − 1)_{ab}|.
    pub fn isometry_deviation(&self) -> f64 {
        let g = self.adjoint().compose(self).expect("square gram matrix");
        let id = LinearMap::identity(self.d, self.domain.clone()).expect("within cap");
        g.max_abs_diff(&id).expect("same shape")
    }

    pub fn is_isometry(&self, tol: f64) -> bool {
        self.isometry_deviation() <= tol
    }

    /// c when the map is c·1 (within `tol`), otherwise `None`.
    pub fn scalar_multiple_of_identity(&self, tol: f64) -> Option<Complex64> {
        if self.domain != self.codomain {
            return None;
        }
        let c = self.mat[0];
        let id = LinearMap::identity(self.d, self.domain.clone()).ok()?.scale(c);
        (self.max_abs_diff(&id).ok()? <= tol).then_some(c)
    }
}

/// κ with |κ| = 1 and max|A − κB| ≤ tol, if one exists. κ is read off the
/// first entry of B whose modulus is within a factor 10 of B's largest.
pub fn equal_up_to_phase(a: &LinearMap, b: &LinearMap, tol: f64) -> Option<Complex64> {
    a.check_shape(b).ok()?;
    let bmax = b.max_abs();
    if bmax <= tol {
        return (a.max_abs() <= tol).then_some(Complex64::new(1.0, 0.0));
    }
    let k = b.mat.iter().position(|x| x.norm() >= bmax / 10.0)?;
    let kappa = a.mat[k] / b.mat[k];
    if (kappa.norm() - 1.0).abs() > tol.max(1e-9) {
        return None;
    }
    let kappa = kappa / kappa.norm();
    (a.max_abs_diff(&b.scale(kappa)).ok()? <= tol).then_some(kappa)
}

/// Best phase κ for A ≈ κB (from the Frobenius overlap) and max|A − κB|.
/// When the overlap vanishes κ = 1.
pub fn fit_phase(a: &LinearMap, b: &LinearMap) -> Result<(Complex64, f64)> {
    a.check_shape(b)?;
    let overlap: Complex64 = b.mat.iter().zip(&a.mat).map(|(x, y)| x.conj() * y).sum();
    let kappa = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    Ok((kappa, a.max_abs_diff(&b.scale(kappa))?))
}
