use num_complex::Complex64;

use super::{checked_dim, digits, index_of, offsets, omega, sqrt_d_pow, StateVector};
use crate::error::{Error, Result};
use crate::field::FdMatrix;
use crate::graph::WeightedGraph;
use crate::weyl::{PhaseExponent, WeylLabel};

/// (c·w(p|q)ψ)(y) = c·χ(p|y)·ψ(y + q); the label may act on part of the support.
pub fn apply_weyl(w: &WeylLabel, psi: &StateVector) -> Result<StateVector> {
    let d = psi.d;
    if w.modulus() != d {
        return Err(Error::FieldMismatch(w.modulus(), d));
    }
    if !w.support().is_subset(&psi.support) {
        return Err(Error::IndexMismatch(format!("label on {} but state on {}", w.support(), psi.support)));
    }
    let n = psi.support.len();
    let pos: Vec<usize> = w.support().iter().map(|v| psi.support.position(v).expect("subset")).collect();
    let (p, q) = (w.p.entries(), w.q.entries());
    let c = w.phase.to_complex();
    let mut out = StateVector::zeros(psi.support.clone(), d)?;
    for (idx, slot) in out.amps.iter_mut().enumerate() {
        let mut y = digits(idx, n, d);
        let mut pq = 0u64;
        for (k, &i) in pos.iter().enumerate() {
            pq += p[k] as u64 * y[i] as u64;
            y[i] = (y[i] + q[k]) % d;
        }
        *slot = c * omega(d, pq) * psi.amps[index_of(&y, d)];
    }
    Ok(out)
}

/// (u(Γ)ψ)(q) = τ(Γ|q)ψ(q); Γ's vertices must lie in the support.
pub fn apply_dynamics(g: &WeightedGraph, psi: &StateVector) -> Result<StateVector> {
    let d = psi.d;
    if g.modulus() != d {
        return Err(Error::FieldMismatch(g.modulus(), d));
    }
    if !g.vertices().is_subset(&psi.support) {
        return Err(Error::IndexMismatch(format!("graph on {} but state on {}", g.vertices(), psi.support)));
    }
    let n = psi.support.len();
    let vs: Vec<u32> = g.vertices().iter().collect();
    let pos: Vec<usize> = vs.iter().map(|&v| psi.support.position(v).expect("subset")).collect();
    let phases: Vec<u64> = vs.iter().map(|&v| g.loop_phase(v) as u64).collect();
    let adj = g.adjacency();
    let two_d = 2 * d as u64;
    let mut out = psi.clone();
    for (idx, slot) in out.amps.iter_mut().enumerate() {
        let y = digits(idx, n, d);
        let mut e = 0u64;
        for a in 0..vs.len() {
            let ya = y[pos[a]] as u64;
            if ya == 0 {
                continue;
            }
            e += phases[a] * ya * ya;
            for b in (a + 1)..vs.len() {
                e += 2 * adj.at(a, b) as u64 * ya * y[pos[b]] as u64;
            }
            e %= two_d;
        }
        *slot *= PhaseExponent::new(e as i64, d).to_complex();
    }
    Ok(out)
}

/// (F_[C]ψ)(y^J) = √d^{|I|} ∫dq^I χ(Cq^I|y^J) ψ(q^I), acting on the I part of
/// the support and replacing it by J (rows of C, cols I).
pub fn fourier(c: &FdMatrix, psi: &StateVector) -> Result<StateVector> {
    let d = psi.d;
    let (j, i) = (c.rows().clone(), c.cols().clone());
    c.inverse()?;
    if !i.is_subset(&psi.support) {
        return Err(Error::IndexMismatch(format!("transform acts on {} outside {}", i, psi.support)));
    }
    let rest = psi.support.difference(&i);
    if !rest.is_disjoint(&j) {
        return Err(Error::IndexMismatch("transform target overlaps untouched vertices".into()));
    }
    let out_support = rest.union(&j);
    checked_dim(d, out_support.len())?;
    let mut out = StateVector::zeros(out_support.clone(), d)?;
    let in_i = offsets(&i, &psi.support, d);
    let in_rest = offsets(&rest, &psi.support, d);
    let out_j = offsets(&j, &out_support, d);
    let out_rest = offsets(&rest, &out_support, d);
    // Character table χ(Cq^I|y^J) = ω^{y·Cq}.
    let (ni, nj) = (i.len(), j.len());
    let table: Vec<Vec<Complex64>> = (0..out_j.len())
        .map(|yj| {
            let y = digits(yj, nj, d);
            (0..in_i.len())
                .map(|qi| {
                    let q = digits(qi, ni, d);
                    let mut s = 0u64;
                    for r in 0..nj {
                        for t in 0..ni {
                            s += y[r] as u64 * c.at(r, t) as u64 * q[t] as u64;
                        }
                    }
                    omega(d, s)
                })
                .collect()
        })
        .collect();
    let pref = sqrt_d_pow(d, ni as i32) / in_i.len() as f64;
    for (&orr, &irr) in out_rest.iter().zip(&in_rest) {
        for (yj, &oj) in out_j.iter().enumerate() {
            let s: Complex64 = in_i.iter().enumerate().map(|(qi, &ii)| table[yj][qi] * psi.amps[irr + ii]).sum();
            out.amps[orr + oj] = s * pref;
        }
    }
    Ok(out)
}
