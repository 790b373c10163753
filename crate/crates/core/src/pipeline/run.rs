use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::strategy::{measurement_graph, x_graph_unchecked, MeasurementStrategy, XGraph};
use crate::error::{Error, Result};
use crate::field::FdVector;
use crate::graph::WeightedGraph;
use crate::oracle::{
    apply_dynamics, apply_weyl, checked_dim, encoding_operator, fit_phase, measure_projective, LinearMap,
    MeasurementBasis, StateVector,
};
use crate::weyl::{byproduct, compensation_map, WeylLabel};

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub seed: u64,
    /// x-basis outcome p^I at the inputs.
    pub input_outcome: FdVector,
    /// Syndrome q^L of the graph measurement at the measuring vertices.
    pub syndrome_outcome: FdVector,
    /// Equivalent x-basis outcome p^I − Λ^{MK}_L q^L on I ∪ M ∪ K.
    pub x_outcome: FdVector,
    /// Corrections applied to the outputs (empty without compensation).
    pub byproducts: Vec<WeylLabel>,
    /// Normalised output state on the output vertices.
    pub output_state: StateVector,
}

fn convert(g: &WeightedGraph, strategy: &MeasurementStrategy) -> Result<XGraph> {
    x_graph_unchecked(g, &measurement_graph(g, strategy)?)
}

/// One run of the one-way computer: prepare the inputs with `input` and every
/// other vertex in the standard state, apply u(Γ), measure the inputs in the
/// x-basis and the measuring vertices in the strategy's graph basis, then
/// undo the randomness with w(Θp)* where Θ belongs to Γ − Z_LΛ.
pub fn run(
    g: &WeightedGraph,
    strategy: &MeasurementStrategy,
    input: &StateVector,
    seed: u64,
    compensate: bool,
) -> Result<RunRecord> {
    let d = g.modulus();
    let (i, m) = (g.inputs(), g.measuring());
    if input.support() != &i {
        return Err(Error::IndexMismatch(format!("input state on {} but inputs are {i}", input.support())));
    }
    let xg = convert(g, strategy)?;
    let theta = if compensate { Some(compensation_map(&xg.graph)?) } else { None };
    checked_dim(d, g.len())?;
    checked_dim(d, xg.measurement_graph.len())?;

    let rest = g.vertices().difference(&i);
    let mut state = apply_dynamics(g, &input.tensor(&StateVector::x_basis(&FdVector::zeros(rest, d))?)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut input_outcome = FdVector::zeros(i.clone(), d);
    if !i.is_empty() {
        let r = measure_projective(&MeasurementBasis::X, &i, &state, &mut rng)?;
        input_outcome = r.outcome;
        state = r.remainder;
    }
    let mut syndrome_outcome = FdVector::zeros(xg.measurement_graph.syndromes(), d);
    if !m.is_empty() {
        let basis = MeasurementBasis::Graph(xg.measurement_graph.clone());
        let r = measure_projective(&basis, &m, &state, &mut rng)?;
        syndrome_outcome = r.outcome;
        state = r.remainder;
    }
    let x_outcome = xg.x_outcome(&input_outcome, &syndrome_outcome)?;
    let mut byproducts = Vec::new();
    if let Some(theta) = theta {
        let s = byproduct(&theta, &x_outcome)?.adjoint();
        state = apply_weyl(&s, &state)?;
        byproducts.push(s);
    }
    state.normalize();
    Ok(RunRecord { seed, input_outcome, syndrome_outcome, x_outcome, byproducts, output_state: state })
}

/// u_[Γ−Z_LΛ | 0] ψ normalised: the output every compensated run should produce
/// up to a global phase.
pub fn standard_output(g: &WeightedGraph, strategy: &MeasurementStrategy, input: &StateVector) -> Result<StateVector> {
    let xg = convert(g, strategy)?;
    let ik = xg.graph.inputs().union(&xg.graph.measuring());
    let mut out = encoding_operator(&xg.graph, &FdVector::zeros(ik, g.modulus()))?.apply(input)?;
    out.normalize();
    Ok(out)
}

/// Largest max|w(Θp)* u_[Γ|p] − λ u_[Γ|0]| over all outcomes p^{IK}, with the
/// best phase λ for each p.
#[derive(Clone, Debug, Serialize)]
pub struct CompensationReport {
    pub outcomes: usize,
    pub deviation: f64,
    /// Smallest and largest |λ| found (1 when the identity holds).
    pub lambda_modulus: (f64, f64),
}

fn frobenius(a: &LinearMap, b: &LinearMap) -> Complex64 {
    let (r, c) = a.shape();
    (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).map(|(i, j)| a.entry(i, j).conj() * b.entry(i, j)).sum()
}

pub fn check_compensation(g: &WeightedGraph) -> Result<CompensationReport> {
    let d = g.modulus();
    let theta = compensation_map(g)?;
    let ik = g.inputs().union(&g.measuring());
    let j = g.outputs();
    let standard = encoding_operator(g, &FdVector::zeros(ik.clone(), d))?;
    let mut report = CompensationReport { outcomes: 0, deviation: 0.0, lambda_modulus: (f64::INFINITY, 0.0) };
    for p in FdVector::enumerate(&ik, d) {
        let s = byproduct(&theta, &p)?.adjoint();
        let w = LinearMap::from_fn(d, j.clone(), j.clone(), |x| apply_weyl(&s, x))?;
        let lhs = w.compose(&encoding_operator(g, &p)?)?;
        let (_, dev) = fit_phase(&lhs, &standard)?;
        let lambda = frobenius(&standard, &lhs) / frobenius(&standard, &standard);
        report.outcomes += 1;
        report.deviation = report.deviation.max(dev);
        report.lambda_modulus.0 = report.lambda_modulus.0.min(lambda.norm());
        report.lambda_modulus.1 = report.lambda_modulus.1.max(lambda.norm());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexRole::*;
    use crate::pipeline::BasisChoice;

    fn wire(d: u32) -> WeightedGraph {
        WeightedGraph::new(d, [(1, Input), (2, Output)]).unwrap().with_edges(&[(1, 2, 1)]).unwrap()
    }

    #[test]
    fn wire_output_is_seed_independent() {
        for d in [2, 3] {
            let g = wire(d);
            let mut r = ChaCha8Rng::seed_from_u64(4);
            let psi = StateVector::random(vset![1], d, &mut r).unwrap();
            let s = MeasurementStrategy::new();
            let want = standard_output(&g, &s, &psi).unwrap();
            for seed in 0..20 {
                let rec = run(&g, &s, &psi, seed, true).unwrap();
                assert!(rec.output_state.fidelity(&want).unwrap() > 1.0 - 1e-9, "d={d} seed={seed}");
            }
        }
    }

    #[test]
    fn runs_replay_from_the_seed() {
        let g = wire(3);
        let psi = StateVector::random(vset![1], 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let a = run(&g, &MeasurementStrategy::new(), &psi, 7, false).unwrap();
        let b = run(&g, &MeasurementStrategy::new(), &psi, 7, false).unwrap();
        assert_eq!(a.input_outcome, b.input_outcome);
        assert_eq!(a.output_state, b.output_state);
    }

    #[test]
    fn z_measured_leaf_is_compensated() {
        let g = WeightedGraph::new(3, [(1, Input), (2, Output), (3, Measuring)])
            .unwrap()
            .with_edges(&[(1, 2, 1), (2, 3, 1)])
            .unwrap();
        let s = MeasurementStrategy::new().with(3, BasisChoice::ZBasis);
        let psi = StateVector::random(vset![1], 3, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let want = standard_output(&g, &s, &psi).unwrap();
        for seed in 0..20 {
            let rec = run(&g, &s, &psi, seed, true).unwrap();
            assert!(rec.output_state.fidelity(&want).unwrap() > 1.0 - 1e-9, "seed={seed}");
        }
    }

    #[test]
    fn compensation_rejects_non_basic() {
        let g = WeightedGraph::new(2, [(1, Input), (2, Output), (3, Measuring)])
            .unwrap()
            .with_edges(&[(1, 2, 1)])
            .unwrap();
        let psi = StateVector::x_basis(&FdVector::zeros(vset![1], 2)).unwrap();
        let s = MeasurementStrategy::all_x(&g);
        assert_eq!(run(&g, &s, &psi, 0, true).unwrap_err(), Error::NotBasic);
        assert!(run(&g, &s, &psi, 0, false).is_ok());
        assert_eq!(check_compensation(&g).unwrap_err(), Error::NotBasic);
    }

    #[test]
    fn compensation_on_small_graphs() {
        let g = WeightedGraph::new(3, [(1, Input), (2, Measuring), (3, Output)])
            .unwrap()
            .with_edges(&[(1, 2, 1), (2, 3, 2), (2, 2, 1)])
            .unwrap();
        let r = check_compensation(&g).unwrap();
        assert_eq!(r.outcomes, 9);
        assert!(r.deviation < 1e-10, "{r:?}");
        assert!((r.lambda_modulus.0 - 1.0).abs() < 1e-10 && (r.lambda_modulus.1 - 1.0).abs() < 1e-10);
    }
}
