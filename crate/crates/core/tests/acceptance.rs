//! Acceptance suite: one PASS/FAIL line per criterion with pinned tolerances
//! and wall-clock bounds. Runs with `harness = false` so the lines are always
//! printed; the process exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{from_matrix, randomize_edges, random_graph, random_roles};
use graphclust::io::parse_graph;
use graphclust::oracle::{apply_weyl, check_stabilizer_decomposition, cluster_state, StateVector};
use graphclust::pipeline::{
    check_compensation, eliminate, eliminate_with, persistency_search, run, standard_encoding, strategy_to_x_graph,
    verify_reduction, x_measure_deviation, EliminationCase, ReductionTrace,
};
use graphclust::weyl::{tau, WeylLabel};
use graphclust::{
    BasisChoice, BinaryCase, EliminationOrder, FdVector, MeasurementStrategy, Vertex, VertexRole, VertexSet,
    WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use VertexRole::*;

const TOL: f64 = 1e-10;

const EXAMPLE1: &str = include_str!("data/example1.json");
const EXAMPLE2: &str = include_str!("data/example2.json");
const K4: &str = include_str!("data/k4.json");
const WIRE: &str = include_str!("data/wire.json");

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(text: &str) -> (WeightedGraph, Option<MeasurementStrategy>) {
    parse_graph(text).expect("fixture parses")
}

fn eliminated(trace: &ReductionTrace) -> Vec<(Vec<Vertex>, EliminationCase)> {
    trace.steps.iter().map(|s| (s.eliminated.as_slice().to_vec(), s.case)).collect()
}

fn example2_x_graph() -> WeightedGraph {
    let (g, s) = load(EXAMPLE2);
    strategy_to_x_graph(&g, &s.expect("fixture has a strategy")).unwrap().graph
}

fn criterion_1() -> Outcome {
    let (g0, _) = load(EXAMPLE1);
    let trace = eliminate(&g0).map_err(|e| e.to_string())?;
    let cases = eliminated(&trace);
    let want = vec![(vec![3, 4], EliminationCase::MeasuringPair), (vec![5, 6], EliminationCase::MeasuringPair)];
    ensure(cases == want, || format!("trace {cases:?}"))?;
    let g1 = from_matrix(
        2,
        &[(1, Input), (2, Input), (5, Measuring), (6, Measuring), (7, Output), (8, Output)],
        &[
            &[0, 1, 0, 1, 0, 0],
            &[1, 0, 1, 0, 0, 0],
            &[0, 1, 0, 1, 1, 0],
            &[1, 0, 1, 0, 0, 1],
            &[0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
        ],
    );
    let g2 = from_matrix(
        2,
        &[(1, Input), (2, Input), (7, Output), (8, Output)],
        &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 1], &[0, 1, 1, 0]],
    );
    ensure(trace.steps[0].graph_after == g1, || format!("Γ_1 = {:?}", trace.steps[0].graph_after))?;
    ensure(trace.steps[1].graph_after == g2, || format!("Γ_2 = {:?}", trace.steps[1].graph_after))?;
    Ok("{3,4}(ii) then {5,6}(ii); Γ_1 (6x6) and Γ_2 (4x4) equal the printed matrices".into())
}

fn criterion_2() -> Outcome {
    let (g, _) = load(EXAMPLE2);
    let g0 = example2_x_graph();
    let trace = eliminate_with(&g0, &EliminationOrder::Explicit(vec![2, 3, 1])).map_err(|e| e.to_string())?;
    let cases = eliminated(&trace);
    let want = vec![
        (vec![2, 4], EliminationCase::MeasuringPair),
        (vec![3], EliminationCase::SelfLink),
        (vec![1], EliminationCase::SelfLink),
    ];
    ensure(cases == want, || format!("trace {cases:?}"))?;
    // Γ_1 is Γ without vertex 2 and with a self-link at 3.
    let g1 = &trace.steps[0].graph_after;
    let mut expected = g.delete_vertices(&VertexSet::from_iter_dedup([2]));
    expected.set_weight(3, 3, 1).unwrap();
    ensure(g1.roles() == expected.roles() && g1.adjacency() == expected.adjacency(), || {
        format!("Γ_1 = {g1:?}, expected {expected:?}")
    })?;
    ensure(trace.final_graph.measuring().is_empty(), || "measuring vertices remain".into())?;
    let default = eliminate(&g0).map_err(|e| e.to_string())?;
    ensure(default.final_graph == trace.final_graph, || "default order ends in a different graph".into())?;
    Ok("{2,4}(ii) -> {3}(i) -> {1}(i); Γ_1 = Γ - {2} + self-link at 3; default order agrees".into())
}

fn criterion_3() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    let mut steps = 0;
    let mut widest = 0;
    for g0 in [load(EXAMPLE1).0, example2_x_graph()] {
        let trace = eliminate_with(&g0, &EliminationOrder::Default).map_err(|e| e.to_string())?;
        let report = verify_reduction(&trace).map_err(|e| e.to_string())?;
        for c in report.steps.iter().chain([&report.end_to_end]) {
            worst.0 = worst.0.max(c.deviation);
            worst.1 = worst.1.max((c.kappa().norm() - 1.0).abs());
        }
        steps += report.steps.len();
        widest = widest.max(g0.len());
    }
    ensure(worst.0 < TOL && worst.1 < TOL, || format!("deviation {:.2e}, ||κ|-1| {:.2e}", worst.0, worst.1))?;
    Ok(format!(
        "{steps} steps + 2 end-to-end, max deviation {:.1e}, ||κ|-1| {:.1e}, largest graph {widest} qubits",
        worst.0, worst.1
    ))
}

/// Random Γ (inputs, measuring, outputs on 1..) and an admissible measurement
/// graph Λ whose outputs are the measuring vertices of Γ.
fn random_pair(d: u32, rng: &mut ChaCha8Rng) -> (WeightedGraph, WeightedGraph) {
    loop {
        let (ni, nm, nj, nk) = (rng.gen_range(0..2), rng.gen_range(1..3), rng.gen_range(1..3), rng.gen_range(0..2));
        if ni + 2 * nm + nj + nk > 6 {
            continue;
        }
        let roles: Vec<VertexRole> = [(Input, ni), (Measuring, nm), (Output, nj)]
            .iter()
            .flat_map(|&(r, n)| std::iter::repeat(r).take(n))
            .collect();
        let g = random_graph(d, &roles, rng);
        let m: Vec<Vertex> = g.measuring().iter().collect();
        let k: Vec<Vertex> = (0..nk).map(|a| 10 + a as Vertex).collect();
        let l: Vec<Vertex> = (0..nm).map(|a| 20 + a as Vertex).collect();
        let lam_roles = m
            .iter()
            .map(|&v| (v, Output))
            .chain(k.iter().map(|&v| (v, Auxiliary)))
            .chain(l.iter().map(|&v| (v, Syndrome)));
        let mut lam = WeightedGraph::new(d, lam_roles).unwrap();
        randomize_edges(&mut lam, rng, &l);
        for &a in &l {
            for &b in &l {
                lam.set_weight(a, b, 0).unwrap();
            }
        }
        if lam.validate_admissible().admissible() {
            return (g, lam);
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a);
    let (mut worst, mut checks) = (0.0f64, 0);
    for n in 0..50 {
        let d = [2, 3][n % 2];
        let (g, lam) = random_pair(d, &mut rng);
        for p in FdVector::enumerate(&g.inputs(), d) {
            for q in FdVector::enumerate(&lam.syndromes(), d) {
                let dev = x_measure_deviation(&g, &lam, &p, &q).map_err(|e| e.to_string())?;
                ensure(dev < TOL, || format!("pair {n}: deviation {dev:.2e} for Γ={g:?} Λ={lam:?}"))?;
                worst = worst.max(dev);
                checks += 1;
            }
        }
    }
    Ok(format!("50 pairs, {checks} outcome combinations, max deviation {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b);
    let (mut basic, mut non_basic) = (0, 0);
    let (mut worst, mut lambda_err, mut iso_basic, mut iso_gap) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    let mut outcomes = 0;
    while basic < 50 || non_basic < 20 {
        let d = [2, 3][rng.gen_range(0..2)];
        let n = rng.gen_range(2..6);
        let g = random_graph(d, &random_roles(n, &mut rng), &mut rng);
        let iso = standard_encoding(&g).map_err(|e| e.to_string())?.isometry_deviation();
        if g.is_basic() && basic < 50 {
            let r = check_compensation(&g).map_err(|e| e.to_string())?;
            worst = worst.max(r.deviation);
            lambda_err = lambda_err.max((r.lambda_modulus.0 - 1.0).abs()).max((r.lambda_modulus.1 - 1.0).abs());
            iso_basic = iso_basic.max(iso);
            outcomes += r.outcomes;
            basic += 1;
        } else if !g.is_basic() && non_basic < 20 {
            iso_gap = iso_gap.min(iso);
            non_basic += 1;
        }
    }
    ensure(worst < TOL && lambda_err < TOL, || format!("deviation {worst:.2e}, ||λ|-1| {lambda_err:.2e}"))?;
    ensure(iso_basic < TOL, || format!("a basic graph misses the isometry test by {iso_basic:.2e}"))?;
    ensure(iso_gap > 1e-3, || format!("a non-basic graph is within {iso_gap:.2e} of an isometry"))?;
    Ok(format!(
        "50 basic graphs ({outcomes} outcomes) max deviation {worst:.1e}, ||λ|-1| {lambda_err:.1e}; \
         20 non-basic graphs miss the isometry test by >= {iso_gap:.2}"
    ))
}

/// Vertices 1..=n with roles I, J, K, L in blocks of the given sizes.
fn block_roles(ni: usize, nj: usize, nk: usize, nl: usize) -> Vec<(Vertex, VertexRole)> {
    [(Input, ni), (Output, nj), (Auxiliary, nk), (Syndrome, nl)]
        .iter()
        .flat_map(|&(r, n)| std::iter::repeat(r).take(n))
        .enumerate()
        .map(|(a, r)| (a as Vertex + 1, r))
        .collect()
}

fn role_patterns(max: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for ni in 0..=max {
        for nl in 0..=max {
            let nj = ni + nl;
            for nk in 0..=max {
                let n = ni + nj + nk + nl;
                if (1..=max).contains(&n) {
                    out.push((ni, nj, nk, nl));
                }
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut graphs = 0;
    let mut worst = 0.0f64;
    for (ni, nj, nk, nl) in role_patterns(4) {
        let roles = block_roles(ni, nj, nk, nl);
        let base = WeightedGraph::new(2, roles.iter().copied()).unwrap();
        let slots: Vec<(Vertex, Vertex)> = (0..roles.len())
            .flat_map(|a| (a..roles.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| roles[a].1 != Syndrome || roles[b].1 != Syndrome)
            .map(|(a, b)| (roles[a].0, roles[b].0))
            .collect();
        for mask in 0u32..(1 << slots.len()) {
            let mut g = base.clone();
            for (s, &(a, b)) in slots.iter().enumerate() {
                g.set_weight(a, b, ((mask >> s) & 1) as i64).unwrap();
            }
            if !g.validate_admissible().admissible() {
                continue;
            }
            let loops: Vec<Vertex> = g.vertices().iter().filter(|&v| g.has_self_link(v)).collect();
            for phases in 0u32..(1 << loops.len()) {
                let mut h = g.clone();
                for (s, &v) in loops.iter().enumerate() {
                    h.set_loop_phase(v, if (phases >> s) & 1 == 1 { 3 } else { 1 }).unwrap();
                }
                let r = check_stabilizer_decomposition(&h).map_err(|e| e.to_string())?;
                ensure(r.passes(TOL), || format!("{h:?}: {r:?}"))?;
                worst = worst.max(r.max_deviation());
                graphs += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c);
    let patterns = role_patterns(4);
    let mut sampled = 0;
    while sampled < 40 {
        let (ni, nj, nk, nl) = patterns[rng.gen_range(0..patterns.len())];
        let roles = block_roles(ni, nj, nk, nl);
        let syn: Vec<Vertex> = roles.iter().filter(|r| r.1 == Syndrome).map(|r| r.0).collect();
        let mut g = WeightedGraph::new(3, roles).unwrap();
        randomize_edges(&mut g, &mut rng, &syn);
        for &a in &syn {
            for &b in &syn {
                g.set_weight(a, b, 0).unwrap();
            }
        }
        if !g.validate_admissible().admissible() {
            continue;
        }
        let r = check_stabilizer_decomposition(&g).map_err(|e| e.to_string())?;
        ensure(r.passes(TOL), || format!("{g:?}: {r:?}"))?;
        worst = worst.max(r.max_deviation());
        sampled += 1;
    }
    Ok(format!("{graphs} admissible d=2 graphs and {sampled} d=3 samples, max deviation {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2, 3, 5, 7] {
        let x = WeightedGraph::x_measurement(d, 1, 2).unwrap();
        let z = WeightedGraph::z_measurement(d, 1, 3, 2).unwrap();
        for q in FdVector::enumerate(&VertexSet::from_iter_dedup([2]), d) {
            let minus_q = FdVector::from_entries(VertexSet::from_iter_dedup([1]), d, [-(q.get(2) as i64)]).unwrap();
            let px = cluster_state(&x, &q).map_err(|e| e.to_string())?;
            let pz = cluster_state(&z, &q).map_err(|e| e.to_string())?;
            worst = worst.max(px.max_abs_diff(&StateVector::x_basis(&minus_q).unwrap()).unwrap());
            worst = worst.max(pz.max_abs_diff(&StateVector::z_basis(&minus_q).unwrap()).unwrap());
        }
        for n in 1..d {
            let y = WeightedGraph::y_measurement(d, 1, 2, n).unwrap();
            let labels: Vec<FdVector> = FdVector::enumerate(&VertexSet::from_iter_dedup([2]), d).collect();
            let states: Vec<StateVector> = labels.iter().map(|q| cluster_state(&y, q)).collect::<Result<_, _>>().unwrap();
            let one = VertexSet::from_iter_dedup([1]);
            let w = WeylLabel::new(
                FdVector::from_entries(one.clone(), d, [n as i64]).unwrap(),
                FdVector::from_entries(one, d, [-1]).unwrap(),
            )
            .unwrap();
            for (a, (qa, sa)) in labels.iter().zip(&states).enumerate() {
                for (b, sb) in states.iter().enumerate() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((sa.inner(sb).unwrap() - want).norm());
                }
                let point = FdVector::from_pairs(d, [(1, 1), (2, qa.get(2) as i64)]).unwrap();
                let eig = tau(&y, &point).to_complex();
                worst = worst.max(apply_weyl(&w, sa).unwrap().max_abs_diff(&sa.scale(eig)).unwrap());
            }
        }
    }
    ensure(worst < TOL, || format!("max deviation {worst:.2e}"))?;
    Ok(format!("X and Z graphs give ξ_[-q] and ζ_[-q]; Y graphs give eigenbases of w(n|-1); d in 2,3,5,7; max deviation {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let (g, _) = load(K4);
    let w = persistency_search(&g, 3).map_err(|e| e.to_string())?.ok_or("no witness within budget 3")?;
    let single_y = w.measurements.len() == 1 && matches!(w.measurements[0].1, BasisChoice::YBasis(_));
    ensure(single_y, || format!("witness {:?}", w.measurements))?;
    ensure(w.final_graph.is_totally_disconnected(), || format!("final graph {:?}", w.final_graph))?;
    Ok(format!("bound 1 via {} at vertex {}; final graph totally disconnected", w.measurements[0].1.tag(), w.measurements[0].0))
}

/// Smallest pairwise |⟨ψ_a,ψ_b⟩| over runs with seeds 0..100.
fn min_pairwise_fidelity(g: &WeightedGraph, s: &MeasurementStrategy, psi: &StateVector, compensate: bool) -> Result<f64, String> {
    let outs: Vec<StateVector> = (0..100)
        .map(|seed| run(g, s, psi, seed, compensate).map(|r| r.output_state))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut min = f64::INFINITY;
    for (a, x) in outs.iter().enumerate() {
        for y in &outs[a + 1..] {
            min = min.min(x.fidelity(y).unwrap());
        }
    }
    Ok(min)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e);
    let mut parts = Vec::new();
    for (name, text) in [("wire", WIRE), ("Example I", EXAMPLE1)] {
        let (g, _) = load(text);
        let s = MeasurementStrategy::all_x(&g);
        let psi = StateVector::random(g.inputs(), g.modulus(), &mut rng).unwrap();
        let with = min_pairwise_fidelity(&g, &s, &psi, true)?;
        let without = min_pairwise_fidelity(&g, &s, &psi, false)?;
        ensure(with > 1.0 - 1e-9, || format!("{name}: compensated fidelity drops to {with}"))?;
        ensure(without < 0.99, || format!("{name}: uncompensated runs all agree (min fidelity {without})"))?;
        parts.push(format!("{name} min fidelity {with:.12} compensated, {without:.3} without"));
    }
    Ok(parts.join("; "))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10);
    let (mut loops, mut pairs) = (0, 0);
    while loops + pairs < 10_000 {
        let n = rng.gen_range(1..7);
        let g = random_graph(2, &random_roles(n, &mut rng), &mut rng);
        let free: Vec<Vertex> = g.vertices().iter().filter(|&v| g.role(v) != Some(Input)).collect();
        if free.is_empty() {
            continue;
        }
        let v = free[rng.gen_range(0..free.len())];
        let (case, set) = if g.has_self_link(v) {
            (BinaryCase::SelfLoop(v), vec![v])
        } else {
            let partners: Vec<Vertex> =
                free.iter().copied().filter(|&k| k != v && g.weight(v, k) == 1 && !g.has_self_link(k)).collect();
            if partners.is_empty() {
                continue;
            }
            let k = partners[rng.gen_range(0..partners.len())];
            (BinaryCase::Pair(v, k), vec![v, k])
        };
        let rule = g.binary_rule(case).map_err(|e| e.to_string())?;
        let schur = g.schur_complement(&VertexSet::new(set).unwrap()).map_err(|e| e.to_string())?;
        ensure(rule == schur, || format!("{case:?} on {g:?}: rule {rule:?}, Schur {schur:?}"))?;
        match case {
            BinaryCase::SelfLoop(_) => loops += 1,
            BinaryCase::Pair(..) => pairs += 1,
        }
    }
    Ok(format!("{} graphs ({loops} self-link, {pairs} pair), all equal including loop phases", loops + pairs))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("Example I reproduction", criterion_1, Duration::from_secs(1)),
        ("Example II reproduction", criterion_2, Duration::from_secs(1)),
        ("elimination steps against the oracle", criterion_3, Duration::from_secs(10)),
        ("x-measurement substitution", criterion_4, Duration::from_secs(60)),
        ("byproduct compensation and basic graphs", criterion_5, Duration::from_secs(120)),
        ("graph-code decomposition", criterion_6, Duration::from_secs(60)),
        ("measurement-graph bases", criterion_7, Duration::from_secs(60)),
        ("persistency of K4", criterion_8, Duration::from_secs(60)),
        ("channel purity", criterion_9, Duration::from_secs(60)),
        ("binary rules against Schur complements", criterion_10, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (n, (name, f, bound)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let elapsed = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(msg) if elapsed <= *bound => (true, msg),
            Ok(msg) => (false, format!("{msg}; too slow")),
            Err(msg) => (false, msg),
        };
        failed += usize::from(!ok);
        println!(
            "[acceptance {}] {} {name}: {detail} ({:.3}s, bound {}s)",
            n + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            bound.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
