use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use graphclust::field::{FdMatrix, FdVector};
use graphclust::io::{export_dot, GraphDocument};
use graphclust::oracle::{check_stabilizer_decomposition, StateVector, DEFAULT_TOL};
use graphclust::pipeline::{
    check_compensation, eliminate_with, persistency_search, run, standard_output, strategy_to_x_graph, verify_reduction,
    x_measure_deviation, EliminationOrder, MeasurementStrategy, ReductionTrace,
};
use graphclust::weyl::compensation_map;
use graphclust::{Error, WeightedGraph};

#[derive(Parser)]
#[command(name = "graphclust", version, about = "Weighted graph states, graph codes and one-way computation over F_d")]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph document and report its properties.
    Validate { file: PathBuf },
    /// Convert the strategy to x-measurements and remove all measuring vertices.
    Reduce {
        file: PathBuf,
        /// `default` or a comma-separated vertex list.
        #[arg(long, default_value = "default")]
        order: String,
        #[arg(long)]
        emit_trace: bool,
    },
    /// Print the compensating map Θ = (A | B).
    Compensate { file: PathBuf },
    /// Simulate runs with sampled measurement outcomes.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        no_compensate: bool,
        #[arg(long, default_value_t = 1)]
        shots: u64,
        /// Seed of the random input state.
        #[arg(long, default_value_t = 0)]
        input_seed: u64,
    },
    /// Check the operator identities with the dense oracle.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Upper bound on the persistency of a binary graph state.
    Persistency {
        file: PathBuf,
        /// Maximal number of measurements to search.
        #[arg(long, default_value_t = 4)]
        budget: usize,
    },
    /// Render the graph as DOT.
    ExportDot { file: PathBuf },
}

struct Loaded {
    graph: WeightedGraph,
    strategy: Option<MeasurementStrategy>,
}

fn read_doc(path: &Path) -> Result<GraphDocument, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    GraphDocument::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Loaded, String> {
    let doc = read_doc(path)?;
    let graph = doc.to_graph().map_err(|e| format!("{}: {e}", path.display()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let strategy = doc
        .strategy(&graph, |f| {
            let sub = base.join(f);
            read_doc(&sub)
                .and_then(|d| d.to_graph().map_err(|e| e.to_string()))
                .map_err(|m| Error::Parse { location: format!("strategy graph {f}"), message: m })
        })
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Loaded { graph, strategy })
}

fn vector(v: &FdVector) -> Value {
    json!({ "index": v.index().as_slice(), "values": v.entries() })
}

fn matrix(m: &FdMatrix) -> Value {
    json!({ "rows": m.rows().as_slice(), "cols": m.cols().as_slice(), "entries": m.to_rows() })
}

fn graph_value(g: &WeightedGraph) -> Value {
    serde_json::to_value(GraphDocument::from_graph(g)).expect("plain data")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

/// Graph that is actually x-measured: Γ − Z_LΛ with a strategy, Γ otherwise.
fn x_graph(l: &Loaded) -> Result<WeightedGraph, Error> {
    match &l.strategy {
        Some(s) => Ok(strategy_to_x_graph(&l.graph, s)?.graph),
        None => Ok(l.graph.clone()),
    }
}

fn strategy_or_x(l: &Loaded) -> MeasurementStrategy {
    l.strategy.clone().unwrap_or_else(|| MeasurementStrategy::all_x(&l.graph))
}

fn parse_order(s: &str) -> Result<EliminationOrder, String> {
    if s == "default" {
        return Ok(EliminationOrder::Default);
    }
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("bad vertex {t:?} in --order")))
        .collect::<Result<Vec<_>, _>>()
        .map(EliminationOrder::Explicit)
}

fn trace_value(t: &ReductionTrace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "eliminated": s.eliminated.as_slice(),
                "case": s.case.to_string(),
                "fourier": s.fourier_record.as_ref().map(|r| json!({
                    "old_output": r.old_output,
                    "new_output": r.new_output,
                    "connecting": matrix(&r.connecting),
                })),
                "graph": graph_value(&s.graph_after),
            })
        })
        .collect();
    json!({ "initial": graph_value(&t.initial), "steps": steps })
}

enum Outcome {
    Ok(String),
    Fail(String),
}

fn execute(cli: &Cli) -> Result<Outcome, String> {
    let e = |err: Error| err.to_string();
    match &cli.command {
        Command::Validate { file } => {
            let l = load(file)?;
            let g = &l.graph;
            let adm = g.validate_admissible();
            let x_basic = l.strategy.as_ref().map(|s| strategy_to_x_graph(g, s).is_ok());
            let report = json!({
                "d": g.modulus(),
                "vertices": g.len(),
                "inputs": g.inputs().as_slice(),
                "outputs": g.outputs().as_slice(),
                "measuring": g.measuring().as_slice(),
                "auxiliaries": g.auxiliaries().as_slice(),
                "syndromes": g.syndromes().as_slice(),
                "edges": g.edge_count(),
                "basic": g.is_basic(),
                "admissible": { "g1": adm.g1, "g2": adm.g2, "g3": adm.g3 },
                "strategy_basic": x_basic,
            });
            if cli.json {
                return Ok(Outcome::Ok(pretty(&report)));
            }
            let mut s = format!(
                "ok: d={} |V|={} |I|={} |J|={} |K|={} edges={}\nbasic: {}\nadmissible: {} (G1 {} G2 {} G3 {})\n",
                g.modulus(),
                g.len(),
                g.inputs().len(),
                g.outputs().len(),
                g.measuring().len(),
                g.edge_count(),
                g.is_basic(),
                adm.admissible(),
                adm.g1,
                adm.g2,
                adm.g3
            );
            if let Some(b) = x_basic {
                s += &format!("strategy graph basic: {b}\n");
            }
            Ok(Outcome::Ok(s))
        }
        Command::Reduce { file, order, emit_trace } => {
            let l = load(file)?;
            let g0 = x_graph(&l).map_err(e)?;
            let t = eliminate_with(&g0, &parse_order(order)?).map_err(e)?;
            let final_doc = GraphDocument::from_graph(&t.final_graph);
            if cli.json {
                let mut v = json!({ "final": graph_value(&t.final_graph) });
                if *emit_trace {
                    v["trace"] = trace_value(&t);
                }
                return Ok(Outcome::Ok(pretty(&v)));
            }
            let mut s = String::new();
            if *emit_trace {
                for (n, st) in t.steps.iter().enumerate() {
                    s += &format!("step {}: remove {} (case {})", n + 1, st.eliminated, st.case);
                    if let Some(r) = &st.fourier_record {
                        s += &format!(", output {} replaced by {}", r.old_output, r.new_output);
                    }
                    s.push('\n');
                }
            }
            s += &final_doc.to_json();
            Ok(Outcome::Ok(s))
        }
        Command::Compensate { file } => {
            let l = load(file)?;
            let g0 = x_graph(&l).map_err(e)?;
            let theta = compensation_map(&g0).map_err(e)?;
            if cli.json {
                return Ok(Outcome::Ok(pretty(&json!({ "a": matrix(&theta.a), "b": matrix(&theta.b) }))));
            }
            let show = |name: &str, m: &FdMatrix| {
                let mut s = format!("{name}: rows {} cols {}\n", m.rows(), m.cols());
                for r in m.to_rows() {
                    s += &format!("  {}\n", r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
                }
                s
            };
            Ok(Outcome::Ok(show("A", &theta.a) + &show("B", &theta.b)))
        }
        Command::Simulate { file, seed, no_compensate, shots, input_seed } => {
            let l = load(file)?;
            let g = &l.graph;
            let s = strategy_or_x(&l);
            let mut rng = ChaCha8Rng::seed_from_u64(*input_seed);
            let input = StateVector::random(g.inputs(), g.modulus(), &mut rng).map_err(e)?;
            let want = standard_output(g, &s, &input).map_err(e)?;
            let mut records = Vec::new();
            let mut text = String::new();
            let mut min_fid = f64::INFINITY;
            for k in 0..*shots {
                let r = run(g, &s, &input, seed.wrapping_add(k), !no_compensate).map_err(e)?;
                let fid = r.output_state.fidelity(&want).map_err(e)?;
                min_fid = min_fid.min(fid);
                let by: Vec<Value> = r.byproducts.iter().map(|w| json!({ "p": vector(&w.p), "q": vector(&w.q) })).collect();
                text += &format!(
                    "seed {}: p^I={:?} q^L={:?} fidelity to standard output {:.12}\n",
                    r.seed,
                    r.input_outcome.entries(),
                    r.syndrome_outcome.entries(),
                    fid
                );
                records.push(json!({
                    "seed": r.seed,
                    "input_outcome": vector(&r.input_outcome),
                    "syndrome_outcome": vector(&r.syndrome_outcome),
                    "x_outcome": vector(&r.x_outcome),
                    "byproducts": by,
                    "fidelity": fid,
                }));
            }
            if cli.json {
                let v = json!({ "compensate": !no_compensate, "shots": records, "min_fidelity": min_fid });
                return Ok(Outcome::Ok(pretty(&v)));
            }
            Ok(Outcome::Ok(text + &format!("min fidelity {min_fid:.12}\n")))
        }
        Command::Verify { file, tol } => {
            let l = load(file)?;
            let g = &l.graph;
            let mut checks: Vec<(String, f64)> = Vec::new();
            if let Some(s) = &l.strategy {
                let xg = strategy_to_x_graph(g, s).map_err(e)?;
                let lam = &xg.measurement_graph;
                let mut worst: f64 = 0.0;
                for p in FdVector::enumerate(&g.inputs(), g.modulus()) {
                    for q in FdVector::enumerate(&lam.syndromes(), g.modulus()) {
                        worst = worst.max(x_measure_deviation(g, lam, &p, &q).map_err(e)?);
                    }
                }
                checks.push(("graph measurement as x-measurement".into(), worst));
            }
            let g0 = x_graph(&l).map_err(e)?;
            if !g0.measuring().is_empty() || !g0.inputs().is_empty() {
                let c = check_compensation(&g0).map_err(e)?;
                checks.push((format!("compensation over {} outcomes", c.outcomes), c.deviation));
            }
            let t = eliminate_with(&g0, &EliminationOrder::Default).map_err(e)?;
            let rep = verify_reduction(&t).map_err(e)?;
            for c in rep.steps.iter().chain([&rep.end_to_end]) {
                checks.push((format!("reduction {}", c.label), c.deviation));
            }
            if !g.syndromes().is_empty() || !g.auxiliaries().is_empty() {
                let r = check_stabilizer_decomposition(g).map_err(e)?;
                checks.push(("stabilizer decomposition".into(), r.max_deviation()));
            }
            let max = checks.iter().map(|c| c.1).fold(0.0, f64::max);
            let pass = max <= *tol;
            let out = if cli.json {
                let list: Vec<Value> = checks
                    .iter()
                    .map(|(n, d)| json!({ "check": n, "deviation": d, "pass": *d <= *tol }))
                    .collect();
                pretty(&json!({ "checks": list, "max_deviation": max, "tolerance": tol, "pass": pass }))
            } else {
                let mut s = String::new();
                for (n, d) in &checks {
                    s += &format!("{} {n}: {d:.3e}\n", if *d <= *tol { "PASS" } else { "FAIL" });
                }
                s + &format!("max deviation {max:.3e} (tolerance {tol:.0e})\n")
            };
            Ok(if pass { Outcome::Ok(out) } else { Outcome::Fail(out) })
        }
        Command::Persistency { file, budget } => {
            let l = load(file)?;
            let w = persistency_search(&l.graph, *budget).map_err(e)?;
            if cli.json {
                let v = match &w {
                    Some(w) => json!({
                        "bound": w.bound(),
                        "measurements": w.measurements.iter().map(|(v, b)| json!({ "vertex": v, "basis": b.tag() })).collect::<Vec<_>>(),
                        "final": graph_value(&w.final_graph),
                    }),
                    None => json!({ "bound": null, "budget": budget }),
                };
                return Ok(Outcome::Ok(pretty(&v)));
            }
            Ok(Outcome::Ok(match w {
                Some(w) => {
                    let seq: Vec<String> = w.measurements.iter().map(|(v, b)| format!("{}@{v}", b.tag())).collect();
                    format!("persistency <= {} ({})\n", w.bound(), if seq.is_empty() { "already a product state".into() } else { seq.join(", ") })
                }
                None => format!("no product state within {budget} measurements\n"),
            }))
        }
        Command::ExportDot { file } => {
            Ok(Outcome::Ok(export_dot(&load(file)?.graph)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Outcome::Ok(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fail(s)) => {
            print!("{s}");
            ExitCode::from(1)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
