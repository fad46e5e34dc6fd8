//! `gsx` — decide and refute LU/LC equivalence of stabilizer graph states
//! from the command line.

mod db;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsx_core::graph::to_graph6;
use gsx_core::invariants::{
    sampled_false_coincidence, table_row, CompareMode, CompareVerdict, InvariantKind,
};
use gsx_core::lc::{
    canonical_orbit_capped, class_equivalent_capped, lc_equivalent_capped, lc_orbit_capped,
    PartitionMode, DEFAULT_ORBIT_CAP,
};
use gsx_core::meta::{
    build_metagraph, condensable, condense_all, graph_dot, metagraph_dot,
    metagraph_stabilizer, CondensationRule,
};
use gsx_core::stab::{
    entanglement_entropy, lu_inequivalence_scan, marginal_dimension, marginal_rank,
    reduced_stabilizer, LuVerdict,
};
use gsx_core::NodeSet;
use input::{parse_set, resolve_graph};
use serde_json::json;
use std::process::ExitCode;
use std::time::Instant;

/// Exit codes for `compare` (scripting interface).
const EXIT_LC_EQUIVALENT: u8 = 10;
const EXIT_LU_INEQUIVALENT: u8 = 11;
const EXIT_INCONCLUSIVE: u8 = 12;

#[derive(Parser)]
#[command(name = "gsx", version, about = "Graph-state equivalence toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Labeled,
    Unlabeled,
}

impl From<Mode> for PartitionMode {
    fn from(m: Mode) -> PartitionMode {
        match m {
            Mode::Labeled => PartitionMode::Labeled,
            Mode::Unlabeled => PartitionMode::Unlabeled,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Invariant {
    /// rank tensor T_k (labeled orbits)
    #[value(name = "T")]
    T,
    /// rank list l_k (entanglement classes)
    L,
    /// eigenvalue spectrum/product t_k (entanglement classes)
    #[value(name = "t-eig")]
    TEig,
}

#[derive(Args)]
struct GraphArg {
    /// graph6 string, @file (graph6 or 1-based edge list), or fixture
    /// star_n | path_n | cycle_n | complete_n
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand)]
enum Command {
    /// Marginal dimension, rank, and entropy of one node set
    Dm {
        #[command(flatten)]
        graph: GraphArg,
        /// 1-based node list, e.g. 1,3,4
        #[arg(long)]
        set: String,
        /// list the reduced-stabilizer elements
        #[arg(long)]
        elements: bool,
        #[arg(long)]
        json: bool,
    },
    /// Staged LU/LC equivalence decision for a pair of graphs
    Compare {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        graph2: String,
        #[arg(long, value_enum, default_value_t = Mode::Labeled)]
        mode: Mode,
        /// largest marginal size for the invariant stage
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// LC-orbit search budget (graphs visited)
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        budget: usize,
        /// run the invariant stage before the orbit search (batch ordering)
        #[arg(long)]
        batch: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compute or ingest an orbit/class representative database
    Classes {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Unlabeled)]
        mode: Mode,
        /// ingest representatives from a graph6 file instead of computing
        #[arg(long)]
        source: Option<String>,
        /// persist the database (graph6 + JSON sidecar) at this path
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the r/p figure-of-merit table rows
    Tables {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        invariant: Invariant,
        /// largest marginal size (default ⌊n/2⌋)
        #[arg(long)]
        kmax: Option<usize>,
        /// Monte-Carlo sample count (pairs) for n > 7
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Condense node sets and report which rule (if any) certifies the move
    Condense {
        #[command(flatten)]
        graph: GraphArg,
        /// 1-based node list; repeat for several disjoint sets
        #[arg(long, required = true)]
        set: Vec<String>,
        /// refuse sets not certified by a proven rule
        #[arg(long)]
        strict: bool,
        /// write the condensed graph as DOT
        #[arg(long)]
        dot: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the LC orbit (labeled) or class orbit (canonical forms)
    Orbit {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = Mode::Labeled)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        budget: usize,
        /// print only the size
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Metagraph of a marginal: connected type-2 nodes and S_M
    Metagraph {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        set: String,
        /// write the metagraph as DOT
        #[arg(long)]
        dot: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, String> {
    match cmd {
        Command::Dm { graph, set, elements, json } => cmd_dm(&graph.graph, &set, elements, json),
        Command::Compare { graph, graph2, mode, k, budget, batch, json } => {
            cmd_compare(&graph.graph, &graph2, mode, k, budget, batch, json)
        }
        Command::Classes { n, mode, source, out, json } => {
            db::cmd_classes(n, mode.into(), source.as_deref(), out.as_deref(), json)
        }
        Command::Tables { n, invariant, kmax, samples, seed, json } => {
            cmd_tables(n, invariant, kmax, samples, seed, json)
        }
        Command::Condense { graph, set, strict, dot, json } => {
            cmd_condense(&graph.graph, &set, strict, dot.as_deref(), json)
        }
        Command::Orbit { graph, mode, budget, count, json } => {
            cmd_orbit(&graph.graph, mode, budget, count, json)
        }
        Command::Metagraph { graph, set, dot, json } => {
            cmd_metagraph(&graph.graph, &set, dot.as_deref(), json)
        }
    }
}

fn cmd_dm(graph: &str, set: &str, elements: bool, json: bool) -> Result<ExitCode, String> {
    let g = resolve_graph(graph)?;
    let m = parse_set(set, g.n())?;
    let d = marginal_dimension(&g, m).map_err(|e| e.to_string())?;
    let rank = marginal_rank(&g, m).map_err(|e| e.to_string())?;
    let proper = m != NodeSet::full(g.n());
    let entropy = proper.then(|| entanglement_entropy(&g, m).unwrap());
    let elems = if elements {
        Some(reduced_stabilizer(&g, m).map_err(|e| e.to_string())?.elements)
    } else {
        None
    };
    if json {
        println!(
            "{}",
            json!({
                "n": g.n(),
                "set": m.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "d": d,
                "rank": rank,
                "entropy": entropy,
                "elements": elems.as_ref().map(|es| {
                    es.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                }),
            })
        );
    } else {
        println!("d_{m} = {d}");
        println!("rank(rho_M) = {rank}");
        if let Some(e) = entropy {
            println!("E_M = {e}");
        }
        if let Some(es) = elems {
            println!("S_M ({} elements):", es.len());
            for p in es {
                println!("  {p}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct Stage {
    name: &'static str,
    millis: u128,
    outcome: String,
}

fn cmd_compare(
    graph: &str,
    graph2: &str,
    mode: Mode,
    kmax: usize,
    budget: usize,
    batch: bool,
    json: bool,
) -> Result<ExitCode, String> {
    let g1 = resolve_graph(graph)?;
    let g2 = resolve_graph(graph2)?;
    if g1.n() != g2.n() {
        return Err("graphs must have the same node count".into());
    }
    let k_hi = kmax.clamp(1, g1.n().saturating_sub(1).max(1));
    let mut stages: Vec<Stage> = Vec::new();
    let mut status = "Inconclusive";
    let mut witness: Option<String> = None;

    let orbit_stage = |stages: &mut Vec<Stage>| -> Result<Option<bool>, String> {
        let t = Instant::now();
        let result = match mode {
            Mode::Labeled => lc_equivalent_capped(&g1, &g2, budget),
            Mode::Unlabeled => class_equivalent_capped(&g1, &g2, budget),
        };
        let outcome = match &result {
            Ok(true) => "equivalent".to_string(),
            Ok(false) => "inequivalent".to_string(),
            Err(e) => format!("budget exhausted: {e}"),
        };
        stages.push(Stage { name: "lc-orbit", millis: t.elapsed().as_millis(), outcome });
        Ok(result.ok())
    };
    let invariant_stage = |stages: &mut Vec<Stage>| -> Result<Option<String>, String> {
        let t = Instant::now();
        let cmode = match mode {
            Mode::Labeled => CompareMode::Labeled,
            Mode::Unlabeled => CompareMode::Unlabeled,
        };
        let verdict = gsx_core::invariants::compare(&g1, &g2, cmode, 1..=k_hi)
            .map_err(|e| e.to_string())?;
        let (outcome, w) = match verdict {
            CompareVerdict::Inequivalent { k, witness } => {
                let w = format!(
                    "invariants differ at k={k}, witness {:?}",
                    witness.iter().map(|v| v + 1).collect::<Vec<_>>()
                );
                (w.clone(), Some(w))
            }
            CompareVerdict::Inconclusive => ("signatures match".to_string(), None),
        };
        stages.push(Stage { name: "invariants", millis: t.elapsed().as_millis(), outcome });
        Ok(w)
    };

    let stage_order: [&str; 2] = if batch {
        ["invariants", "lc-orbit"]
    } else {
        ["lc-orbit", "invariants"]
    };
    'decide: {
        for name in stage_order {
            match name {
                "lc-orbit" => {
                    if let Some(eq) = orbit_stage(&mut stages)? {
                        if eq {
                            status = "LCEquivalent";
                            break 'decide;
                        }
                        // a completed orbit search that fails is itself decisive
                        // for LC, but says nothing about LU; keep going
                    }
                }
                "invariants" => {
                    if let Some(w) = invariant_stage(&mut stages)? {
                        status = "LUInequivalent";
                        witness = Some(w);
                        break 'decide;
                    }
                }
                _ => unreachable!(),
            }
        }
        if mode == Mode::Labeled {
            let t = Instant::now();
            let verdict = lu_inequivalence_scan(&g1, &g2, k_hi.min(8))
                .map_err(|e| e.to_string())?;
            let outcome = match &verdict {
                LuVerdict::Inequivalent(w) => format!("contradiction: {w}"),
                LuVerdict::Inconclusive => "no contradiction".to_string(),
            };
            stages.push(Stage { name: "lu-scan", millis: t.elapsed().as_millis(), outcome });
            if let LuVerdict::Inequivalent(w) = verdict {
                status = "LUInequivalent";
                witness = Some(w.to_string());
            }
        }
    }

    let deciding = stages
        .iter()
        .rfind(|_| status != "Inconclusive")
        .map(|s| s.name)
        .unwrap_or("none");
    if json {
        println!(
            "{}",
            json!({
                "status": status,
                "stage": if status == "Inconclusive" { "none" } else { deciding },
                "witness": witness,
                "stages": stages.iter().map(|s| json!({
                    "name": s.name, "millis": s.millis, "outcome": s.outcome,
                })).collect::<Vec<_>>(),
            })
        );
    } else {
        for s in &stages {
            println!("stage {:<10} {:>6} ms  {}", s.name, s.millis, s.outcome);
        }
        println!("verdict: {status}");
        if let Some(w) = &witness {
            println!("witness: {w}");
        }
    }
    Ok(ExitCode::from(match status {
        "LCEquivalent" => EXIT_LC_EQUIVALENT,
        "LUInequivalent" => EXIT_LU_INEQUIVALENT,
        _ => EXIT_INCONCLUSIVE,
    }))
}

fn cmd_tables(
    n: usize,
    invariant: Invariant,
    kmax: Option<usize>,
    samples: Option<usize>,
    seed: u64,
    json: bool,
) -> Result<ExitCode, String> {
    let (kind, mode) = match invariant {
        Invariant::T => (InvariantKind::Tensor, PartitionMode::Labeled),
        Invariant::L => (InvariantKind::List, PartitionMode::Unlabeled),
        Invariant::TEig => (InvariantKind::Eigen, PartitionMode::Unlabeled),
    };
    let k_hi = kmax.unwrap_or(n / 2).max(2);
    let ks: Vec<usize> = (2..=k_hi).collect();
    let inv_name = match invariant {
        Invariant::T => "T",
        Invariant::L => "l",
        Invariant::TEig => "t",
    };
    if n <= 7 {
        let row = table_row(n, mode, kind, &ks).map_err(|e| e.to_string())?;
        let (orbits, classes) = match mode {
            PartitionMode::Labeled => (row.aggregate.groups, 0),
            PartitionMode::Unlabeled => (0, row.aggregate.groups),
        };
        if json {
            let mut rows: Vec<serde_json::Value> = Vec::new();
            for (k, m) in &row.per_k {
                rows.push(json!({
                    "n": n, "k": k, "invariant": inv_name,
                    "r": m.r, "p": m.p,
                    "counts": {"orbits": orbits, "classes": classes,
                               "distinct_values": m.distinct},
                }));
            }
            rows.push(json!({
                "n": n, "k": null, "krange": format!("2..{k_hi}"), "invariant": inv_name,
                "r": row.aggregate.r, "p": row.aggregate.p,
                "counts": {"orbits": orbits, "classes": classes,
                           "distinct_values": row.aggregate.distinct},
            }));
            println!("{}", serde_json::Value::Array(rows));
        } else {
            println!("n={n} invariant={inv_name} ({} groups)", row.aggregate.groups);
            for (k, m) in &row.per_k {
                println!("  k={k}: r={:.2} p={:.2} (distinct {})", m.r, m.p, m.distinct);
            }
            println!(
                "  aggregate 2..{k_hi}: R={:.2} P={:.2}",
                row.aggregate.r, row.aggregate.p
            );
        }
    } else {
        let samples = samples
            .ok_or("n > 7 needs --samples (Monte-Carlo false-coincidence estimate)")?;
        let s = sampled_false_coincidence(n, kind, &ks, samples, seed, None)
            .map_err(|e| e.to_string())?;
        if json {
            println!(
                "{}",
                json!([{
                    "n": n, "k": ks, "invariant": inv_name,
                    "r": null, "p": s.p, "stderr": s.stderr, "seed": s.seed,
                    "counts": {"orbits": 0, "classes": 0, "distinct_values": 0},
                    "unresolved": s.unresolved,
                }])
            );
        } else {
            println!(
                "n={n} invariant={inv_name} sampled p={:.4} (stderr {:.4}, {} pairs, seed {}, {} unresolved)",
                s.p, s.stderr, s.samples, s.seed, s.unresolved
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_condense(
    graph: &str,
    sets: &[String],
    strict: bool,
    dot: Option<&str>,
    json: bool,
) -> Result<ExitCode, String> {
    let g = resolve_graph(graph)?;
    let sets: Vec<NodeSet> = sets
        .iter()
        .map(|s| parse_set(s, g.n()))
        .collect::<Result<_, _>>()?;
    let mut rules = Vec::new();
    for &c in &sets {
        let rule = condensable(&g, c).map_err(|e| e.to_string())?;
        if strict && rule == CondensationRule::None {
            return Err(format!("--strict: set {c} is not certified by any rule"));
        }
        rules.push((c, rule));
    }
    let cond = condense_all(&g, &sets).map_err(|e| e.to_string())?;
    let g6 = to_graph6(&cond.graph);
    if let Some(path) = dot {
        std::fs::write(path, graph_dot(&cond.graph)).map_err(|e| e.to_string())?;
    }
    if json {
        println!(
            "{}",
            json!({
                "graph6": g6,
                "map": cond.map.iter().map(|&v| v + 1).collect::<Vec<_>>(),
                "rules": rules.iter().map(|(c, r)| json!({
                    "set": c.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    "rule": format!("{r:?}"),
                    "experimental": r.experimental(),
                })).collect::<Vec<_>>(),
            })
        );
    } else {
        for (c, r) in &rules {
            let tag = if r.experimental() { " (experimental)" } else { "" };
            println!("set {c}: rule {r:?}{tag}");
        }
        println!("condensed: {g6}");
        let map: Vec<String> =
            cond.map.iter().enumerate().map(|(o, &v)| format!("{}->{}", o + 1, v + 1)).collect();
        println!("index map: {}", map.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_orbit(
    graph: &str,
    mode: Mode,
    budget: usize,
    count: bool,
    json: bool,
) -> Result<ExitCode, String> {
    let g = resolve_graph(graph)?;
    let members: Vec<String> = match mode {
        Mode::Labeled => lc_orbit_capped(&g, budget)
            .map_err(|e| e.to_string())?
            .iter()
            .map(to_graph6)
            .collect(),
        Mode::Unlabeled => canonical_orbit_capped(&g, budget)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| to_graph6(&c.graph))
            .collect(),
    };
    if json {
        println!(
            "{}",
            json!({"size": members.len(), "graphs": if count { None } else { Some(&members) }})
        );
    } else {
        if !count {
            for m in &members {
                println!("{m}");
            }
        }
        println!("orbit size: {}", members.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_metagraph(
    graph: &str,
    set: &str,
    dot: Option<&str>,
    json: bool,
) -> Result<ExitCode, String> {
    let g = resolve_graph(graph)?;
    let m = parse_set(set, g.n())?;
    let mg = build_metagraph(&g, m).map_err(|e| e.to_string())?;
    let rs = metagraph_stabilizer(&mg).map_err(|e| e.to_string())?;
    if let Some(path) = dot {
        std::fs::write(path, metagraph_dot(&mg)).map_err(|e| e.to_string())?;
    }
    let connected: Vec<String> = mg
        .type2
        .iter()
        .filter(|(_, c)| *c)
        .map(|(w, _)| w.to_string())
        .collect();
    if json {
        println!(
            "{}",
            json!({
                "set": m.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "connected_type2": connected,
                "d": rs.dim,
                "elements": rs.elements.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            })
        );
    } else {
        println!("metagraph of {m}:");
        println!("  connected type-2 nodes: {}", if connected.is_empty() {
            "none".to_string()
        } else {
            connected.join(" ")
        });
        println!("  d_{m} = {}", rs.dim);
        for p in &rs.elements {
            println!("  {p}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
