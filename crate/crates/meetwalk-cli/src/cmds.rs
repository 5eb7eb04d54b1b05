//! Subcommand implementations. Every command embeds a config echo in its
//! output so results are self-describing; JSON mode carries full
//! precision, human mode renders six significant digits.

use meetwalk_core::analysis::{classify_tuple_with, decompose, decompose_rate_matrix};
use meetwalk_core::ctmc::ctmc_group_meeting_times_with;
use meetwalk_core::dtmc::{
    group_meeting_times_with, hitting_times, mean_group_meeting_time, meeting_times, SolveOptions,
};
use meetwalk_core::error::{Error, Result};
use meetwalk_core::graph::{
    equal_neighbor_matrix, generate, rate_matrix_from_digraph, GraphFamily,
};
use meetwalk_core::io;
use meetwalk_core::product::{ctmc_finite_starts, CtmcProduct, MeetingSet};
use meetwalk_core::report::{decomposition_report, meeting_report, pair_table_csv, TimeUnit};
use meetwalk_core::result::{MeetingTimes, MeetingValue};
use meetwalk_core::sim::{simulate_ctmc, simulate_dtmc};
use serde_json::{json, Value};

use crate::inputs::{g6, parse_start, resolve_budget, resolve_chains, resolve_graph, Chains};
use crate::{AnalyzeArgs, GenArgs, MeetArgs, SimulateArgs, Table1Args};

fn emit(doc: &Value, json_mode: bool, human: impl FnOnce(&Value)) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(doc).expect("serializable")
        );
    } else {
        println!("# config: {}", doc["config"]);
        human(doc);
    }
}

pub fn gen(args: GenArgs) -> Result<()> {
    let (graph, graph_echo) = resolve_graph(&args.graph)?;
    let config = json!({
        "command": "gen",
        "graph": graph_echo,
        "self_loops": args.self_loops,
        "out": args.out,
        "transition_out": args.transition_out,
        "rates_out": args.rates_out,
    });
    println!("# config: {config}");
    io::save_graph(&graph, &args.out)?;
    if let Some(path) = &args.transition_out {
        let p = equal_neighbor_matrix(&graph, args.self_loops)?;
        if path.ends_with(".csv") {
            std::fs::write(path, io::dense_to_csv(&p.to_dense()))?;
        } else {
            io::save_transition_json(&p, path)?;
        }
    }
    if let Some(path) = &args.rates_out {
        let q = rate_matrix_from_digraph(&graph);
        if path.ends_with(".csv") {
            std::fs::write(path, io::dense_to_csv(&q.to_dense()))?;
        } else {
            io::save_rate_json(&q, path)?;
        }
    }
    println!(
        "wrote {} ({} nodes, {} arcs){}{}",
        args.out,
        graph.n(),
        graph.edges().len(),
        args.transition_out
            .as_deref()
            .map(|p| format!(", transition matrix -> {p}"))
            .unwrap_or_default(),
        args.rates_out
            .as_deref()
            .map(|p| format!(", rate matrix -> {p}"))
            .unwrap_or_default(),
    );
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    let budget = resolve_budget(args.chain.budget)?;
    let (chains, chain_echo) = resolve_chains(&args.chain)?;
    let (l, m) = chains.counts();
    let config = json!({
        "command": "analyze",
        "chain": chain_echo,
        "L": l,
        "M": m,
        "state_budget": budget.0,
    });

    let doc = match &chains {
        Chains::Discrete { pursuers, evaders } => {
            let classification = classify_tuple_with(pursuers, evaders, budget)?;
            json!({
                "config": config,
                "pursuers": pursuers.iter().map(|p| decomposition_report(&decompose(p))).collect::<Vec<_>>(),
                "evaders": evaders.iter().map(|p| decomposition_report(&decompose(p))).collect::<Vec<_>>(),
                "classification": classification,
            })
        }
        Chains::Continuous { pursuers, evaders } => {
            let factors: Vec<&meetwalk_core::graph::RateMatrix> =
                pursuers.iter().chain(evaders).collect();
            let product = CtmcProduct::new(&factors, budget)?;
            let set = MeetingSet::new(pursuers.len(), evaders.len());
            let finite = ctmc_finite_starts(&product, &set);
            let all_finite = finite.iter().all(|&b| b);
            let witness: Option<Vec<usize>> = finite.iter().position(|&b| !b).map(|s| {
                product
                    .space()
                    .unflatten(s)
                    .iter()
                    .map(|&t| t + 1)
                    .collect()
            });
            let mut classification = serde_json::Map::new();
            classification.insert("finite".into(), json!(all_finite));
            if let Some(w) = witness {
                classification.insert("witness".into(), json!(w));
            }
            json!({
                "config": config,
                "pursuers": pursuers.iter().map(|q| decomposition_report(&decompose_rate_matrix(q))).collect::<Vec<_>>(),
                "evaders": evaders.iter().map(|q| decomposition_report(&decompose_rate_matrix(q))).collect::<Vec<_>>(),
                "classification": Value::Object(classification),
            })
        }
    };

    emit(&doc, args.json, |doc| {
        for (role, key) in [("pursuer", "pursuers"), ("evader", "evaders")] {
            for (i, d) in doc[key].as_array().unwrap().iter().enumerate() {
                println!("{role} {}:", i + 1);
                for c in d["classes"].as_array().unwrap() {
                    println!(
                        "  class {} [{}] period {}",
                        c["nodes"],
                        c["kind"].as_str().unwrap(),
                        c["period"]
                    );
                }
            }
        }
        println!("classification: {}", doc["classification"]);
    });
    Ok(())
}

fn compute_meeting(
    chains: &Chains,
    opts: &SolveOptions,
) -> Result<(MeetingTimes, Option<f64>, TimeUnit)> {
    match chains {
        Chains::Discrete { pursuers, evaders } => {
            let result = group_meeting_times_with(pursuers, evaders, opts)?;
            let mean = match mean_group_meeting_time(pursuers, evaders) {
                Ok(v) => Some(v),
                Err(Error::UndefinedMean) => None,
                Err(e) => return Err(e),
            };
            Ok((result, mean, TimeUnit::Discrete))
        }
        Chains::Continuous { pursuers, evaders } => {
            let result = ctmc_group_meeting_times_with(pursuers, evaders, opts)?;
            Ok((result, None, TimeUnit::Continuous))
        }
    }
}

pub fn meet(args: MeetArgs) -> Result<()> {
    let budget = resolve_budget(args.chain.budget)?;
    let (chains, chain_echo) = resolve_chains(&args.chain)?;
    let (l, m) = chains.counts();
    let n = chains.n();
    let opts = SolveOptions {
        budget,
        ..SolveOptions::default()
    };
    let (result, mean, unit) = compute_meeting(&chains, &opts)?;

    let selected: Option<Vec<usize>> = if args.start.is_empty() {
        None
    } else {
        let mut idx = Vec::with_capacity(args.start.len());
        for raw in &args.start {
            let tuple = parse_start(raw, l + m, n)?;
            idx.push(tuple.iter().fold(0, |acc, &t| acc * n + t));
        }
        Some(idx)
    };

    let report = meeting_report(&result, mean, unit, selected.as_deref());
    let config = json!({
        "command": "meet",
        "chain": chain_echo,
        "L": l,
        "M": m,
        "state_budget": budget.0,
    });
    let doc = json!({ "config": config, "result": report });

    if let Some(path) = &args.out {
        std::fs::write(
            path,
            serde_json::to_string_pretty(&doc).expect("serializable"),
        )?;
    }
    if let Some(path) = &args.csv {
        let csv = pair_table_csv(&result).ok_or_else(|| {
            Error::InvalidParameter("--csv needs a two-agent run (L = M = 1)".into())
        })?;
        std::fs::write(path, csv)?;
    }

    emit(&doc, args.json, |doc| {
        let r = &doc["result"];
        for (key, value) in r["values"].as_object().unwrap() {
            let rendered = match value.as_f64() {
                Some(v) => g6(v),
                None => "inf".to_string(),
            };
            println!("({key}) -> {rendered}");
        }
        let max = match r["max"].as_f64() {
            Some(v) => g6(v),
            None => "inf".to_string(),
        };
        println!("max: {max}");
        if let Some(v) = r["mean"].as_f64() {
            println!("mean: {}", g6(v));
        } else {
            println!("mean: undefined");
        }
        println!("residual: {}", g6(r["residual"].as_f64().unwrap_or(0.0)));
        println!("all finite: {}", r["finiteness"]["all_finite"]);
    });
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let (chains, chain_echo) = resolve_chains(&args.chain)?;
    let (l, m) = chains.counts();
    let n = chains.n();
    let start = parse_start(&args.start, l + m, n)?;

    let (estimate, horizon, unit) = match &chains {
        Chains::Discrete { pursuers, evaders } => {
            let horizon = args.horizon.unwrap_or(1e6) as u64;
            let est = simulate_dtmc(pursuers, evaders, &start, args.trials, horizon, args.seed)?;
            (est, horizon as f64, "discrete")
        }
        Chains::Continuous { pursuers, evaders } => {
            let horizon = args.horizon.unwrap_or_else(|| {
                // 1e6 expected-jump equivalents at the mean positive exit
                // rate of the agents.
                let mut total = 0.0;
                let mut count = 0usize;
                for q in pursuers.iter().chain(evaders) {
                    for i in 0..q.n() {
                        let r = q.exit_rate(i);
                        if r > 0.0 {
                            total += r;
                            count += 1;
                        }
                    }
                }
                if count == 0 {
                    0.0
                } else {
                    1e6 / (total / count as f64)
                }
            });
            let est = simulate_ctmc(pursuers, evaders, &start, args.trials, horizon, args.seed)?;
            (est, horizon, "continuous")
        }
    };

    let config = json!({
        "command": "simulate",
        "chain": chain_echo,
        "L": l,
        "M": m,
        "start": start.iter().map(|&t| t + 1).collect::<Vec<_>>(),
        "trials": args.trials,
        "horizon": horizon,
        "seed": args.seed,
        "time_unit": unit,
    });
    let doc = json!({ "config": config, "estimate": estimate });

    emit(&doc, args.json, |doc| {
        let e = &doc["estimate"];
        match e["mean"].as_f64() {
            Some(v) => println!("mean: {}", g6(v)),
            None => println!("mean: undefined (all trials censored)"),
        }
        if let Some(v) = e["std_error"].as_f64() {
            println!("std error: {}", g6(v));
        }
        println!(
            "trials: {}  censored: {}{}",
            e["trials"],
            e["censored"],
            if e["lower_bound_only"].as_bool() == Some(true) {
                "  (lower bound only)"
            } else {
                ""
            }
        );
    });
    Ok(())
}

struct TableRow {
    label: String,
    family: GraphFamily,
    paper_m: Option<f64>,
    paper_h: Option<f64>,
    comparable: bool,
    note: Option<String>,
}

pub fn table1(args: Table1Args) -> Result<()> {
    let mut rows = vec![
        TableRow {
            label: "ring".into(),
            family: GraphFamily::Ring { n: 20 },
            paper_m: Some(83.7),
            paper_h: Some(150.0),
            comparable: true,
            note: None,
        },
        TableRow {
            label: "path".into(),
            family: GraphFamily::Path { n: 20 },
            paper_m: Some(174.8),
            paper_h: Some(551.0),
            comparable: true,
            note: None,
        },
        TableRow {
            label: "star".into(),
            family: GraphFamily::Star { n: 20 },
            paper_m: Some(8.0),
            paper_h: Some(58.0),
            comparable: true,
            note: None,
        },
        TableRow {
            label: format!("lollipop({},{})", args.lollipop_clique, args.lollipop_tail),
            family: GraphFamily::Lollipop {
                clique: args.lollipop_clique,
                tail: args.lollipop_tail,
            },
            paper_m: Some(224.0),
            paper_h: Some(483.8),
            comparable: true,
            note: Some(
                "clique+tail reading; no split of 20 nodes reproduces the published row".into(),
            ),
        },
        TableRow {
            label: "lollipop [barbell 5+10+5]".into(),
            family: GraphFamily::Barbell {
                clique: 5,
                path: 10,
            },
            paper_m: Some(224.0),
            paper_h: Some(483.8),
            comparable: true,
            note: Some(
                "two 5-cliques joined by a 10-node path; reproduces the published row".into(),
            ),
        },
        TableRow {
            label: format!("lattice {}x{}", args.lattice_rows, args.lattice_cols),
            family: GraphFamily::Lattice {
                rows: args.lattice_rows,
                cols: args.lattice_cols,
            },
            paper_m: Some(35.9),
            paper_h: Some(83.7),
            comparable: true,
            note: None,
        },
    ];
    if let Some(radius) = args.rg_dense_radius {
        rows.push(TableRow {
            label: format!("random geometric dense (r={radius})"),
            family: GraphFamily::RandomGeometric {
                n: 20,
                radius,
                seed: args.rg_seed,
            },
            paper_m: Some(22.7),
            paper_h: Some(92.6),
            comparable: false,
            note: Some("not comparable to paper averages (100 instances, unstated radius)".into()),
        });
    }
    if let Some(radius) = args.rg_sparse_radius {
        rows.push(TableRow {
            label: format!("random geometric sparse (r={radius})"),
            family: GraphFamily::RandomGeometric {
                n: 20,
                radius,
                seed: args.rg_seed,
            },
            paper_m: Some(77.0),
            paper_h: Some(319.6),
            comparable: false,
            note: Some("not comparable to paper averages (100 instances, unstated radius)".into()),
        });
    }

    let mut out_rows = Vec::new();
    for row in &rows {
        let g = generate(&row.family)?;
        let p = equal_neighbor_matrix(&g, true)?;
        let meeting = meeting_times(&p, &p)?;
        let m_max = meeting.max_value();
        let h_max = match hitting_times(&p) {
            Ok(h) => Some(h.max_pairwise()),
            Err(Error::Reducible) => None,
            Err(e) => return Err(e),
        };
        let m_json = match m_max {
            MeetingValue::Finite(v) => json!(v),
            MeetingValue::Infinite => json!("inf"),
        };
        let m_diff = match (m_max, row.paper_m, row.comparable) {
            (MeetingValue::Finite(v), Some(p), true) => json!((v - p).abs()),
            _ => Value::Null,
        };
        let h_diff = match (h_max, row.paper_h, row.comparable) {
            (Some(v), Some(p), true) => json!((v - p).abs()),
            _ => Value::Null,
        };
        out_rows.push(json!({
            "graph": row.label,
            "n": g.n(),
            "m_max": m_json,
            "paper_m_max": row.paper_m,
            "m_diff": m_diff,
            "h_max": h_max,
            "paper_h_max": row.paper_h,
            "h_diff": h_diff,
            "comparable": row.comparable,
            "note": row.note,
        }));
    }

    let config = json!({
        "command": "table1",
        "construction": "equal-neighbor with self-loops, identical pursuer and evader",
        "n": 20,
        "lollipop": {"clique": args.lollipop_clique, "tail": args.lollipop_tail},
        "lattice": {"rows": args.lattice_rows, "cols": args.lattice_cols},
        "rg_seed": args.rg_seed,
    });
    let doc = json!({ "config": config, "rows": out_rows });

    emit(&doc, args.json, |doc| {
        println!(
            "{:<34} {:>10} {:>8} {:>8} {:>10} {:>8} {:>8}",
            "graph", "M_max", "paper", "|diff|", "H_max", "paper", "|diff|"
        );
        for r in doc["rows"].as_array().unwrap() {
            let fmt = |v: &Value| match v.as_f64() {
                Some(x) => g6(x),
                None => v.as_str().unwrap_or("-").to_string(),
            };
            println!(
                "{:<34} {:>10} {:>8} {:>8} {:>10} {:>8} {:>8}",
                r["graph"].as_str().unwrap(),
                fmt(&r["m_max"]),
                fmt(&r["paper_m_max"]),
                fmt(&r["m_diff"]),
                fmt(&r["h_max"]),
                fmt(&r["paper_h_max"]),
                fmt(&r["h_diff"]),
            );
            if let Some(note) = r["note"].as_str() {
                println!("{:<34}   note: {note}", "");
            }
        }
    });
    Ok(())
}
