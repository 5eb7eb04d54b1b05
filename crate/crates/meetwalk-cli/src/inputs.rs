//! Resolution of CLI inputs into chains, plus the config echo every
//! command embeds in its output.

use meetwalk_core::error::{Error, Result};
use meetwalk_core::graph::{
    equal_neighbor_matrix, generate, rate_matrix_from_digraph, Digraph, GraphFamily, RateMatrix,
    TransitionMatrix,
};
use meetwalk_core::io;
use meetwalk_core::product::{StateBudget, DEFAULT_STATE_BUDGET};
use serde_json::{json, Value};

use crate::{ChainArgs, GraphArgs};

pub fn parse_family(args: &GraphArgs) -> Result<GraphFamily> {
    let need = |v: Option<usize>, what: &str, fam: &str| {
        v.ok_or_else(|| Error::InvalidParameter(format!("{fam} requires --{what}")))
    };
    let name = args
        .family
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("missing --family or --graph".into()))?;
    Ok(match name {
        "ring" => GraphFamily::Ring {
            n: need(args.n, "n", "ring")?,
        },
        "path" => GraphFamily::Path {
            n: need(args.n, "n", "path")?,
        },
        "star" => GraphFamily::Star {
            n: need(args.n, "n", "star")?,
        },
        "lollipop" => GraphFamily::Lollipop {
            clique: need(args.clique, "clique", "lollipop")?,
            tail: need(args.tail, "tail", "lollipop")?,
        },
        "barbell" => GraphFamily::Barbell {
            clique: need(args.clique, "clique", "barbell")?,
            path: need(args.tail, "tail", "barbell")?,
        },
        "lattice" => GraphFamily::Lattice {
            rows: need(args.rows, "rows", "lattice")?,
            cols: need(args.cols, "cols", "lattice")?,
        },
        "random-geometric" | "random_geometric" => GraphFamily::RandomGeometric {
            n: need(args.n, "n", "random-geometric")?,
            radius: args.radius.ok_or_else(|| {
                Error::InvalidParameter("random-geometric requires --radius".into())
            })?,
            seed: args.graph_seed,
        },
        other => return Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
    })
}

pub fn resolve_graph(args: &GraphArgs) -> Result<(Digraph, Value)> {
    if let Some(path) = &args.graph {
        let g = io::load_graph(path)?;
        Ok((g, json!({ "path": path })))
    } else {
        let family = parse_family(args)?;
        let g = generate(&family)?;
        Ok((g, family_echo(&family)))
    }
}

pub fn family_echo(family: &GraphFamily) -> Value {
    match *family {
        GraphFamily::Ring { n } => json!({"family": "ring", "n": n}),
        GraphFamily::Path { n } => json!({"family": "path", "n": n}),
        GraphFamily::Star { n } => json!({"family": "star", "n": n}),
        GraphFamily::Lollipop { clique, tail } => {
            json!({"family": "lollipop", "clique": clique, "tail": tail})
        }
        GraphFamily::Barbell { clique, path } => {
            json!({"family": "barbell", "clique": clique, "path": path})
        }
        GraphFamily::Lattice { rows, cols } => {
            json!({"family": "lattice", "rows": rows, "cols": cols})
        }
        GraphFamily::RandomGeometric { n, radius, seed } => {
            json!({"family": "random_geometric", "n": n, "radius": radius, "seed": seed})
        }
    }
}

/// The resolved agent chains for one run.
pub enum Chains {
    Discrete {
        pursuers: Vec<TransitionMatrix>,
        evaders: Vec<TransitionMatrix>,
    },
    Continuous {
        pursuers: Vec<RateMatrix>,
        evaders: Vec<RateMatrix>,
    },
}

impl Chains {
    pub fn counts(&self) -> (usize, usize) {
        match self {
            Chains::Discrete { pursuers, evaders } => (pursuers.len(), evaders.len()),
            Chains::Continuous { pursuers, evaders } => (pursuers.len(), evaders.len()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Chains::Discrete { pursuers, .. } => pursuers[0].n(),
            Chains::Continuous { pursuers, .. } => pursuers[0].n(),
        }
    }
}

/// Build the chains named by the arguments and a config echo describing
/// them.
pub fn resolve_chains(args: &ChainArgs) -> Result<(Chains, Value)> {
    let explicit = !args.pursuer_matrix.is_empty() || !args.evader_matrix.is_empty();
    if explicit {
        if args.pursuer_matrix.is_empty() || args.evader_matrix.is_empty() {
            return Err(Error::InvalidParameter(
                "explicit matrices need at least one --pursuer-matrix and one --evader-matrix"
                    .into(),
            ));
        }
        let echo = json!({
            "kind": "matrix_files",
            "ctmc": args.ctmc,
            "pursuers": args.pursuer_matrix,
            "evaders": args.evader_matrix,
        });
        let chains = if args.ctmc {
            Chains::Continuous {
                pursuers: args
                    .pursuer_matrix
                    .iter()
                    .map(io::load_rate)
                    .collect::<Result<_>>()?,
                evaders: args
                    .evader_matrix
                    .iter()
                    .map(io::load_rate)
                    .collect::<Result<_>>()?,
            }
        } else {
            Chains::Discrete {
                pursuers: args
                    .pursuer_matrix
                    .iter()
                    .map(io::load_transition)
                    .collect::<Result<_>>()?,
                evaders: args
                    .evader_matrix
                    .iter()
                    .map(io::load_transition)
                    .collect::<Result<_>>()?,
            }
        };
        return Ok((chains, echo));
    }

    if args.pursuers == 0 || args.evaders == 0 {
        return Err(Error::InvalidParameter("need L >= 1 and M >= 1".into()));
    }
    let (graph, graph_echo) = resolve_graph(&args.graph)?;
    let echo = json!({
        "kind": if args.ctmc { "rate_from_graph" } else { "equal_neighbor" },
        "graph": graph_echo,
        "self_loops": args.self_loops,
        "ctmc": args.ctmc,
    });
    let chains = if args.ctmc {
        let q = rate_matrix_from_digraph(&graph);
        Chains::Continuous {
            pursuers: vec![q.clone(); args.pursuers],
            evaders: vec![q; args.evaders],
        }
    } else {
        let p = equal_neighbor_matrix(&graph, args.self_loops)?;
        Chains::Discrete {
            pursuers: vec![p.clone(); args.pursuers],
            evaders: vec![p; args.evaders],
        }
    };
    Ok((chains, echo))
}

/// Budget resolution order: --budget flag, MEETWALK_STATE_BUDGET, default.
pub fn resolve_budget(flag: Option<usize>) -> Result<StateBudget> {
    if let Some(b) = flag {
        return Ok(StateBudget(b));
    }
    match std::env::var("MEETWALK_STATE_BUDGET") {
        Ok(raw) => raw.parse::<usize>().map(StateBudget).map_err(|_| {
            Error::InvalidParameter(format!(
                "MEETWALK_STATE_BUDGET={raw:?} is not a state count"
            ))
        }),
        Err(_) => Ok(StateBudget(DEFAULT_STATE_BUDGET)),
    }
}

/// Parse a 1-based start tuple like "3,7" into 0-based node indices.
pub fn parse_start(raw: &str, expected_len: usize, n: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != expected_len {
        return Err(Error::InvalidParameter(format!(
            "start tuple {raw:?} has {} entries, expected {expected_len}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            let label: usize = p.parse().map_err(|_| {
                Error::InvalidParameter(format!("start tuple {raw:?}: bad node label {p:?}"))
            })?;
            if label == 0 || label > n {
                return Err(Error::NodeOutOfRange { index: label, n });
            }
            Ok(label - 1)
        })
        .collect()
}

/// Six-significant-digit rendering for human-readable output; very small
/// magnitudes fall back to scientific notation.
pub fn g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-6..=12).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}
