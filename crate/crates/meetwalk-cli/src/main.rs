//! `meetwalk`: meeting times of random walkers on digraphs.
//!
//! Subcommands: `gen` (graph generation), `analyze` (chain structure and
//! finiteness classification), `meet` (exact meeting times), `simulate`
//! (Monte Carlo), `table1` (reproduction of the published comparison
//! table). Exit codes: 0 success, 2 validation error, 3 state budget
//! exceeded, 4 I/O error.

mod cmds;
mod inputs;

use clap::{Args, Parser, Subcommand};
use meetwalk_core::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "meetwalk",
    version,
    about = "Meeting times of random walkers on digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as JSON (optionally export matrices).
    Gen(GenArgs),
    /// Decompose chains and classify the pursuer/evader tuple.
    Analyze(AnalyzeArgs),
    /// Compute exact expected meeting times.
    Meet(MeetArgs),
    /// Estimate a meeting time by Monte Carlo simulation.
    Simulate(SimulateArgs),
    /// Reproduce the published 20-node comparison table.
    Table1(Table1Args),
}

/// Graph source: a generator family or a graph file.
#[derive(Args, Clone)]
pub struct GraphArgs {
    /// Graph family: ring | path | star | lollipop | barbell | lattice |
    /// random-geometric.
    #[arg(long)]
    pub family: Option<String>,
    /// Node count (ring, path, star, random-geometric).
    #[arg(long)]
    pub n: Option<usize>,
    /// Clique size (lollipop, barbell).
    #[arg(long)]
    pub clique: Option<usize>,
    /// Tail length (lollipop) or bridge path length (barbell).
    #[arg(long)]
    pub tail: Option<usize>,
    /// Lattice rows.
    #[arg(long)]
    pub rows: Option<usize>,
    /// Lattice columns.
    #[arg(long)]
    pub cols: Option<usize>,
    /// Connection radius (random-geometric).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Generator seed (random-geometric).
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// Load the graph from a JSON file instead of generating it.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<String>,
}

/// Chain construction on top of the graph source, or explicit matrices.
#[derive(Args, Clone)]
pub struct ChainArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Include self-loops in the equal-neighbor construction.
    #[arg(long)]
    pub self_loops: bool,
    /// Continuous time: rate matrices instead of transition matrices.
    #[arg(long)]
    pub ctmc: bool,
    /// Number of pursuers (copies of the constructed chain).
    #[arg(short = 'L', long = "L", default_value_t = 1)]
    pub pursuers: usize,
    /// Number of evaders (copies of the constructed chain).
    #[arg(short = 'M', long = "M", default_value_t = 1)]
    pub evaders: usize,
    /// Explicit pursuer matrix file (JSON edge list or dense CSV);
    /// repeatable, overrides the generated chain.
    #[arg(long = "pursuer-matrix")]
    pub pursuer_matrix: Vec<String>,
    /// Explicit evader matrix file; repeatable.
    #[arg(long = "evader-matrix")]
    pub evader_matrix: Vec<String>,
    /// Product-state budget override (also: MEETWALK_STATE_BUDGET).
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Output path for the graph JSON.
    #[arg(long, short = 'o')]
    pub out: String,
    /// Also export the equal-neighbor transition matrix (.json or .csv).
    #[arg(long)]
    pub transition_out: Option<String>,
    /// Include self-loops in the exported transition matrix.
    #[arg(long)]
    pub self_loops: bool,
    /// Also export the weight-derived rate matrix (.json or .csv).
    #[arg(long)]
    pub rates_out: Option<String>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Emit machine-readable JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct MeetArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Restrict the report to these start tuples (1-based, e.g. "3,7");
    /// repeatable.
    #[arg(long)]
    pub start: Vec<String>,
    /// Emit machine-readable JSON.
    #[arg(long)]
    pub json: bool,
    /// Write the JSON report to a file.
    #[arg(long, short = 'o')]
    pub out: Option<String>,
    /// Write the dense pair table as CSV (two-agent runs only).
    #[arg(long)]
    pub csv: Option<String>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Start tuple, 1-based, e.g. "3,7".
    #[arg(long)]
    pub start: String,
    /// Number of trials.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Horizon: max steps (discrete) or max time (continuous). Defaults to
    /// 1e6 steps, or the continuous-time equivalent of 1e6 expected jumps.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Simulation seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit machine-readable JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct Table1Args {
    /// Lollipop clique size for the documented split row.
    #[arg(long, default_value_t = 10)]
    pub lollipop_clique: usize,
    /// Lollipop tail length for the documented split row.
    #[arg(long, default_value_t = 10)]
    pub lollipop_tail: usize,
    /// Lattice rows.
    #[arg(long, default_value_t = 4)]
    pub lattice_rows: usize,
    /// Lattice columns.
    #[arg(long, default_value_t = 5)]
    pub lattice_cols: usize,
    /// Emit a dense random-geometric row with this radius.
    #[arg(long)]
    pub rg_dense_radius: Option<f64>,
    /// Emit a sparse random-geometric row with this radius.
    #[arg(long)]
    pub rg_sparse_radius: Option<f64>,
    /// Seed for the random-geometric rows.
    #[arg(long, default_value_t = 1)]
    pub rg_seed: u64,
    /// Emit machine-readable JSON.
    #[arg(long)]
    pub json: bool,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::StateBudgetExceeded { .. } => 3,
        Error::Io(_) => 4,
        Error::Parse { .. } => 2,
        Error::Solver(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmds::gen(args),
        Command::Analyze(args) => cmds::analyze(args),
        Command::Meet(args) => cmds::meet(args),
        Command::Simulate(args) => cmds::simulate(args),
        Command::Table1(args) => cmds::table1(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
