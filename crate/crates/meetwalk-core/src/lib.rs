//! Exact expected meeting times between groups of random walkers
//! (pursuers and evaders) on digraphs.
//!
//! Multiple independent walks on a common node set are one walk on the
//! Kronecker product graph. This crate builds on that observation:
//!
//! - [`graph`]: digraphs, the standard graph families, equal-neighbor and
//!   rate matrices, file formats.
//! - [`analysis`]: communicating classes, periods, stationary
//!   distributions, and the classification of chain pairs/tuples by the
//!   sufficient conditions for finite meeting times.
//! - [`product`]: flattened indexing, implicit product/Kronecker-sum
//!   adjacency, reachability to the meeting set, convergence checks.
//! - [`dtmc`]: closed-form discrete-time meeting/group-meeting/hitting
//!   times via the masked linear system `(I − (⊗P)E)·m = 1`.
//! - [`ctmc`]: continuous-time analogues via the Kronecker-sum generator.
//! - [`sim`]: a reproducible Monte Carlo oracle for both time models.
//! - [`report`]: the JSON/CSV result shapes used by the CLI.
//!
//! Node indices are 0-based in this API; file formats and reports are
//! 1-based.

pub mod analysis;
pub mod ctmc;
pub mod dtmc;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod product;
pub mod report;
pub mod result;
pub mod sim;

pub use analysis::{
    classify_pair, classify_tuple, decompose, decompose_rate_matrix, stationary_distribution,
    stationary_distribution_ctmc, ChainDecomposition, CommunicatingClass, PairClassification,
};
pub use ctmc::{ctmc_group_meeting_times, ctmc_hitting_times, ctmc_meeting_times};
pub use dtmc::{
    group_meeting_times, hitting_times, mean_group_meeting_time, mean_meeting_time,
    meeting_time_pair, meeting_times, HittingTimes, SolveOptions,
};
pub use error::{Error, Result};
pub use graph::{
    equal_neighbor_matrix, generate, rate_matrix_from_digraph, Digraph, GraphFamily, RateMatrix,
    TransitionMatrix,
};
pub use product::{
    is_convergent, reaches_meeting_set, MeetingSet, ProductSpace, StateBudget, DEFAULT_STATE_BUDGET,
};
pub use result::{MeetingTimes, MeetingValue};
pub use sim::{simulate_ctmc, simulate_dtmc, SimulationEstimate};
