//! Shared instance builders for the criterion benches.

use meetwalk_core::graph::{equal_neighbor_matrix, generate, GraphFamily, TransitionMatrix};

/// Equal-neighbor chain with self-loops, the construction the comparison
/// table uses.
pub fn table_chain(family: &GraphFamily) -> TransitionMatrix {
    let g = generate(family).expect("valid family");
    equal_neighbor_matrix(&g, true).expect("no isolated nodes")
}

/// A 12-node chain sized so that three factors (12^3 = 1728 states) stay
/// cheap enough for a benchmark loop.
pub fn three_factor_chain() -> TransitionMatrix {
    table_chain(&GraphFamily::Lattice { rows: 3, cols: 4 })
}
