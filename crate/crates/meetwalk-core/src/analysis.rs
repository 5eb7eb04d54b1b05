//! Structural analysis of a single chain and classification of chain
//! pairs/tuples by the sufficient conditions for finite meeting times.
//!
//! Communicating classes are the strongly connected components of the
//! support digraph; a class is absorbing iff no edge leaves it. The period
//! of a class is the gcd of `level(u) + 1 - level(v)` over intra-class
//! edges `(u, v)` for a BFS levelling of the class.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{RateMatrix, TransitionMatrix};
use crate::linalg::{lu_factor, DenseMatrix};
use crate::product::{self, StateBudget};

/// One communicating class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommunicatingClass {
    /// Member nodes, ascending, 0-based.
    pub nodes: Vec<usize>,
    /// No edge leaves the class.
    pub absorbing: bool,
    /// Gcd of closed-walk lengths through any member. A single node with
    /// no self-loop forms a transient class; its period is reported as 1
    /// (no closed walk exists, and no classification consults it).
    pub period: usize,
}

/// Partition of the state space into communicating classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    pub classes: Vec<CommunicatingClass>,
}

impl ChainDecomposition {
    pub fn absorbing_classes(&self) -> impl Iterator<Item = &CommunicatingClass> {
        self.classes.iter().filter(|c| c.absorbing)
    }

    /// Irreducible and aperiodic: a single class covering every node, with
    /// period 1.
    pub fn is_ergodic(&self, n: usize) -> bool {
        self.classes.len() == 1 && self.classes[0].nodes.len() == n && self.classes[0].period == 1
    }

    pub fn is_irreducible(&self, n: usize) -> bool {
        self.classes.len() == 1 && self.classes[0].nodes.len() == n
    }
}

/// Tarjan's strongly connected components, iterative.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0usize;
    // (node, next out-edge position)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call_stack.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = call_stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Period of a strongly connected class via BFS levels: gcd of
/// `level(u) + 1 - level(v)` over intra-class edges.
fn class_period(class: &[usize], adj: &[Vec<usize>], member: &[bool]) -> usize {
    let root = class[0];
    let n = adj.len();
    let mut level = vec![usize::MAX; n];
    level[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if member[v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for &u in class {
        for &v in &adj[u] {
            if member[v] {
                let d = level[u] + 1 - level[v];
                g = gcd(g, d);
            }
        }
    }
    if g == 0 {
        1
    } else {
        g
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn decompose_adjacency(adj: &[Vec<usize>]) -> ChainDecomposition {
    let comps = tarjan_scc(adj);
    let n = adj.len();
    let mut comp_of = vec![usize::MAX; n];
    for (cid, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = cid;
        }
    }
    let mut member = vec![false; n];
    let mut classes = Vec::with_capacity(comps.len());
    for (cid, comp) in comps.iter().enumerate() {
        let absorbing = comp
            .iter()
            .all(|&u| adj[u].iter().all(|&v| comp_of[v] == cid));
        for &u in comp {
            member[u] = true;
        }
        let period = class_period(comp, adj, &member);
        for &u in comp {
            member[u] = false;
        }
        classes.push(CommunicatingClass {
            nodes: comp.clone(),
            absorbing,
            period,
        });
    }
    classes.sort_by(|a, b| a.nodes[0].cmp(&b.nodes[0]));
    ChainDecomposition { classes }
}

/// Decompose a discrete-time chain into communicating classes. An entry
/// counts as an edge iff it is strictly positive.
pub fn decompose(p: &TransitionMatrix) -> ChainDecomposition {
    decompose_adjacency(&p.support())
}

/// Decompose the support digraph of a rate matrix. Periods refer to the
/// off-diagonal support and are not meaningful for continuous time.
pub fn decompose_rate_matrix(q: &RateMatrix) -> ChainDecomposition {
    decompose_adjacency(&q.support())
}

/// Solve for the unique stationary distribution of a single absorbing
/// chain: `πᵀP = πᵀ`, `Σπ = 1`, zero off the absorbing class.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<Vec<f64>> {
    let decomp = decompose(p);
    let absorbing: Vec<_> = decomp.absorbing_classes().collect();
    if absorbing.len() != 1 {
        return Err(Error::StationaryNotUnique {
            classes: absorbing.len(),
        });
    }
    let class = &absorbing[0].nodes;
    // (P_Aᵀ - I) π = 0 on the class, with the last equation replaced by
    // the normalization Σπ = 1.
    let m = class.len();
    let pos: std::collections::HashMap<usize, usize> =
        class.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut a = DenseMatrix::zeros(m, m);
    for (col, &node) in class.iter().enumerate() {
        for &(j, v) in p.row(node) {
            let row = pos[&j];
            a.add_to(row, col, v);
        }
    }
    for k in 0..m {
        a.add_to(k, k, -1.0);
    }
    for col in 0..m {
        a.set(m - 1, col, 1.0);
    }
    let mut rhs = vec![0.0; m];
    rhs[m - 1] = 1.0;
    let lu = lu_factor(a).map_err(|_| Error::Solver("stationary system singular".into()))?;
    lu.solve_in_place(&mut rhs);
    let mut pi = vec![0.0; p.n()];
    for (k, &node) in class.iter().enumerate() {
        pi[node] = rhs[k].max(0.0);
    }
    let total: f64 = pi.iter().sum();
    for v in &mut pi {
        *v /= total;
    }
    Ok(pi)
}

/// Stationary distribution of a continuous-time chain: `πᵀQ = 0`, `Σπ = 1`.
pub fn stationary_distribution_ctmc(q: &RateMatrix) -> Result<Vec<f64>> {
    let decomp = decompose_rate_matrix(q);
    let absorbing: Vec<_> = decomp.absorbing_classes().collect();
    if absorbing.len() != 1 {
        return Err(Error::StationaryNotUnique {
            classes: absorbing.len(),
        });
    }
    let class = &absorbing[0].nodes;
    let m = class.len();
    let pos: std::collections::HashMap<usize, usize> =
        class.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut a = DenseMatrix::zeros(m, m);
    for (col, &node) in class.iter().enumerate() {
        a.add_to(pos[&node], col, -q.exit_rate(node));
        for &(j, v) in q.off_diagonal(node) {
            a.add_to(pos[&j], col, v);
        }
    }
    for col in 0..m {
        a.set(m - 1, col, 1.0);
    }
    let mut rhs = vec![0.0; m];
    rhs[m - 1] = 1.0;
    let lu = lu_factor(a).map_err(|_| Error::Solver("stationary system singular".into()))?;
    lu.solve_in_place(&mut rhs);
    let mut pi = vec![0.0; q.n()];
    for (k, &node) in class.iter().enumerate() {
        pi[node] = rhs[k].max(0.0);
    }
    let total: f64 = pi.iter().sum();
    for v in &mut pi {
        *v /= total;
    }
    Ok(pi)
}

/// Membership flags for the sufficient-condition sets, plus the exact
/// finiteness certificate. For pairs the flag hierarchy holds
/// structurally: one-ergodic and SA-overlap each imply all-overlap, and
/// all-overlap implies finite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub one_ergodic: bool,
    pub sa_overlap: bool,
    pub all_overlap: bool,
    pub finite: bool,
    /// For `finite == false`: a start tuple (1-based) with no equal-length
    /// walks to a common node.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    // Both sorted ascending.
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Every absorbing-class pair intersects with coprime periods.
fn all_overlap(dp: &ChainDecomposition, de: &ChainDecomposition) -> bool {
    dp.absorbing_classes().all(|cp| {
        de.absorbing_classes()
            .all(|ce| intersects(&cp.nodes, &ce.nodes) && gcd(cp.period, ce.period) == 1)
    })
}

/// Both chains single absorbing with intersecting classes and coprime
/// periods.
fn sa_overlap(dp: &ChainDecomposition, de: &ChainDecomposition) -> bool {
    let ap: Vec<_> = dp.absorbing_classes().collect();
    let ae: Vec<_> = de.absorbing_classes().collect();
    ap.len() == 1
        && ae.len() == 1
        && intersects(&ap[0].nodes, &ae[0].nodes)
        && gcd(ap[0].period, ae[0].period) == 1
}

/// Tuple-level SA-overlap membership: each pursuer chain pairs with some
/// evader chain whose single absorbing class overlaps with coprime period.
pub(crate) fn tuple_sa_overlap(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
) -> bool {
    let dp: Vec<ChainDecomposition> = pursuers.iter().map(decompose).collect();
    let de: Vec<ChainDecomposition> = evaders.iter().map(decompose).collect();
    dp.iter().all(|p| de.iter().any(|e| sa_overlap(p, e)))
}

/// Classify a pursuer/evader pair of transition matrices.
pub fn classify_pair(pp: &TransitionMatrix, pe: &TransitionMatrix) -> Result<PairClassification> {
    classify_tuple(std::slice::from_ref(pp), std::slice::from_ref(pe))
}

/// Classify an (L+M)-tuple of transition matrices. Flags follow the
/// tuple-level set definitions: one matrix ergodic (one-ergodic); each
/// pursuer pairs with some evader in the pairwise set (SA-/all-overlap);
/// finiteness is decided exactly by product-space reachability.
pub fn classify_tuple(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
) -> Result<PairClassification> {
    classify_tuple_with(pursuers, evaders, StateBudget::default())
}

/// [`classify_tuple`] with an explicit product-state budget.
pub fn classify_tuple_with(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
    budget: StateBudget,
) -> Result<PairClassification> {
    if pursuers.is_empty() || evaders.is_empty() {
        return Err(Error::EmptyChainList);
    }
    let n = pursuers[0].n();
    for m in pursuers.iter().chain(evaders) {
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.n(),
            });
        }
    }
    let dp: Vec<ChainDecomposition> = pursuers.iter().map(decompose).collect();
    let de: Vec<ChainDecomposition> = evaders.iter().map(decompose).collect();

    let one_ergodic = dp.iter().chain(&de).any(|d| d.is_ergodic(n));
    let all_overlap_flag = dp.iter().all(|p| de.iter().any(|e| all_overlap(p, e)));
    let sa_overlap_flag = dp.iter().all(|p| de.iter().any(|e| sa_overlap(p, e)));

    let factors: Vec<&TransitionMatrix> = pursuers.iter().chain(evaders).collect();
    let reaches = product::reaches_meeting_set(&factors, pursuers.len(), evaders.len(), budget)?;
    let finite = reaches.iter().all(|&r| r);
    let witness = if finite {
        None
    } else {
        let space = product::ProductSpace::new(n, factors.len(), budget)?;
        let idx = reaches.iter().position(|&r| !r).expect("some state fails");
        Some(space.unflatten(idx).iter().map(|&t| t + 1).collect())
    };

    Ok(PairClassification {
        one_ergodic,
        sa_overlap: sa_overlap_flag,
        all_overlap: all_overlap_flag,
        finite,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{equal_neighbor_matrix, generate, GraphFamily};

    fn two_cycle() -> TransitionMatrix {
        TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn identity_has_singleton_absorbing_classes() {
        let p = TransitionMatrix::identity(3);
        let d = decompose(&p);
        assert_eq!(d.classes.len(), 3);
        for c in &d.classes {
            assert!(c.absorbing);
            assert_eq!(c.period, 1);
            assert_eq!(c.nodes.len(), 1);
        }
    }

    #[test]
    fn two_cycle_is_one_class_period_two() {
        let d = decompose(&two_cycle());
        assert_eq!(d.classes.len(), 1);
        assert!(d.classes[0].absorbing);
        assert_eq!(d.classes[0].period, 2);
        assert_eq!(d.classes[0].nodes, vec![0, 1]);
    }

    #[test]
    fn self_loop_chain_is_single_absorbing_aperiodic() {
        // Two-node chain with p_11 > 0: one absorbing class, period 1.
        let p = TransitionMatrix::from_dense(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        let d = decompose(&p);
        assert_eq!(d.classes.len(), 1);
        assert!(d.classes[0].absorbing);
        assert_eq!(d.classes[0].period, 1);
    }

    #[test]
    fn transient_class_detected() {
        // Node 1 drains into node 0's absorbing self-loop.
        let p = TransitionMatrix::from_dense(&[vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let d = decompose(&p);
        assert_eq!(d.classes.len(), 2);
        let absorbing: Vec<_> = d.absorbing_classes().collect();
        assert_eq!(absorbing.len(), 1);
        assert_eq!(absorbing[0].nodes, vec![0]);
    }

    #[test]
    fn isolated_node_without_self_loop_gets_period_one() {
        // Row 1 moves to node 0 only; node 1 has no closed walk.
        let p = TransitionMatrix::from_dense(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let d = decompose(&p);
        let transient: Vec<_> = d.classes.iter().filter(|c| !c.absorbing).collect();
        assert_eq!(transient.len(), 1);
        assert_eq!(transient[0].period, 1);
    }

    #[test]
    fn stationary_uniform_on_symmetric_ring() {
        let g = generate(&GraphFamily::Ring { n: 4 }).unwrap();
        let p = equal_neighbor_matrix(&g, true).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        for v in pi {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_concentrates_on_absorbing_node() {
        let p = TransitionMatrix::from_dense(&[vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        assert_eq!(pi, vec![1.0, 0.0]);
    }

    #[test]
    fn stationary_matches_power_iteration_on_star() {
        let g = generate(&GraphFamily::Star { n: 3 }).unwrap();
        let p = equal_neighbor_matrix(&g, true).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        // Power-iteration oracle.
        let mut v = vec![1.0 / 3.0; 3];
        for _ in 0..10_000 {
            let mut next = vec![0.0; 3];
            for i in 0..3 {
                for &(j, w) in p.row(i) {
                    next[j] += v[i] * w;
                }
            }
            v = next;
        }
        for (a, b) in pi.iter().zip(&v) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        // Residual of the defining equation.
        let mut res: f64 = 0.0;
        for j in 0..3 {
            let mut acc = 0.0;
            for i in 0..3 {
                acc += pi[i] * p.get(i, j);
            }
            res = res.max((acc - pi[j]).abs());
        }
        assert!(res <= 1e-10);
    }

    #[test]
    fn stationary_rejects_multiple_absorbing_classes() {
        let p = TransitionMatrix::identity(2);
        match stationary_distribution(&p) {
            Err(Error::StationaryNotUnique { classes: 2 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn ctmc_stationary_symmetric_pair() {
        let q = RateMatrix::from_dense(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let pi = stationary_distribution_ctmc(&q).unwrap();
        assert!((pi[0] - 0.5).abs() < 1e-12);
        assert!((pi[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ctmc_stationary_detailed_balance() {
        let q = RateMatrix::from_dense(&[vec![-2.0, 2.0], vec![1.0, -1.0]]).unwrap();
        let pi = stationary_distribution_ctmc(&q).unwrap();
        assert!((pi[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((pi[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ctmc_stationary_single_node() {
        let q = RateMatrix::from_off_diagonal(1, vec![vec![]]).unwrap();
        assert_eq!(stationary_distribution_ctmc(&q).unwrap(), vec![1.0]);
    }

    #[test]
    fn classify_one_ergodic_with_identity_evader() {
        let g = generate(&GraphFamily::Star { n: 3 }).unwrap();
        let p = equal_neighbor_matrix(&g, true).unwrap();
        let c = classify_pair(&p, &TransitionMatrix::identity(3)).unwrap();
        assert!(c.one_ergodic);
        assert!(c.all_overlap);
        assert!(c.finite);
    }

    #[test]
    fn classify_two_cycles_all_false_with_witness() {
        let c = classify_pair(&two_cycle(), &two_cycle()).unwrap();
        assert!(!c.one_ergodic);
        assert!(!c.sa_overlap);
        assert!(!c.all_overlap);
        assert!(!c.finite);
        assert_eq!(c.witness, Some(vec![1, 2]));
    }

    #[test]
    fn period_four_vs_period_two_is_finite_but_not_all_overlap() {
        // Pursuer: 4-cycle, period 4. Evader: alternates between nodes
        // 0 and 2 of the same node set, period 2; nodes 1 and 3 drain in.
        let pp = TransitionMatrix::from_dense(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let pe = TransitionMatrix::from_dense(&[
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let dp = decompose(&pp);
        let de = decompose(&pe);
        assert_eq!(dp.classes[0].period, 4);
        assert_eq!(de.classes.iter().find(|c| c.absorbing).unwrap().period, 2);
        let c = classify_pair(&pp, &pe).unwrap();
        assert!(!c.all_overlap, "gcd(4, 2) = 2");
        assert!(c.finite, "meeting times are finite nevertheless");
        assert!(brute_force_all_reach(&[&pp, &pe], 1, 1));
    }

    /// Dense transitive-closure oracle: does every product state have a
    /// walk of length >= 1 to a meeting state?
    fn brute_force_all_reach(factors: &[&TransitionMatrix], l: usize, _m: usize) -> bool {
        let n = factors[0].n();
        let k = factors.len();
        let size = n.pow(k as u32);
        let digits = |mut s: usize| {
            let mut t = vec![0usize; k];
            for slot in t.iter_mut().rev() {
                *slot = s % n;
                s /= n;
            }
            t
        };
        let mut adj = vec![vec![false; size]; size];
        for s in 0..size {
            let ts = digits(s);
            for t in 0..size {
                let tt = digits(t);
                if (0..k).all(|a| factors[a].get(ts[a], tt[a]) > 0.0) {
                    adj[s][t] = true;
                }
            }
        }
        let mut closure = adj.clone();
        for mid in 0..size {
            for a in 0..size {
                if closure[a][mid] {
                    for b in 0..size {
                        if closure[mid][b] {
                            closure[a][b] = true;
                        }
                    }
                }
            }
        }
        let meets = |s: usize| {
            let t = digits(s);
            t[..l].iter().any(|i| t[l..].contains(i))
        };
        (0..size).all(|s| (0..size).any(|d| meets(d) && closure[s][d]))
    }

    #[test]
    fn classify_tuple_reduces_to_pair() {
        let g = generate(&GraphFamily::Ring { n: 4 }).unwrap();
        let p = equal_neighbor_matrix(&g, true).unwrap();
        let e = two_cycle_on_four();
        let pair = classify_pair(&p, &e).unwrap();
        let tup = classify_tuple(std::slice::from_ref(&p), std::slice::from_ref(&e)).unwrap();
        assert_eq!(pair, tup);
    }

    fn two_cycle_on_four() -> TransitionMatrix {
        TransitionMatrix::from_dense(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn tuple_one_ergodic_flag() {
        let g = generate(&GraphFamily::Star { n: 3 }).unwrap();
        let p = equal_neighbor_matrix(&g, true).unwrap();
        let c = classify_tuple(&[p.clone(), p.clone()], &[TransitionMatrix::identity(3)]).unwrap();
        assert!(c.one_ergodic);
        assert!(c.finite);
    }

    #[test]
    fn tuple_of_aligned_two_cycles_is_not_finite() {
        let p = two_cycle();
        let c = classify_tuple(&[p.clone(), p.clone()], std::slice::from_ref(&p)).unwrap();
        assert!(!c.finite);
        // First failing start in flattened order is (1, 1, 2).
        assert_eq!(c.witness, Some(vec![1, 1, 2]));
        assert!(!brute_force_all_reach(&[&p, &p, &p], 2, 1));
    }

    #[test]
    fn classify_dimension_mismatch() {
        let a = TransitionMatrix::identity(2);
        let b = TransitionMatrix::identity(3);
        assert!(classify_pair(&a, &b).is_err());
    }

    #[test]
    fn classify_empty_tuple_errors() {
        let a = TransitionMatrix::identity(2);
        assert!(classify_tuple(&[], &[a]).is_err());
    }
}
