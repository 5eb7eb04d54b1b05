//! Kronecker product/sum state spaces: indexing, implicit adjacency,
//! reachability to the meeting set, and convergence certificates.
//!
//! A joint state of `L` pursuers and `M` evaders on `n` nodes is a tuple
//! `(i_1, …, i_L, j_1, …, j_M)`, flattened pursuer-major with the last
//! coordinate cycling fastest. Under this flattening, the joint one-step
//! transition matrix of independent discrete-time walkers is literally the
//! Kronecker product of the factor matrices, and the joint generator of
//! independent continuous-time walkers is their Kronecker sum. Product
//! adjacency is only ever enumerated implicitly; nothing of size
//! `n^(L+M) × n^(L+M)` is materialized outside of dense test helpers.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{RateMatrix, TransitionMatrix};
use crate::linalg::DenseMatrix;

/// Cap on the number of product states an operation may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateBudget(pub usize);

/// Default product-state budget (10^7 states).
pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

impl Default for StateBudget {
    fn default() -> Self {
        StateBudget(DEFAULT_STATE_BUDGET)
    }
}

/// Index arithmetic for a product space of `factors` coordinates, each
/// ranging over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    n: usize,
    factors: usize,
    size: usize,
    /// `strides[k] = n^(factors - 1 - k)`: coordinate `k`'s place value.
    strides: Vec<usize>,
}

impl ProductSpace {
    pub fn new(n: usize, factors: usize, budget: StateBudget) -> Result<Self> {
        if n == 0 || factors == 0 {
            return Err(Error::InvalidParameter(
                "product space needs n >= 1 and at least one factor".into(),
            ));
        }
        let mut size: u128 = 1;
        for _ in 0..factors {
            size = size.saturating_mul(n as u128);
            if size > budget.0 as u128 {
                return Err(Error::StateBudgetExceeded {
                    states: (n as u128).pow(factors as u32),
                    budget: budget.0,
                });
            }
        }
        let size = size as usize;
        let mut strides = vec![1usize; factors];
        for k in (0..factors.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * n;
        }
        Ok(Self {
            n,
            factors,
            size,
            strides,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Flatten a coordinate tuple; the last coordinate cycles fastest.
    pub fn flatten(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.factors);
        tuple.iter().fold(0, |acc, &t| {
            debug_assert!(t < self.n);
            acc * self.n + t
        })
    }

    pub fn unflatten(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors];
        self.unflatten_into(index, &mut out);
        out
    }

    pub fn unflatten_into(&self, mut index: usize, out: &mut [usize]) {
        debug_assert!(index < self.size);
        for k in (0..self.factors).rev() {
            out[k] = index % self.n;
            index /= self.n;
        }
    }
}

/// The meeting set: product states whose tuple has some pursuer coordinate
/// equal to some evader coordinate (the generalized Kronecker delta).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeetingSet {
    pub pursuers: usize,
    pub evaders: usize,
}

impl MeetingSet {
    pub fn new(pursuers: usize, evaders: usize) -> Self {
        Self { pursuers, evaders }
    }

    /// Generalized Kronecker delta on a tuple `(i_1..i_L, j_1..j_M)`.
    pub fn contains_tuple(&self, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.pursuers + self.evaders);
        let (p, e) = tuple.split_at(self.pursuers);
        p.iter().any(|i| e.contains(i))
    }

    /// Membership bit per flattened state.
    pub fn membership(&self, space: &ProductSpace) -> Vec<bool> {
        let mut digits = vec![0usize; space.factors()];
        let mut out = vec![false; space.size()];
        for (s, slot) in out.iter_mut().enumerate() {
            space.unflatten_into(s, &mut digits);
            *slot = self.contains_tuple(&digits);
        }
        out
    }
}

/// Iterate the cartesian product of `lists`, calling `f` with the flattened
/// index `Σ lists[k][·] * strides[k]`.
fn for_each_combination(
    lists: &[&[usize]],
    strides: &[usize],
    digits: &mut Vec<usize>,
    mut f: impl FnMut(usize),
) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let k = lists.len();
    digits.clear();
    digits.resize(k, 0);
    'outer: loop {
        let mut s = 0;
        for a in 0..k {
            s += lists[a][digits[a]] * strides[a];
        }
        f(s);
        let mut a = k;
        while a > 0 {
            a -= 1;
            digits[a] += 1;
            if digits[a] < lists[a].len() {
                continue 'outer;
            }
            digits[a] = 0;
        }
        break;
    }
}

/// Implicit adjacency and operator of the Kronecker product of
/// discrete-time factors: joint state `u` steps to `v` iff every factor has
/// a positive entry from `u`'s coordinate to `v`'s coordinate.
pub struct DtmcProduct<'a> {
    space: ProductSpace,
    factors: Vec<&'a TransitionMatrix>,
    support: Vec<Vec<Vec<usize>>>,
    reverse: Vec<Vec<Vec<usize>>>,
}

impl<'a> DtmcProduct<'a> {
    pub fn new(factors: &[&'a TransitionMatrix], budget: StateBudget) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyChainList);
        }
        let n = factors[0].n();
        for f in factors {
            if f.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: f.n(),
                });
            }
        }
        let space = ProductSpace::new(n, factors.len(), budget)?;
        let support: Vec<Vec<Vec<usize>>> = factors.iter().map(|f| f.support()).collect();
        let reverse = support
            .iter()
            .map(|sup| transpose_support(sup, n))
            .collect();
        Ok(Self {
            space,
            factors: factors.to_vec(),
            support,
            reverse,
        })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn factor_matrices(&self) -> &[&'a TransitionMatrix] {
        &self.factors
    }

    /// Enumerate joint successors of `state`.
    pub fn for_each_successor(&self, state: usize, f: impl FnMut(usize)) {
        let mut tuple = vec![0usize; self.space.factors()];
        self.space.unflatten_into(state, &mut tuple);
        let lists: Vec<&[usize]> = tuple
            .iter()
            .enumerate()
            .map(|(k, &t)| self.support[k][t].as_slice())
            .collect();
        let mut digits = Vec::new();
        for_each_combination(&lists, self.space.strides(), &mut digits, f);
    }

    /// Enumerate joint successors with their transition probabilities
    /// (products of factor entries).
    pub fn for_each_successor_weighted(&self, state: usize, mut f: impl FnMut(usize, f64)) {
        let k = self.space.factors();
        let mut tuple = vec![0usize; k];
        self.space.unflatten_into(state, &mut tuple);
        let rows: Vec<&[(usize, f64)]> = tuple
            .iter()
            .enumerate()
            .map(|(a, &t)| self.factors[a].row(t))
            .collect();
        if rows.iter().any(|r| r.is_empty()) {
            return;
        }
        let strides = self.space.strides();
        let mut digits = vec![0usize; k];
        'outer: loop {
            let mut s = 0;
            let mut p = 1.0;
            for a in 0..k {
                let (col, prob) = rows[a][digits[a]];
                s += col * strides[a];
                p *= prob;
            }
            f(s, p);
            let mut a = k;
            while a > 0 {
                a -= 1;
                digits[a] += 1;
                if digits[a] < rows[a].len() {
                    continue 'outer;
                }
                digits[a] = 0;
            }
            break;
        }
    }

    /// Enumerate joint predecessors of `state`.
    pub fn for_each_predecessor(&self, state: usize, f: impl FnMut(usize)) {
        let mut tuple = vec![0usize; self.space.factors()];
        self.space.unflatten_into(state, &mut tuple);
        let lists: Vec<&[usize]> = tuple
            .iter()
            .enumerate()
            .map(|(k, &t)| self.reverse[k][t].as_slice())
            .collect();
        let mut digits = Vec::new();
        for_each_combination(&lists, self.space.strides(), &mut digits, f);
    }

    /// `out = (P_1 ⊗ … ⊗ P_K) x`, applied one factor at a time.
    pub fn apply(&self, x: &[f64], out: &mut [f64], scratch: &mut [f64]) {
        let n = self.space.n();
        out.copy_from_slice(x);
        let mut data_in_out = true;
        for (axis, factor) in self.factors.iter().enumerate() {
            let stride = self.space.strides()[axis];
            if data_in_out {
                apply_axis_dtmc(factor, n, stride, out, scratch);
            } else {
                apply_axis_dtmc(factor, n, stride, scratch, out);
            }
            data_in_out = !data_in_out;
        }
        if !data_in_out {
            out.copy_from_slice(scratch);
        }
    }
}

fn transpose_support(sup: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); n];
    for (i, row) in sup.iter().enumerate() {
        for &j in row {
            rev[j].push(i);
        }
    }
    rev
}

/// One mode product: contract factor `f` along the axis with the given
/// stride.
fn apply_axis_dtmc(
    f: &TransitionMatrix,
    n: usize,
    stride: usize,
    input: &[f64],
    output: &mut [f64],
) {
    let block = stride * n;
    for base in (0..input.len()).step_by(block) {
        for off in 0..stride {
            for i in 0..n {
                let mut acc = 0.0;
                for &(j, p) in f.row(i) {
                    acc += p * input[base + j * stride + off];
                }
                output[base + i * stride + off] = acc;
            }
        }
    }
}

/// Implicit adjacency and operator of the Kronecker sum of rate matrices:
/// exactly one coordinate changes per transition, via a positive
/// off-diagonal rate in that coordinate's factor.
pub struct CtmcProduct<'a> {
    space: ProductSpace,
    factors: Vec<&'a RateMatrix>,
    reverse: Vec<Vec<Vec<usize>>>,
}

impl<'a> CtmcProduct<'a> {
    pub fn new(factors: &[&'a RateMatrix], budget: StateBudget) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyChainList);
        }
        let n = factors[0].n();
        for f in factors {
            if f.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: f.n(),
                });
            }
        }
        let space = ProductSpace::new(n, factors.len(), budget)?;
        let reverse = factors
            .iter()
            .map(|f| transpose_support(&f.support(), n))
            .collect();
        Ok(Self {
            space,
            factors: factors.to_vec(),
            reverse,
        })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    /// Total exit rate of a joint state: sum of factor exit rates.
    pub fn exit_rate(&self, state: usize) -> f64 {
        let mut tuple = vec![0usize; self.space.factors()];
        self.space.unflatten_into(state, &mut tuple);
        tuple
            .iter()
            .enumerate()
            .map(|(k, &t)| self.factors[k].exit_rate(t))
            .sum()
    }

    /// Enumerate joint successors with their rates; one coordinate changes
    /// per edge.
    pub fn for_each_successor(&self, state: usize, mut f: impl FnMut(usize, f64)) {
        let mut tuple = vec![0usize; self.space.factors()];
        self.space.unflatten_into(state, &mut tuple);
        for (k, &t) in tuple.iter().enumerate() {
            let stride = self.space.strides()[k];
            for &(j, rate) in self.factors[k].off_diagonal(t) {
                let target = state + j * stride - t * stride;
                f(target, rate);
            }
        }
    }

    /// Enumerate joint predecessors; one coordinate differs per edge.
    pub fn for_each_predecessor(&self, state: usize, mut f: impl FnMut(usize)) {
        let mut tuple = vec![0usize; self.space.factors()];
        self.space.unflatten_into(state, &mut tuple);
        for (k, &t) in tuple.iter().enumerate() {
            let stride = self.space.strides()[k];
            for &i in &self.reverse[k][t] {
                f(state + i * stride - t * stride);
            }
        }
    }

    /// `out = (Q_1 ⊕ … ⊕ Q_K) x` (the Kronecker sum applied axis by axis).
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.space.n();
        out.fill(0.0);
        for (axis, q) in self.factors.iter().enumerate() {
            let stride = self.space.strides()[axis];
            let block = stride * n;
            for base in (0..x.len()).step_by(block) {
                for off in 0..stride {
                    for i in 0..n {
                        let mut acc = -q.exit_rate(i) * x[base + i * stride + off];
                        for &(j, r) in q.off_diagonal(i) {
                            acc += r * x[base + j * stride + off];
                        }
                        out[base + i * stride + off] += acc;
                    }
                }
            }
        }
    }
}

/// Shortest walk lengths (of length >= 1) from each product state to the
/// meeting set, by reverse breadth-first search. `None` marks states with
/// no such walk.
pub fn meeting_walk_distances(product: &DtmcProduct<'_>, set: &MeetingSet) -> Vec<Option<u32>> {
    let space = product.space();
    let in_set = set.membership(space);
    let mut dist: Vec<Option<u32>> = vec![None; space.size()];
    let mut queue = VecDeque::new();
    for (d, &is_meeting) in in_set.iter().enumerate() {
        if is_meeting {
            product.for_each_predecessor(d, |p| {
                if dist[p].is_none() {
                    dist[p] = Some(1);
                    queue.push_back(p);
                }
            });
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued states have distances");
        product.for_each_predecessor(u, |p| {
            if dist[p].is_none() {
                dist[p] = Some(du + 1);
                queue.push_back(p);
            }
        });
    }
    dist
}

/// Per-state flag: does a walk of length >= 1 exist from the state to the
/// meeting set on the Kronecker product digraph? All-true is exactly the
/// walk-existence characterization of all-finite meeting times.
pub fn reaches_meeting_set(
    factors: &[&TransitionMatrix],
    pursuers: usize,
    evaders: usize,
    budget: StateBudget,
) -> Result<Vec<bool>> {
    assert_eq!(factors.len(), pursuers + evaders);
    let product = DtmcProduct::new(factors, budget)?;
    let set = MeetingSet::new(pursuers, evaders);
    Ok(meeting_walk_distances(&product, &set)
        .iter()
        .map(Option::is_some)
        .collect())
}

/// Start states with finite expected meeting time: states from which every
/// state reachable without first entering the meeting set can still reach
/// the meeting set. Computed as the complement of the backward closure of
/// the non-reaching states over meeting-masked edges.
pub fn dtmc_finite_starts(product: &DtmcProduct<'_>, set: &MeetingSet) -> Vec<bool> {
    let space = product.space();
    let in_set = set.membership(space);
    let reaches: Vec<bool> = meeting_walk_distances(product, set)
        .iter()
        .map(Option::is_some)
        .collect();
    let mut infinite: Vec<bool> = reaches.iter().map(|&r| !r).collect();
    let mut queue: VecDeque<usize> = infinite
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(s, _)| s)
        .collect();
    while let Some(v) = queue.pop_front() {
        // Masked edges never enter the meeting set, so an infinite meeting
        // state does not contaminate its predecessors.
        if in_set[v] {
            continue;
        }
        product.for_each_predecessor(v, |u| {
            if !infinite[u] {
                infinite[u] = true;
                queue.push_back(u);
            }
        });
    }
    infinite.iter().map(|&b| !b).collect()
}

/// CTMC analogue of [`dtmc_finite_starts`]: meeting-set states are finite
/// by the boundary condition; other states are finite iff every state
/// reachable without entering the meeting set can reach the meeting set.
pub fn ctmc_finite_starts(product: &CtmcProduct<'_>, set: &MeetingSet) -> Vec<bool> {
    let space = product.space();
    let in_set = set.membership(space);
    let mut can_reach = vec![false; space.size()];
    let mut queue = VecDeque::new();
    for (d, &is_meeting) in in_set.iter().enumerate() {
        if is_meeting {
            product.for_each_predecessor(d, |p| {
                if !can_reach[p] {
                    can_reach[p] = true;
                    queue.push_back(p);
                }
            });
        }
    }
    while let Some(u) = queue.pop_front() {
        product.for_each_predecessor(u, |p| {
            if !can_reach[p] {
                can_reach[p] = true;
                queue.push_back(p);
            }
        });
    }
    let mut infinite: Vec<bool> = (0..space.size())
        .map(|s| !in_set[s] && !can_reach[s])
        .collect();
    let mut queue: VecDeque<usize> = infinite
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(s, _)| s)
        .collect();
    while let Some(v) = queue.pop_front() {
        product.for_each_predecessor(v, |u| {
            if !in_set[u] && !infinite[u] {
                infinite[u] = true;
                queue.push_back(u);
            }
        });
    }
    (0..space.size())
        .map(|s| in_set[s] || !infinite[s])
        .collect()
}

/// Is the substochastic matrix convergent (spectral radius < 1)?
/// True iff every state has a walk in the support to a state with row sum
/// below `1 - 1e-12`.
pub fn is_convergent(a: &DenseMatrix) -> bool {
    let n = a.n_rows();
    assert_eq!(n, a.n_cols(), "is_convergent needs a square matrix");
    let mut reached: Vec<bool> = (0..n)
        .map(|i| a.row(i).iter().sum::<f64>() < 1.0 - 1e-12)
        .collect();
    let mut queue: VecDeque<usize> = reached
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect();
    while let Some(v) = queue.pop_front() {
        for u in 0..n {
            if !reached[u] && a.get(u, v) > 0.0 {
                reached[u] = true;
                queue.push_back(u);
            }
        }
    }
    reached.into_iter().all(|b| b)
}

/// Dense Kronecker product of the factors (test/diagnostic helper; grows as
/// `n^(2(L+M))`).
pub fn dense_kronecker(factors: &[&TransitionMatrix], budget: StateBudget) -> Result<DenseMatrix> {
    let product = DtmcProduct::new(factors, budget)?;
    let size = product.space().size();
    let mut a = DenseMatrix::zeros(size, size);
    for s in 0..size {
        product.for_each_successor_weighted(s, |t, p| a.add_to(s, t, p));
    }
    Ok(a)
}

/// Dense `(P_1 ⊗ … ⊗ P_K)·E` with `E` zeroing the columns of meeting-set
/// states.
pub fn dense_masked_product(
    pursuers: &[&TransitionMatrix],
    evaders: &[&TransitionMatrix],
    budget: StateBudget,
) -> Result<DenseMatrix> {
    let factors: Vec<&TransitionMatrix> = pursuers.iter().chain(evaders).copied().collect();
    let product = DtmcProduct::new(&factors, budget)?;
    let set = MeetingSet::new(pursuers.len(), evaders.len());
    let in_set = set.membership(product.space());
    let size = product.space().size();
    let mut a = DenseMatrix::zeros(size, size);
    for s in 0..size {
        product.for_each_successor_weighted(s, |t, p| {
            if !in_set[t] {
                a.add_to(s, t, p);
            }
        });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TransitionMatrix;

    fn two_cycle() -> TransitionMatrix {
        TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn flatten_unflatten_round_trip() {
        let space = ProductSpace::new(3, 3, StateBudget::default()).unwrap();
        for s in 0..space.size() {
            assert_eq!(space.flatten(&space.unflatten(s)), s);
        }
        assert_eq!(space.flatten(&[1, 0, 2]), 9 + 2);
    }

    #[test]
    fn last_coordinate_cycles_fastest() {
        let space = ProductSpace::new(4, 2, StateBudget::default()).unwrap();
        assert_eq!(space.unflatten(0), vec![0, 0]);
        assert_eq!(space.unflatten(1), vec![0, 1]);
        assert_eq!(space.unflatten(4), vec![1, 0]);
    }

    #[test]
    fn budget_is_enforced() {
        let err = ProductSpace::new(10, 9, StateBudget(1_000_000)).unwrap_err();
        match err {
            Error::StateBudgetExceeded { budget, .. } => assert_eq!(budget, 1_000_000),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn meeting_set_pair_is_diagonal() {
        let space = ProductSpace::new(5, 2, StateBudget::default()).unwrap();
        let set = MeetingSet::new(1, 1);
        let members: Vec<usize> = set
            .membership(&space)
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(s, _)| s)
            .collect();
        let expected: Vec<usize> = (0..5).map(|k| k * 5 + k).collect();
        assert_eq!(members, expected);
    }

    #[test]
    fn single_factor_product_is_the_chain_itself() {
        let p = TransitionMatrix::from_dense(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        let product = DtmcProduct::new(&[&p], StateBudget::default()).unwrap();
        let mut succ0 = Vec::new();
        product.for_each_successor(0, |s| succ0.push(s));
        assert_eq!(succ0, vec![0, 1]);
        let mut succ1 = Vec::new();
        product.for_each_successor(1, |s| succ1.push(s));
        assert_eq!(succ1, vec![0]);
    }

    #[test]
    fn two_cycle_pair_adjacency_avoids_diagonal() {
        let p = two_cycle();
        let product = DtmcProduct::new(&[&p, &p], StateBudget::default()).unwrap();
        // (0,1) = state 1 steps only to (1,0) = state 2 and back.
        let mut succ = Vec::new();
        product.for_each_successor(1, |s| succ.push(s));
        assert_eq!(succ, vec![2]);
        let mut succ = Vec::new();
        product.for_each_successor(2, |s| succ.push(s));
        assert_eq!(succ, vec![1]);
    }

    #[test]
    fn reaches_two_cycles_false_off_diagonal() {
        let p = two_cycle();
        let r = reaches_meeting_set(&[&p, &p], 1, 1, StateBudget::default()).unwrap();
        assert_eq!(r, vec![true, false, false, true]);
    }

    #[test]
    fn reaches_matches_dense_transitive_closure_small_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let n = 3;
            let pp = random_chain(n, &mut rng);
            let pe = random_chain(n, &mut rng);
            let got = reaches_meeting_set(&[&pp, &pe], 1, 1, StateBudget::default()).unwrap();

            // Floyd-Warshall closure oracle over walks of length >= 1.
            let size = n * n;
            let mut adj = vec![vec![false; size]; size];
            for i in 0..n {
                for j in 0..n {
                    for &(k, _) in pp.row(i) {
                        for &(h, _) in pe.row(j) {
                            adj[i * n + j][k * n + h] = true;
                        }
                    }
                }
            }
            let mut closure = adj.clone();
            for m in 0..size {
                for a in 0..size {
                    if closure[a][m] {
                        for b in 0..size {
                            if closure[m][b] {
                                closure[a][b] = true;
                            }
                        }
                    }
                }
            }
            for s in 0..size {
                let expected = (0..n).any(|k| closure[s][k * n + k]);
                assert_eq!(got[s], expected, "state {s}");
            }
            let _ = rng.random::<u64>();
        }
    }

    fn random_chain(n: usize, rng: &mut impl rand::Rng) -> TransitionMatrix {
        loop {
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let mut row = Vec::new();
                for j in 0..n {
                    if rng.random::<f64>() < 0.5 {
                        row.push((j, rng.random::<f64>() + 0.05));
                    }
                }
                if row.is_empty() {
                    row.push((rng.random_range(0..n), 1.0));
                }
                let total: f64 = row.iter().map(|e| e.1).sum();
                for e in &mut row {
                    e.1 /= total;
                }
                // Renormalize the largest entry so the row sums to exactly 1.
                let sum: f64 = row.iter().map(|e| e.1).sum();
                let imax = row
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                    .map(|(i, _)| i)
                    .unwrap();
                row[imax].1 += 1.0 - sum;
                rows.push(row);
            }
            if let Ok(p) = TransitionMatrix::from_rows(n, rows) {
                return p;
            }
        }
    }

    #[test]
    fn ctmc_single_factor_adjacency_is_off_diagonal_support() {
        let q = RateMatrix::from_dense(&[vec![-1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let product = CtmcProduct::new(&[&q], StateBudget::default()).unwrap();
        let mut succ = Vec::new();
        product.for_each_successor(0, |s, r| succ.push((s, r)));
        assert_eq!(succ, vec![(1, 1.0)]);
        let mut succ = Vec::new();
        product.for_each_successor(1, |s, _| succ.push(s));
        assert!(succ.is_empty());
    }

    #[test]
    fn ctmc_pair_expands_kronecker_sum_by_hand() {
        let q = RateMatrix::from_dense(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let product = CtmcProduct::new(&[&q, &q], StateBudget::default()).unwrap();
        // State (0,1) = 1: edges to (1,1) = 3 and (0,0) = 0, both rate 1.
        let mut succ = Vec::new();
        product.for_each_successor(1, |s, r| succ.push((s, r)));
        succ.sort_unstable_by_key(|e| e.0);
        assert_eq!(succ, vec![(0, 1.0), (3, 1.0)]);
        assert_eq!(product.exit_rate(1), 2.0);
    }

    #[test]
    fn ctmc_edges_change_exactly_one_coordinate() {
        let q = RateMatrix::from_dense(&[
            vec![-3.0, 1.0, 2.0],
            vec![0.5, -0.5, 0.0],
            vec![1.0, 1.0, -2.0],
        ])
        .unwrap();
        let product = CtmcProduct::new(&[&q, &q, &q], StateBudget::default()).unwrap();
        let space = product.space();
        for s in 0..space.size() {
            let tu = space.unflatten(s);
            product.for_each_successor(s, |t, _| {
                let tv = space.unflatten(t);
                let changed = tu.iter().zip(&tv).filter(|(a, b)| a != b).count();
                assert_eq!(changed, 1, "{tu:?} -> {tv:?}");
            });
        }
    }

    #[test]
    fn convergent_examples() {
        assert!(is_convergent(&DenseMatrix::from_rows(vec![vec![0.5]])));
        assert!(!is_convergent(&DenseMatrix::from_rows(vec![
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ])));
    }

    #[test]
    fn convergent_agrees_with_power_method_on_random_masked_products() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = 3;
            let pp = random_chain(n, &mut rng);
            let pe = random_chain(n, &mut rng);
            let a = dense_masked_product(&[&pp], &[&pe], StateBudget::default()).unwrap();
            let got = is_convergent(&a);
            // Power-method oracle: iterate the all-ones vector without
            // normalizing. A non-convergent substochastic matrix keeps a
            // closed stochastic block where A^k·1 stays pinned at 1, while
            // a convergent one decays geometrically to zero.
            let size = a.n_rows();
            let mut v = vec![1.0; size];
            let mut decided = None;
            for it in 0..200_000 {
                let mut next = vec![0.0; size];
                a.mul_vec(&v, &mut next);
                v = next;
                let norm = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                if norm < 1e-8 {
                    decided = Some(true);
                    break;
                }
                if it >= 5000 && norm > 1.0 - 1e-9 {
                    decided = Some(false);
                    break;
                }
            }
            let expected = decided.expect("power iteration decided the spectral radius");
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn equal_length_walks_compose_on_the_product() {
        // Walks of equal length in each factor compose to one product walk.
        let p = TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![0.5, 0.5]]).unwrap();
        let q = TransitionMatrix::from_dense(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        let product = DtmcProduct::new(&[&p, &q], StateBudget::default()).unwrap();
        let space = product.space();
        // Factor walks 0 -> 1 -> 0 (in p) and 0 -> 1 -> 0 (in q), length 2.
        // The product must contain (0,0) -> (1,1) -> (0,0).
        let s00 = space.flatten(&[0, 0]);
        let s11 = space.flatten(&[1, 1]);
        let mut succ = Vec::new();
        product.for_each_successor(s00, |s| succ.push(s));
        assert!(succ.contains(&s11));
        let mut succ2 = Vec::new();
        product.for_each_successor(s11, |s| succ2.push(s));
        assert!(succ2.contains(&s00));
    }
}
