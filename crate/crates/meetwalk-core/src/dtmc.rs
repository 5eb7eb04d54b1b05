//! Discrete-time meeting-time solvers.
//!
//! The expected meeting times of independent walkers satisfy
//! `m = 1 + (P_1 ⊗ … ⊗ P_K)·E·m`, where `E` zeroes the columns of
//! meeting-set states. When every start can almost surely meet, the system
//! has the unique solution `vec(M) = (I − (⊗P)E)^{-1}·1`; otherwise the
//! system is restricted to the set of starts with finite expectation (the
//! backward-closed region that cannot drift into a non-meeting trap) and
//! the remaining starts are marked infinite.
//!
//! Meeting is evaluated from step one, so a start that is already
//! co-located still pays at least one step.

use crate::analysis;
use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;
use crate::linalg::{bicgstab, lu_factor, DenseMatrix};
use crate::product::{dtmc_finite_starts, DtmcProduct, MeetingSet, StateBudget};
use crate::result::{MeetingTimes, MeetingValue};

/// Solver knobs. The defaults match the documented behavior: direct dense
/// solve up to 5000 product states, matrix-free iteration beyond it.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Largest product dimension solved by dense LU.
    pub dense_threshold: usize,
    /// Max-norm residual target of iterative solves.
    pub tolerance: f64,
    /// Iteration cap for iterative solves.
    pub max_iterations: usize,
    /// Product-state budget.
    pub budget: StateBudget,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            dense_threshold: 5000,
            tolerance: 1e-10,
            max_iterations: 100_000,
            budget: StateBudget::default(),
        }
    }
}

/// Expected meeting times for a pursuer/evader pair from every start pair.
pub fn meeting_times(
    pursuer: &TransitionMatrix,
    evader: &TransitionMatrix,
) -> Result<MeetingTimes> {
    meeting_times_with(pursuer, evader, &SolveOptions::default())
}

/// [`meeting_times`] with explicit solver options.
pub fn meeting_times_with(
    pursuer: &TransitionMatrix,
    evader: &TransitionMatrix,
    opts: &SolveOptions,
) -> Result<MeetingTimes> {
    group_meeting_times_with(
        std::slice::from_ref(pursuer),
        std::slice::from_ref(evader),
        opts,
    )
}

/// Meeting time from the single start pair `(i, j)`, 0-based: the `(i, j)`
/// selector applied to the restricted solve.
pub fn meeting_time_pair(
    pursuer: &TransitionMatrix,
    evader: &TransitionMatrix,
    i: usize,
    j: usize,
) -> Result<MeetingValue> {
    let n = pursuer.n();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::NodeOutOfRange { index: idx + 1, n });
        }
    }
    let result = meeting_times(pursuer, evader)?;
    Ok(result.pair_value(i, j))
}

/// Mean meeting time `(π_p ⊗ π_e)ᵀ vec(M)`: meeting times averaged over
/// the stationary start distributions. Defined for pairs of single
/// absorbing chains with overlapping absorbing classes and coprime periods.
pub fn mean_meeting_time(pursuer: &TransitionMatrix, evader: &TransitionMatrix) -> Result<f64> {
    mean_group_meeting_time(std::slice::from_ref(pursuer), std::slice::from_ref(evader))
}

/// Mean group meeting time: inner product of the Kronecker product of all
/// stationary distributions with the table of group meeting times.
pub fn mean_group_meeting_time(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
) -> Result<f64> {
    if pursuers.is_empty() || evaders.is_empty() {
        return Err(Error::EmptyChainList);
    }
    if !analysis::tuple_sa_overlap(pursuers, evaders) {
        return Err(Error::UndefinedMean);
    }
    let dists: Vec<Vec<f64>> = pursuers
        .iter()
        .chain(evaders)
        .map(analysis::stationary_distribution)
        .collect::<Result<_>>()
        .map_err(|_| Error::UndefinedMean)?;
    let result = group_meeting_times(pursuers, evaders)?;
    debug_assert!(result.all_finite(), "SA-overlap tuples meet almost surely");
    let n = result.n();
    let k = dists.len();
    let mut tuple = vec![0usize; k];
    let mut mean = 0.0;
    for (s, value) in result.values().iter().enumerate() {
        let mut idx = s;
        for a in (0..k).rev() {
            tuple[a] = idx % n;
            idx /= n;
        }
        let weight: f64 = tuple.iter().zip(&dists).map(|(&t, d)| d[t]).product();
        match value {
            MeetingValue::Finite(v) => mean += weight * v,
            MeetingValue::Infinite => {
                if weight > 0.0 {
                    return Err(Error::UndefinedMean);
                }
            }
        }
    }
    Ok(mean)
}

/// Pairwise hitting times of an irreducible chain, computed as the meeting
/// times of a frozen agent (identity chain) against the mover.
/// `time_from_to(j, i)` is the expected number of steps for a walker
/// started at `j` to first occupy `i`; the diagonal holds mean return
/// times.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTimes {
    n: usize,
    /// `values[i * n + j]` = expected time from `j` to `i`.
    values: Vec<f64>,
}

impl HittingTimes {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Expected time to travel from `from` to `to` (0-based nodes).
    pub fn time_from_to(&self, from: usize, to: usize) -> f64 {
        assert!(from < self.n && to < self.n);
        self.values[to * self.n + from]
    }

    /// Worst pairwise hitting time over distinct node pairs.
    pub fn max_pairwise(&self) -> f64 {
        let mut best = 0.0_f64;
        for target in 0..self.n {
            for source in 0..self.n {
                if source != target {
                    best = best.max(self.values[target * self.n + source]);
                }
            }
        }
        best
    }

    /// Dense layout: row `i`, column `j` holds the time from `j` to `i`.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.values[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

/// Pairwise hitting times via the frozen-evader meeting solve.
pub fn hitting_times(p: &TransitionMatrix) -> Result<HittingTimes> {
    hitting_times_with(p, &SolveOptions::default())
}

/// [`hitting_times`] with explicit solver options.
pub fn hitting_times_with(p: &TransitionMatrix, opts: &SolveOptions) -> Result<HittingTimes> {
    let n = p.n();
    if !analysis::decompose(p).is_irreducible(n) {
        return Err(Error::Reducible);
    }
    let frozen = TransitionMatrix::identity(n);
    let meeting = meeting_times_with(&frozen, p, opts)?;
    let values = meeting
        .values()
        .iter()
        .map(|v| {
            v.finite()
                .expect("irreducible chain reaches every frozen target")
        })
        .collect();
    Ok(HittingTimes { n, values })
}

/// Expected group meeting times for `L` pursuers and `M` evaders from
/// every start tuple.
pub fn group_meeting_times(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
) -> Result<MeetingTimes> {
    group_meeting_times_with(pursuers, evaders, &SolveOptions::default())
}

/// [`group_meeting_times`] with explicit solver options.
pub fn group_meeting_times_with(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
    opts: &SolveOptions,
) -> Result<MeetingTimes> {
    if pursuers.is_empty() || evaders.is_empty() {
        return Err(Error::EmptyChainList);
    }
    let factors: Vec<&TransitionMatrix> = pursuers.iter().chain(evaders).collect();
    let product = DtmcProduct::new(&factors, opts.budget)?;
    let set = MeetingSet::new(pursuers.len(), evaders.len());
    let (values, finite, residual) = solve_masked_system(&product, &set, opts)?;
    Ok(MeetingTimes::new(
        pursuers.len(),
        evaders.len(),
        product.space().n(),
        values,
        finite,
        residual,
    ))
}

/// Solve `m = 1 + (⊗P)·E·m` restricted to the finite-start region.
fn solve_masked_system(
    product: &DtmcProduct<'_>,
    set: &MeetingSet,
    opts: &SolveOptions,
) -> Result<(Vec<MeetingValue>, Vec<bool>, f64)> {
    let space = product.space();
    let size = space.size();
    let in_set = set.membership(space);
    let finite = dtmc_finite_starts(product, set);
    let unknowns: Vec<usize> = (0..size).filter(|&s| finite[s]).collect();

    if unknowns.is_empty() {
        let values = vec![MeetingValue::Infinite; size];
        return Ok((values, finite, 0.0));
    }

    let mut x_full = vec![0.0; size];
    if size <= opts.dense_threshold {
        solve_dense(product, &in_set, &unknowns, &mut x_full)?;
    } else {
        solve_iterative(product, &in_set, &finite, opts, &mut x_full)?;
    }

    let residual = masked_residual(product, &in_set, &finite, &x_full);
    let values = (0..size)
        .map(|s| {
            if finite[s] {
                MeetingValue::Finite(x_full[s])
            } else {
                MeetingValue::Infinite
            }
        })
        .collect();
    Ok((values, finite, residual))
}

fn solve_dense(
    product: &DtmcProduct<'_>,
    in_set: &[bool],
    unknowns: &[usize],
    x_full: &mut [f64],
) -> Result<()> {
    let m = unknowns.len();
    let mut sub_of = vec![usize::MAX; in_set.len()];
    for (k, &s) in unknowns.iter().enumerate() {
        sub_of[s] = k;
    }
    let mut a = DenseMatrix::identity(m);
    for (row, &s) in unknowns.iter().enumerate() {
        product.for_each_successor_weighted(s, |t, p| {
            if !in_set[t] {
                debug_assert_ne!(sub_of[t], usize::MAX, "masked successors stay finite");
                a.add_to(row, sub_of[t], -p);
            }
        });
    }
    let lu = lu_factor(a.clone())
        .map_err(|_| Error::Solver("restricted meeting-time system reported singular".into()))?;
    let mut x = vec![1.0; m];
    lu.solve_in_place(&mut x);
    // One step of iterative refinement keeps residuals near machine level
    // on larger systems.
    let mut r = vec![0.0; m];
    a.mul_vec(&x, &mut r);
    for v in r.iter_mut() {
        *v = 1.0 - *v;
    }
    lu.solve_in_place(&mut r);
    for (xi, di) in x.iter_mut().zip(&r) {
        *xi += di;
    }
    for (k, &s) in unknowns.iter().enumerate() {
        x_full[s] = x[k];
    }
    Ok(())
}

fn solve_iterative(
    product: &DtmcProduct<'_>,
    in_set: &[bool],
    finite: &[bool],
    opts: &SolveOptions,
    x_full: &mut [f64],
) -> Result<()> {
    let size = x_full.len();
    let mut masked = vec![0.0; size];
    let mut kron = vec![0.0; size];
    let mut scratch = vec![0.0; size];
    let b: Vec<f64> = (0..size)
        .map(|s| if finite[s] { 1.0 } else { 0.0 })
        .collect();

    let mut apply = |x: &[f64], y: &mut [f64]| {
        for s in 0..size {
            masked[s] = if in_set[s] { 0.0 } else { x[s] };
        }
        product.apply(&masked, &mut kron, &mut scratch);
        for s in 0..size {
            y[s] = if finite[s] { x[s] - kron[s] } else { x[s] };
        }
    };

    x_full.copy_from_slice(&b);
    let outcome = bicgstab(&mut apply, &b, x_full, opts.tolerance, opts.max_iterations);
    if outcome.converged {
        return Ok(());
    }

    // Fall back to the monotone fixed-point iteration m <- 1 + (⊗P)E m,
    // which converges whenever the restricted system is solvable.
    x_full.fill(0.0);
    let remaining = opts
        .max_iterations
        .saturating_sub(outcome.iterations)
        .max(1);
    for _ in 0..remaining {
        for s in 0..size {
            masked[s] = if in_set[s] { 0.0 } else { x_full[s] };
        }
        product.apply(&masked, &mut kron, &mut scratch);
        let mut delta = 0.0_f64;
        for s in 0..size {
            if finite[s] {
                let next = 1.0 + kron[s];
                delta = delta.max((next - x_full[s]).abs());
                x_full[s] = next;
            }
        }
        if delta <= opts.tolerance * 0.5 {
            break;
        }
    }
    Ok(())
}

/// Max-norm residual of `m − 1 − (⊗P)E m` over finite starts.
fn masked_residual(
    product: &DtmcProduct<'_>,
    in_set: &[bool],
    finite: &[bool],
    x_full: &[f64],
) -> f64 {
    let size = x_full.len();
    let mut masked = vec![0.0; size];
    for s in 0..size {
        masked[s] = if in_set[s] { 0.0 } else { x_full[s] };
    }
    let mut kron = vec![0.0; size];
    let mut scratch = vec![0.0; size];
    product.apply(&masked, &mut kron, &mut scratch);
    let mut res = 0.0_f64;
    for s in 0..size {
        if finite[s] {
            res = res.max((x_full[s] - 1.0 - kron[s]).abs());
        }
    }
    res
}
