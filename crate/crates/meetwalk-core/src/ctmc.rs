//! Continuous-time meeting-time solvers.
//!
//! Independent continuous-time walkers form a joint chain whose generator
//! is the Kronecker sum of the factor rate matrices; the expected first
//! meeting time is the expected hitting time of the meeting set on that
//! joint chain:
//!
//! ```text
//! m_s = 0                       for s in the meeting set,
//! -(Q m)_s = 1                  otherwise,
//! ```
//!
//! equivalently `(E(I − Q) − I)·m = E·1` with `E` zeroing meeting-set rows.
//! Co-located starts therefore cost zero, unlike the discrete-time clock
//! which always pays the first step. Simultaneous jumps have probability
//! zero, so exactly one coordinate changes per transition and meeting by
//! swapping places cannot occur.

use crate::dtmc::SolveOptions;
use crate::error::{Error, Result};
use crate::graph::RateMatrix;
use crate::linalg::{bicgstab, lu_factor, DenseMatrix};
use crate::product::{ctmc_finite_starts, CtmcProduct, MeetingSet};
use crate::result::{MeetingTimes, MeetingValue};

/// Expected meeting times of a continuous-time pursuer/evader pair.
pub fn ctmc_meeting_times(pursuer: &RateMatrix, evader: &RateMatrix) -> Result<MeetingTimes> {
    ctmc_meeting_times_with(pursuer, evader, &SolveOptions::default())
}

/// [`ctmc_meeting_times`] with explicit solver options.
pub fn ctmc_meeting_times_with(
    pursuer: &RateMatrix,
    evader: &RateMatrix,
    opts: &SolveOptions,
) -> Result<MeetingTimes> {
    ctmc_group_meeting_times_with(
        std::slice::from_ref(pursuer),
        std::slice::from_ref(evader),
        opts,
    )
}

/// Expected group meeting times for `L` continuous-time pursuers and `M`
/// evaders.
pub fn ctmc_group_meeting_times(
    pursuers: &[RateMatrix],
    evaders: &[RateMatrix],
) -> Result<MeetingTimes> {
    ctmc_group_meeting_times_with(pursuers, evaders, &SolveOptions::default())
}

/// [`ctmc_group_meeting_times`] with explicit solver options.
pub fn ctmc_group_meeting_times_with(
    pursuers: &[RateMatrix],
    evaders: &[RateMatrix],
    opts: &SolveOptions,
) -> Result<MeetingTimes> {
    if pursuers.is_empty() || evaders.is_empty() {
        return Err(Error::EmptyChainList);
    }
    let factors: Vec<&RateMatrix> = pursuers.iter().chain(evaders).collect();
    let product = CtmcProduct::new(&factors, opts.budget)?;
    let set = MeetingSet::new(pursuers.len(), evaders.len());
    let (values, finite, residual) = solve_hitting_system(&product, &set, opts)?;
    Ok(MeetingTimes::new(
        pursuers.len(),
        evaders.len(),
        product.space().n(),
        values,
        finite,
        residual,
    ))
}

fn solve_hitting_system(
    product: &CtmcProduct<'_>,
    set: &MeetingSet,
    opts: &SolveOptions,
) -> Result<(Vec<MeetingValue>, Vec<bool>, f64)> {
    let space = product.space();
    let size = space.size();
    let in_set = set.membership(space);
    let finite = ctmc_finite_starts(product, set);
    // Unknowns: finite states off the boundary.
    let unknowns: Vec<usize> = (0..size).filter(|&s| finite[s] && !in_set[s]).collect();

    let mut x_full = vec![0.0; size];
    if unknowns.is_empty() {
        // Only boundary values (0) and infinities remain.
    } else if size <= opts.dense_threshold {
        solve_dense(product, &in_set, &unknowns, &mut x_full)?;
    } else {
        solve_iterative(product, &in_set, &finite, opts, &mut x_full)?;
    }

    let residual = hitting_residual(product, &in_set, &finite, &x_full);
    let values = (0..size)
        .map(|s| {
            if in_set[s] {
                MeetingValue::Finite(0.0)
            } else if finite[s] {
                MeetingValue::Finite(x_full[s])
            } else {
                MeetingValue::Infinite
            }
        })
        .collect();
    Ok((values, finite, residual))
}

fn solve_dense(
    product: &CtmcProduct<'_>,
    in_set: &[bool],
    unknowns: &[usize],
    x_full: &mut [f64],
) -> Result<()> {
    let m = unknowns.len();
    let mut sub_of = vec![usize::MAX; in_set.len()];
    for (k, &s) in unknowns.iter().enumerate() {
        sub_of[s] = k;
    }
    // Rows of -Q restricted to the unknowns; jumps into the meeting set
    // contribute nothing (boundary value 0).
    let mut a = DenseMatrix::zeros(m, m);
    for (row, &s) in unknowns.iter().enumerate() {
        a.set(row, row, product.exit_rate(s));
        product.for_each_successor(s, |t, rate| {
            if !in_set[t] {
                debug_assert_ne!(
                    sub_of[t],
                    usize::MAX,
                    "successors of finite states are finite"
                );
                a.add_to(row, sub_of[t], -rate);
            }
        });
    }
    let lu = lu_factor(a.clone())
        .map_err(|_| Error::Solver("restricted hitting system reported singular".into()))?;
    let mut x = vec![1.0; m];
    lu.solve_in_place(&mut x);
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
    product: &CtmcProduct<'_>,
    in_set: &[bool],
    finite: &[bool],
    opts: &SolveOptions,
    x_full: &mut [f64],
) -> Result<()> {
    let size = x_full.len();
    let mut q_of = vec![0.0; size];
    let unknown: Vec<bool> = (0..size).map(|s| finite[s] && !in_set[s]).collect();
    let b: Vec<f64> = (0..size)
        .map(|s| if unknown[s] { 1.0 } else { 0.0 })
        .collect();

    let mut apply = |x: &[f64], y: &mut [f64]| {
        product.apply(x, &mut q_of);
        for s in 0..size {
            y[s] = if unknown[s] { -q_of[s] } else { x[s] };
        }
    };

    // Scale-aware tolerance: the unknown block of -Q has row magnitudes of
    // the order of the exit rates, and the solution scales like 1/rate.
    x_full.fill(0.0);
    let outcome = bicgstab(&mut apply, &b, x_full, opts.tolerance, opts.max_iterations);
    if outcome.converged {
        return Ok(());
    }

    // Jacobi fallback: m_s <- (1 + sum of off-diagonal inflow) / exit(s).
    x_full.fill(0.0);
    let exit: Vec<f64> = (0..size).map(|s| product.exit_rate(s)).collect();
    let remaining = opts
        .max_iterations
        .saturating_sub(outcome.iterations)
        .max(1);
    let mut q_buf = vec![0.0; size];
    for _ in 0..remaining {
        product.apply(x_full, &mut q_buf);
        let mut delta = 0.0_f64;
        for s in 0..size {
            if unknown[s] {
                // (Q x)_s = -exit_s x_s + inflow; solve row for x_s.
                let inflow = q_buf[s] + exit[s] * x_full[s];
                let next = (1.0 + inflow) / exit[s];
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

/// Max-norm residual of `-(Q m) = 1` over finite off-boundary states.
fn hitting_residual(
    product: &CtmcProduct<'_>,
    in_set: &[bool],
    finite: &[bool],
    x_full: &[f64],
) -> f64 {
    let size = x_full.len();
    let mut q_of = vec![0.0; size];
    product.apply(x_full, &mut q_of);
    let mut res = 0.0_f64;
    for s in 0..size {
        if finite[s] && !in_set[s] {
            res = res.max((1.0 + q_of[s]).abs());
        }
    }
    res
}

/// Expected hitting times of a single continuous-time chain into `targets`:
/// zero on targets, infinite where no walk reaches them.
pub fn ctmc_hitting_times(q: &RateMatrix, targets: &[usize]) -> Result<Vec<MeetingValue>> {
    let n = q.n();
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let mut is_target = vec![false; n];
    for &t in targets {
        if t >= n {
            return Err(Error::NodeOutOfRange { index: t + 1, n });
        }
        is_target[t] = true;
    }

    // Reverse reachability to the target set.
    let mut can_reach = is_target.clone();
    let support = q.support();
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, row) in support.iter().enumerate() {
        for &j in row {
            reverse[j].push(i);
        }
    }
    let mut queue: std::collections::VecDeque<usize> = targets.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for &u in &reverse[v] {
            if !can_reach[u] {
                can_reach[u] = true;
                queue.push_back(u);
            }
        }
    }
    // Backward closure of the unreachable region over target-masked edges.
    let mut infinite: Vec<bool> = (0..n).map(|s| !is_target[s] && !can_reach[s]).collect();
    let mut queue: std::collections::VecDeque<usize> = infinite
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(s, _)| s)
        .collect();
    while let Some(v) = queue.pop_front() {
        for &u in &reverse[v] {
            if !is_target[u] && !infinite[u] {
                infinite[u] = true;
                queue.push_back(u);
            }
        }
    }

    let unknowns: Vec<usize> = (0..n).filter(|&s| !is_target[s] && !infinite[s]).collect();
    let mut values = vec![0.0; n];
    if !unknowns.is_empty() {
        let m = unknowns.len();
        let mut sub_of = vec![usize::MAX; n];
        for (k, &s) in unknowns.iter().enumerate() {
            sub_of[s] = k;
        }
        let mut a = DenseMatrix::zeros(m, m);
        for (row, &s) in unknowns.iter().enumerate() {
            a.set(row, row, q.exit_rate(s));
            for &(t, rate) in q.off_diagonal(s) {
                if !is_target[t] {
                    a.add_to(row, sub_of[t], -rate);
                }
            }
        }
        let lu = lu_factor(a)
            .map_err(|_| Error::Solver("hitting-time system reported singular".into()))?;
        let mut x = vec![1.0; m];
        lu.solve_in_place(&mut x);
        for (k, &s) in unknowns.iter().enumerate() {
            values[s] = x[k];
        }
    }

    Ok((0..n)
        .map(|s| {
            if infinite[s] {
                MeetingValue::Infinite
            } else {
                MeetingValue::Finite(values[s])
            }
        })
        .collect())
}
