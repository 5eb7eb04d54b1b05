//! Monte Carlo estimation of meeting times, discrete and continuous.
//!
//! Trials are independent and reproducible: each trial draws from its own
//! ChaCha8 substream selected by `(seed, trial index)`, so results do not
//! depend on scheduling. Trials run in parallel; aggregation collects
//! per-trial outcomes in trial order and reduces them with pairwise
//! summation, making the estimate bit-stable run to run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{RateMatrix, TransitionMatrix};
use crate::linalg::pairwise_sum;

/// Monte Carlo estimate of an expected meeting time.
///
/// Censored trials (those that hit the horizon before meeting) are
/// excluded from the mean and counted separately; any censoring marks the
/// estimate as a lower bound only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationEstimate {
    /// Sample mean over uncensored trials; absent when every trial was
    /// censored.
    pub mean: Option<f64>,
    /// Sample standard deviation over `√(uncensored trials)`; absent with
    /// fewer than two uncensored trials.
    pub std_error: Option<f64>,
    pub trials: u64,
    pub censored: u64,
    /// Max steps (discrete) or max time (continuous).
    pub horizon: f64,
    /// Set when censored > 0: the mean underestimates the true value.
    pub lower_bound_only: bool,
}

fn aggregate(outcomes: Vec<Option<f64>>, horizon: f64) -> SimulationEstimate {
    let trials = outcomes.len() as u64;
    let times: Vec<f64> = outcomes.into_iter().flatten().collect();
    let censored = trials - times.len() as u64;
    let mean = if times.is_empty() {
        None
    } else {
        Some(pairwise_sum(&times) / times.len() as f64)
    };
    let std_error = match (mean, times.len()) {
        (Some(m), k) if k >= 2 => {
            let sq: Vec<f64> = times.iter().map(|t| (t - m) * (t - m)).collect();
            let var = pairwise_sum(&sq) / (k as f64 - 1.0);
            Some((var / k as f64).sqrt())
        }
        _ => None,
    };
    SimulationEstimate {
        mean,
        std_error,
        trials,
        censored,
        horizon,
        lower_bound_only: censored > 0,
    }
}

fn validate_agents<T>(
    pursuers: &[T],
    evaders: &[T],
    n_of: impl Fn(&T) -> usize,
    start: &[usize],
    trials: u64,
) -> Result<usize> {
    if pursuers.is_empty() || evaders.is_empty() {
        return Err(Error::EmptyChainList);
    }
    let n = n_of(&pursuers[0]);
    for a in pursuers.iter().chain(evaders) {
        if n_of(a) != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: n_of(a),
            });
        }
    }
    if start.len() != pursuers.len() + evaders.len() {
        return Err(Error::InvalidParameter(format!(
            "start tuple has {} entries, expected {}",
            start.len(),
            pursuers.len() + evaders.len()
        )));
    }
    for &s in start {
        if s >= n {
            return Err(Error::NodeOutOfRange { index: s + 1, n });
        }
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    Ok(n)
}

#[inline]
fn sample_row(row: &[(usize, f64)], u: f64) -> usize {
    let mut acc = 0.0;
    for &(j, p) in row {
        acc += p;
        if u < acc {
            return j;
        }
    }
    row.last().expect("stochastic rows are nonempty").0
}

fn any_meeting(positions: &[usize], l: usize) -> bool {
    let (p, e) = positions.split_at(l);
    p.iter().any(|i| e.contains(i))
}

/// Simulate synchronous discrete-time walkers until some pursuer and
/// evader co-locate at a step `t >= 1`, or `horizon` steps elapse.
pub fn simulate_dtmc(
    pursuers: &[TransitionMatrix],
    evaders: &[TransitionMatrix],
    start: &[usize],
    trials: u64,
    horizon: u64,
    seed: u64,
) -> Result<SimulationEstimate> {
    validate_agents(pursuers, evaders, |m| m.n(), start, trials)?;
    let l = pursuers.len();
    let chains: Vec<&TransitionMatrix> = pursuers.iter().chain(evaders).collect();

    let outcomes: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut pos = start.to_vec();
            for t in 1..=horizon {
                for (a, chain) in chains.iter().enumerate() {
                    pos[a] = sample_row(chain.row(pos[a]), rng.random::<f64>());
                }
                if any_meeting(&pos, l) {
                    return Some(t as f64);
                }
            }
            None
        })
        .collect();
    Ok(aggregate(outcomes, horizon as f64))
}

/// Simulate independent continuous-time walkers: each agent carries an
/// exponential clock at its current exit rate, the earliest clock fires a
/// single jump, and the trial ends when the occupancy tuple first enters
/// the meeting set. A co-located start ends at time zero.
pub fn simulate_ctmc(
    pursuers: &[RateMatrix],
    evaders: &[RateMatrix],
    start: &[usize],
    trials: u64,
    horizon: f64,
    seed: u64,
) -> Result<SimulationEstimate> {
    validate_agents(pursuers, evaders, |m| m.n(), start, trials)?;
    if horizon < 0.0 || horizon.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} must be nonnegative"
        )));
    }
    let l = pursuers.len();
    let chains: Vec<&RateMatrix> = pursuers.iter().chain(evaders).collect();

    let outcomes: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut pos = start.to_vec();
            if any_meeting(&pos, l) {
                return Some(0.0);
            }
            let draw_exp = |rng: &mut ChaCha8Rng, rate: f64| -> f64 {
                if rate > 0.0 {
                    let u: f64 = rng.random();
                    -(1.0 - u).ln() / rate
                } else {
                    f64::INFINITY
                }
            };
            let mut next: Vec<f64> = chains
                .iter()
                .zip(&pos)
                .map(|(q, &p)| draw_exp(&mut rng, q.exit_rate(p)))
                .collect();
            loop {
                let (agent, &t) = next
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("at least one agent");
                if !t.is_finite() || t > horizon {
                    return None;
                }
                let q = chains[agent];
                let exit = q.exit_rate(pos[agent]);
                let u: f64 = rng.random::<f64>() * exit;
                let mut acc = 0.0;
                let row = q.off_diagonal(pos[agent]);
                let mut target = row.last().expect("positive exit rate has a jump").0;
                for &(j, rate) in row {
                    acc += rate;
                    if u < acc {
                        target = j;
                        break;
                    }
                }
                pos[agent] = target;
                if any_meeting(&pos, l) {
                    return Some(t);
                }
                next[agent] = t + draw_exp(&mut rng, q.exit_rate(target));
            }
        })
        .collect();
    Ok(aggregate(outcomes, horizon))
}
