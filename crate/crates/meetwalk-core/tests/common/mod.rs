//! Shared test support: seeded random chain generators and independent
//! oracles (classical first-passage solve, plain Gaussian elimination).
//! Oracles here deliberately avoid the crate's solver machinery.
#![allow(dead_code)] // each test binary uses a different subset

use meetwalk_core::graph::{RateMatrix, TransitionMatrix};
use rand::Rng;

/// Random row-stochastic matrix with Bernoulli(density) support and at
/// least one entry per row; weights renormalized to sum exactly to 1.
pub fn random_chain(n: usize, density: f64, rng: &mut impl Rng) -> TransitionMatrix {
    loop {
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row: Vec<(usize, f64)> = Vec::new();
            for j in 0..n {
                if rng.random::<f64>() < density {
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

/// Random support pattern (each row a nonempty subset) with equal weights.
pub fn random_support_chain(n: usize, rng: &mut impl Rng) -> TransitionMatrix {
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut cols: Vec<usize> = (0..n).filter(|_| rng.random::<bool>()).collect();
        if cols.is_empty() {
            cols.push(rng.random_range(0..n));
        }
        let p = 1.0 / cols.len() as f64;
        let mut row: Vec<(usize, f64)> = cols.into_iter().map(|j| (j, p)).collect();
        let sum: f64 = row.iter().map(|e| e.1).sum();
        row[0].1 += 1.0 - sum;
        rows.push(row);
    }
    TransitionMatrix::from_rows(n, rows).expect("rows normalized")
}

/// Random rate matrix with Bernoulli(density) off-diagonal support.
pub fn random_rates(n: usize, density: f64, rng: &mut impl Rng) -> RateMatrix {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::new();
        for j in 0..n {
            if j != i && rng.random::<f64>() < density {
                row.push((j, rng.random::<f64>() * 2.0 + 0.1));
            }
        }
        rows.push(row);
    }
    RateMatrix::from_off_diagonal(n, rows).expect("valid off-diagonal rows")
}

/// Gaussian elimination with partial pivoting, written independently of
/// the crate's LU. Returns None if a pivot collapses.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[piv][k].abs() < 1e-13 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in (k + 1)..n {
            acc -= a[k][j] * b[j];
        }
        b[k] = acc / a[k][k];
    }
    Some(b)
}

/// Classical first-passage oracle: expected steps from every source to
/// `target`, by deleting the target row/column and solving
/// `(I - P_sub) h = 1`. Entry at the target itself is unset (0).
pub fn classical_hitting_to(p: &TransitionMatrix, target: usize) -> Vec<f64> {
    let n = p.n();
    let others: Vec<usize> = (0..n).filter(|&i| i != target).collect();
    let m = others.len();
    let mut a = vec![vec![0.0; m]; m];
    let pos = |node: usize| others.iter().position(|&o| o == node);
    for (r, &i) in others.iter().enumerate() {
        a[r][r] += 1.0;
        for &(j, v) in p.row(i) {
            if let Some(c) = pos(j) {
                a[r][c] -= v;
            }
        }
    }
    let sol = gauss_solve(a, vec![1.0; m]).expect("irreducible chain has finite hitting times");
    let mut h = vec![0.0; n];
    for (r, &i) in others.iter().enumerate() {
        h[i] = sol[r];
    }
    h
}
