//! Small dense/matrix-free linear algebra kernels used by the solvers.
//!
//! Nothing here is specific to meeting times: a row-major dense matrix, LU
//! factorization with partial pivoting, a matrix-free BiCGSTAB, and a
//! pairwise (cascade) summation helper.

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `y = self * x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *yi = acc;
        }
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    pivots: Vec<usize>,
}

/// The matrix was detected as (numerically) singular during elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix;

/// Factor `a` (consumed) as `P·A = L·U`. Singularity is declared when a
/// pivot falls below `1e-12` relative to the largest entry of `a`, which is
/// tight enough to flag rank-deficient systems built from O(1)-scaled
/// stochastic data without rejecting merely ill-conditioned ones.
pub fn lu_factor(a: DenseMatrix) -> Result<LuFactors, SingularMatrix> {
    assert_eq!(a.rows, a.cols, "lu_factor needs a square matrix");
    let n = a.rows;
    let scale = a.max_abs().max(1.0);
    let tol = 1e-12 * scale;
    let mut lu = a.data;
    let mut pivots = vec![0usize; n];

    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].abs();
        for i in (k + 1)..n {
            let v = lu[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best < tol {
            return Err(SingularMatrix);
        }
        pivots[k] = p;
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
        }
        let pivot = lu[k * n + k];
        for i in (k + 1)..n {
            let factor = lu[i * n + k] / pivot;
            lu[i * n + k] = factor;
            if factor != 0.0 {
                for j in (k + 1)..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }
    }
    Ok(LuFactors { n, lu, pivots })
}

impl LuFactors {
    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        // The stored L is in final row order: permute b fully first.
        for k in 0..n {
            b.swap(k, self.pivots[k]);
        }
        for k in 0..n {
            let bk = b[k];
            if bk != 0.0 {
                for i in (k + 1)..n {
                    b[i] -= self.lu[i * n + k] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            b[k] /= self.lu[k * n + k];
            let bk = b[k];
            if bk != 0.0 {
                for i in 0..k {
                    b[i] -= self.lu[i * n + k] * bk;
                }
            }
        }
    }
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Copy)]
pub struct IterativeOutcome {
    pub converged: bool,
    pub iterations: usize,
}

/// Matrix-free BiCGSTAB for `A x = b`, with `apply(x, y)` computing
/// `y = A x`. Iterates until `‖b − A x‖∞ ≤ tol` or `max_iters` operator
/// applications. Returns early with `converged = false` on breakdown so the
/// caller can fall back to a stationary iteration.
pub fn bicgstab<F: FnMut(&[f64], &mut [f64])>(
    mut apply: F,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iters: usize,
) -> IterativeOutcome {
    let n = b.len();
    let mut r = vec![0.0; n];
    apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    if max_norm(&r) <= tol {
        return IterativeOutcome {
            converged: true,
            iterations: 0,
        };
    }
    let r_hat = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];

    for it in 1..=max_iters {
        let rho_next = dot(&r_hat, &r);
        if rho_next.abs() < f64::MIN_POSITIVE {
            return IterativeOutcome {
                converged: false,
                iterations: it,
            };
        }
        let beta = (rho_next / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        apply(&p, &mut v);
        let denom = dot(&r_hat, &v);
        if denom.abs() < f64::MIN_POSITIVE {
            return IterativeOutcome {
                converged: false,
                iterations: it,
            };
        }
        alpha = rho_next / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if max_norm(&s) <= tol {
            for i in 0..n {
                x[i] += alpha * p[i];
            }
            return IterativeOutcome {
                converged: true,
                iterations: it,
            };
        }
        apply(&s, &mut t);
        let tt = dot(&t, &t);
        if tt < f64::MIN_POSITIVE {
            return IterativeOutcome {
                converged: false,
                iterations: it,
            };
        }
        omega = dot(&t, &s) / tt;
        if omega.abs() < f64::MIN_POSITIVE {
            return IterativeOutcome {
                converged: false,
                iterations: it,
            };
        }
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
        }
        for i in 0..n {
            r[i] = s[i] - omega * t[i];
        }
        if max_norm(&r) <= tol {
            return IterativeOutcome {
                converged: true,
                iterations: it,
            };
        }
        rho = rho_next;
    }
    IterativeOutcome {
        converged: false,
        iterations: max_iters,
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Pairwise (cascade) summation: O(log n) error growth instead of O(n).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 32;
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
