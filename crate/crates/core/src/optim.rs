//! Small numerical kernels: a dense two-phase simplex, exact linear solves
//! and a backtracking gradient descent. Sizes here are tiny (a handful of
//! rows), so nothing is tuned for speed.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Q;

const EPS: f64 = 1e-11;

/// Solution of `max obj.u` subject to `rows[a].u <= rhs[a]`, `u` free.
#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub u: Vec<f64>,
    /// Constraints in the optimal basis of the dual.
    pub active: Vec<usize>,
    pub pivots: u64,
}

struct Tableau {
    width: usize,
    cells: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * (self.width + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let stride = self.width + 1;
        let p = self.at(row, col);
        for j in 0..stride {
            self.cells[row * stride + j] /= p;
        }
        for i in 0..self.basis.len() {
            if i == row {
                continue;
            }
            let f = self.at(i, col);
            if f == 0.0 {
                continue;
            }
            for j in 0..stride {
                self.cells[i * stride + j] -= f * self.cells[row * stride + j];
            }
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        let mut z = cost[j];
        for (i, &b) in self.basis.iter().enumerate() {
            z -= cost[b] * self.at(i, j);
        }
        z
    }

    /// Minimizes `cost` with Bland's rule over columns admitted by `allowed`.
    /// Returns `None` if the objective is unbounded or the pivot limit hits.
    fn run(&mut self, cost: &[f64], allowed: usize, pivots: &mut u64, limit: u64) -> Option<()> {
        loop {
            let entering = (0..allowed)
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j) < -EPS);
            let Some(col) = entering else { return Some(()) };
            let mut best: Option<(f64, usize)> = None;
            for i in 0..self.basis.len() {
                let a = self.at(i, col);
                if a > EPS {
                    let ratio = self.rhs(i) / a;
                    let better = match best {
                        None => true,
                        Some((r, bi)) => {
                            ratio < r - EPS || (ratio <= r + EPS && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let (_, row) = best?;
            self.pivot(row, col);
            *pivots += 1;
            if *pivots > limit {
                return None;
            }
        }
    }
}

/// Solves the LP through its dual `min rhs.lambda` subject to
/// `sum_a lambda_a rows[a] = obj`, `lambda >= 0`; the primal optimum is read
/// off the simplex multipliers.
pub(crate) fn solve_lp(rows: &[Vec<f64>], rhs: &[f64], obj: &[f64]) -> Option<LpSolution> {
    let m = rows.len();
    let r = obj.len();
    let width = m + r;
    let mut cells = vec![0.0; r * (width + 1)];
    let mut sign = vec![1.0; r];
    for i in 0..r {
        if obj[i] < 0.0 {
            sign[i] = -1.0;
        }
        for (a, row) in rows.iter().enumerate() {
            cells[i * (width + 1) + a] = sign[i] * row[i];
        }
        cells[i * (width + 1) + m + i] = 1.0;
        cells[i * (width + 1) + width] = sign[i] * obj[i];
    }
    let mut t = Tableau {
        width,
        cells,
        basis: (m..m + r).collect(),
    };
    let mut pivots = 0;
    let limit = 200 + 50 * (width as u64);

    let mut phase1 = vec![0.0; width];
    for c in phase1.iter_mut().skip(m) {
        *c = 1.0;
    }
    t.run(&phase1, width, &mut pivots, limit)?;
    let infeasibility: f64 = (0..r).filter(|&i| t.basis[i] >= m).map(|i| t.rhs(i)).sum();
    if infeasibility > 1e-9 {
        return None;
    }
    // Drive artificials out where a real column can replace them; rows
    // where none can are redundant.
    for i in 0..r {
        if t.basis[i] >= m {
            if let Some(j) =
                (0..m).find(|&j| !t.basis.contains(&j) && libm::fabs(t.at(i, j)) > 1e-9)
            {
                t.pivot(i, j);
            }
        }
    }

    let mut cost = vec![0.0; width];
    cost[..m].copy_from_slice(rhs);
    t.run(&cost, m, &mut pivots, limit)?;

    let mut u = vec![0.0; r];
    for (i, ui) in u.iter_mut().enumerate() {
        let mut y = 0.0;
        for (k, &b) in t.basis.iter().enumerate() {
            y += cost[b] * t.at(k, m + i);
        }
        *ui = sign[i] * y;
    }
    let active = t.basis.iter().copied().filter(|&b| b < m).collect();
    Some(LpSolution { u, active, pivots })
}

/// Exact solution of `matrix x = rhs` for a consistent system with linearly
/// independent columns (more rows than columns is fine). `None` if the
/// columns are dependent or the system is inconsistent.
pub(crate) fn solve_exact(matrix: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Q>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let found = (pivot_row..rows).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(pivot_row, found);
        let p = aug[pivot_row][col].clone();
        for x in aug[pivot_row].iter_mut() {
            *x /= &p;
        }
        for i in 0..rows {
            if i != pivot_row && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                let pivot = aug[pivot_row].clone();
                for (x, p) in aug[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| aug[c][cols].clone()).collect())
}

pub(crate) fn all_non_negative(xs: &[Q]) -> bool {
    xs.iter().all(|x| !x.is_negative())
}

/// Outcome of [`descend`].
pub(crate) struct Descent {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    pub converged: bool,
}

/// Gradient descent with Armijo backtracking. Stops once the largest
/// gradient component drops below `gtol`, or once no step decreases `f`.
pub(crate) fn descend(
    f: impl Fn(&[f64]) -> f64,
    grad: impl Fn(&[f64]) -> Vec<f64>,
    start: Vec<f64>,
    gtol: f64,
    max_iter: u64,
) -> Descent {
    let mut x = start;
    let mut fx = f(&x);
    let mut step = 1.0;
    for it in 0..max_iter {
        let g = grad(&x);
        let norm_inf = g.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
        if norm_inf < gtol {
            return Descent {
                point: x,
                value: fx,
                iterations: it,
                converged: true,
            };
        }
        let norm2: f64 = g.iter().map(|v| v * v).sum();
        step *= 2.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let ft = f(&trial);
            if ft < fx && ft <= fx - 0.5 * step * norm2 {
                x = trial;
                fx = ft;
                break;
            }
            step *= 0.5;
            if step < 1e-20 {
                // No representable decrease left. Near a minimum that means
                // f is flat to machine precision, so a gradient within
                // sqrt(eps) of zero still counts.
                let converged = norm_inf < 1e-7 * (1.0 + libm::fabs(fx));
                return Descent {
                    point: x,
                    value: fx,
                    iterations: it,
                    converged,
                };
            }
        }
    }
    Descent {
        point: x,
        value: fx,
        iterations: max_iter,
        converged: false,
    }
}

/// Points `j/g` of the standard simplex in `r` coordinates, all `j_i >= min`.
pub(crate) fn simplex_grid(r: usize, g: u32, min: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, left: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 1 {
            if left >= min {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let mut j = min;
        while j <= left {
            cur.push(j);
            rec(r - 1, left - j, min, cur, out);
            cur.pop();
            j += 1;
        }
    }
    let mut out = Vec::new();
    rec(r, g, min, &mut Vec::new(), &mut out);
    out
}
