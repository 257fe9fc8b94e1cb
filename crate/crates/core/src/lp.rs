//! Dense two-phase simplex for the handful of tiny linear programs the norm
//! code needs: polyhedral gauges, vertex pruning and dual certificates.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;

pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Multipliers of the equality rows.
    pub dual: Vec<f64>,
}

struct Tableau {
    t: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule iterations; entering columns restricted to `0..allowed`.
    /// Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.width - 1;
        for _ in 0..10_000 {
            let Some(c) = (0..allowed).find(|&j| self.obj[j] < -COST_EPS) else {
                return true;
            };
            let mut best: Option<(f64, usize)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[c] > PIVOT_EPS {
                    let ratio = row[rhs] / row[c];
                    let better = match best {
                        None => true,
                        Some((br, bi)) => {
                            ratio < br - 1e-15 || (ratio <= br + 1e-15 && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            match best {
                Some((_, r)) => self.pivot(r, c),
                None => return false,
            }
        }
        true
    }
}

/// Minimizes cᵀx subject to Ax = b, x ≥ 0. `None` when infeasible or unbounded.
pub(crate) fn minimize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<LpSolution> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let bscale = 1.0 + b.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut sign = vec![1.0; m];
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        let mut row = vec![0.0; width];
        for j in 0..n {
            row[j] = sign[i] * a[i][j];
        }
        row[n + i] = 1.0;
        row[width - 1] = sign[i] * b[i];
        t.push(row);
    }
    let mut obj = vec![0.0; width];
    for row in &t {
        for j in 0..n {
            obj[j] -= row[j];
        }
        obj[width - 1] -= row[width - 1];
    }
    let mut tab = Tableau { t, obj, basis: (n..n + m).collect(), width };
    tab.run(n);
    if -tab.obj[width - 1] > 1e-9 * bscale {
        return None;
    }
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[r][j].abs() > 1e-9) {
                tab.pivot(r, j);
            }
        }
    }
    let mut obj = vec![0.0; width];
    obj[..n].copy_from_slice(c);
    for (r, &bj) in tab.basis.iter().enumerate() {
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for (o, v) in obj.iter_mut().zip(&tab.t[r]) {
                *o -= cb * v;
            }
        }
    }
    tab.obj = obj;
    if !tab.run(n) {
        return None;
    }
    let mut x = vec![0.0; n];
    for (r, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab.t[r][width - 1];
        }
    }
    let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let dual = (0..m).map(|i| -tab.obj[n + i] * sign[i]).collect();
    Some(LpSolution { x, value, dual })
}

/// Minkowski gauge of `v` with respect to the hull of `points` (as columns),
/// together with the dual multipliers, which form a supporting functional.
pub(crate) fn gauge(points: &[Vec<f64>], v: &[f64]) -> Option<(f64, Vec<f64>)> {
    let dim = v.len();
    let a: Vec<Vec<f64>> = (0..dim).map(|i| points.iter().map(|p| p[i]).collect()).collect();
    let c = vec![1.0; points.len()];
    minimize(&a, v, &c).map(|s| (s.value, s.dual))
}

/// Maximizes cᵀf over free f subject to gᵀf ≤ 1 for each g in `upper`
/// and hᵀf = 0 for each h in `null`.
pub(crate) fn maximize_free(c: &[f64], upper: &[Vec<f64>], null: &[Vec<f64>]) -> Option<(f64, Vec<f64>)> {
    let n = c.len();
    let k = upper.len();
    let vars = 2 * n + k;
    let mut a = Vec::with_capacity(k + null.len());
    let mut b = Vec::with_capacity(k + null.len());
    for (r, g) in upper.iter().enumerate() {
        let mut row = vec![0.0; vars];
        for j in 0..n {
            row[j] = g[j];
            row[n + j] = -g[j];
        }
        row[2 * n + r] = 1.0;
        a.push(row);
        b.push(1.0);
    }
    for h in null {
        let mut row = vec![0.0; vars];
        for j in 0..n {
            row[j] = h[j];
            row[n + j] = -h[j];
        }
        a.push(row);
        b.push(0.0);
    }
    let mut cost = vec![0.0; vars];
    for j in 0..n {
        cost[j] = -c[j];
        cost[n + j] = c[j];
    }
    let sol = minimize(&a, &b, &cost)?;
    let f = (0..n).map(|j| sol.x[j] - sol.x[n + j]).collect();
    Some((-sol.value, f))
}
