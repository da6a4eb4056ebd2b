//! Dense primal simplex for `max cᵀx  s.t.  Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The origin is feasible, so the slack basis starts phase II directly.
//! Bland's rule picks both entering and leaving variables, which rules out
//! cycling; the whole run is deterministic for identical input.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Solves `max cᵀx` subject to `rows[i]·x ≤ rhs[i]`, `x ≥ 0`.
///
/// Every `rhs[i]` must be nonnegative (within `-1e-12`). Rows are rescaled
/// to unit max-norm internally; this does not change the feasible set.
pub fn maximize(c: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = rows.len();
    if rhs.len() != m {
        return Err(Error::SolverFailure(format!("{m} rows but {} right-hand sides", rhs.len())));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::SolverFailure(format!("row of length {} for {n} variables", r.len())));
    }
    let finite = c.iter().chain(rhs).chain(rows.iter().flatten()).all(|v| v.is_finite());
    if !finite {
        return Err(Error::SolverFailure("non-finite LP data".into()));
    }
    if let Some(b) = rhs.iter().find(|&&b| b < -1e-12) {
        return Err(Error::SolverFailure(format!("origin infeasible: rhs {b} < 0")));
    }

    // Tableau: x_B = rhs − T x_N, objective z = z0 + cost·x_N.
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut b: Vec<f64> = Vec::with_capacity(m);
    for (row, &r) in rows.iter().zip(rhs) {
        let scale = row.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        t.push(row.iter().map(|v| v / scale).collect());
        b.push(r.max(0.0) / scale);
    }
    let mut cost = c.to_vec();
    let mut z0 = 0.0;
    // labels: structural 0..n, slacks n..n+m
    let mut nonbasic: Vec<usize> = (0..n).collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut iterations = 0;
    loop {
        let entering = (0..n)
            .filter(|&j| cost[j] > COST_TOL)
            .min_by_key(|&j| nonbasic[j]);
        let Some(s) = entering else { break };

        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            let p = t[i][s];
            if p > PIVOT_TOL {
                let ratio = b[i].max(0.0) / p;
                best = match best {
                    None => Some((i, ratio)),
                    Some((k, r)) => {
                        let tie = (ratio - r).abs() <= 1e-12 * (1.0 + r.abs());
                        if ratio < r && !tie || tie && basis[i] < basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, r))
                        }
                    }
                };
            }
        }
        let Some((r, _)) = best else {
            return Err(Error::SolverFailure("LP is unbounded".into()));
        };

        pivot(&mut t, &mut b, &mut cost, &mut z0, r, s);
        std::mem::swap(&mut basis[r], &mut nonbasic[s]);

        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::SolverFailure(format!(
                "no convergence after {iterations} pivots"
            )));
        }
        if !z0.is_finite() {
            return Err(Error::SolverFailure("objective became non-finite".into()));
        }
    }

    let mut x = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = b[i].max(0.0);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution {
        x,
        objective,
        iterations,
    })
}

fn pivot(t: &mut [Vec<f64>], b: &mut [f64], cost: &mut [f64], z0: &mut f64, r: usize, s: usize) {
    let p = t[r][s];
    let n = cost.len();
    for (j, v) in t[r].iter_mut().enumerate() {
        if j != s {
            *v /= p;
        }
    }
    t[r][s] = 1.0 / p;
    b[r] /= p;

    let pivot_row = t[r].clone();
    let br = b[r];
    for (i, row) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[s];
        if f == 0.0 {
            continue;
        }
        for j in 0..n {
            if j != s {
                row[j] -= f * pivot_row[j];
            }
        }
        row[s] = -f * pivot_row[s];
        b[i] -= f * br;
    }
    let f = cost[s];
    for j in 0..n {
        if j != s {
            cost[j] -= f * pivot_row[j];
        }
    }
    cost[s] = -f * pivot_row[s];
    *z0 += f * br;
}
