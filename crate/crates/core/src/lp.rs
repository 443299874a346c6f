//! Dense two-phase simplex for desk-scale linear programs.
//!
//! Standard form: minimise `cᵀx` subject to `A_eq x = b_eq`, `A_ub x ≤ b_ub`,
//! `x ≥ 0`. The tableau is rebuilt from the original data through an LU
//! factorisation of the basis every few pivots and before optimality is
//! accepted, which keeps round-off from accumulating over long runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("linear program is infeasible or unbounded")]
    InfeasibleOrUnbounded,
    #[error("simplex stalled after {iterations} iterations")]
    SolverStall { iterations: usize },
    #[error("malformed linear program: {0}")]
    InvalidInput(String),
}

pub const MAX_ITERATIONS: usize = 100_000;
pub const MAX_VARIABLES: usize = 10_000;
pub const MAX_CONSTRAINTS: usize = 10_000;

const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_SWITCH: usize = 50;

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub c: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Multipliers of the equality rows (free sign).
    pub dual_eq: Vec<f64>,
    /// Multipliers of the `≤` rows (non-positive at optimality).
    pub dual_ub: Vec<f64>,
    /// `b_eqᵀ y_eq + b_ubᵀ y_ub`.
    pub dual_objective: f64,
    /// Largest constraint violation of `x`.
    pub primal_residual: f64,
    /// Largest violation of `Aᵀy ≤ c` and `y_ub ≤ 0`.
    pub dual_residual: f64,
    pub iterations: usize,
    /// Final basis, usable as a warm start after columns are appended.
    pub basis: Vec<BasisEntry>,
}

/// One basic variable, named independently of the tableau layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisEntry {
    Column(usize),
    /// Slack of the `i`-th `≤` row.
    Slack(usize),
    /// Artificial of constraint row `i` (equalities first, then `≤` rows).
    Artificial(usize),
}

impl LinearProgram {
    pub fn new(c: Vec<f64>) -> Self {
        Self {
            c,
            ..Default::default()
        }
    }

    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn ub(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.c.len();
        if n == 0 {
            return Err(LpError::InvalidInput("no variables".into()));
        }
        if n > MAX_VARIABLES || self.a_eq.len() + self.a_ub.len() > MAX_CONSTRAINTS {
            return Err(LpError::InvalidInput("problem exceeds solver size limits".into()));
        }
        if self.a_eq.len() != self.b_eq.len() || self.a_ub.len() != self.b_ub.len() {
            return Err(LpError::InvalidInput("row and right-hand side counts differ".into()));
        }
        let rows = self.a_eq.iter().chain(&self.a_ub);
        for row in rows {
            if row.len() != n {
                return Err(LpError::InvalidInput(format!(
                    "row of length {} for {n} variables",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(LpError::InvalidInput("non-finite coefficient".into()));
            }
        }
        if self
            .c
            .iter()
            .chain(&self.b_eq)
            .chain(&self.b_ub)
            .any(|v| !v.is_finite())
        {
            return Err(LpError::InvalidInput("non-finite cost or bound".into()));
        }
        Ok(())
    }

    /// Primal constraint violation of a candidate `x`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let eq = self.a_eq.iter().zip(&self.b_eq).map(|(r, b)| (dot(r) - b).abs());
        let ub = self.a_ub.iter().zip(&self.b_ub).map(|(r, b)| (dot(r) - b).max(0.0));
        let neg = x.iter().map(|v| (-v).max(0.0));
        eq.chain(ub).chain(neg).fold(0.0, f64::max)
    }
}

/// `PA = LU` with partial pivoting; `L` unit lower, both packed into `a`.
struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<f64>, n: usize) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pv) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))?;
            if pv < 1e-13 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / d;
                a[i * n + k] = f;
                if f == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        Some(Self { n, a, perm })
    }

    /// `A x = b`.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.a[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.a[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.a[i * n + i];
        }
        x
    }

    /// `Aᵀ y = c`.
    fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = c.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.a[j * n + i] * z[j]).sum();
            z[i] = (z[i] - s) / self.a[i * n + i];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.a[j * n + i] * z[j]).sum();
            z[i] -= s;
        }
        let mut y = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            y[p] = z[i];
        }
        y
    }
}

/// Dense tableau `B⁻¹[A | b]` together with the original data it is
/// periodically rebuilt from.
struct Tableau {
    width: usize,
    rows: usize,
    data: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    orig: Vec<f64>,
    orig_rhs: Vec<f64>,
    /// Columns at or beyond this index are artificial.
    art_start: usize,
}

/// Pivots between rebuilds of the tableau from the original data.
const REINVERT_EVERY: usize = 100;
/// Primal slack allowed by the first pass of the ratio test.
const HARRIS_TOL: f64 = 1e-9;
/// Relative size of the phase 2 right-hand side perturbation.
const PERTURB: f64 = 1e-7;
const PERTURB_SEED: u64 = 0x5eed_1e55;

impl Tableau {
    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    fn basis_lu(&self) -> Option<Lu> {
        let m = self.rows;
        let mut b = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for r in 0..m {
                b[r * m + k] = self.orig[r * self.width + j];
            }
        }
        Lu::factor(b, m)
    }

    /// Recomputes `B⁻¹A`, `B⁻¹b` and the reduced costs from scratch.
    /// Returns false (leaving everything untouched) if `B` is singular.
    fn reinvert(&mut self, cost_orig: &[f64], cost: &mut [f64], cost_value: &mut f64) -> bool {
        let m = self.rows;
        if m == 0 {
            return true;
        }
        let Some(lu) = self.basis_lu() else {
            return false;
        };
        let w = self.width;
        let mut inv = vec![0.0; m * m];
        for k in 0..m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            for (r, v) in lu.solve(&e).into_iter().enumerate() {
                inv[r * m + k] = v;
            }
        }
        let orig = &self.orig;
        self.data.par_chunks_mut(w).enumerate().for_each(|(r, out)| {
            out.iter_mut().for_each(|v| *v = 0.0);
            for (k, &b) in inv[r * m..(r + 1) * m].iter().enumerate() {
                if b != 0.0 {
                    for (o, a) in out.iter_mut().zip(&orig[k * w..(k + 1) * w]) {
                        *o += b * a;
                    }
                }
            }
        });
        for (k, &j) in self.basis.iter().enumerate() {
            for r in 0..m {
                self.data[r * w + j] = if r == k { 1.0 } else { 0.0 };
            }
        }
        self.rhs = lu.solve(&self.orig_rhs);
        for v in self.rhs.iter_mut() {
            if *v < 0.0 && *v > -HARRIS_TOL {
                *v = 0.0;
            }
        }
        let c_b: Vec<f64> = self.basis.iter().map(|&j| cost_orig[j]).collect();
        let y = lu.solve_transpose(&c_b);
        cost.copy_from_slice(cost_orig);
        for (r, &yr) in y.iter().enumerate() {
            if yr != 0.0 {
                for (c, a) in cost.iter_mut().zip(&self.orig[r * w..(r + 1) * w]) {
                    *c -= yr * a;
                }
            }
        }
        for &j in &self.basis {
            cost[j] = 0.0;
        }
        *cost_value = -(0..m).map(|r| c_b[r] * self.rhs[r]).sum::<f64>();
        true
    }

    fn pivot(&mut self, r: usize, col: usize, cost: &mut [f64], cost_value: &mut f64) {
        let w = self.width;
        let p = self.data[r * w + col];
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            row.iter_mut().for_each(|v| *v /= p);
            row[col] = 1.0;
        }
        self.rhs[r] /= p;
        let pivot_row: Vec<f64> = self.row(r).to_vec();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + col];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for (v, pr) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            row[col] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i] < 0.0 && self.rhs[i] > -HARRIS_TOL {
                self.rhs[i] = 0.0;
            }
        }
        let f = cost[col];
        if f != 0.0 {
            for (v, pr) in cost.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            cost[col] = 0.0;
            *cost_value -= f * pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Leaving row for entering column `col`, or `None` if unbounded.
    fn ratio_test(&self, col: usize, bland: bool, guard_artificials: bool) -> Option<(usize, f64)> {
        let w = self.width;
        // Basic artificials must stay at zero in phase 2: any nonzero entry blocks.
        if guard_artificials {
            if let Some(r) =
                (0..self.rows).find(|&r| self.basis[r] >= self.art_start && self.data[r * w + col].abs() > PIVOT_TOL)
            {
                return Some((r, 0.0));
            }
        }
        let candidates = (0..self.rows).filter(|&r| self.data[r * w + col] > PIVOT_TOL);
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for r in candidates {
                let ratio = self.rhs[r].max(0.0) / self.data[r * w + col];
                best = match best {
                    Some((br, bv))
                        if ratio > bv + 1e-12 * (1.0 + bv)
                            || ((ratio - bv).abs() <= 1e-12 * (1.0 + bv) && self.basis[r] > self.basis[br]) =>
                    {
                        Some((br, bv))
                    }
                    _ => Some((r, ratio)),
                };
            }
            return best;
        }
        // Harris: the largest pivot among rows whose ratio stays within the relaxed bound.
        let bound = candidates
            .clone()
            .map(|r| (self.rhs[r].max(0.0) + HARRIS_TOL) / self.data[r * w + col])
            .fold(f64::INFINITY, f64::min);
        if bound.is_infinite() {
            return None;
        }
        candidates
            .filter(|&r| self.rhs[r].max(0.0) / self.data[r * w + col] <= bound)
            .max_by(|&a, &b| self.data[a * w + col].total_cmp(&self.data[b * w + col]))
            .map(|r| (r, self.rhs[r].max(0.0) / self.data[r * w + col]))
    }

    /// Dual simplex pivots from a basis with non-negative reduced costs until
    /// `B⁻¹b ≥ 0`. Used after the right-hand side perturbation is removed.
    /// Returns whether any pivot was needed.
    fn dual_repair(
        &mut self,
        cost_orig: &[f64],
        cost: &mut [f64],
        allowed: usize,
        iterations: &mut usize,
    ) -> Result<bool, LpError> {
        let mut value = 0.0;
        let Some(lu) = self.basis_lu() else {
            return Ok(false);
        };
        self.rhs = lu.solve(&self.orig_rhs);
        let mut pivoted = false;
        let w = self.width;
        let mut since_reinvert = 0usize;
        loop {
            if *iterations >= MAX_ITERATIONS {
                return Err(LpError::SolverStall {
                    iterations: *iterations,
                });
            }
            if since_reinvert >= REINVERT_EVERY.max(self.rows) {
                self.reinvert(cost_orig, cost, &mut value);
                since_reinvert = 0;
            }
            let Some((r, _)) = self
                .rhs
                .iter()
                .enumerate()
                .filter(|(_, &v)| v < -HARRIS_TOL)
                .min_by(|a, b| a.1.total_cmp(b.1))
            else {
                return Ok(pivoted);
            };
            let cands = (0..allowed).filter(|&j| self.data[r * w + j] < -PIVOT_TOL);
            let bound = cands
                .clone()
                .map(|j| (cost[j].max(0.0) + COST_TOL) / -self.data[r * w + j])
                .fold(f64::INFINITY, f64::min);
            let col = cands
                .filter(|&j| cost[j].max(0.0) / -self.data[r * w + j] <= bound)
                .max_by(|&a, &b| (-self.data[r * w + a]).total_cmp(&-self.data[r * w + b]));
            let Some(col) = col else {
                return Err(LpError::Infeasible);
            };
            self.pivot(r, col, cost, &mut value);
            pivoted = true;
            *iterations += 1;
            since_reinvert += 1;
        }
    }

    /// Simplex iterations on the columns `..allowed` until the reduced costs
    /// of a freshly rebuilt tableau are all non-negative.
    fn optimise(
        &mut self,
        cost_orig: &[f64],
        allowed: usize,
        guard_artificials: bool,
        iterations: &mut usize,
    ) -> Result<(Vec<f64>, f64), LpError> {
        let mut cost = vec![0.0; self.width];
        let mut value = 0.0;
        if !self.reinvert(cost_orig, &mut cost, &mut value) {
            cost.copy_from_slice(cost_orig);
            for r in 0..self.rows {
                let cb = cost_orig[self.basis[r]];
                if cb != 0.0 {
                    let row = &self.data[r * self.width..(r + 1) * self.width];
                    for (c, a) in cost.iter_mut().zip(row) {
                        *c -= cb * a;
                    }
                    value -= cb * self.rhs[r];
                }
            }
        }
        let mut degenerate_run = 0usize;
        let mut since_reinvert = 0usize;
        loop {
            if *iterations >= MAX_ITERATIONS {
                return Err(LpError::SolverStall {
                    iterations: *iterations,
                });
            }
            if since_reinvert >= REINVERT_EVERY.max(self.rows) {
                self.reinvert(cost_orig, &mut cost, &mut value);
                since_reinvert = 0;
            }
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let entering = if bland {
                (0..allowed).find(|&j| cost[j] < -COST_TOL)
            } else if cost[..allowed].iter().any(|&d| d < -COST_TOL) {
                // Steepest edge: reduced cost per unit length of the edge direction.
                let mut norms = vec![1.0; allowed];
                for r in 0..self.rows {
                    for (acc, v) in norms.iter_mut().zip(&self.row(r)[..allowed]) {
                        *acc += v * v;
                    }
                }
                (0..allowed)
                    .filter(|&j| cost[j] < -COST_TOL)
                    .map(|j| (j, cost[j] * cost[j] / norms[j]))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(j, _)| j)
            } else {
                None
            };
            let Some(col) = entering else {
                if since_reinvert == 0 {
                    return Ok((cost, value));
                }
                // Confirm optimality on clean data before stopping.
                self.reinvert(cost_orig, &mut cost, &mut value);
                since_reinvert = 0;
                continue;
            };
            let Some((r, ratio)) = self.ratio_test(col, bland, guard_artificials) else {
                return Err(LpError::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, col, &mut cost, &mut value);
            *iterations += 1;
            since_reinvert += 1;
        }
    }
}

/// Minimises `cᵀx` over `{x ≥ 0 : A_eq x = b_eq, A_ub x ≤ b_ub}`.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp_solve_warm(lp, None)
}

/// As [`lp_solve`], starting phase 2 from `start` when it is a feasible
/// basis of `lp`; otherwise falls back to a cold start.
pub fn lp_solve_warm(lp: &LinearProgram, start: Option<&[BasisEntry]>) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.c.len();
    let m_eq = lp.a_eq.len();
    let m_ub = lp.a_ub.len();
    let m = m_eq + m_ub;

    // Row signs make every right-hand side non-negative.
    let mut sign = vec![1.0; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let b = if i < m_eq { lp.b_eq[i] } else { lp.b_ub[i - m_eq] };
        if b < 0.0 {
            sign[i] = -1.0;
        }
        rhs[i] = b * sign[i];
    }
    let needs_art: Vec<bool> = (0..m).map(|i| i < m_eq || sign[i] < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let art_start = n + m_ub;
    let width = art_start + n_art;

    let mut data = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let mut next_art = art_start;
    let mut art_of_row = vec![usize::MAX; m];
    for i in 0..m {
        let src = if i < m_eq { &lp.a_eq[i] } else { &lp.a_ub[i - m_eq] };
        let row = &mut data[i * width..(i + 1) * width];
        for (v, a) in row[..n].iter_mut().zip(src) {
            *v = a * sign[i];
        }
        if i >= m_eq {
            row[n + i - m_eq] = sign[i];
        }
        if needs_art[i] {
            row[next_art] = 1.0;
            basis[i] = next_art;
            art_of_row[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = n + i - m_eq;
        }
    }
    let mut tab = Tableau {
        width,
        rows: m,
        orig: data.clone(),
        orig_rhs: rhs.clone(),
        data,
        rhs,
        basis,
        art_start,
    };
    let mut iterations = 0;

    let warm = start.is_some_and(|start| {
        let cols: Option<Vec<usize>> = start
            .iter()
            .map(|e| match *e {
                BasisEntry::Column(j) if j < n => Some(j),
                BasisEntry::Slack(i) if i < m_ub => Some(n + i),
                BasisEntry::Artificial(i) if i < m && art_of_row[i] != usize::MAX => Some(art_of_row[i]),
                _ => None,
            })
            .collect();
        let Some(cols) = cols else { return false };
        let mut seen = vec![false; width];
        if cols.len() != m || cols.iter().any(|&j| std::mem::replace(&mut seen[j], true)) {
            return false;
        }
        let saved = std::mem::replace(&mut tab.basis, cols);
        let ok = tab.basis_lu().is_some_and(|lu| {
            let xb = lu.solve(&tab.orig_rhs);
            xb.iter()
                .zip(&tab.basis)
                .all(|(v, &j)| *v >= -FEAS_TOL && (j < art_start || v.abs() <= FEAS_TOL))
        });
        if !ok {
            tab.basis = saved;
        }
        ok
    });

    // Phase 1: minimise the sum of artificials.
    if n_art > 0 && !warm {
        let mut cost1 = vec![0.0; width];
        cost1[art_start..].iter_mut().for_each(|v| *v = 1.0);
        let (_, value) = tab.optimise(&cost1, width, false, &mut iterations)?;
        let scale = 1.0 + lp.b_eq.iter().chain(&lp.b_ub).fold(0.0f64, |a, b| a.max(b.abs()));
        if -value > FEAS_TOL * scale {
            return Err(LpError::Infeasible);
        }
        // Drive remaining artificials out of the basis where possible.
        let mut dummy = vec![0.0; width];
        let mut dv = 0.0;
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            let row = tab.row(r);
            let cand = (0..art_start)
                .map(|j| (j, row[j].abs()))
                .filter(|&(_, a)| a > 1e-7)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((j, _)) = cand {
                tab.pivot(r, j, &mut dummy, &mut dv);
            }
        }
    }

    // Phase 2 runs on a slightly loosened right-hand side so that degenerate
    // vertices do not stall it, then the true data is restored and repaired.
    let mut cost2 = vec![0.0; width];
    cost2[..n].copy_from_slice(&lp.c);
    let true_rhs = tab.orig_rhs.clone();
    let scale = 1.0 + true_rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(PERTURB_SEED);
    for k in 0..m {
        let j = tab.basis[k];
        if j >= art_start {
            continue;
        }
        let delta = PERTURB * scale * rng.random_range(0.5..1.0);
        for r in 0..m {
            tab.orig_rhs[r] += delta * tab.orig[r * width + j];
        }
    }
    let (mut cost, _) = tab.optimise(&cost2, art_start, true, &mut iterations)?;
    tab.orig_rhs = true_rhs;
    if tab.dual_repair(&cost2, &mut cost, art_start, &mut iterations)? {
        tab.optimise(&cost2, art_start, true, &mut iterations)?;
    }

    // The final reinversion left `rhs = B⁻¹b`; duals come from the same basis.
    let mut x = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs[r].max(0.0);
        }
    }
    let y_norm = match tab.basis_lu() {
        Some(lu) => {
            let c_b: Vec<f64> = tab.basis.iter().map(|&j| cost2[j]).collect();
            lu.solve_transpose(&c_b)
        }
        None => vec![0.0; m],
    };

    let y: Vec<f64> = y_norm.iter().zip(&sign).map(|(v, s)| v * s).collect();
    let (dual_eq, dual_ub) = (y[..m_eq].to_vec(), y[m_eq..].to_vec());
    let objective: f64 = lp.c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let dual_objective: f64 = lp.b_eq.iter().zip(&dual_eq).map(|(a, b)| a * b).sum::<f64>()
        + lp.b_ub.iter().zip(&dual_ub).map(|(a, b)| a * b).sum::<f64>();
    let mut dual_residual = dual_ub.iter().fold(0.0f64, |a, &v| a.max(v));
    for j in 0..n {
        let aty: f64 = lp.a_eq.iter().zip(&dual_eq).map(|(r, y)| r[j] * y).sum::<f64>()
            + lp.a_ub.iter().zip(&dual_ub).map(|(r, y)| r[j] * y).sum::<f64>();
        dual_residual = dual_residual.max(aty - lp.c[j]);
    }
    let primal_residual = lp.primal_residual(&x);
    let basis = tab
        .basis
        .iter()
        .map(|&j| {
            if j < n {
                BasisEntry::Column(j)
            } else if j < art_start {
                BasisEntry::Slack(j - n)
            } else {
                BasisEntry::Artificial(art_of_row.iter().position(|&a| a == j).expect("artificial column"))
            }
        })
        .collect();
    Ok(LpSolution {
        basis,
        x,
        objective,
        dual_eq,
        dual_ub,
        dual_objective,
        primal_residual,
        dual_residual,
        iterations,
    })
}

/// `min cᵀx` over free `x` with `A_ub x ≤ b_ub`, `A_eq x = b_eq`.
///
/// Solved through its dual, which has one equality row per variable rather
/// than one row per constraint; the primal point is read from the dual's
/// multipliers.
#[derive(Clone, Debug, Default)]
pub struct FreeLp {
    pub c: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct FreeSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Optimal value of the dual problem actually solved, negated.
    pub dual_objective: f64,
    pub iterations: usize,
    pub basis: Vec<BasisEntry>,
}

pub fn solve_free(lp: &FreeLp) -> Result<FreeSolution, LpError> {
    solve_free_warm(lp, None)
}

/// As [`solve_free`], warm-started from the `basis` of an earlier solution
/// of the same problem with fewer `≤` rows.
pub fn solve_free_warm(lp: &FreeLp, start: Option<&[BasisEntry]>) -> Result<FreeSolution, LpError> {
    let n = lp.c.len();
    let (mu, me) = (lp.a_ub.len(), lp.a_eq.len());
    if lp.b_ub.len() != mu || lp.b_eq.len() != me {
        return Err(LpError::InvalidInput("row and right-hand side counts differ".into()));
    }
    if lp.a_ub.iter().chain(&lp.a_eq).any(|r| r.len() != n) {
        return Err(LpError::InvalidInput("row length differs from variable count".into()));
    }
    // Variables: z+ (me), z- (me), u (mu). Appended `≤` rows only add
    // columns at the end, so earlier bases stay meaningful.
    let mut cost = Vec::with_capacity(mu + 2 * me);
    cost.extend(lp.b_eq.iter().map(|b| -b));
    cost.extend_from_slice(&lp.b_eq);
    cost.extend_from_slice(&lp.b_ub);
    let mut dual = LinearProgram::new(cost);
    for j in 0..n {
        let mut row = Vec::with_capacity(mu + 2 * me);
        row.extend(lp.a_eq.iter().map(|r| r[j]));
        row.extend(lp.a_eq.iter().map(|r| -r[j]));
        row.extend(lp.a_ub.iter().map(|r| -r[j]));
        dual = dual.eq(row, lp.c[j]);
    }
    let sol = lp_solve_warm(&dual, start).map_err(|e| match e {
        LpError::Unbounded => LpError::Infeasible,
        LpError::Infeasible => LpError::InfeasibleOrUnbounded,
        other => other,
    })?;
    let x: Vec<f64> = sol.dual_eq.iter().map(|v| -v).collect();
    let objective = lp.c.iter().zip(&x).map(|(a, b)| a * b).sum();
    Ok(FreeSolution {
        x,
        objective,
        dual_objective: -sol.objective,
        iterations: sol.iterations,
        basis: sol.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lower_bound() {
        let lp = LinearProgram::new(vec![1.0]).ub(vec![-1.0], -3.0);
        let s = lp_solve(&lp).unwrap();
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.dual_objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn split_variable() {
        let lp = LinearProgram::new(vec![1.0, 1.0]).eq(vec![1.0, -1.0], 1.0);
        let s = lp_solve(&lp).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!((s.x[0] - 1.0).abs() < 1e-12 && s.x[1].abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(vec![1.0]).ub(vec![1.0], -1.0);
        assert_eq!(lp_solve(&lp).unwrap_err(), LpError::Infeasible);
        let lp = LinearProgram::new(vec![-1.0, 0.0]).ub(vec![-1.0, 1.0], 0.0);
        assert_eq!(lp_solve(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::new(vec![1.0, 2.0])
            .eq(vec![1.0, 1.0], 2.0)
            .eq(vec![2.0, 2.0], 4.0);
        let s = lp_solve(&lp).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-10);
        assert!((s.dual_objective - 2.0).abs() < 1e-10);
    }

    #[test]
    fn malformed_input() {
        let lp = LinearProgram::new(vec![1.0, 1.0]).eq(vec![1.0], 1.0);
        assert!(matches!(lp_solve(&lp), Err(LpError::InvalidInput(_))));
        assert!(matches!(
            lp_solve(&LinearProgram::new(vec![])),
            Err(LpError::InvalidInput(_))
        ));
    }

    #[test]
    fn free_variable_absolute_value() {
        // min r  s.t.  r ≥ x - 2, r ≥ 2 - x, x = 5  → r = 3
        let lp = FreeLp {
            c: vec![0.0, 1.0],
            a_ub: vec![vec![1.0, -1.0], vec![-1.0, -1.0]],
            b_ub: vec![2.0, -2.0],
            a_eq: vec![vec![1.0, 0.0]],
            b_eq: vec![5.0],
        };
        let s = solve_free(&lp).unwrap();
        assert!((s.x[0] - 5.0).abs() < 1e-10 && (s.x[1] - 3.0).abs() < 1e-10);
        assert!((s.objective - 3.0).abs() < 1e-10);
        assert!((s.dual_objective - 3.0).abs() < 1e-10);
    }

    #[test]
    fn free_infeasible() {
        let lp = FreeLp {
            c: vec![1.0],
            a_ub: vec![vec![1.0], vec![-1.0]],
            b_ub: vec![0.0, -1.0],
            ..Default::default()
        };
        assert!(solve_free(&lp).is_err());
    }

    /// `min Σ r_i` with `r_i ≥ |x_i − t_i|` written as 16-gon cuts: the
    /// optimum is 0 at `x = t`, and every cut through it is active.
    fn degenerate_fit(n: usize) -> FreeLp {
        let mut lp = FreeLp {
            c: (0..2 * n).map(|v| if v % 2 == 1 { 1.0 } else { 0.0 }).collect(),
            ..Default::default()
        };
        for i in 0..n {
            let t = (i as f64 * 0.7).sin();
            for s in [1.0, -1.0] {
                for k in 1..=8 {
                    let mut row = vec![0.0; 2 * n];
                    row[2 * i] = s * k as f64 / 8.0;
                    row[2 * i + 1] = -1.0;
                    lp.a_ub.push(row);
                    lp.b_ub.push(s * k as f64 / 8.0 * t);
                }
            }
        }
        lp
    }

    #[test]
    fn degenerate_optimum() {
        let lp = degenerate_fit(40);
        let s = solve_free(&lp).unwrap();
        assert!(s.objective.abs() < 1e-9, "{}", s.objective);
        for i in 0..40 {
            assert!((s.x[2 * i] - (i as f64 * 0.7).sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn warm_start_after_new_rows() {
        let mut lp = FreeLp {
            c: vec![0.0, 1.0],
            a_ub: vec![vec![1.0, -1.0], vec![-1.0, -1.0]],
            b_ub: vec![2.0, -2.0],
            ..Default::default()
        };
        let first = solve_free(&lp).unwrap();
        assert!(first.objective.abs() < 1e-10);
        // x ≥ 5 moves the optimum to r = 3
        lp.a_ub.push(vec![-1.0, 0.0]);
        lp.b_ub.push(-5.0);
        let cold = solve_free(&lp).unwrap();
        let warm = solve_free_warm(&lp, Some(&first.basis)).unwrap();
        assert!((cold.objective - 3.0).abs() < 1e-10);
        assert!((warm.objective - 3.0).abs() < 1e-10);
        // a basis of the wrong size is ignored rather than trusted
        let bogus = solve_free_warm(&lp, Some(&[BasisEntry::Column(0)])).unwrap();
        assert!((bogus.objective - 3.0).abs() < 1e-10);
    }
}
