//! Signed measures on `(0, 1/2]` with unit first moment and small odd moments.
//!
//! The semi-infinite family `|∫ s^{2k+1} dσ| ≤ ε, k ≥ 1` is truncated at
//! `k_max`: the truncated moments get the budget `ε/2`, and since `s ≤ 1/2`
//! every higher moment is bounded by `2^{-(2k_max+1)}·‖σ‖`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LinearProgram};

pub const MIN_GRID: usize = 50;
pub const FIRST_MOMENT_TOL: f64 = 1e-8;
pub const TV_TOL: f64 = 1e-6;
/// LP weights below this modulus are dropped from the returned measure.
const WEIGHT_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAtom {
    pub s: f64,
    pub w: f64,
}

/// Atomic signed measure on `(0, 1/2]` with strictly increasing support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr")]
pub struct SignedGridMeasure {
    atoms: Vec<GridAtom>,
    total_variation: f64,
}

#[derive(Deserialize)]
struct MeasureRepr {
    atoms: Vec<GridAtom>,
    total_variation: Option<f64>,
}

impl TryFrom<MeasureRepr> for SignedGridMeasure {
    type Error = Error;

    fn try_from(r: MeasureRepr) -> Result<Self> {
        let m = SignedGridMeasure::new(r.atoms)?;
        if let Some(tv) = r.total_variation {
            if !((tv - m.total_variation).abs() <= 1e-12 * (1.0 + tv.abs())) {
                return Err(Error::InvalidArgument(format!(
                    "stated total variation {tv} differs from Σ|w| = {}",
                    m.total_variation
                )));
            }
        }
        Ok(m)
    }
}

impl SignedGridMeasure {
    pub fn new(atoms: Vec<GridAtom>) -> Result<Self> {
        for a in &atoms {
            if !(a.s > 0.0 && a.s <= 0.5) {
                return Err(Error::OutOfRange {
                    name: "s",
                    value: a.s,
                    range: "(0, 1/2]",
                });
            }
            if !a.w.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite weight at s = {}", a.s)));
            }
        }
        if atoms.windows(2).any(|w| w[0].s >= w[1].s) {
            return Err(Error::InvalidArgument("atoms must be strictly increasing in s".into()));
        }
        let total_variation = atoms.iter().map(|a| a.w.abs()).sum();
        Ok(Self { atoms, total_variation })
    }

    pub fn single(s: f64, w: f64) -> Result<Self> {
        Self::new(vec![GridAtom { s, w }])
    }

    pub fn atoms(&self) -> &[GridAtom] {
        &self.atoms
    }

    pub fn total_variation(&self) -> f64 {
        self.total_variation
    }

    /// `∫ s^power dσ` by direct summation.
    pub fn moment(&self, power: i32) -> f64 {
        self.atoms.iter().map(|a| a.w * a.s.powi(power)).sum()
    }

    /// `∫ s^{2k+1} dσ`.
    pub fn odd_moment(&self, k: u32) -> f64 {
        self.moment(2 * k as i32 + 1)
    }
}

/// `2|log ε| + 6`.
pub fn mela_bound(epsilon: f64) -> f64 {
    2.0 * epsilon.ln().abs() + 6.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCertificate {
    pub epsilon: f64,
    pub k_max: u32,
    /// `∫ s dσ − 1`.
    pub first_moment_error: f64,
    /// `max_{1≤k≤k_max} |∫ s^{2k+1} dσ|`.
    pub max_odd_moment: f64,
    /// `2^{-(2k_max+1)}·‖σ‖`, a bound on every moment beyond `k_max`.
    pub tail_bound: f64,
    pub tv: f64,
    pub mela_bound: f64,
    pub valid: bool,
}

impl MomentCertificate {
    pub fn is_valid(&self) -> bool {
        self.valid
    }
}

/// Recomputes every moment of `sigma` directly and grades it against `ε`.
pub fn check_moments(sigma: &SignedGridMeasure, epsilon: f64, k_max: u32) -> MomentCertificate {
    let k_max = k_max.max(1);
    let first_moment_error = sigma.moment(1) - 1.0;
    let max_odd_moment = (1..=k_max).map(|k| sigma.odd_moment(k).abs()).fold(0.0, f64::max);
    let tv = sigma.total_variation();
    let tail_bound = 0.5f64.powi(2 * k_max as i32 + 1) * tv;
    let bound = mela_bound(epsilon);
    let valid =
        first_moment_error.abs() <= FIRST_MOMENT_TOL && max_odd_moment + tail_bound <= epsilon && tv <= bound + TV_TOL;
    MomentCertificate {
        epsilon,
        k_max,
        first_moment_error,
        max_odd_moment,
        tail_bound,
        tv,
        mela_bound: bound,
        valid,
    }
}

/// Smallest `k ≥ requested` with `2^{-(2k+1)}·(2|log ε|+6) ≤ ε/4`.
pub fn required_k_max(epsilon: f64, requested: u32) -> u32 {
    let bound = mela_bound(epsilon);
    let mut k = requested.max(1);
    while 0.5f64.powi(2 * k as i32 + 1) * bound > epsilon / 4.0 {
        k += 1;
    }
    k
}

#[derive(Clone, Debug, Serialize)]
pub struct MelaSolution {
    pub measure: SignedGridMeasure,
    pub certificate: MomentCertificate,
    pub grid_size: usize,
    /// `Σ(u_i + v_i)` at the LP optimum.
    pub lp_objective: f64,
    pub lp_dual_objective: f64,
    pub lp_iterations: usize,
}

/// Minimum-variation measure on a uniform grid of `[δ, 1/2]`, `δ = 1/(4·grid)`.
pub fn solve_mela(epsilon: f64, grid_size: usize, k_max: u32) -> Result<MelaSolution> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1/2]",
        });
    }
    if grid_size < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid_size {grid_size} < {MIN_GRID}")));
    }
    let k_max = required_k_max(epsilon, k_max);
    let delta = 1.0 / (4.0 * grid_size as f64);
    let grid: Vec<f64> = (0..grid_size)
        .map(|i| delta + (0.5 - delta) * i as f64 / (grid_size - 1) as f64)
        .collect();

    // Columns: u_0..u_{G-1}, v_0..v_{G-1}; w = u − v.
    let split = |row: Vec<f64>| -> Vec<f64> {
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        row.into_iter().chain(neg).collect()
    };
    let mut lp = LinearProgram::new(vec![1.0; 2 * grid_size]).eq(split(grid.clone()), 1.0);
    for k in 1..=k_max {
        let p = 2 * k as i32 + 1;
        // Rows are scaled by 2^p so that entries (2s)^p lie in (0, 1].
        let row: Vec<f64> = grid.iter().map(|s| (2.0 * s).powi(p)).collect();
        let rhs = 0.5 * epsilon * 2f64.powi(p);
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        lp = lp.ub(split(row), rhs).ub(split(neg), rhs);
    }
    let sol = lp_solve(&lp)?;
    let atoms: Vec<GridAtom> = grid
        .iter()
        .enumerate()
        .map(|(i, &s)| GridAtom {
            s,
            w: sol.x[i] - sol.x[grid_size + i],
        })
        .filter(|a| a.w.abs() > WEIGHT_FLOOR)
        .collect();
    let measure = SignedGridMeasure::new(atoms)?;
    let certificate = check_moments(&measure, epsilon, k_max);
    Ok(MelaSolution {
        measure,
        certificate,
        grid_size,
        lp_objective: sol.objective,
        lp_dual_objective: sol.dual_objective,
        lp_iterations: sol.iterations,
    })
}
