use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::poly::{PowerTable, SparseTrigPoly};
use crate::error::{Error, Result};
use crate::stats::RunningMoments;
use crate::Complex64;

/// Largest dimension handled by dense-grid quadrature.
pub const MAX_QUADRATURE_DIM: usize = 4;

/// Samples per Monte Carlo work unit; fixed so results do not depend on the
/// number of worker threads.
const MC_CHUNK: usize = 4096;

/// Values of `p` on the uniform grid `{j/grid}^n`, last coordinate fastest.
pub fn grid_values(p: &SparseTrigPoly, grid: usize) -> Vec<Complex64> {
    let dim = p.dim();
    let total = grid.pow(dim as u32);
    let roots: Vec<Complex64> = (0..grid)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / grid as f64))
        .collect();
    let terms: Vec<(Vec<i64>, Complex64)> = p
        .iter()
        .map(|(m, c)| {
            (
                m.coords().iter().map(|&x| (x as i64).rem_euclid(grid as i64)).collect(),
                *c,
            )
        })
        .collect();
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = unflatten(flat, dim, grid);
            terms
                .iter()
                .map(|(m, c)| {
                    let phase: i64 = m.iter().zip(&idx).map(|(a, &b)| a * b as i64).sum();
                    c * roots[(phase % grid as i64) as usize]
                })
                .sum()
        })
        .collect()
}

pub(crate) fn unflatten(mut flat: usize, dim: usize, grid: usize) -> Vec<usize> {
    let mut idx = vec![0; dim];
    for slot in idx.iter_mut().rev() {
        *slot = flat % grid;
        flat /= grid;
    }
    idx
}

/// `∫_{T^n} |p|` by averaging over a uniform grid of `grid^n` points.
///
/// Requires `dim ≤ 4` and `grid ≥ 4·deg(p)`.
pub fn l1_norm_torus(p: &SparseTrigPoly, grid_per_dim: usize) -> Result<f64> {
    if p.dim() > MAX_QUADRATURE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: p.dim(),
            max: MAX_QUADRATURE_DIM,
        });
    }
    let need = 4 * p.max_degree() as usize;
    if grid_per_dim == 0 || grid_per_dim < need {
        return Err(Error::InvalidArgument(format!(
            "grid {grid_per_dim} below 4×degree = {need}"
        )));
    }
    let values = grid_values(p, grid_per_dim);
    Ok(values.iter().map(|v| v.norm()).sum::<f64>() / values.len() as f64)
}

/// Minimum of the real part over the grid; used for positivity checks.
pub fn grid_min_real(p: &SparseTrigPoly, grid_per_dim: usize) -> Result<f64> {
    if p.dim() > MAX_QUADRATURE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: p.dim(),
            max: MAX_QUADRATURE_DIM,
        });
    }
    Ok(grid_values(p, grid_per_dim)
        .iter()
        .map(|v| v.re)
        .fold(f64::INFINITY, f64::min))
}

/// Monte Carlo estimate of `∫|f|` over `T^dim` with its standard error.
///
/// `f` receives a point as unit complex numbers. Deterministic for a given
/// seed regardless of the thread pool size.
pub fn monte_carlo_abs_mean<F>(dim: usize, samples: usize, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<RunningMoments> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let n = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut acc = RunningMoments::default();
            let mut z = vec![Complex64::new(1.0, 0.0); dim];
            for _ in 0..n {
                for zj in z.iter_mut() {
                    *zj = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
                }
                acc.push(f(&z));
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(RunningMoments::default(), |a, b| a.merge(&b));
    (total.mean(), total.std_error())
}

/// Monte Carlo `L¹(T^n)` norm for polynomials of any dimension.
///
/// Returns `(estimate, std_error)`; needs at least `10³` samples.
pub fn l1_norm_monte_carlo(p: &SparseTrigPoly, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples < 1000 {
        return Err(Error::InvalidArgument(format!("{samples} samples < 1000")));
    }
    let deg = p.max_degree() as usize;
    let terms: Vec<(Vec<i32>, Complex64)> = p.iter().map(|(m, c)| (m.coords().to_vec(), *c)).collect();
    Ok(monte_carlo_abs_mean(p.dim(), samples, seed, |z| {
        let powers = PowerTable::new(z, deg);
        terms
            .iter()
            .map(|(m, c)| c * powers.monomial(m))
            .sum::<Complex64>()
            .norm()
    }))
}
