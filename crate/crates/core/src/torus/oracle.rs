//! Independent coefficient recovery: sample on a dense grid, then transform.

use rustfft::FftPlanner;

use super::norms::grid_values;
use super::poly::SparseTrigPoly;
use crate::error::{Error, Result};
use crate::Complex64;

pub const MAX_ORACLE_DIM: usize = 3;

/// Fourier coefficients recovered from grid samples, indexed modulo `grid`.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    dim: usize,
    grid: usize,
    data: Vec<Complex64>,
}

impl DenseSpectrum {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    fn flat_index(&self, m: &[i32]) -> usize {
        m.iter().fold(0usize, |acc, &k| {
            acc * self.grid + (k as i64).rem_euclid(self.grid as i64) as usize
        })
    }

    pub fn coeff(&self, m: &[i32]) -> Complex64 {
        self.data[self.flat_index(m)]
    }

    /// Largest entrywise deviation between this array and a sparse map, over
    /// every grid index (entries absent from `p` must vanish).
    pub fn max_deviation(&self, p: &SparseTrigPoly) -> f64 {
        let mut expected = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for (m, c) in p.iter() {
            expected[self.flat_index(m.coords())] += c;
        }
        self.data
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficients of a function sampled on `{j/grid}^dim` (last axis fastest).
pub fn dense_fft_of_values(dim: usize, grid: usize, mut values: Vec<Complex64>) -> Result<DenseSpectrum> {
    if dim > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_ORACLE_DIM,
        });
    }
    if values.len() != grid.pow(dim as u32) {
        return Err(Error::InvalidArgument("sample count is not grid^dim".into()));
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(grid);
    let mut line = vec![Complex64::new(0.0, 0.0); grid];
    for axis in 0..dim {
        let stride = grid.pow((dim - 1 - axis) as u32);
        let block = stride * grid;
        for base in (0..values.len()).step_by(block) {
            for offset in 0..stride {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = values[base + offset + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    values[base + offset + k * stride] = *v;
                }
            }
        }
    }
    let scale = 1.0 / values.len() as f64;
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(DenseSpectrum {
        dim,
        grid,
        data: values,
    })
}

/// Evaluates `p` on a dense grid and recovers its coefficients by FFT.
///
/// Requires `dim ≤ 3` and `grid > 2·deg(p)` so no two exponents alias.
pub fn dense_fft_oracle(p: &SparseTrigPoly, grid_per_dim: usize) -> Result<DenseSpectrum> {
    if p.dim() > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: p.dim(),
            max: MAX_ORACLE_DIM,
        });
    }
    if grid_per_dim <= 2 * p.max_degree() as usize {
        return Err(Error::InvalidArgument(format!(
            "grid {grid_per_dim} must exceed 2×degree = {}",
            2 * p.max_degree()
        )));
    }
    dense_fft_of_values(p.dim(), grid_per_dim, grid_values(p, grid_per_dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term() {
        let p = SparseTrigPoly::from_terms(1, vec![(vec![1], Complex64::new(0.7, 0.0))]).unwrap();
        let d = dense_fft_oracle(&p, 8).unwrap();
        assert!((d.coeff(&[1]) - Complex64::new(0.7, 0.0)).norm() < 1e-15);
        for k in [0, 2, 3, 4, 5, 6, 7] {
            assert!(d.coeff(&[k]).norm() < 1e-15);
        }
        assert!(d.max_deviation(&p) < 1e-15);
    }

    #[test]
    fn rejects_aliasing_grid_and_high_dim() {
        let p = SparseTrigPoly::from_terms(1, vec![(vec![4], Complex64::new(1.0, 0.0))]).unwrap();
        assert!(dense_fft_oracle(&p, 8).is_err());
        let q = SparseTrigPoly::constant(4, Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(dense_fft_oracle(&q, 4), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn mixed_multivariate_term() {
        let p = SparseTrigPoly::from_terms(
            3,
            vec![
                (vec![1, -2, 0], Complex64::new(0.25, 0.5)),
                (vec![0, 0, -1], Complex64::new(-1.0, 0.0)),
            ],
        )
        .unwrap();
        let d = dense_fft_oracle(&p, 6).unwrap();
        assert!(d.max_deviation(&p) < 1e-13);
    }
}
