//! Lattices, trigonometric polynomials and atomic measures on the torus.

mod freq;
mod independence;
mod measure;
mod norms;
mod oracle;
mod poly;

pub use freq::{circular_distance, FiniteFrequencySet, Frequency, FLOAT_FREQ_TOL};
pub use independence::{independence_check, Independence};
pub use measure::{Atom, AtomicCircleMeasure};
pub use norms::{grid_min_real, grid_values, l1_norm_monte_carlo, l1_norm_torus, monte_carlo_abs_mean};
pub use oracle::{dense_fft_of_values, dense_fft_oracle, DenseSpectrum};
pub use poly::{LatticePoint, SparseTrigPoly, PRUNE_TOL};

/// `Σ_m |c_m|` of a polynomial viewed on the torus.
pub fn a_norm_lattice(p: &SparseTrigPoly) -> f64 {
    p.a_norm()
}

/// `σ̂(g) = Σ_j w_j e^{2πi g λ_j}`.
pub fn fourier_coeff(mu: &AtomicCircleMeasure, g: i64) -> crate::Complex64 {
    mu.fourier_coeff(g)
}
