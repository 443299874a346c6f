//! Desk-scale laboratory for thin sets, Riesz products and spectral projectors.
//!
//! The crate is organised bottom-up:
//!
//! * [`torus`]: sparse trigonometric polynomials on `T^n`, atomic measures on
//!   the circle, exact rational frequencies and the dense FFT oracle.
//! * [`lp`]: a dense two-phase simplex solver used by the moment problem and
//!   the approximate-indicator construction.
//! * [`mela`]: the odd-moment linear program producing mixing measures on
//!   `(0, 1/2]` with certified total variation.
//! * [`drury`]: finite Riesz products `Q_s`, their `z̄` coefficient `P_s`, and
//!   the mixed Drury functions on `Z^n`.
//! * [`helson`]: Helson-constant estimates, approximate indicators, the
//!   telescoping projector series and `L^p` growth on a rotation model.
//! * [`riesz`]: one-variable Riesz-product measures over dissociate frequencies.
//! * [`gauss`]: stationary sequences with atomic spectra and the moment
//!   diagnostics (Carleman, log-convexity, quasi-analyticity, Gaussianity).
//! * [`verify`]: the acceptance checks bundled as a reproducible report.

// `!(x > 0.0)` is how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod drury;
pub mod error;
pub mod gauss;
pub mod helson;
pub mod lp;
pub mod mela;
pub mod parse;
pub mod riesz;
pub mod stats;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
