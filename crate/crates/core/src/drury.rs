//! Finite Riesz products on `T^n × T` and the Drury functions built from them.
//!
//! `Q_s(z, w) = ∏_j (1 + s(z_j w + z̄_j w̄))` is non-negative for `s ≤ 1/2`,
//! so its `L¹` norm equals its constant coefficient, 1. The coefficient of
//! `w̄` is the polynomial `P_s` on `T^n`: it carries `s` at each `−e_j` and
//! `s^{2a+1}` at `1_A − 1_B` whenever `|B| = |A| + 1 = a + 1`.
//!
//! Orientation: with `e^{+2πi m·t}` characters, the basis support of `P_s`
//! sits at the points `−e_j`. A [`DruryFunction`] reports its basis values
//! there.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mela::{SignedGridMeasure, FIRST_MOMENT_TOL};
use crate::torus::{monte_carlo_abs_mean, LatticePoint, SparseTrigPoly};
use crate::Complex64;

pub const MAX_EXPAND_N: usize = 14;
pub const MAX_COUNT_N: usize = 30;
/// Slack on basis normalisation and on the off-basis bound.
pub const DRURY_TOL: f64 = 1e-8;

fn check_args(n: usize, s: f64) -> Result<()> {
    if n == 0 || n > MAX_EXPAND_N {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_EXPAND_N,
        });
    }
    if !(s > 0.0 && s <= 0.5) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "(0, 1/2]",
        });
    }
    Ok(())
}

/// Sparse expansion of `Q_s` on `T^{n+1}`; the last coordinate is `w`.
pub fn expand_q(n: usize, s: f64) -> Result<SparseTrigPoly> {
    check_args(n, s)?;
    let mut acc: BTreeMap<LatticePoint, Complex64> = BTreeMap::new();
    acc.insert(LatticePoint::zero(n + 1), Complex64::new(1.0, 0.0));
    for j in 0..n {
        let mut next: BTreeMap<LatticePoint, Complex64> = BTreeMap::new();
        for (m, c) in &acc {
            *next.entry(m.clone()).or_default() += c;
            for sign in [1, -1] {
                let mut k = m.0.clone();
                k[j] += sign;
                k[n] += sign;
                *next.entry(LatticePoint(k)).or_default() += c * s;
            }
        }
        acc = next;
    }
    Ok(SparseTrigPoly::from_sorted_unchecked(n + 1, acc))
}

/// Coefficient of `w^{-1}` in a polynomial on `T^{n+1}` (last coordinate `w`),
/// as a polynomial on `T^n`.
pub fn wbar_coefficient(q: &SparseTrigPoly) -> Result<SparseTrigPoly> {
    let n = q.dim() - 1;
    SparseTrigPoly::from_terms(
        n.max(1),
        q.iter()
            .filter(|(m, _)| m.coords()[n] == -1)
            .map(|(m, c)| (LatticePoint(m.coords()[..n].to_vec()), *c)),
    )
}

/// Support points `1_A − 1_B` of `P_s` in lexicographic order, paired with `|A|`.
pub fn drury_support(n: usize) -> Vec<(LatticePoint, u32)> {
    fn walk(n: usize, cur: &mut Vec<i32>, neg: i32, pos: i32, out: &mut Vec<(LatticePoint, u32)>) {
        let left = (n - cur.len()) as i32;
        if left == 0 {
            if neg == pos + 1 {
                out.push((LatticePoint(cur.clone()), pos as u32));
            }
            return;
        }
        for v in [-1, 0, 1] {
            let (ng, ps) = (neg + (v == -1) as i32, pos + (v == 1) as i32);
            if (1 - (ng - ps)).abs() < left {
                cur.push(v);
                walk(n, cur, ng, ps, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(n, &mut Vec::with_capacity(n), 0, 0, &mut out);
    out
}

/// `P_s` built directly from its support description.
pub fn extract_p(n: usize, s: f64) -> Result<SparseTrigPoly> {
    check_args(n, s)?;
    let coeffs = drury_support(n)
        .into_iter()
        .map(|(m, a)| (m, Complex64::new(s.powi(2 * a as i32 + 1), 0.0)))
        .collect();
    Ok(SparseTrigPoly::from_sorted_unchecked(n, coeffs))
}

/// `Σ_{a≥0} C(n,a)·C(n−a, a+1)`, the number of terms of `P_s`.
pub fn support_count(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_COUNT_N {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_COUNT_N,
        });
    }
    let binom = |n: u64, k: u64| -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    };
    let n = n as u64;
    Ok((0..=n).map(|a| binom(n, a) * binom(n - a, a + 1)).sum())
}

/// `P_s(z)` evaluated through the product form, `O(n²)` per point.
pub fn eval_p_product(s: f64, z: &[Complex64]) -> Complex64 {
    let n = z.len();
    // index k + n holds the coefficient of w^k
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    for (j, &zj) in z.iter().enumerate() {
        let (up, down) = (zj * s, zj.conj() * s);
        let lo = n - j - 1;
        let hi = n + j + 1;
        let mut next = c.clone();
        for k in lo..=hi {
            if k > 0 {
                next[k] += up * c[k - 1];
            }
            if k + 1 < c.len() {
                next[k] += down * c[k + 1];
            }
        }
        c = next;
    }
    c[n - 1]
}

/// `P = ∫ P_s dσ(s)` at a point, via the product form.
pub fn eval_mixed_product(sigma: &SignedGridMeasure, z: &[Complex64]) -> Complex64 {
    sigma.atoms().iter().map(|a| eval_p_product(a.s, z) * a.w).sum()
}

/// Monte Carlo `‖∫P_s dσ‖_{L¹(T^n)}` from the product form, `(estimate, std_error)`.
pub fn mixed_l1_monte_carlo(n: usize, sigma: &SignedGridMeasure, samples: usize, seed: u64) -> (f64, f64) {
    monte_carlo_abs_mean(n, samples, seed, |z| eval_mixed_product(sigma, z).norm())
}

/// An element of `A(Z^n)` equal to 1 on the basis image `{−e_j}` and at most
/// `epsilon` in modulus elsewhere.
#[derive(Clone, Debug, Serialize)]
pub struct DruryFunction {
    pub dim: usize,
    pub psi: SparseTrigPoly,
    /// `‖σ‖`, an upper bound for `‖ψ‖_{A(Z^n)} = ‖P‖_{L¹(T^n)}`.
    pub a_norm_bound: f64,
    pub epsilon: f64,
}

impl DruryFunction {
    /// Values at `−e_1, …, −e_n`.
    pub fn basis_values(&self) -> Vec<Complex64> {
        (0..self.dim)
            .map(|j| self.psi.coeff(LatticePoint::basis(self.dim, j, -1).coords()))
            .collect()
    }

    pub fn max_basis_error(&self) -> f64 {
        self.basis_values()
            .iter()
            .map(|v| (v - Complex64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|ψ(m)|` over the full support away from the basis image.
    pub fn max_off_basis(&self) -> f64 {
        self.psi
            .iter()
            .filter(|(m, _)| !is_negative_basis(m))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

fn is_negative_basis(m: &LatticePoint) -> bool {
    m.coords().iter().filter(|&&x| x != 0).count() == 1 && m.coords().contains(&-1)
}

/// Mixes `P_s` over `σ`: `ψ(1_A − 1_B) = ∫ s^{2|A|+1} dσ`.
///
/// Only the moments that occur in dimension `n` are checked: the first (basis
/// values) and the odd moments up to `2⌊(n−1)/2⌋+1` (off-basis values).
pub fn mix_drury(n: usize, sigma: &SignedGridMeasure, epsilon: f64) -> Result<DruryFunction> {
    check_args(n, 0.5)?;
    if !(epsilon > 0.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, ∞)",
        });
    }
    let levels = (n as u32 - 1) / 2;
    let moments: Vec<f64> = (0..=levels).map(|a| sigma.odd_moment(a)).collect();
    if (moments[0] - 1.0).abs() > FIRST_MOMENT_TOL {
        return Err(Error::MomentCheckFailed(format!(
            "first moment {} differs from 1",
            moments[0]
        )));
    }
    if let Some((k, m)) = moments
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, m)| m.abs() > epsilon + DRURY_TOL)
    {
        return Err(Error::MomentCheckFailed(format!(
            "|∫ s^{} dσ| = {} exceeds ε = {epsilon}",
            2 * k + 1,
            m.abs()
        )));
    }
    let coeffs = drury_support(n)
        .into_iter()
        .map(|(m, a)| (m, Complex64::new(moments[a as usize], 0.0)))
        .collect();
    Ok(DruryFunction {
        dim: n,
        psi: SparseTrigPoly::from_sorted_unchecked(n, coeffs),
        a_norm_bound: sigma.total_variation(),
        epsilon,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DruryReport {
    pub dim: usize,
    pub epsilon: f64,
    pub support_size: usize,
    pub max_basis_error: f64,
    pub max_off_basis: f64,
    pub a_norm_bound: f64,
    pub l1_estimate: f64,
    pub l1_std_error: f64,
    pub valid: bool,
}

/// Checks every invariant of `f` and estimates `‖P‖_{L¹}` independently
/// through the product form of `P_s`.
pub fn verify_drury(f: &DruryFunction, sigma: &SignedGridMeasure, samples: usize, seed: u64) -> DruryReport {
    let (l1_estimate, l1_std_error) = mixed_l1_monte_carlo(f.dim, sigma, samples, seed);
    let max_basis_error = f.max_basis_error();
    let max_off_basis = f.max_off_basis();
    let valid = max_basis_error <= DRURY_TOL
        && max_off_basis <= f.epsilon + DRURY_TOL
        && l1_estimate <= f.a_norm_bound + 3.0 * l1_std_error;
    DruryReport {
        dim: f.dim,
        epsilon: f.epsilon,
        support_size: f.psi.len(),
        max_basis_error,
        max_off_basis,
        a_norm_bound: f.a_norm_bound,
        l1_estimate,
        l1_std_error,
        valid,
    }
}
