//! Riesz-product measures `∏_j (1 + α cos 2π n_j t) dt` over dissociate frequencies.
//!
//! Dissociateness makes every signed sum `Σ ε_j n_j` (`ε_j ∈ {−1,0,1}`)
//! unique, so `σ̂(m) = (α/2)^{#{j : ε_j ≠ 0}}` on the signed sums and zero
//! elsewhere. All limits are replaced by finite windows in `m`.

use std::f64::consts::TAU;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex64;

/// Exhaustive dissociateness certification is attempted up to this many frequencies.
pub const MAX_EXHAUSTIVE_N: usize = 20;
pub const MAX_N: usize = 30;
pub const MAX_RANGE: u64 = 10_000_000;
/// Support listings enumerate all `3^N` signed sums.
pub const MAX_LISTING_N: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr")]
pub struct RieszProductSpec {
    alpha: f64,
    freqs: Vec<i64>,
}

#[derive(Deserialize)]
struct SpecRepr {
    alpha: f64,
    freqs: Vec<i64>,
}

impl TryFrom<SpecRepr> for RieszProductSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        RieszProductSpec::new(r.alpha, r.freqs)
    }
}

impl RieszProductSpec {
    pub fn new(alpha: f64, freqs: Vec<i64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "(0, 1]",
            });
        }
        if freqs.len() > MAX_N {
            return Err(Error::InvalidArgument(format!("{} frequencies > {MAX_N}", freqs.len())));
        }
        if freqs.first().is_some_and(|&f| f <= 0) || freqs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "frequencies must be positive and strictly increasing".into(),
            ));
        }
        // Signed sums must fit comfortably in i64.
        if freqs.iter().any(|&f| f > 1 << 56) {
            return Err(Error::InvalidArgument("frequency too large".into()));
        }
        certify_dissociate(&freqs)?;
        Ok(Self { alpha, freqs })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn freqs(&self) -> &[i64] {
        &self.freqs
    }

    /// `∏_j (1 + α cos 2π n_j t)`.
    pub fn density(&self, t: f64) -> f64 {
        self.freqs
            .iter()
            .map(|&n| 1.0 + self.alpha * (TAU * ((n as f64 * t).rem_euclid(1.0))).cos())
            .product()
    }

    /// Signs `ε` with `m = Σ ε_j n_j`, if any.
    pub fn representation(&self, m: i64) -> Option<Vec<i8>> {
        let n = self.freqs.len();
        let mut partial = vec![0i64; n + 1];
        for j in 0..n {
            partial[j + 1] = partial[j] + self.freqs[j];
        }
        let mut eps = vec![0i8; n];
        fn dfs(freqs: &[i64], partial: &[i64], j: usize, rest: i64, eps: &mut [i8]) -> bool {
            if j == 0 {
                return rest == 0;
            }
            let f = freqs[j - 1];
            for e in [0i8, 1, -1] {
                let r = rest - e as i64 * f;
                if r.abs() <= partial[j - 1] {
                    eps[j - 1] = e;
                    if dfs(freqs, partial, j - 1, r, eps) {
                        return true;
                    }
                }
            }
            eps[j - 1] = 0;
            false
        }
        dfs(&self.freqs, &partial, n, m, &mut eps).then_some(eps)
    }

    /// `σ̂(m)`: `(α/2)^r` when `m` is a signed sum of `r` frequencies, else 0.
    pub fn fourier(&self, m: i64) -> f64 {
        match self.representation(m) {
            Some(eps) => {
                let r = eps.iter().filter(|&&e| e != 0).count();
                (self.alpha / 2.0).powi(r as i32)
            }
            None => 0.0,
        }
    }

    /// `Σ_m |σ̂(m)|² = ∏ (1 + α²/2)`.
    pub fn parseval_mass(&self) -> f64 {
        (1.0 + self.alpha * self.alpha / 2.0).powi(self.freqs.len() as i32)
    }

    /// All `(m, σ̂(m))` with `|m| ≤ m_range`, sorted by `m`.
    pub fn support_coefficients(&self, m_range: u64) -> Result<Vec<(i64, f64)>> {
        if self.freqs.len() > MAX_LISTING_N {
            return Err(Error::InvalidArgument(format!(
                "listing needs N ≤ {MAX_LISTING_N}, got {}",
                self.freqs.len()
            )));
        }
        let half = self.alpha / 2.0;
        let mut out = vec![(0i64, 0u32)];
        for &f in &self.freqs {
            let mut next = Vec::with_capacity(out.len() * 3);
            for &(m, r) in &out {
                next.push((m, r));
                next.push((m + f, r + 1));
                next.push((m - f, r + 1));
            }
            out = next;
        }
        let mut v: Vec<(i64, f64)> = out
            .into_iter()
            .filter(|(m, _)| m.unsigned_abs() <= m_range)
            .map(|(m, r)| (m, half.powi(r as i32)))
            .collect();
        v.sort_by_key(|p| p.0);
        Ok(v)
    }
}

/// Proves `freqs` dissociate: no nonzero `δ ∈ {−2,…,2}^N` has `Σ δ_j n_j = 0`.
fn certify_dissociate(freqs: &[i64]) -> Result<()> {
    let mut acc = 0i64;
    let doubling = freqs.iter().all(|&f| {
        let ok = f > 2 * acc;
        acc += f;
        ok
    });
    if doubling {
        return Ok(());
    }
    if freqs.len() > MAX_EXHAUSTIVE_N {
        return Err(Error::NotDissociate(format!(
            "doubling criterion fails and N = {} is beyond exhaustive certification",
            freqs.len()
        )));
    }
    let (left, right) = freqs.split_at(freqs.len() / 2);
    let sums = |part: &[i64]| -> Vec<i64> {
        let mut v = vec![0i64];
        for &f in part {
            v = v.iter().flat_map(|&s| (-2..=2).map(move |d| s + d * f)).collect();
        }
        v
    };
    let mut ls = sums(left);
    ls.sort_unstable();
    let zero_count = ls.iter().filter(|&&x| x == 0).count();
    if zero_count > 1 {
        return Err(Error::NotDissociate(
            "a signed combination of the lower half vanishes".into(),
        ));
    }
    let rs = sums(right);
    // d = 0 sits in the middle slot at every level, so the zero vector is the middle entry
    let zero_index = rs.len() / 2;
    for (i, &r) in rs.iter().enumerate() {
        if i == zero_index {
            continue;
        }
        if ls.binary_search(&(-r)).is_ok() {
            return Err(Error::NotDissociate(format!(
                "two signed sums coincide (difference {r})"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub m: i64,
    pub value: f64,
}

/// Smallest-`|m|` point (positive first) with the fewest nonzero signs among
/// signed sums in the window; those carry the largest coefficient.
fn best_signed_sum(spec: &RieszProductSpec, m_range: u64, positive_only: bool) -> Option<i64> {
    let n = spec.freqs.len();
    let inside = |m: i64| m != 0 && m.unsigned_abs() <= m_range && (!positive_only || m > 0);
    for r in 1..=n {
        let mut best: Option<i64> = None;
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            for signs in 0u32..(1 << r) {
                let m: i64 = idx
                    .iter()
                    .enumerate()
                    .map(|(b, &j)| {
                        if signs >> b & 1 == 1 {
                            -spec.freqs[j]
                        } else {
                            spec.freqs[j]
                        }
                    })
                    .sum();
                if inside(m) {
                    let key = |x: i64| (x.unsigned_abs(), x < 0);
                    if best.is_none_or(|b| key(m) < key(b)) {
                        best = Some(m);
                    }
                }
            }
            // next r-combination of 0..n
            let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
                break;
            };
            idx[i] += 1;
            for t in i + 1..r {
                idx[t] = idx[t - 1] + 1;
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

fn check_range(range: u64) -> Result<()> {
    if range == 0 || range > MAX_RANGE {
        return Err(Error::InvalidArgument(format!("range {range} outside 1..={MAX_RANGE}")));
    }
    Ok(())
}

/// `max_{0<|m|≤m_range} |σ̂(m)|^k` (the coefficients of `σ^{*k}`) and its location.
pub fn convolution_power_profile(spec: &RieszProductSpec, k: u32, m_range: u64) -> Result<Peak> {
    check_range(m_range)?;
    if k == 0 {
        return Err(Error::InvalidArgument("power must be positive".into()));
    }
    Ok(match best_signed_sum(spec, m_range, false) {
        Some(m) => Peak {
            m,
            value: spec.fourier(m).abs().powi(k as i32),
        },
        None => Peak { m: 1, value: 0.0 },
    })
}

/// `argmax_{0<g≤g_range} |σ̂(g)|/σ̂(0)`.
pub fn rigidity_search(spec: &RieszProductSpec, g_range: u64) -> Result<Peak> {
    check_range(g_range)?;
    Ok(match best_signed_sum(spec, g_range, true) {
        Some(g) => Peak {
            m: g,
            value: spec.fourier(g).abs() / spec.fourier(0),
        },
        None => Peak { m: 1, value: 0.0 },
    })
}

/// `σ̂(m)` by closed form.
pub fn riesz_fourier(spec: &RieszProductSpec, m: i64) -> f64 {
    spec.fourier(m)
}

/// Coefficients of the density recovered by FFT of `grid` samples; entry `k`
/// holds `σ̂(k)` for `k < grid/2` and `σ̂(k − grid)` above.
pub fn riesz_dense_oracle(spec: &RieszProductSpec, grid: usize) -> Vec<Complex64> {
    let mut values: Vec<Complex64> = (0..grid)
        .map(|i| Complex64::new(spec.density(i as f64 / grid as f64), 0.0))
        .collect();
    FftPlanner::<f64>::new().plan_fft_forward(grid).process(&mut values);
    values.iter().map(|v| v / grid as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let one = RieszProductSpec::new(0.5, vec![1]).unwrap();
        assert_eq!(one.fourier(1), 0.25);
        assert_eq!(one.fourier(0), 1.0);
        let two = RieszProductSpec::new(0.5, vec![3, 9]).unwrap();
        assert_eq!(two.fourier(12), 0.0625);
        assert_eq!(two.fourier(-6), 0.0625);
        assert_eq!(two.fourier(5), 0.0);
    }

    #[test]
    fn rejects_non_dissociate() {
        assert!(matches!(
            RieszProductSpec::new(0.5, vec![1, 2, 3]),
            Err(Error::NotDissociate(_))
        ));
        assert!(matches!(
            RieszProductSpec::new(0.5, vec![1, 2, 4, 7]),
            Err(Error::NotDissociate(_))
        ));
        assert!(RieszProductSpec::new(0.5, vec![3, 5]).is_ok());
        assert!(RieszProductSpec::new(1.5, vec![3]).is_err());
        assert!(RieszProductSpec::new(0.5, vec![3, 3]).is_err());
    }

    #[test]
    fn profile_examples() {
        let lac = RieszProductSpec::new(0.5, (1..=8).map(|j| 3i64.pow(j)).collect()).unwrap();
        assert_eq!(
            convolution_power_profile(&lac, 1, 10_000).unwrap(),
            Peak { m: 3, value: 0.25 }
        );
        assert_eq!(
            convolution_power_profile(&lac, 3, 10_000).unwrap(),
            Peak { m: 3, value: 0.015625 }
        );
        let full = RieszProductSpec::new(1.0, vec![5, 17]).unwrap();
        assert_eq!(convolution_power_profile(&full, 1, 100).unwrap().value, 0.5);
    }

    #[test]
    fn rigidity_examples() {
        let two = RieszProductSpec::new(0.5, vec![3, 9]).unwrap();
        assert_eq!(rigidity_search(&two, 100).unwrap(), Peak { m: 3, value: 0.25 });
        let single = RieszProductSpec::new(1.0, vec![2]).unwrap();
        assert_eq!(rigidity_search(&single, 10).unwrap(), Peak { m: 2, value: 0.5 });
        let lebesgue = RieszProductSpec::new(0.5, vec![]).unwrap();
        assert_eq!(rigidity_search(&lebesgue, 10).unwrap().value, 0.0);
    }

    #[test]
    fn window_excluding_frequencies_falls_to_differences() {
        let spec = RieszProductSpec::new(0.5, vec![10, 13]).unwrap();
        let p = convolution_power_profile(&spec, 1, 5).unwrap();
        assert_eq!(p, Peak { m: 3, value: 0.0625 });
    }

    #[test]
    fn listing_is_sorted_and_complete() {
        let spec = RieszProductSpec::new(0.5, vec![3, 9]).unwrap();
        let v = spec.support_coefficients(100).unwrap();
        let ms: Vec<i64> = v.iter().map(|p| p.0).collect();
        assert_eq!(ms, vec![-12, -9, -6, -3, 0, 3, 6, 9, 12]);
    }
}
