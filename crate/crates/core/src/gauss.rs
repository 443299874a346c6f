//! Stationary sequences with a prescribed atomic spectral measure, and the
//! moment diagnostics run on them.
//!
//! A Gaussian sequence whose spectrum is atomic is not ergodic: one sample
//! path only ever sees one draw of the amplitudes `ζ_j`. Models therefore
//! carry a block length. Each block of `block_len` consecutive samples uses a
//! fresh draw, so a long sequence is a concatenation of independent
//! realizations and time averages estimate ensemble expectations. With
//! `block_len = length` the sequence is a single literal realization.
//! Estimators only pair samples inside one block and take their standard
//! errors from block-to-block variation.

use std::f64::consts::TAU;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{linear_fit, pairwise_sum};
use crate::torus::{Atom, AtomicCircleMeasure};
use crate::Complex64;

pub const MAX_LENGTH: usize = 10_000_000;
pub const MAX_ATOMS: usize = 10_000;
pub const MAX_MOMENT_P: u32 = 32;
pub const MAX_GAUSSIANITY_K: u32 = 6;
pub const MAX_QUASI_K: usize = 1000;
pub const BOOTSTRAP_REPLICATES: usize = 1000;
/// Samples generated per parallel work item; fixed so output never depends on thread count.
const CHUNK: usize = 4096;
/// With fewer independent blocks than this, errors come from batch means within the sequence.
const MIN_BLOCKS: usize = 20;
const BATCHES: usize = 50;
/// Cap on error units; consecutive blocks are merged beyond it.
const MAX_UNITS: usize = 1000;
const BOOTSTRAP_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Independent standard complex Gaussian amplitudes.
    Gaussian,
    /// Unit-modulus amplitudes with independent uniform phases.
    RandomPhase,
}

/// `X_n = Σ_j √w_j ζ_j e^{2πi n λ_j}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StationaryModel {
    pub kind: ModelKind,
    pub spectrum: AtomicCircleMeasure,
    pub length: usize,
    pub seed: u64,
    pub block_len: usize,
}

pub type GaussianModel = StationaryModel;
pub type RandomPhaseModel = StationaryModel;

impl StationaryModel {
    pub fn new(kind: ModelKind, spectrum: AtomicCircleMeasure, length: usize, seed: u64) -> Result<Self> {
        Self::with_blocks(kind, spectrum, length, seed, length)
    }

    pub fn with_blocks(
        kind: ModelKind,
        spectrum: AtomicCircleMeasure,
        length: usize,
        seed: u64,
        block_len: usize,
    ) -> Result<Self> {
        if spectrum.is_empty() || spectrum.len() > MAX_ATOMS {
            return Err(Error::InvalidArgument(format!("need 1..={MAX_ATOMS} atoms")));
        }
        if spectrum
            .atoms()
            .iter()
            .any(|a| a.weight.im != 0.0 || !(a.weight.re > 0.0))
        {
            return Err(Error::InvalidArgument("spectral weights must be positive reals".into()));
        }
        if length == 0 || length > MAX_LENGTH {
            return Err(Error::InvalidArgument(format!(
                "length {length} outside 1..={MAX_LENGTH}"
            )));
        }
        if block_len == 0 || block_len > length {
            return Err(Error::InvalidArgument(format!(
                "block length {block_len} outside 1..={length}"
            )));
        }
        Ok(Self {
            kind,
            spectrum,
            length,
            seed,
            block_len,
        })
    }

    pub fn gaussian(spectrum: AtomicCircleMeasure, length: usize, seed: u64) -> Result<Self> {
        Self::new(ModelKind::Gaussian, spectrum, length, seed)
    }

    pub fn random_phase(spectrum: AtomicCircleMeasure, length: usize, seed: u64) -> Result<Self> {
        Self::new(ModelKind::RandomPhase, spectrum, length, seed)
    }

    pub fn mass(&self) -> f64 {
        self.spectrum.total_variation()
    }

    pub fn simulate(&self) -> SampleSeq {
        self.synthesize(&vec![true; self.spectrum.len()])
    }

    /// Amplitudes of block `b`, drawn for every atom so masks share them.
    fn amplitudes(&self, b: usize) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(b as u64);
        self.spectrum
            .atoms()
            .iter()
            .map(|a| {
                let z = match self.kind {
                    ModelKind::Gaussian => {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re, im) / 2f64.sqrt()
                    }
                    ModelKind::RandomPhase => Complex64::from_polar(1.0, TAU * rng.random::<f64>()),
                };
                z * a.weight.re.sqrt()
            })
            .collect()
    }

    /// The sequence restricted to atoms with `mask[j]`; the amplitudes are
    /// the same draws as in [`simulate`](Self::simulate).
    pub fn synthesize(&self, mask: &[bool]) -> SampleSeq {
        assert_eq!(mask.len(), self.spectrum.len());
        let atoms: Vec<(usize, &Atom)> = self
            .spectrum
            .atoms()
            .iter()
            .enumerate()
            .filter(|(j, _)| mask[*j])
            .collect();
        let steps: Vec<Complex64> = atoms.iter().map(|(_, a)| a.freq.character(1)).collect();
        let values: Vec<Complex64> = (0..self.length.div_ceil(CHUNK))
            .into_par_iter()
            .flat_map_iter(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(self.length);
                let mut out = Vec::with_capacity(end - start);
                let mut n = start;
                while n < end {
                    let b = n / self.block_len;
                    let stop = end.min((b + 1) * self.block_len);
                    let amp = self.amplitudes(b);
                    let mut cur: Vec<Complex64> = atoms
                        .iter()
                        .map(|(j, a)| amp[*j] * a.freq.character(n as i64))
                        .collect();
                    for _ in n..stop {
                        out.push(cur.iter().sum());
                        for (x, s) in cur.iter_mut().zip(&steps) {
                            *x *= s;
                        }
                    }
                    n = stop;
                }
                out
            })
            .collect();
        SampleSeq {
            values,
            block_len: self.block_len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSeq {
    pub values: Vec<Complex64>,
    /// Samples in `[b·block_len, (b+1)·block_len)` share one amplitude draw.
    pub block_len: usize,
}

impl SampleSeq {
    /// A single realization.
    pub fn single(values: Vec<Complex64>) -> Self {
        let block_len = values.len().max(1);
        Self { values, block_len }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.conj()).collect(),
            block_len: self.block_len,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            block_len: self.block_len,
        }
    }

    pub fn blocks(&self) -> Vec<Range<usize>> {
        (0..self.len().div_ceil(self.block_len))
            .map(|b| b * self.block_len..((b + 1) * self.block_len).min(self.len()))
            .collect()
    }

    /// Units for standard errors: the independent blocks when there are
    /// enough of them (merged in runs past `MAX_UNITS`), else equal batches
    /// of the sequence.
    pub fn error_units(&self) -> Vec<Range<usize>> {
        let nblocks = self.len().div_ceil(self.block_len);
        if nblocks > MAX_UNITS {
            let run = nblocks.div_ceil(MAX_UNITS) * self.block_len;
            return (0..self.len().div_ceil(run))
                .map(|u| u * run..((u + 1) * run).min(self.len()))
                .collect();
        }
        let blocks = self.blocks();
        if blocks.len() >= MIN_BLOCKS || self.len() < BATCHES {
            return blocks;
        }
        let size = self.len() / BATCHES;
        (0..BATCHES)
            .map(|i| i * size..if i + 1 == BATCHES { self.len() } else { (i + 1) * size })
            .collect()
    }
}

/// Mean and standard error of per-unit values weighted by unit size.
fn unit_mean_se(values: &[f64], weights: &[f64]) -> (f64, f64) {
    let wsum: f64 = weights.iter().sum();
    let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / wsum;
    let k = values.len();
    if k < 2 {
        return (mean, 0.0);
    }
    // ratio-estimator variance for unequal unit sizes
    let wbar = wsum / k as f64;
    let var = values
        .iter()
        .zip(weights)
        .map(|(v, w)| (w / wbar * (v - mean)).powi(2))
        .sum::<f64>()
        / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub g: i64,
    pub re: f64,
    pub im: f64,
    /// Standard error of the complex estimate (root of the summed component variances).
    pub std_error: f64,
}

impl SpectralEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Lag-`g` products `X_{n+g} conj(X_n)` inside a unit, summed.
fn lag_sum(v: &[Complex64], unit: &Range<usize>, block_len: usize, g: usize) -> (Complex64, usize) {
    let mut s = Complex64::new(0.0, 0.0);
    let mut count = 0;
    for n in unit.clone() {
        let m = n + g;
        if m < unit.end && m / block_len == n / block_len {
            s += v[m] * v[n].conj();
            count += 1;
        }
    }
    (s, count)
}

/// `σ̂_f(g)` for `|g| ≤ g_max` by time averages of `X_{n+g} conj(X_n)`.
pub fn estimate_spectral(seq: &SampleSeq, g_max: usize) -> Result<Vec<SpectralEstimate>> {
    if g_max > seq.len() / 10 || g_max >= seq.block_len {
        return Err(Error::InvalidArgument(format!(
            "g_max {g_max} must be ≤ length/10 and < block length {}",
            seq.block_len
        )));
    }
    let units = seq.error_units();
    let positive: Vec<SpectralEstimate> = (0..=g_max)
        .into_par_iter()
        .map(|g| {
            let parts: Vec<(Complex64, usize)> = units
                .iter()
                .map(|u| lag_sum(&seq.values, u, seq.block_len, g))
                .collect();
            let (re, im, w): (Vec<f64>, Vec<f64>, Vec<f64>) = parts
                .iter()
                .filter(|p| p.1 > 0)
                .map(|(s, c)| (s.re / *c as f64, s.im / *c as f64, *c as f64))
                .fold((vec![], vec![], vec![]), |mut acc, (a, b, c)| {
                    acc.0.push(a);
                    acc.1.push(b);
                    acc.2.push(c);
                    acc
                });
            let (mr, sr) = unit_mean_se(&re, &w);
            let (mi, si) = unit_mean_se(&im, &w);
            SpectralEstimate {
                g: g as i64,
                re: mr,
                im: mi,
                std_error: sr.hypot(si),
            }
        })
        .collect();
    let mut out: Vec<SpectralEstimate> = positive[1..]
        .iter()
        .rev()
        .map(|e| SpectralEstimate {
            g: -e.g,
            re: e.re,
            im: -e.im,
            std_error: e.std_error,
        })
        .collect();
    out.extend(positive);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralProcess {
    pub thresholds: Vec<f64>,
    /// `f_{t_{i+1}} − f_{t_i}`: the atoms with frequency in `[t_i, t_{i+1})`.
    pub increments: Vec<SampleSeq>,
    /// Spectral mass of each window.
    pub window_mass: Vec<f64>,
}

/// Increments of `f_t`, the part of `f` carried by atoms of frequency below `t`.
pub fn spectral_process(model: &StationaryModel, thresholds: &[f64]) -> Result<SpectralProcess> {
    if thresholds.len() < 2
        || thresholds.windows(2).any(|w| w[0] >= w[1])
        || thresholds[0] < 0.0
        || thresholds[thresholds.len() - 1] > 1.0
    {
        return Err(Error::InvalidArgument(
            "thresholds must be strictly increasing in [0, 1]".into(),
        ));
    }
    let freqs: Vec<f64> = model.spectrum.atoms().iter().map(|a| a.freq.value()).collect();
    let mut increments = Vec::new();
    let mut window_mass = Vec::new();
    for w in thresholds.windows(2) {
        let mask: Vec<bool> = freqs.iter().map(|&f| f >= w[0] && f < w[1]).collect();
        window_mass.push(
            model
                .spectrum
                .atoms()
                .iter()
                .zip(&mask)
                .filter(|(_, m)| **m)
                .map(|(a, _)| a.weight.re)
                .sum(),
        );
        increments.push(model.synthesize(&mask));
    }
    Ok(SpectralProcess {
        thresholds: thresholds.to_vec(),
        increments,
        window_mass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Correlation {
    pub re: f64,
    pub im: f64,
    pub std_error: f64,
}

/// `E[a_n conj(b_n)]` with its standard error.
pub fn cross_correlation(a: &SampleSeq, b: &SampleSeq) -> Correlation {
    let units = a.error_units();
    let (mut re, mut im, mut w) = (vec![], vec![], vec![]);
    for u in &units {
        let s: Complex64 = a.values[u.clone()]
            .iter()
            .zip(&b.values[u.clone()])
            .map(|(x, y)| x * y.conj())
            .sum();
        let c = u.len() as f64;
        re.push(s.re / c);
        im.push(s.im / c);
        w.push(c);
    }
    let (mr, sr) = unit_mean_se(&re, &w);
    let (mi, si) = unit_mean_se(&im, &w);
    Correlation {
        re: mr,
        im: mi,
        std_error: sr.hypot(si),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CumulantTest {
    /// `(E|a|²|b|² − E|a|² E|b|²) / (E|a|² E|b|²)`.
    pub statistic: f64,
    /// 99.5% quantile of `|statistic|` when units of `b` are shuffled against `a`.
    pub null_threshold: f64,
    pub dependent: bool,
}

/// `(E|a|²|b|² − E|a|² E|b|²) / (E|a|² E|b|²)` with unit `i` of `a` paired
/// with unit `(i + shift) mod U` of `b`, truncated to the shorter of the two.
fn shifted_cross_cumulant(a: &SampleSeq, b: &SampleSeq, units: &[Range<usize>], shift: usize) -> f64 {
    let u = units.len();
    let (mut sa, mut sb, mut sab, mut count) = (0.0, 0.0, 0.0, 0.0);
    for (i, ua) in units.iter().enumerate() {
        let ub = &units[(i + shift) % u];
        for (x, y) in a.values[ua.clone()].iter().zip(&b.values[ub.clone()]) {
            let (x, y) = (x.norm_sqr(), y.norm_sqr());
            sa += x;
            sb += y;
            sab += x * y;
            count += 1.0;
        }
    }
    let (ea, eb) = (sa / count, sb / count);
    (sab / count - ea * eb) / (ea * eb)
}

/// Fourth-order dependence between two increments. The null distribution
/// comes from pairing units of `a` with shifted units of `b`, which keeps
/// each marginal and destroys any joint structure.
pub fn cross_cumulant_test(a: &SampleSeq, b: &SampleSeq, replicates: usize, seed: u64) -> Result<CumulantTest> {
    if a.len() != b.len() || a.block_len != b.block_len {
        return Err(Error::InvalidArgument("increments must have equal shape".into()));
    }
    let units = a.error_units();
    if units.len() < 2 {
        return Err(Error::InvalidArgument("need at least two error units".into()));
    }
    let statistic = shifted_cross_cumulant(a, b, &units, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<usize> = (0..replicates).map(|_| rng.random_range(1..units.len())).collect();
    let mut null: Vec<f64> = shifts
        .par_iter()
        .map(|&s| shifted_cross_cumulant(a, b, &units, s).abs())
        .collect();
    null.sort_by(f64::total_cmp);
    let null_threshold = match null.len() {
        0 => 0.0,
        n => null[((n as f64 * 0.995).ceil() as usize).clamp(1, n) - 1],
    };
    Ok(CumulantTest {
        statistic,
        null_threshold,
        dependent: statistic.abs() > null_threshold,
    })
}

/// Per-unit sums of `|X|^p` for each `p` in `ps`.
fn unit_power_sums(seq: &SampleSeq, ps: &[u32]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let units = seq.error_units();
    let sums: Vec<Vec<f64>> = units
        .par_iter()
        .map(|u| {
            let mut s = vec![0.0; ps.len()];
            for v in &seq.values[u.clone()] {
                let r2 = v.norm_sqr();
                for (acc, &p) in s.iter_mut().zip(ps) {
                    *acc += r2.powi(p as i32 / 2);
                }
            }
            s
        })
        .collect();
    let sizes = units.iter().map(|u| u.len() as f64).collect();
    (sums, sizes)
}

fn resample(units: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..units).map(|_| rng.random_range(0..units)).collect()
}

/// Empirical `E|X|^p` from a multiset of unit indices.
fn moments_of(sums: &[Vec<f64>], sizes: &[f64], idx: &[usize], np: usize) -> Vec<f64> {
    let total: f64 = idx.iter().map(|&i| sizes[i]).sum();
    (0..np)
        .map(|k| idx.iter().map(|&i| sums[i][k]).sum::<f64>() / total)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub p_grid: Vec<u32>,
    pub lp_norms: Vec<f64>,
    pub lp_norm_std_errors: Vec<f64>,
    pub carleman_partial: Vec<f64>,
    /// Second differences of `p ↦ log E|X|^p` below `−3·bootstrap std`.
    pub logconvex_violations: usize,
    /// Steps where `‖f‖_p` drops by more than 3 standard errors.
    pub monotonicity_flags: usize,
    /// `β` in `log‖f‖_p ≈ log c + lnΓ(βp+1)/p`, the Stirling form of `‖f‖_p ∝ p^β`.
    pub growth_fit: f64,
    pub growth_log_c: f64,
    /// Plain least-squares slope of `log‖f‖_p` against `log p`.
    pub loglog_slope: f64,
    pub warning: Option<String>,
}

fn gamma_model_sse(beta: f64, p: &[f64], y: &[f64]) -> (f64, f64) {
    let g: Vec<f64> = p.iter().map(|&p| libm::lgamma(beta * p + 1.0) / p).collect();
    let log_c = y.iter().zip(&g).map(|(a, b)| a - b).sum::<f64>() / y.len() as f64;
    let sse = y.iter().zip(&g).map(|(a, b)| (a - log_c - b).powi(2)).sum();
    (sse, log_c)
}

/// Fits `β ∈ [0, 4]` by a coarse scan followed by golden-section refinement.
fn fit_growth(p: &[f64], y: &[f64]) -> (f64, f64) {
    let scan = (0..=400).map(|i| i as f64 * 0.01);
    let b0 = scan
        .map(|b| (b, gamma_model_sse(b, p, y).0))
        .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
        .0;
    let (mut lo, mut hi) = ((b0 - 0.01).max(0.0), b0 + 0.01);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let (m1, m2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        if gamma_model_sse(m1, p, y).0 <= gamma_model_sse(m2, p, y).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let beta = (lo + hi) / 2.0;
    (beta, gamma_model_sse(beta, p, y).1)
}

/// `‖f‖_p` for even `p ≤ big_p`, Carleman partial sums, log-convexity and growth.
pub fn moment_report(seq: &SampleSeq, big_p: u32) -> Result<MomentReport> {
    if big_p < 4 || big_p % 2 == 1 || big_p > MAX_MOMENT_P {
        return Err(Error::InvalidArgument(format!("P must be even in 4..={MAX_MOMENT_P}")));
    }
    if seq.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    let p_grid: Vec<u32> = (1..=big_p / 2).map(|k| 2 * k).collect();
    let np = p_grid.len();
    let (sums, sizes) = unit_power_sums(seq, &p_grid);
    let all: Vec<usize> = (0..sums.len()).collect();
    let m = moments_of(&sums, &sizes, &all, np);
    if m[0] == 0.0 {
        return Err(Error::InvalidArgument("sequence is identically zero".into()));
    }
    let lp_norms: Vec<f64> = m.iter().zip(&p_grid).map(|(v, &p)| v.powf(1.0 / p as f64)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let boots: Vec<Vec<f64>> = (0..200)
        .map(|_| moments_of(&sums, &sizes, &resample(sums.len(), &mut rng), np))
        .collect();
    let sd = |f: &dyn Fn(&[f64]) -> f64| -> f64 {
        let vals: Vec<f64> = boots.iter().map(|b| f(b)).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64).sqrt()
    };
    let lp_norm_std_errors: Vec<f64> = (0..np)
        .map(|k| sd(&|b: &[f64]| b[k].powf(1.0 / p_grid[k] as f64)))
        .collect();
    let logconvex_violations = (1..np - 1)
        .filter(|&k| {
            let d2 = |b: &[f64]| b[k - 1].ln() - 2.0 * b[k].ln() + b[k + 1].ln();
            d2(&m) < -3.0 * sd(&d2)
        })
        .count();
    let monotonicity_flags = (1..np)
        .filter(|&k| lp_norms[k] < lp_norms[k - 1] - 3.0 * lp_norm_std_errors[k].hypot(lp_norm_std_errors[k - 1]))
        .count();
    let mut acc = 0.0;
    let carleman_partial = lp_norms
        .iter()
        .map(|v| {
            acc += 1.0 / v;
            acc
        })
        .collect();
    let pf: Vec<f64> = p_grid.iter().map(|&p| p as f64).collect();
    let y: Vec<f64> = lp_norms.iter().map(|v| v.ln()).collect();
    let (growth_fit, growth_log_c) = fit_growth(&pf, &y);
    let loglog_slope = linear_fit(&pf.iter().map(|p| p.ln()).collect::<Vec<_>>(), &y).slope;
    let needed = 10f64.powf(big_p as f64 / 4.0);
    let warning = ((seq.len() as f64) < needed).then(|| {
        format!(
            "E|X|^{big_p} is unstable below about {needed:.0} samples; got {}",
            seq.len()
        )
    });
    Ok(MomentReport {
        p_grid,
        lp_norms,
        lp_norm_std_errors,
        carleman_partial,
        logconvex_violations,
        monotonicity_flags,
        growth_fit,
        growth_log_c,
        loglog_slope,
        warning,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiAnalytic {
    /// Partial sums of `Σ (1/M_k)^{1/k}`.
    pub partial_sums: Vec<f64>,
    /// Slope of `log (1/M_k)^{1/k}` against `log k` over the upper half of `k`.
    pub tail_slope: f64,
    pub divergent: bool,
}

/// Denjoy–Carleman diagnostic for `M_1, …, M_K`: slope `≥ −1` reads as divergence.
pub fn quasianalytic_check(m: &[f64]) -> Result<QuasiAnalytic> {
    if m.len() < 4 || m.len() > MAX_QUASI_K {
        return Err(Error::InvalidArgument(format!("need 4..={MAX_QUASI_K} terms")));
    }
    if m.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("M_k must be positive and finite".into()));
    }
    let terms: Vec<f64> = m
        .iter()
        .enumerate()
        .map(|(i, v)| (-v.ln() / (i + 1) as f64).exp())
        .collect();
    let mut acc = 0.0;
    let partial_sums = terms
        .iter()
        .map(|t| {
            acc += t;
            acc
        })
        .collect();
    let start = m.len() / 2;
    let x: Vec<f64> = (start..m.len()).map(|i| ((i + 1) as f64).ln()).collect();
    let y: Vec<f64> = terms[start..].iter().map(|t| t.ln()).collect();
    let tail_slope = linear_fit(&x, &y).slope;
    Ok(QuasiAnalytic {
        partial_sums,
        tail_slope,
        divergent: tail_slope >= -1.0,
    })
}

/// `M_k = ‖f‖_{2nk}^k` from a moment report, for `k` with `2nk ≤ P`.
pub fn carleman_sequence(report: &MomentReport, n: u32) -> Vec<f64> {
    report
        .p_grid
        .iter()
        .zip(&report.lp_norms)
        .filter(|(p, _)| *p % (2 * n) == 0)
        .map(|(p, v)| v.powi((p / (2 * n)) as i32))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussianityReport {
    pub k: Vec<u32>,
    /// `E|X|^{2k} / (E|X|²)^k − k!`.
    pub statistics: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub gaussian_consistent: bool,
}

/// Complex-Gaussian moment identities `E|X|^{2k} = k!(E|X|²)^k`, `k = 2..=k_max`.
pub fn gaussianity_test(seq: &SampleSeq, k_max: u32) -> Result<GaussianityReport> {
    if !(2..=MAX_GAUSSIANITY_K).contains(&k_max) {
        return Err(Error::InvalidArgument(format!(
            "k_max must be in 2..={MAX_GAUSSIANITY_K}"
        )));
    }
    let ps: Vec<u32> = (1..=k_max).map(|k| 2 * k).collect();
    let (sums, sizes) = unit_power_sums(seq, &ps);
    if sums.len() < 2 {
        return Err(Error::InvalidArgument("need at least two error units".into()));
    }
    let stat = |m: &[f64], k: u32| m[k as usize - 1] / m[0].powi(k as i32) - (2..=k).product::<u32>() as f64;
    let all: Vec<usize> = (0..sums.len()).collect();
    let m = moments_of(&sums, &sizes, &all, ps.len());
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let boots: Vec<Vec<f64>> = (0..BOOTSTRAP_REPLICATES)
        .map(|_| moments_of(&sums, &sizes, &resample(sums.len(), &mut rng), ps.len()))
        .collect();
    let ks: Vec<u32> = (2..=k_max).collect();
    let statistics: Vec<f64> = ks.iter().map(|&k| stat(&m, k)).collect();
    let std_errors: Vec<f64> = ks
        .iter()
        .map(|&k| {
            let v: Vec<f64> = boots.iter().map(|b| stat(b, k)).collect();
            let mean = pairwise_sum(&v) / v.len() as f64;
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
        })
        .collect();
    // a deterministic modulus has zero spread; keep the z-score finite
    let z_scores: Vec<f64> = statistics
        .iter()
        .zip(&std_errors)
        .map(|(s, e)| s / e.max(1e-12))
        .collect();
    let gaussian_consistent = z_scores.iter().all(|z| z.abs() <= 3.0);
    Ok(GaussianityReport {
        k: ks,
        statistics,
        std_errors,
        z_scores,
        gaussian_consistent,
    })
}
