//! Helson constants, approximate indicators `φ_ε` and the spectral projector
//! `π_K` on a rotation model.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_free_warm, BasisEntry, FreeLp, LpError};
use crate::stats::{linear_fit, LinearFit};
use crate::torus::{circular_distance, Atom, AtomicCircleMeasure, FiniteFrequencySet, Frequency, SparseTrigPoly};
use crate::Complex64;

pub const MAX_HELSON_K: usize = 8;
pub const MAX_G_RANGE: u64 = 1_000_000;
pub const SUBGRADIENT_ITERATIONS: usize = 500;
pub const MAX_DEGREE: usize = 512;
pub const MAX_CONSTRAINT_POINTS: usize = 500;
pub const MAX_K_TERMS: usize = 6;
/// `ε_k` below this is past double-precision resolution of the LP.
pub const EPSILON_FLOOR: f64 = 1e-14;
pub const INDICATOR_TOL: f64 = 1e-6;
/// Cutting stops once `a_norm ≤ (1 + CUT_GAP)·lower bound`.
pub const CUT_GAP: f64 = 1e-6;
pub const MAX_CUT_ROUNDS: usize = 12;
/// Cutting also stops when a round closes less than this fraction of the
/// remaining gap to the lower bound.
pub const CUT_STALL: f64 = 0.25;
/// Characters are advanced by multiplication and re-anchored at each chunk start.
const SCAN_CHUNK: usize = 1024;

/// Scan points for `sup_{|g| ≤ g_range}`. For rational sets the transform is
/// periodic mod the common denominator, so one period suffices when it fits.
fn scan_start_len(k: &FiniteFrequencySet, g_range: u64) -> (i64, usize) {
    let full = 2 * g_range + 1;
    if k.all_exact() {
        let mut lcm: u64 = 1;
        for f in k.freqs() {
            if let Frequency::Exact(r) = f {
                lcm = num_integer::lcm(lcm, *r.denom() as u64);
                if lcm > full {
                    break;
                }
            }
        }
        if lcm <= full {
            return (0, lcm as usize);
        }
    }
    (-(g_range as i64), full as usize)
}

/// `(max |μ̂(g)|, argmax g)` over the scan; first maximum wins.
fn sup_transform(freqs: &[Frequency], w: &[Complex64], start: i64, len: usize) -> (f64, i64) {
    let steps: Vec<Complex64> = freqs.iter().map(|f| f.character(1)).collect();
    let chunk_best: Vec<(f64, i64)> = (0..len.div_ceil(SCAN_CHUNK))
        .into_par_iter()
        .map(|c| {
            let g0 = start + (c * SCAN_CHUNK) as i64;
            let mut chars: Vec<Complex64> = freqs.iter().map(|f| f.character(g0)).collect();
            let mut best = (-1.0, g0);
            for i in 0..SCAN_CHUNK.min(len - c * SCAN_CHUNK) {
                let v: Complex64 = chars.iter().zip(w).map(|(x, y)| x * y).sum();
                let a = v.norm();
                if a > best.0 {
                    best = (a, g0 + i as i64);
                }
                for (x, s) in chars.iter_mut().zip(&steps) {
                    *x *= s;
                }
            }
            best
        })
        .collect();
    chunk_best
        .into_iter()
        .fold((-1.0, start), |acc, b| if b.0 > acc.0 { b } else { acc })
}

/// Euclidean projection of a nonnegative vector onto the probability simplex.
fn project_simplex(r: &mut [f64]) {
    let mut sorted: Vec<f64> = r.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - 1.0) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    for x in r {
        *x = (*x - theta).max(0.0);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HelsonEstimate {
    #[serde(rename = "K")]
    pub k: FiniteFrequencySet,
    pub g_range: u64,
    pub restarts: usize,
    pub alpha_upper: f64,
    /// A frequency where the witness transform attains `alpha_upper`.
    pub argmax_g: i64,
    pub witness_measure: AtomicCircleMeasure,
}

/// Upper estimate of the Helson constant of `k` over `|g| ≤ g_range`:
/// minimizes `sup_g |μ̂(g)|` over complex weights with `‖μ‖ = 1` by
/// multi-start projected subgradient descent.
pub fn helson_constant(k: &FiniteFrequencySet, g_range: u64, restarts: usize, seed: u64) -> Result<HelsonEstimate> {
    if k.is_empty() || k.len() > MAX_HELSON_K {
        return Err(Error::InvalidArgument(format!(
            "|K| = {} outside 1..={MAX_HELSON_K}",
            k.len()
        )));
    }
    if g_range > MAX_G_RANGE {
        return Err(Error::InvalidArgument(format!("g_range {g_range} > {MAX_G_RANGE}")));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    let freqs = k.freqs();
    let n = freqs.len();
    let (start, len) = scan_start_len(k, g_range);
    let step0 = 1.0 / n as f64;

    let runs: Vec<(f64, Vec<Complex64>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut w: Vec<Complex64> = (0..n)
                .map(|_| Complex64::from_polar(1.0 / n as f64, TAU * rng.random::<f64>()))
                .collect();
            let mut best = (f64::INFINITY, w.clone());
            for it in 1..=SUBGRADIENT_ITERATIONS {
                let (val, g) = sup_transform(freqs, &w, start, len);
                if val < best.0 {
                    best = (val, w.clone());
                }
                let v: Complex64 = freqs.iter().zip(&w).map(|(f, x)| f.character(g) * x).sum();
                if v.norm() == 0.0 {
                    break;
                }
                let dir = v / v.norm();
                let eta = step0 / (it as f64).sqrt();
                for (x, f) in w.iter_mut().zip(freqs) {
                    *x -= eta * dir * f.character(g).conj();
                }
                let mut moduli: Vec<f64> = w.iter().map(|x| x.norm()).collect();
                project_simplex(&mut moduli);
                for (x, m) in w.iter_mut().zip(moduli) {
                    *x = Complex64::from_polar(m, x.arg());
                }
            }
            let (val, _) = sup_transform(freqs, &w, start, len);
            if val < best.0 {
                best = (val, w);
            }
            best
        })
        .collect();
    let (_, w) = runs
        .into_iter()
        .fold((f64::INFINITY, Vec::new()), |acc, r| if r.0 < acc.0 { r } else { acc });
    let tv: f64 = w.iter().map(|x| x.norm()).sum();
    let w: Vec<Complex64> = w.iter().map(|x| x / tv).collect();
    let (alpha_upper, argmax_g) = sup_transform(freqs, &w, start, len);
    let witness_measure = AtomicCircleMeasure::new(
        freqs
            .iter()
            .zip(&w)
            .map(|(&freq, &weight)| Atom { freq, weight })
            .collect(),
    )?;
    Ok(HelsonEstimate {
        k: k.clone(),
        g_range,
        restarts,
        alpha_upper,
        argmax_g,
        witness_measure,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxIndicator {
    #[serde(rename = "K")]
    pub k: FiniteFrequencySet,
    #[serde(rename = "F_samples")]
    pub f_samples: FiniteFrequencySet,
    pub epsilon: f64,
    pub degree: usize,
    pub phi: SparseTrigPoly,
    /// `Σ |φ̂(n)|` of the returned polynomial.
    pub a_norm: f64,
    /// Optimal value of the polygonal relaxation: a lower bound on the least
    /// A-norm over the constraints, with `a_norm ∈ [obj, sec(π/8)·obj]`.
    pub lp_objective: f64,
    /// Rounds of tangent cuts added after the first solve.
    pub cut_rounds: usize,
    pub max_k_residual: f64,
    pub max_on_f: f64,
}

impl ApproxIndicator {
    pub fn eval(&self, t: f64) -> Complex64 {
        self.phi.eval(&[t])
    }

    pub fn is_valid(&self) -> bool {
        self.max_k_residual <= INDICATOR_TOL && self.max_on_f <= self.epsilon + INDICATOR_TOL
    }
}

/// `(Re φ(t), Im φ(t))` as linear rows over the variables `(a_n, b_n, r_n)`.
fn value_rows(f: &Frequency, degree: usize, nvars: usize) -> (Vec<f64>, Vec<f64>) {
    let mut re = vec![0.0; nvars];
    let mut im = vec![0.0; nvars];
    for i in 0..=2 * degree {
        let n = i as i64 - degree as i64;
        let (s, c) = (TAU * f.times(n)).sin_cos();
        re[3 * i] = c;
        re[3 * i + 1] = -s;
        im[3 * i] = s;
        im[3 * i + 1] = c;
    }
    (re, im)
}

/// Trigonometric polynomial of degree `degree` with `φ = 1` on `K` and
/// `|φ| ≤ ε` on the samples of `F`, of (nearly) minimal `Σ|φ̂(n)|`.
pub fn approx_indicator(
    k: &FiniteFrequencySet,
    f_samples: &FiniteFrequencySet,
    epsilon: f64,
    degree: usize,
) -> Result<ApproxIndicator> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1)",
        });
    }
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} outside 1..={MAX_DEGREE}"
        )));
    }
    if k.is_empty() || k.len() + f_samples.len() > MAX_CONSTRAINT_POINTS {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ |K| and |K| + |F| ≤ {MAX_CONSTRAINT_POINTS}"
        )));
    }
    let resolution = 1.0 / (2 * degree) as f64;
    for a in k.freqs() {
        for b in f_samples.freqs() {
            if circular_distance(a.value(), b.value()) < resolution - 1e-15 {
                return Err(Error::InvalidArgument(format!(
                    "K point {a} and F point {b} are closer than 1/(2·degree)"
                )));
            }
        }
    }

    let terms = 2 * degree + 1;
    let nvars = 3 * terms;
    let dirs: Vec<(f64, f64)> = (0..8).map(|j| (j as f64 * FRAC_PI_4).sin_cos()).collect();
    let mut lp = FreeLp {
        c: (0..nvars).map(|v| if v % 3 == 2 { 1.0 } else { 0.0 }).collect(),
        ..Default::default()
    };
    for i in 0..terms {
        for &(s, c) in &dirs {
            let mut row = vec![0.0; nvars];
            row[3 * i] = c;
            row[3 * i + 1] = s;
            row[3 * i + 2] = -1.0;
            lp.a_ub.push(row);
            lp.b_ub.push(0.0);
        }
    }
    let inradius = epsilon * FRAC_PI_8.cos();
    for f in f_samples.freqs() {
        let (re, im) = value_rows(f, degree, nvars);
        for &(s, c) in &dirs {
            lp.a_ub.push(re.iter().zip(&im).map(|(x, y)| c * x + s * y).collect());
            lp.b_ub.push(inradius);
        }
    }
    for f in k.freqs() {
        let (re, im) = value_rows(f, degree, nvars);
        lp.a_eq.push(re);
        lp.b_eq.push(1.0);
        lp.a_eq.push(im);
        lp.b_eq.push(0.0);
    }
    // The octagon under-estimates |φ̂(n)| by up to a factor cos(π/8), and its
    // optimal face is degenerate. Tangent cuts at the phases of the current
    // solution tighten it where the solution sits; the objective stays a lower
    // bound on the minimal A-norm throughout.
    let mut best: Option<(f64, SparseTrigPoly)> = None;
    let mut lower_bound = 0.0;
    let mut cut_rounds = 0;
    let mut warm: Option<Vec<BasisEntry>> = None;
    loop {
        let sol = solve_free_warm(&lp, warm.as_deref()).map_err(|e| match e {
            LpError::Infeasible | LpError::InfeasibleOrUnbounded => Error::InfeasibleSeparation,
            other => Error::Lp(other),
        })?;
        lower_bound = f64::max(lower_bound, sol.objective);
        let coeff = |i: usize| Complex64::new(sol.x[3 * i], sol.x[3 * i + 1]);
        let phi = SparseTrigPoly::from_terms(1, (0..terms).map(|i| (vec![i as i32 - degree as i32], coeff(i))))?;
        let a_norm = phi.a_norm();
        let prev_norm = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        if a_norm < prev_norm {
            best = Some((a_norm, phi));
        }
        let best_norm = prev_norm.min(a_norm);
        let stalled = prev_norm - best_norm < CUT_STALL * (best_norm - lower_bound);
        if best_norm <= lower_bound * (1.0 + CUT_GAP) || stalled || cut_rounds == MAX_CUT_ROUNDS {
            break;
        }
        cut_rounds += 1;
        warm = Some(sol.basis.clone());
        for i in 0..terms {
            let (c, r) = (coeff(i), sol.x[3 * i + 2]);
            if c.norm() > 1e-12 && c.norm() - r > 1e-12 * c.norm().max(1.0) {
                let (sin, cos) = c.arg().sin_cos();
                let mut row = vec![0.0; nvars];
                row[3 * i] = cos;
                row[3 * i + 1] = sin;
                row[3 * i + 2] = -1.0;
                lp.a_ub.push(row);
                lp.b_ub.push(0.0);
            }
        }
    }
    let (a_norm, phi) = best.expect("at least one solve");
    let max_k_residual = k
        .freqs()
        .iter()
        .map(|f| (phi.eval(&[f.value()]) - 1.0).norm())
        .fold(0.0, f64::max);
    let max_on_f = f_samples
        .freqs()
        .iter()
        .map(|f| phi.eval(&[f.value()]).norm())
        .fold(0.0, f64::max);
    let ind = ApproxIndicator {
        k: k.clone(),
        f_samples: f_samples.clone(),
        epsilon,
        degree,
        a_norm,
        phi,
        lp_objective: lower_bound,
        cut_rounds,
        max_k_residual,
        max_on_f,
    };
    if !ind.is_valid() {
        return Err(Error::InfeasibleSeparation);
    }
    Ok(ind)
}

/// Max of `|φ|` at `factor` equispaced points inside each gap between
/// consecutive `F` samples that lie in the same sampled arc (gap at most
/// twice the smallest gap). Only the samples themselves are constrained, so
/// this measures how much the bound leaks between them.
pub fn densification_audit(ind: &ApproxIndicator, factor: usize) -> f64 {
    let mut pts = ind.f_samples.values();
    if pts.len() < 2 || factor < 2 {
        return ind.max_on_f;
    }
    pts.sort_by(f64::total_cmp);
    let gaps: Vec<(f64, f64)> = pts.windows(2).map(|w| (w[0], w[1] - w[0])).collect();
    let min_gap = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    gaps.iter()
        .filter(|g| g.1 <= 2.0 * min_gap + 1e-15)
        .flat_map(|&(a, gap)| (0..=factor).map(move |j| a + gap * j as f64 / factor as f64))
        .map(|t| ind.eval(t).norm())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectorSeries {
    pub p: f64,
    pub epsilons: Vec<f64>,
    pub indicators: Vec<ApproxIndicator>,
    /// `max |φ_{ε_{k+1}} − φ_{ε_k}|` over `K ∪ F_samples`.
    pub sup_differences: Vec<f64>,
    pub sup_bound_holds: bool,
    /// `c` in `a_norm ≤ c·|log ε|`, the least value fitting every term.
    pub fitted_c: f64,
    /// `(2ε_k)^{2/p}·(2c|log ε_{k+1}|)^{1−2/p}`.
    pub norm_products: Vec<f64>,
}

/// `φ_{ε_k}` for `ε_k = e^{−kp}`, `k = 1..k_terms`, with the telescoping
/// checks. Terms whose `ε_k` falls below [`EPSILON_FLOOR`] are dropped.
pub fn projector_series(
    k: &FiniteFrequencySet,
    f_samples: &FiniteFrequencySet,
    p: f64,
    k_terms: usize,
    degree: usize,
) -> Result<ProjectorSeries> {
    if !(2.0..=16.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[2, 16]",
        });
    }
    if k_terms == 0 || k_terms > MAX_K_TERMS {
        return Err(Error::InvalidArgument(format!(
            "k_terms {k_terms} outside 1..={MAX_K_TERMS}"
        )));
    }
    let epsilons: Vec<f64> = (1..=k_terms)
        .map(|j| (-(j as f64) * p).exp())
        .take_while(|&e| e >= EPSILON_FLOOR)
        .collect();
    let indicators = epsilons
        .par_iter()
        .map(|&e| approx_indicator(k, f_samples, e, degree))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<f64> = k.values().into_iter().chain(f_samples.values()).collect();
    let sup_differences: Vec<f64> = indicators
        .windows(2)
        .map(|w| {
            points
                .iter()
                .map(|&t| (w[1].eval(t) - w[0].eval(t)).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let sup_bound_holds = sup_differences
        .iter()
        .zip(&epsilons)
        .all(|(d, e)| *d <= 2.0 * e + INDICATOR_TOL);
    let fitted_c = indicators
        .iter()
        .map(|ind| ind.a_norm / ind.epsilon.ln().abs())
        .fold(0.0, f64::max);
    let theta = 2.0 / p;
    let norm_products = epsilons
        .windows(2)
        .map(|w| (2.0 * w[0]).powf(theta) * (2.0 * fitted_c * w[1].ln().abs()).powf(1.0 - theta))
        .collect();
    Ok(ProjectorSeries {
        p,
        epsilons,
        indicators,
        sup_differences,
        sup_bound_holds,
        fitted_c,
        norm_products,
    })
}

/// Fit of `a_norm ≈ a + b·|log ε|` across an ε sweep.
pub fn a_norm_log_fit(indicators: &[ApproxIndicator]) -> LinearFit {
    let x: Vec<f64> = indicators.iter().map(|i| i.epsilon.ln().abs()).collect();
    let y: Vec<f64> = indicators.iter().map(|i| i.a_norm).collect();
    linear_fit(&x, &y)
}

/// `f = Σ c_m z^m` on the circle under the rotation `z ↦ e^{2πiα} z`; mode
/// `m` is an eigenfunction with eigenvalue `m·α mod 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationModel {
    pub alpha_rot: f64,
    pub modes: Vec<(i64, Complex64)>,
}

impl RotationModel {
    pub fn new(alpha_rot: f64, modes: Vec<(i64, Complex64)>) -> Result<Self> {
        if !alpha_rot.is_finite() {
            return Err(Error::InvalidArgument("rotation must be finite".into()));
        }
        let mut ms: Vec<i64> = modes.iter().map(|m| m.0).collect();
        ms.sort_unstable();
        if ms.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("repeated mode".into()));
        }
        Ok(Self { alpha_rot, modes })
    }

    /// Modes `lo..=hi` with seeded standard complex Gaussian coefficients.
    pub fn random(alpha_rot: f64, lo: i64, hi: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (lo..=hi)
            .map(|m| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                (m, Complex64::new(re, im) / 2f64.sqrt())
            })
            .collect();
        Self { alpha_rot, modes }
    }

    pub fn eigenvalue(&self, m: i64) -> f64 {
        (m as f64 * self.alpha_rot).rem_euclid(1.0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.modes.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn poly(&self) -> SparseTrigPoly {
        SparseTrigPoly::from_terms(1, self.modes.iter().map(|&(m, c)| (vec![m as i32], c))).expect("dimension 1")
    }

    /// `f̄ = Σ c̄_m z^{−m}`.
    pub fn conj(&self) -> Self {
        Self {
            alpha_rot: self.alpha_rot,
            modes: self.modes.iter().map(|&(m, c)| (-m, c.conj())).collect(),
        }
    }

    /// Spectral measure `Σ |c_m|² δ_{m·α}`.
    pub fn spectral_measure(&self) -> Result<AtomicCircleMeasure> {
        AtomicCircleMeasure::new(
            self.modes
                .iter()
                .map(|&(m, c)| {
                    Ok(Atom {
                        freq: Frequency::float(self.eigenvalue(m))?,
                        weight: Complex64::new(c.norm_sqr(), 0.0),
                    })
                })
                .collect::<Result<_>>()?,
        )
    }

    /// `φ(T) f`: each mode multiplied by `φ` at its eigenvalue.
    pub fn apply_multiplier<F: Fn(f64) -> Complex64>(&self, phi: F) -> Self {
        Self {
            alpha_rot: self.alpha_rot,
            modes: self
                .modes
                .iter()
                .map(|&(m, c)| (m, c * phi(self.eigenvalue(m))))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    pub exact_f: SparseTrigPoly,
    pub mode_set: Vec<i64>,
}

/// `π_K f`: the modes whose eigenvalue lies within `tol_match` of `K`.
pub fn apply_projector(model: &RotationModel, k: &FiniteFrequencySet, tol_match: f64) -> Projection {
    let kept: Vec<(i64, Complex64)> = model
        .modes
        .iter()
        .copied()
        .filter(|&(m, _)| k.distance_to(model.eigenvalue(m)) <= tol_match)
        .collect();
    let mut mode_set: Vec<i64> = kept.iter().map(|m| m.0).collect();
    mode_set.sort_unstable();
    let exact_f = SparseTrigPoly::from_terms(1, kept.iter().map(|&(m, c)| (vec![m as i32], c))).expect("dimension 1");
    Projection { exact_f, mode_set }
}

/// `‖φ(T)f − π_K f‖₂` for the model, with modes outside `mode_set` targeted at 0.
pub fn filter_l2_error(model: &RotationModel, phi: &ApproxIndicator, mode_set: &[i64]) -> f64 {
    model
        .modes
        .iter()
        .map(|&(m, c)| {
            let target = if mode_set.binary_search(&m).is_ok() { 1.0 } else { 0.0 };
            ((phi.eval(model.eigenvalue(m)) - target) * c).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

fn lp_norm_on_grid(p_poly: &SparseTrigPoly, p: f64, grid: usize) -> f64 {
    let vals: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|i| p_poly.eval(&[i as f64 / grid as f64]).norm().powf(p))
        .collect();
    (crate::stats::pairwise_sum(&vals) / grid as f64).powf(1.0 / p)
}

pub const MIN_GROWTH_GRID: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub p: f64,
    /// `‖π_K f‖_p / ‖f‖_p` for each member of the family.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Least `C` with `ratio ≤ C·p` across the table.
    pub fitted_c: f64,
}

/// `L^p` norms of `π_K f` against `f` by uniform quadrature.
pub fn lp_norm_growth(
    family: &[RotationModel],
    k: &FiniteFrequencySet,
    p_list: &[f64],
    grid: usize,
    tol_match: f64,
) -> Result<GrowthTable> {
    if grid < MIN_GROWTH_GRID {
        return Err(Error::InvalidArgument(format!("grid {grid} < {MIN_GROWTH_GRID}")));
    }
    if let Some(&p) = p_list.iter().find(|p| !(2.0..=16.0).contains(*p)) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[2, 16]",
        });
    }
    let pairs: Vec<(SparseTrigPoly, SparseTrigPoly)> = family
        .iter()
        .map(|m| (m.poly(), apply_projector(m, k, tol_match).exact_f))
        .collect();
    let rows: Vec<GrowthRow> = p_list
        .iter()
        .map(|&p| {
            let ratios: Vec<f64> = pairs
                .iter()
                .map(|(f, pf)| {
                    let denom = lp_norm_on_grid(f, p, grid);
                    if denom == 0.0 {
                        0.0
                    } else {
                        lp_norm_on_grid(pf, p, grid) / denom
                    }
                })
                .collect();
            let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
            GrowthRow { p, ratios, max_ratio }
        })
        .collect();
    let fitted_c = rows.iter().map(|r| r.max_ratio / r.p).fold(0.0, f64::max);
    Ok(GrowthTable { rows, fitted_c })
}
