//! The acceptance suite as library functions, shared by `helson-lab verify-all`
//! and the `acceptance` test target.
//!
//! Each criterion returns a [`CriterionOutcome`] whose JSON form depends only
//! on the seed; wall-clock times are reported separately by [`run_suite`].

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::drury::{drury_support, expand_q, extract_p, mix_drury, verify_drury, DRURY_TOL};
use crate::error::Result;
use crate::gauss::{
    carleman_sequence, estimate_spectral, gaussianity_test, moment_report, quasianalytic_check, ModelKind,
    StationaryModel,
};
use crate::helson::{
    a_norm_log_fit, apply_projector, approx_indicator, filter_l2_error, helson_constant, projector_series,
    RotationModel,
};
use crate::mela::{mela_bound, solve_mela};
use crate::riesz::{riesz_dense_oracle, RieszProductSpec};
use crate::torus::{
    dense_fft_oracle, grid_min_real, l1_norm_torus, AtomicCircleMeasure, FiniteFrequencySet, Frequency,
};
use crate::Complex64;

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

pub const MELA_EPSILONS: [f64; 4] = [0.5, 0.1353, 0.01, 0.001];
pub const MELA_GRID: usize = 1000;
/// Allowed excess over `2|log ε|+6` at the smallest ε, for grid truncation.
pub const MELA_SMALL_EPS_SLACK: f64 = 0.01;
pub const DRURY_DIMS: [usize; 3] = [3, 6, 10];
pub const DRURY_EPSILONS: [f64; 2] = [0.1, 0.01];
pub const DRURY_MC_SAMPLES: usize = 200_000;
pub const Q_L1_TOL: f64 = 1e-6;
pub const ORACLE_TOL: f64 = 1e-10;
pub const RIESZ_GRID: usize = 1 << 14;
pub const RIESZ_SPECS: usize = 10;
pub const PROJECTOR_DEGREE: usize = 64;
pub const A_NORM_EPSILONS: [f64; 5] = [0.2, 0.1, 0.05, 0.02, 0.01];
pub const A_NORM_MIN_R2: f64 = 0.9;
pub const A_NORM_LATTICE: usize = 64;
pub const A_NORM_K: usize = 4;
pub const A_NORM_DEGREE: usize = 32;
pub const GAUSS_LEN: usize = 1_000_000;
pub const GAUSS_BLOCK: usize = 1000;
pub const GAUSS_K_MAX: u32 = 4;
pub const GAUSS_G_MAX: usize = 50;
pub const SPECTRAL_SE_FACTOR: f64 = 4.0;
pub const RANDOM_PHASE_MIN_Z: f64 = 5.0;
pub const NORM4_TOL: f64 = 0.01;
pub const BETA_TOL: f64 = 0.05;
pub const MOMENT_P: u32 = 24;
pub const HELSON_SINGLETON_TOL: f64 = 1e-6;
pub const HELSON_PAIR_MAX: f64 = 0.708;
pub const HELSON_INDEPENDENT_MIN: f64 = 0.95;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub all_passed: bool,
    pub criteria: Vec<CriterionOutcome>,
}

fn sub_seed(seed: u64, id: u8) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64)
}

fn failed(id: u8, name: &'static str, err: crate::Error) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed: false,
        summary: format!("error: {err}"),
        details: Value::Null,
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "mela-bound",
        2 => "drury-pipeline",
        3 => "riesz-product-identities",
        4 => "riesz-oracle-equivalence",
        5 => "projector-telescoping",
        6 => "a-norm-log-growth",
        7 => "gaussian-determination",
        8 => "moment-machinery",
        9 => "helson-constant",
        _ => "unknown",
    }
}

/// Runs one criterion; errors inside it count as a failure.
pub fn run_criterion(id: u8, seed: u64) -> CriterionOutcome {
    let name = criterion_name(id);
    let s = sub_seed(seed, id);
    let r = match id {
        1 => mela_criterion(),
        2 => drury_criterion(s),
        3 => riesz_identities_criterion(),
        4 => riesz_oracle_criterion(s),
        5 => projector_criterion(s),
        6 => a_norm_criterion(s),
        7 => gaussian_criterion(s),
        8 => moment_criterion(s),
        9 => helson_criterion(s),
        _ => Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    };
    match r {
        Ok((passed, summary, details)) => CriterionOutcome {
            id,
            name,
            passed,
            summary,
            details,
        },
        Err(e) => failed(id, name, e),
    }
}

/// All criteria in order, with per-criterion wall times in seconds.
pub fn run_suite(seed: u64) -> (SuiteReport, Vec<f64>) {
    let mut criteria = Vec::new();
    let mut times = Vec::new();
    for id in CRITERIA {
        let t = Instant::now();
        criteria.push(run_criterion(id, seed));
        times.push(t.elapsed().as_secs_f64());
    }
    let all_passed = criteria.iter().all(|c| c.passed);
    (
        SuiteReport {
            seed,
            all_passed,
            criteria,
        },
        times,
    )
}

type Outcome = Result<(bool, String, Value)>;

fn mela_criterion() -> Outcome {
    let sols = MELA_EPSILONS
        .par_iter()
        .map(|&e| solve_mela(e, MELA_GRID, 0))
        .collect::<Result<Vec<_>>>()?;
    let mut passed = true;
    let mut rows = Vec::new();
    for (sol, &eps) in sols.iter().zip(&MELA_EPSILONS) {
        let c = &sol.certificate;
        let slack = if eps == 0.001 { 1.0 + MELA_SMALL_EPS_SLACK } else { 1.0 };
        let moments_ok = c.first_moment_error.abs() <= 1e-8 && c.max_odd_moment + c.tail_bound <= eps;
        let ok = moments_ok && c.tv <= mela_bound(eps) * slack + 1e-6;
        passed &= ok;
        rows.push(json!({
            "epsilon": eps, "tv": c.tv, "mela_bound": c.mela_bound, "k_max": c.k_max,
            "max_odd_moment": c.max_odd_moment, "tail_bound": c.tail_bound,
            "certificate_valid": c.valid, "lp_objective": sol.lp_objective,
            "lp_dual_objective": sol.lp_dual_objective, "passed": ok,
        }));
    }
    let summary = sols
        .iter()
        .map(|s| {
            format!(
                "ε={} tv={:.4}/{:.4}",
                s.certificate.epsilon, s.certificate.tv, s.certificate.mela_bound
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok((passed, summary, json!({ "grid": MELA_GRID, "runs": rows })))
}

fn drury_criterion(seed: u64) -> Outcome {
    let mut rows = Vec::new();
    let mut passed = true;
    let mut worst = (0.0f64, 0.0f64);
    for &eps in &DRURY_EPSILONS {
        let sigma = solve_mela(eps, MELA_GRID, 0)?.measure;
        for &n in &DRURY_DIMS {
            let f = mix_drury(n, &sigma, eps)?;
            let r = verify_drury(&f, &sigma, DRURY_MC_SAMPLES, seed ^ n as u64);
            passed &= r.valid;
            worst.0 = worst.0.max(r.max_basis_error);
            worst.1 = worst.1.max(r.max_off_basis / eps);
            rows.push(serde_json::to_value(&r).expect("plain data"));
        }
    }
    let summary = format!(
        "max basis error {:.2e} (tol {DRURY_TOL:e}), max off-basis/ε {:.4}",
        worst.0, worst.1
    );
    Ok((passed, summary, json!({ "samples": DRURY_MC_SAMPLES, "runs": rows })))
}

fn riesz_identities_criterion() -> Outcome {
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 1..=3usize {
        for s in [0.1, 0.3, 0.5] {
            let q = expand_q(n, s)?;
            let l1 = l1_norm_torus(&q, 16)?;
            let q_min = grid_min_real(&q, 32)?;
            let p = extract_p(n, s)?;
            let exact_powers = drury_support(n)
                .iter()
                .all(|(m, a)| p.coeff(m.coords()) == Complex64::new(s.powi(2 * *a as i32 + 1), 0.0));
            let p_oracle = dense_fft_oracle(&p, 8)?.max_deviation(&p);
            let q_oracle = if n < 3 {
                Some(dense_fft_oracle(&q, 8)?.max_deviation(&q))
            } else {
                None
            };
            let ok = (l1 - 1.0).abs() <= Q_L1_TOL
                && q_min >= -1e-9
                && exact_powers
                && p_oracle <= ORACLE_TOL
                && q_oracle.is_none_or(|d| d <= ORACLE_TOL);
            passed &= ok;
            rows.push(json!({
                "n": n, "s": s, "q_l1": l1, "q_grid_min": q_min, "p_exact_odd_powers": exact_powers,
                "p_oracle_deviation": p_oracle, "q_oracle_deviation": q_oracle, "passed": ok,
            }));
        }
    }
    Ok((
        passed,
        "‖Q_s‖₁ = 1, P_s odd powers and FFT oracle for n ≤ 3".into(),
        json!({ "runs": rows }),
    ))
}

/// Random dissociate frequencies with `Σ n_j ≤ 4096`, so a 2¹⁴ grid resolves every coefficient.
pub fn random_dissociate_spec(rng: &mut ChaCha8Rng) -> RieszProductSpec {
    let alpha = rng.random_range(0.05..=1.0);
    let target = rng.random_range(1..=8usize);
    let mut freqs: Vec<i64> = Vec::new();
    let mut tries = 0;
    while freqs.len() < target && tries < 2000 {
        tries += 1;
        let last = freqs.last().copied().unwrap_or(0);
        let room = 4096 - freqs.iter().sum::<i64>();
        if room <= last {
            break;
        }
        let cand = rng.random_range(last + 1..=room.min(last + 1 + 2 * last.max(8)));
        let mut trial = freqs.clone();
        trial.push(cand);
        if RieszProductSpec::new(alpha, trial.clone()).is_ok() {
            freqs = trial;
        }
    }
    RieszProductSpec::new(alpha, freqs).expect("built from accepted prefixes")
}

fn riesz_oracle_criterion(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<RieszProductSpec> = (0..RIESZ_SPECS).map(|_| random_dissociate_spec(&mut rng)).collect();
    let errors: Vec<f64> = specs
        .par_iter()
        .map(|spec| {
            let dense = riesz_dense_oracle(spec, RIESZ_GRID);
            let top = spec.freqs().last().copied().unwrap_or(1);
            (-2 * top..=2 * top)
                .map(|m| {
                    let idx = m.rem_euclid(RIESZ_GRID as i64) as usize;
                    (dense[idx] - Complex64::new(spec.fourier(m), 0.0)).norm()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let max_err = errors.iter().copied().fold(0.0, f64::max);
    let details: Vec<Value> = specs
        .iter()
        .zip(&errors)
        .map(|(s, e)| json!({ "alpha": s.alpha(), "freqs": s.freqs(), "max_error": e }))
        .collect();
    Ok((
        max_err <= ORACLE_TOL,
        format!("max |closed form − FFT| = {max_err:.2e} over {RIESZ_SPECS} specs"),
        json!({ "grid": RIESZ_GRID, "specs": details }),
    ))
}

/// Golden-rotation model with modes `1..=32`, half of them (seeded) in `K`.
pub fn projector_setup(seed: u64) -> Result<(RotationModel, FiniteFrequencySet, FiniteFrequencySet)> {
    let alpha = (5f64.sqrt() - 1.0) / 2.0;
    let model = RotationModel::random(alpha, 1, 32, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
    let inside: Vec<usize> = sample(&mut rng, 32, 16).into_vec();
    let (mut kv, mut fv) = (Vec::new(), Vec::new());
    for (i, (m, _)) in model.modes.iter().enumerate() {
        let f = Frequency::float(model.eigenvalue(*m))?;
        if inside.contains(&i) {
            kv.push(f);
        } else {
            fv.push(f);
        }
    }
    Ok((model, FiniteFrequencySet::new(kv)?, FiniteFrequencySet::new(fv)?))
}

fn projector_criterion(seed: u64) -> Outcome {
    let (model, k, f) = projector_setup(seed)?;
    let series = projector_series(&k, &f, 2.0, 3, PROJECTOR_DEGREE)?;
    let exact = apply_projector(&model, &k, 1e-9);
    let norm = model.l2_norm();
    let errors: Vec<f64> = series
        .indicators
        .iter()
        .map(|ind| filter_l2_error(&model, ind, &exact.mode_set))
        .collect();
    let l2_ok = errors.iter().zip(&series.epsilons).all(|(e, eps)| *e <= eps * norm);
    let passed = l2_ok && series.sup_bound_holds && exact.mode_set.len() == 16;
    Ok((
        passed,
        format!(
            "L² errors / ‖f‖ = {:?} vs ε_k = {:?}",
            errors.iter().map(|e| format!("{:.2e}", e / norm)).collect::<Vec<_>>(),
            series.epsilons.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()
        ),
        json!({
            "f_l2_norm": norm, "epsilons": series.epsilons, "l2_errors": errors,
            "sup_differences": series.sup_differences, "sup_bound_holds": series.sup_bound_holds,
            "a_norms": series.indicators.iter().map(|i| i.a_norm).collect::<Vec<_>>(),
            "fitted_c": series.fitted_c, "norm_products": series.norm_products,
            "mode_set": exact.mode_set,
        }),
    ))
}

/// `K` = 4 seeded points of the 64th roots of unity, `F` = the other 60.
pub fn a_norm_setup(seed: u64) -> Result<(FiniteFrequencySet, FiniteFrequencySet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inside = sample(&mut rng, A_NORM_LATTICE, A_NORM_K).into_vec();
    inside.sort_unstable();
    let point = |j: usize| Frequency::rational(j as i64, A_NORM_LATTICE as i64);
    let k = FiniteFrequencySet::new(inside.iter().map(|&j| point(j)).collect::<Result<_>>()?)?;
    let f = FiniteFrequencySet::new(
        (0..A_NORM_LATTICE)
            .filter(|j| !inside.contains(j))
            .map(point)
            .collect::<Result<_>>()?,
    )?;
    Ok((k, f))
}

fn a_norm_criterion(seed: u64) -> Outcome {
    let (k, f) = a_norm_setup(seed)?;
    let inds = A_NORM_EPSILONS
        .par_iter()
        .map(|&e| approx_indicator(&k, &f, e, A_NORM_DEGREE))
        .collect::<Result<Vec<_>>>()?;
    let fit = a_norm_log_fit(&inds);
    Ok((
        fit.r_squared >= A_NORM_MIN_R2,
        format!(
            "a_norm ≈ {:.3} + {:.3}·|log ε|, R² = {:.4}",
            fit.intercept, fit.slope, fit.r_squared
        ),
        json!({
            "K": k, "degree": A_NORM_DEGREE, "epsilons": A_NORM_EPSILONS,
            "a_norms": inds.iter().map(|i| i.a_norm).collect::<Vec<_>>(),
            "lp_objectives": inds.iter().map(|i| i.lp_objective).collect::<Vec<_>>(),
            "fit": fit,
        }),
    ))
}

/// Eight atoms of weight 1/8 at well-separated irrational positions.
pub fn eight_atom_spectrum() -> AtomicCircleMeasure {
    let pairs: Vec<(f64, f64)> = (0..8)
        .map(|j| (((j as f64 + 0.5 * (j as f64 * 2f64.sqrt()).fract()) / 8.0), 0.125))
        .collect();
    AtomicCircleMeasure::from_pairs(&pairs).expect("distinct atoms")
}

fn gaussian_criterion(seed: u64) -> Outcome {
    let spectrum = eight_atom_spectrum();
    let mut models = Vec::new();
    for (i, kind) in [ModelKind::Gaussian, ModelKind::RandomPhase].into_iter().enumerate() {
        models.push(StationaryModel::with_blocks(
            kind,
            spectrum.clone(),
            GAUSS_LEN,
            seed + i as u64,
            GAUSS_BLOCK,
        )?);
    }
    let mut reports = Vec::new();
    let mut spectral_ok = true;
    let mut worst_spectral = 0.0f64;
    for m in &models {
        let seq = m.simulate();
        let g = gaussianity_test(&seq, GAUSS_K_MAX)?;
        let est = estimate_spectral(&seq, GAUSS_G_MAX)?;
        for e in &est {
            let dev = (e.value() - spectrum.fourier_coeff(e.g)).norm() / e.std_error;
            worst_spectral = worst_spectral.max(dev);
            spectral_ok &= dev <= SPECTRAL_SE_FACTOR;
        }
        reports.push(g);
    }
    let gauss_pass = reports[0].gaussian_consistent;
    let phase_z = reports[1].z_scores[0];
    let passed = gauss_pass && phase_z.abs() >= RANDOM_PHASE_MIN_Z && spectral_ok;
    Ok((
        passed,
        format!(
            "Gaussian z = {:?}, random-phase z(k=2) = {phase_z:.1}, worst spectral deviation {worst_spectral:.2} SE",
            reports[0]
                .z_scores
                .iter()
                .map(|z| format!("{z:.2}"))
                .collect::<Vec<_>>()
        ),
        json!({
            "length": GAUSS_LEN, "block_len": GAUSS_BLOCK,
            "gaussian": reports[0], "random_phase": reports[1],
            "worst_spectral_deviation_se": worst_spectral,
        }),
    ))
}

fn moment_criterion(seed: u64) -> Outcome {
    let one = AtomicCircleMeasure::from_pairs(&[(0.0, 1.0)])?;
    let model = StationaryModel::with_blocks(ModelKind::Gaussian, one, GAUSS_LEN, seed, 1)?;
    let seq = model.simulate();
    let report = moment_report(&seq, MOMENT_P)?;
    let norm4 = report.lp_norms[1];
    let qa = quasianalytic_check(&carleman_sequence(&report, 1))?;
    let passed = (norm4 - 2f64.powf(0.25)).abs() <= NORM4_TOL
        && (report.growth_fit - 0.5).abs() <= BETA_TOL
        && report.logconvex_violations == 0;
    Ok((
        passed,
        format!(
            "‖Z‖₄ = {norm4:.5} (2^¼ = {:.5}), β = {:.4}, log-convexity violations {}",
            2f64.powf(0.25),
            report.growth_fit,
            report.logconvex_violations
        ),
        json!({ "report": report, "quasianalytic": qa }),
    ))
}

fn helson_criterion(seed: u64) -> Outcome {
    let singletons = [
        FiniteFrequencySet::from_floats(&[0.3])?,
        FiniteFrequencySet::new(vec![Frequency::rational(1, 3)?])?,
    ];
    let mut single_vals = Vec::new();
    for k in &singletons {
        single_vals.push(helson_constant(k, 1000, 4, seed)?.alpha_upper);
    }
    let pair = FiniteFrequencySet::new(vec![Frequency::rational(0, 1)?, Frequency::rational(1, 2)?])?;
    let pair_est = helson_constant(&pair, 100, 8, seed)?;
    let indep = FiniteFrequencySet::from_floats(&[2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0])?;
    let indep_est = helson_constant(&indep, 10_000, 8, seed)?;
    let passed = single_vals.iter().all(|v| (v - 1.0).abs() <= HELSON_SINGLETON_TOL)
        && pair_est.alpha_upper <= HELSON_PAIR_MAX
        && indep_est.alpha_upper >= HELSON_INDEPENDENT_MIN;
    Ok((
        passed,
        format!(
            "singletons {:?}, {{0,1/2}} {:.6}, independent pair {:.4}",
            single_vals, pair_est.alpha_upper, indep_est.alpha_upper
        ),
        json!({ "singletons": single_vals, "two_point": pair_est, "independent_pair": indep_est }),
    ))
}
