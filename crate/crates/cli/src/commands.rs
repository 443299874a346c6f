use std::fs;
use std::path::Path;

use clap::Args;
use helson_lab_core::drury::{mix_drury, verify_drury};
use helson_lab_core::gauss::{
    carleman_sequence, cross_correlation, cross_cumulant_test, estimate_spectral, gaussianity_test, moment_report,
    quasianalytic_check, spectral_process, ModelKind, StationaryModel,
};
use helson_lab_core::helson::{helson_constant, lp_norm_growth, projector_series, RotationModel, MIN_GROWTH_GRID};
use helson_lab_core::mela::{mela_bound, solve_mela, SignedGridMeasure};
use helson_lab_core::parse;
use helson_lab_core::riesz::{convolution_power_profile, rigidity_search, RieszProductSpec};
use helson_lab_core::torus::{AtomicCircleMeasure, FiniteFrequencySet};
use helson_lab_core::verify::{criterion_name, eight_atom_spectrum, projector_setup, run_suite};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{num, OutputDir};
use crate::CliError;

/// `Ok(true)` when every certificate produced by the run holds.
pub type Verdict = Result<bool, CliError>;

fn read_file(path: &str) -> Result<Vec<u8>, CliError> {
    fs::read(Path::new(path)).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "valid"
    } else {
        "INVALID"
    }
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DruryArgs {
    /// Lattice dimension.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub epsilon: f64,
    /// Mixing measure as JSON; solved on the spot when absent.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Grid size for the mixing-measure LP.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// Monte Carlo samples for the L¹ estimate.
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn drury(a: &DruryArgs, out: &mut OutputDir) -> Verdict {
    let sigma: SignedGridMeasure = match &a.sigma {
        Some(path) => parse::parse_signed_measure_json(&read_file(path)?)?,
        None => {
            let eps = a.epsilon.min(0.5);
            solve_mela(eps, a.grid, 0)?.measure
        }
    };
    let f = mix_drury(a.n, &sigma, a.epsilon)?;
    let report = verify_drury(&f, &sigma, a.samples, a.seed);
    out.write_json(
        "drury.json",
        &json!({
            "function": f,
            "basis_values": f.basis_values(),
            "sigma": sigma,
            "report": report,
        }),
    )?;
    println!(
        "drury n={} ε={}: support {} points, max basis error {:.2e}, max off-basis {:.3e}, ‖ψ‖_A ≤ {:.4}, L¹ ≈ {:.4} ± {:.4} [{}]",
        a.n,
        a.epsilon,
        report.support_size,
        report.max_basis_error,
        report.max_off_basis,
        report.a_norm_bound,
        report.l1_estimate,
        report.l1_std_error,
        mark(report.valid)
    );
    Ok(report.valid)
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct MelaArgs {
    /// Required unless `--sweep` is given.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// Lowest odd-moment index to constrain; raised automatically until the tail is below ε/4.
    #[arg(long, default_value_t = 0)]
    pub kmax: u32,
    /// Solve for every value in `--epsilons` and emit a CSV table.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value = "0.5,0.25,0.1353,0.05,0.01,0.005,0.001")]
    pub epsilons: String,
}

pub fn mela(a: &MelaArgs, out: &mut OutputDir) -> Verdict {
    if a.sweep {
        let eps = parse::parse_float_list(&a.epsilons)?;
        if eps.is_empty() {
            return Err(CliError::Usage("--epsilons is empty".into()));
        }
        let sols = eps
            .par_iter()
            .map(|&e| solve_mela(e, a.grid, a.kmax))
            .collect::<Result<Vec<_>, _>>()?;
        let rows: Vec<Vec<String>> = sols
            .iter()
            .map(|s| {
                vec![
                    num(s.certificate.epsilon),
                    num(s.certificate.tv),
                    num(mela_bound(s.certificate.epsilon)),
                ]
            })
            .collect();
        out.write_csv("mela_sweep.csv", &["epsilon", "tv", "mela_bound"], &rows)?;
        let certs: Vec<_> = sols.iter().map(|s| &s.certificate).collect();
        out.write_json("mela_sweep.json", &json!({ "grid": a.grid, "certificates": certs }))?;
        let mut ok = true;
        for c in &certs {
            println!(
                "ε = {:<8} tv = {:.4}  bound = {:.4} [{}]",
                c.epsilon,
                c.tv,
                c.mela_bound,
                mark(c.valid)
            );
            ok &= c.valid;
        }
        return Ok(ok);
    }
    let eps = a
        .epsilon
        .ok_or_else(|| CliError::Usage("--epsilon is required unless --sweep is given".into()))?;
    let sol = solve_mela(eps, a.grid, a.kmax)?;
    out.write_json("mela.json", &sol)?;
    let c = &sol.certificate;
    println!(
        "mela ε={}: ‖σ‖ = {:.6} ≤ 2|log ε|+6 = {:.6}, k_max {}, max odd moment {:.3e}, tail {:.3e}, {} atoms [{}]",
        c.epsilon,
        c.tv,
        c.mela_bound,
        c.k_max,
        c.max_odd_moment,
        c.tail_bound,
        sol.measure.atoms().len(),
        mark(c.valid)
    );
    Ok(c.valid)
}

fn frequency_set(
    file: &Option<String>,
    inline: &Option<String>,
    what: &str,
) -> Result<Option<FiniteFrequencySet>, CliError> {
    match (file, inline) {
        (Some(_), Some(_)) => Err(CliError::Usage(format!(
            "give either a {what} file or an inline list, not both"
        ))),
        (Some(path), None) => Ok(Some(parse::parse_frequency_set_json(&read_file(path)?)?)),
        (None, Some(list)) => Ok(Some(parse::parse_frequency_list(list)?)),
        (None, None) => Ok(None),
    }
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct HelsonArgs {
    /// Frequency set as JSON.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<String>,
    /// Frequency set inline, e.g. `0,1/2`.
    #[arg(long)]
    pub freqs: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub grange: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn helson(a: &HelsonArgs, out: &mut OutputDir) -> Verdict {
    let k = frequency_set(&a.k, &a.freqs, "K")?
        .ok_or_else(|| CliError::Usage("one of --K or --freqs is required".into()))?;
    let est = helson_constant(&k, a.grange, a.restarts, a.seed)?;
    out.write_json("helson.json", &est)?;
    println!(
        "Helson constant of {} points ≤ {:.6} (|g| ≤ {}, {} restarts, attained at g = {})",
        k.len(),
        est.alpha_upper,
        a.grange,
        a.restarts,
        est.argmax_g
    );
    Ok(true)
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ProjectorArgs {
    /// Frequencies to keep, as JSON. Without `--K`/`--F` the seeded rotation setup is used.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<String>,
    /// Frequencies to suppress, as JSON.
    #[arg(long = "F")]
    #[serde(rename = "F")]
    pub f: Option<String>,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value_t = 64)]
    pub degree: usize,
    /// Terms of the telescoping series.
    #[arg(long, default_value_t = 3)]
    pub terms: usize,
    /// Rotation model as JSON; defaults to seeded golden-rotation models.
    #[arg(long)]
    pub model: Option<String>,
    /// Members of the seeded model family for the growth table.
    #[arg(long, default_value_t = 8)]
    pub family: usize,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn projector(a: &ProjectorArgs, out: &mut OutputDir) -> Verdict {
    let p_list = parse::parse_float_list(&a.p)?;
    if p_list.is_empty() {
        return Err(CliError::Usage("--p is empty".into()));
    }
    if a.family == 0 {
        return Err(CliError::Usage("--family must be positive".into()));
    }
    if a.grid < MIN_GROWTH_GRID {
        return Err(CliError::Usage(format!("--grid must be at least {MIN_GROWTH_GRID}")));
    }
    let (base, k, f) = match (&a.k, &a.f) {
        (None, None) => projector_setup(a.seed)?,
        (Some(kp), Some(fp)) => {
            let k = parse::parse_frequency_set_json(&read_file(kp)?)?;
            let f = parse::parse_frequency_set_json(&read_file(fp)?)?;
            let (model, _, _) = projector_setup(a.seed)?;
            (model, k, f)
        }
        _ => return Err(CliError::Usage("--K and --F go together".into())),
    };
    let family: Vec<RotationModel> = match &a.model {
        Some(path) => vec![parse::parse_rotation_model_json(&read_file(path)?)?],
        None => {
            let (lo, hi) = (base.modes[0].0, base.modes[base.modes.len() - 1].0);
            (0..a.family as u64)
                .map(|i| RotationModel::random(base.alpha_rot, lo, hi, a.seed.wrapping_add(i)))
                .collect()
        }
    };
    let series = p_list
        .par_iter()
        .map(|&p| projector_series(&k, &f, p, a.terms, a.degree))
        .collect::<Result<Vec<_>, _>>()?;
    let growth = lp_norm_growth(&family, &k, &p_list, a.grid, 1e-9)?;
    let ok = series
        .iter()
        .all(|s| s.sup_bound_holds && s.indicators.iter().all(|i| i.is_valid()));
    out.write_json(
        "projector.json",
        &json!({ "K": k, "F": f, "degree": a.degree, "series": series, "growth": growth }),
    )?;
    let width = growth.rows.first().map_or(0, |r| r.ratios.len());
    let mut header = vec!["p".to_string(), "max_ratio".to_string()];
    header.extend((0..width).map(|i| format!("ratio_{i}")));
    let rows: Vec<Vec<String>> = growth
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![num(r.p), num(r.max_ratio)];
            row.extend(r.ratios.iter().map(|&x| num(x)));
            row
        })
        .collect();
    out.write_csv(
        "growth.csv",
        &header.iter().map(String::as_str).collect::<Vec<_>>(),
        &rows,
    )?;
    for s in &series {
        println!(
            "p = {}: ε_k = {:?}, ‖φ‖_A = {:?}, sup bound {}",
            s.p,
            s.epsilons.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            s.indicators
                .iter()
                .map(|i| format!("{:.3}", i.a_norm))
                .collect::<Vec<_>>(),
            if s.sup_bound_holds { "holds" } else { "FAILS" }
        );
    }
    for r in &growth.rows {
        println!("‖π_K f‖_{} / ‖f‖_{} ≤ {:.4}", r.p, r.p, r.max_ratio);
    }
    println!("growth constant C = {:.4} [{}]", growth.fitted_c, mark(ok));
    Ok(ok)
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RieszArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Dissociate frequencies, e.g. `3,9,27`.
    #[arg(long)]
    pub freqs: String,
    /// Scan `0 < |m| ≤ RANGE`.
    #[arg(long, default_value_t = 10_000)]
    pub profile: u64,
    #[arg(long, default_value_t = 1)]
    pub power: u32,
    /// Also search `0 < g ≤ RANGE` for the largest normalised coefficient.
    #[arg(long)]
    pub rigidity: Option<u64>,
}

pub fn riesz(a: &RieszArgs, out: &mut OutputDir) -> Verdict {
    if a.power == 0 {
        return Err(CliError::Usage("--power must be positive".into()));
    }
    let spec = RieszProductSpec::new(a.alpha, parse::parse_int_list(&a.freqs)?)?;
    let support = spec.support_coefficients(a.profile)?;
    let peak = convolution_power_profile(&spec, a.power, a.profile)?;
    let rigidity = a.rigidity.map(|g| rigidity_search(&spec, g)).transpose()?;
    let rows: Vec<Vec<String>> = support.iter().map(|(m, c)| vec![m.to_string(), num(*c)]).collect();
    out.write_csv("riesz_support.csv", &["m", "coeff"], &rows)?;
    out.write_json(
        "riesz.json",
        &json!({
            "spec": spec,
            "profile_range": a.profile,
            "support_size": support.len(),
            "parseval_mass": spec.parseval_mass(),
            "power": a.power,
            "peak": peak,
            "rigidity": rigidity,
        }),
    )?;
    println!(
        "Riesz product α={} over {} frequencies: {} support points in |m| ≤ {}, max |σ̂(m)|^{} = {} at m = {}",
        a.alpha,
        spec.freqs().len(),
        support.len(),
        a.profile,
        a.power,
        peak.value,
        peak.m
    );
    if let Some(r) = rigidity {
        println!("rigidity: max |σ̂(g)|/σ̂(0) = {} at g = {}", r.value, r.m);
    }
    Ok(true)
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct GaussArgs {
    /// Spectral measure as JSON; eight equal atoms when absent.
    #[arg(long)]
    pub spectrum: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    pub len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `gaussian` or `random-phase`.
    #[arg(long, default_value = "gaussian")]
    pub kind: String,
    /// Samples sharing one amplitude draw.
    #[arg(long, default_value_t = 1000)]
    pub block_len: usize,
    /// Any of moments, spectral, gaussianity, increments.
    #[arg(long, default_value = "moments,spectral,gaussianity,increments")]
    pub report: String,
    #[arg(long, default_value_t = 20)]
    pub gmax: usize,
    /// Largest even moment order.
    #[arg(long, default_value_t = 24)]
    pub pmax: u32,
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    /// Cut points of the spectral process.
    #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
    pub thresholds: String,
    #[arg(long, default_value_t = 200)]
    pub replicates: usize,
    /// Write the simulated sequence as CSV.
    #[arg(long)]
    pub dump: bool,
}

const REPORTS: [&str; 4] = ["moments", "spectral", "gaussianity", "increments"];

pub fn gauss(a: &GaussArgs, out: &mut OutputDir) -> Verdict {
    let kind = match a.kind.as_str() {
        "gaussian" => ModelKind::Gaussian,
        "random-phase" => ModelKind::RandomPhase,
        other => {
            return Err(CliError::Usage(format!(
                "--kind {other:?}: expected gaussian or random-phase"
            )))
        }
    };
    let wanted: Vec<&str> = a.report.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = wanted.iter().find(|w| !REPORTS.contains(w)) {
        return Err(CliError::Usage(format!("--report: unknown section {bad:?}")));
    }
    let spectrum: AtomicCircleMeasure = match &a.spectrum {
        Some(path) => parse::parse_measure_json(&read_file(path)?)?,
        None => eight_atom_spectrum(),
    };
    let model = StationaryModel::with_blocks(kind, spectrum, a.len, a.seed, a.block_len)?;
    let seq = model.simulate();
    let mut report = serde_json::Map::new();
    report.insert("model".into(), json!(model));
    if wanted.contains(&"moments") {
        let m = moment_report(&seq, a.pmax)?;
        let carleman = carleman_sequence(&m, 1);
        let qa = if carleman.len() >= 4 {
            Some(quasianalytic_check(&carleman)?)
        } else {
            None
        };
        println!(
            "moments: ‖f‖_p growth β = {:.4}, log-convexity violations {}, Carleman partial sum {:.4}",
            m.growth_fit,
            m.logconvex_violations,
            m.carleman_partial.last().copied().unwrap_or(0.0)
        );
        report.insert("moments".into(), json!({ "report": m, "quasianalytic": qa }));
    }
    if wanted.contains(&"spectral") {
        let est = estimate_spectral(&seq, a.gmax)?;
        let worst = est
            .iter()
            .map(|e| (e.value() - model.spectrum.fourier_coeff(e.g)).norm() / e.std_error)
            .fold(0.0, f64::max);
        let truth: Vec<_> = est.iter().map(|e| model.spectrum.fourier_coeff(e.g)).collect();
        println!(
            "spectral: {} lags, worst deviation from σ̂ {:.2} standard errors",
            est.len(),
            worst
        );
        report.insert(
            "spectral".into(),
            json!({ "estimates": est, "exact": truth, "worst_deviation_se": worst }),
        );
    }
    if wanted.contains(&"gaussianity") {
        let g = gaussianity_test(&seq, a.kmax)?;
        println!(
            "gaussianity: z = {:?} [{}]",
            g.z_scores.iter().map(|z| format!("{z:.2}")).collect::<Vec<_>>(),
            if g.gaussian_consistent {
                "consistent"
            } else {
                "rejected"
            }
        );
        report.insert("gaussianity".into(), json!(g));
    }
    if wanted.contains(&"increments") {
        let thresholds = parse::parse_float_list(&a.thresholds)?;
        let sp = spectral_process(&model, &thresholds)?;
        let mut pairs = Vec::new();
        for i in 0..sp.increments.len() {
            for j in i + 1..sp.increments.len() {
                let (x, y) = (&sp.increments[i], &sp.increments[j]);
                if sp.window_mass[i] == 0.0 || sp.window_mass[j] == 0.0 {
                    continue;
                }
                let corr = cross_correlation(x, y);
                let cum = cross_cumulant_test(x, y, a.replicates, a.seed ^ ((i as u64) << 32 | j as u64))?;
                pairs.push(json!({ "windows": [i, j], "correlation": corr, "cumulant": cum }));
            }
        }
        let dependent = pairs.iter().filter(|p| p["cumulant"]["dependent"] == true).count();
        println!(
            "increments: {} windows, {} nonempty pairs, {} flagged dependent",
            sp.window_mass.len(),
            pairs.len(),
            dependent
        );
        report.insert(
            "increments".into(),
            json!({ "thresholds": sp.thresholds, "window_mass": sp.window_mass, "pairs": pairs }),
        );
    }
    out.write_json("gauss.json", &report)?;
    if a.dump {
        let rows: Vec<Vec<String>> = seq
            .values
            .iter()
            .enumerate()
            .map(|(n, v)| vec![n.to_string(), num(v.re), num(v.im)])
            .collect();
        out.write_csv("gauss_series.csv", &["n", "re", "im"], &rows)?;
    }
    Ok(true)
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

/// Returns the verdict and the per-criterion wall times.
pub fn verify(a: &VerifyArgs, out: &mut OutputDir) -> Result<(bool, Vec<f64>), CliError> {
    let (report, times) = run_suite(a.seed);
    out.write_json("verify.json", &report)?;
    for (c, t) in report.criteria.iter().zip(&times) {
        println!(
            "[{}] {:>2} {:<26} {:>7.2}s  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            criterion_name(c.id),
            t,
            c.summary
        );
    }
    println!(
        "{}",
        if report.all_passed {
            "all criteria passed"
        } else {
            "some criteria FAILED"
        }
    );
    Ok((report.all_passed, times))
}
