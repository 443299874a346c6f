use helson_lab_core::riesz::{
    convolution_power_profile, riesz_dense_oracle, riesz_fourier, rigidity_search, RieszProductSpec,
};
use helson_lab_core::Error;
use proptest::prelude::*;

fn spec(alpha: f64, freqs: &[i64]) -> RieszProductSpec {
    RieszProductSpec::new(alpha, freqs.to_vec()).unwrap()
}

fn powers_of_three(n: u32) -> Vec<i64> {
    (1..=n).map(|j| 3i64.pow(j)).collect()
}

/// `σ̂(m)` read off the FFT oracle, negative `m` wrapped.
fn oracle_at(dense: &[helson_lab_core::Complex64], m: i64) -> helson_lab_core::Complex64 {
    dense[m.rem_euclid(dense.len() as i64) as usize]
}

#[test]
fn closed_form_examples() {
    assert_eq!(riesz_fourier(&spec(0.5, &[1]), 1), 0.25);
    let two = spec(0.5, &[3, 9]);
    assert_eq!(riesz_fourier(&two, 12), 0.0625);
    assert_eq!(riesz_fourier(&two, 5), 0.0);
    assert_eq!(riesz_fourier(&two, 0), 1.0);
    let dense = riesz_dense_oracle(&two, 1 << 14);
    assert!((oracle_at(&dense, 12).re - 0.0625).abs() < 1e-12);
    assert!(oracle_at(&dense, 5).norm() < 1e-12);
}

#[test]
fn construction_checks() {
    assert!(matches!(
        RieszProductSpec::new(0.5, vec![1, 2, 3]),
        Err(Error::NotDissociate(_))
    ));
    assert!(matches!(
        RieszProductSpec::new(1.5, vec![1]),
        Err(Error::OutOfRange { .. })
    ));
    assert!(RieszProductSpec::new(0.5, vec![3, 2]).is_err());
    // 7 − 3 = 1 + 3.
    assert!(matches!(
        RieszProductSpec::new(0.5, vec![1, 3, 7]),
        Err(Error::NotDissociate(_))
    ));
    // 11 ≤ 2·(2 + 5), so only the exhaustive search can accept this one.
    assert!(RieszProductSpec::new(0.5, vec![2, 5, 11]).is_ok());
}

#[test]
fn profile_examples() {
    let s = spec(0.5, &powers_of_three(8));
    let p1 = convolution_power_profile(&s, 1, 10_000).unwrap();
    assert_eq!((p1.value, p1.m), (0.25, 3));
    let p3 = convolution_power_profile(&s, 3, 10_000).unwrap();
    assert_eq!((p3.value, p3.m), (0.015625, 3));
    let one = spec(1.0, &[5, 17, 60]);
    assert_eq!(convolution_power_profile(&one, 1, 1000).unwrap().value, 0.5);
    assert!(convolution_power_profile(&s, 1, 10_000_001).is_err());
}

#[test]
fn rigidity_examples() {
    let r = rigidity_search(&spec(0.5, &[3, 9]), 100).unwrap();
    assert_eq!((r.m, r.value), (3, 0.25));
    let r = rigidity_search(&spec(1.0, &[2]), 10).unwrap();
    assert_eq!((r.m, r.value), (2, 0.5));
    let r = rigidity_search(&spec(0.5, &[]), 1000).unwrap();
    assert_eq!(r.value, 0.0);
}

/// Doubling-lacunary frequencies: each exceeds twice the sum before it.
fn lacunary(max_n: usize, cap: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, 1..=max_n).prop_map(move |gaps| {
        let mut out = Vec::new();
        let mut sum = 0i64;
        for g in gaps {
            let next = 2 * sum + 1 + g;
            if next > cap {
                break;
            }
            out.push(next);
            sum += next;
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_matches_fft(freqs in lacunary(12, 1 << 14), alpha in 0.05..=1.0f64) {
        let s = RieszProductSpec::new(alpha, freqs.clone()).unwrap();
        let top = *freqs.last().unwrap_or(&1);
        let grid = (4 * top as usize).max(64).next_power_of_two();
        let dense = riesz_dense_oracle(&s, grid);
        let span: i64 = freqs.iter().sum();
        // Nothing lives beyond Σ n_j.
        for m in -(2 * top).min(span + 1)..=(2 * top).min(span + 1) {
            let d = oracle_at(&dense, m);
            prop_assert!((d.re - riesz_fourier(&s, m)).abs() <= 1e-10 && d.im.abs() <= 1e-10, "m={}", m);
        }
    }

    #[test]
    fn density_is_nonnegative_with_unit_mass(freqs in lacunary(8, 1 << 12), alpha in 0.05..=1.0f64) {
        let s = RieszProductSpec::new(alpha, freqs).unwrap();
        prop_assert_eq!(riesz_fourier(&s, 0), 1.0);
        let grid = 4096;
        let min = (0..grid).map(|i| s.density(i as f64 / grid as f64)).fold(f64::INFINITY, f64::min);
        prop_assert!(min >= -1e-9);
    }

    #[test]
    fn parseval(freqs in lacunary(10, 1 << 13), alpha in 0.05..=1.0f64) {
        let s = RieszProductSpec::new(alpha, freqs.clone()).unwrap();
        let listed: f64 = s.support_coefficients(u64::MAX >> 8).unwrap().iter().map(|(_, c)| c * c).sum();
        let span: i64 = freqs.iter().sum();
        let grid = (2 * span as usize + 1).next_power_of_two().max(64);
        let quad: f64 = (0..grid).map(|i| s.density(i as f64 / grid as f64).powi(2)).sum::<f64>() / grid as f64;
        prop_assert!((listed - quad).abs() <= 1e-8, "{} vs {}", listed, quad);
        prop_assert!((listed - s.parseval_mass()).abs() <= 1e-10 * listed);
    }

    #[test]
    fn power_profile_is_exact_power(freqs in lacunary(8, 1 << 12), alpha in 0.05..=1.0f64, k in 1u32..8, range in 1u64..5000) {
        let s = RieszProductSpec::new(alpha, freqs).unwrap();
        let base = convolution_power_profile(&s, 1, range).unwrap();
        let pk = convolution_power_profile(&s, k, range).unwrap();
        prop_assert_eq!(pk.value.to_bits(), base.value.powi(k as i32).to_bits());
        prop_assert_eq!(pk.m, base.m);
        // Brute-force scan as an independent check of the maximum and its tie-break.
        let mut best = (0.0f64, 0i64);
        for m in 1..=range as i64 {
            for cand in [m, -m] {
                let v = riesz_fourier(&s, cand).abs();
                if v > best.0 {
                    best = (v, cand);
                }
            }
        }
        prop_assert_eq!(base.value, best.0);
        if best.0 > 0.0 {
            prop_assert_eq!(base.m, best.1);
        }
        prop_assert!(base.value <= alpha / 2.0);
    }
}
