use helson_lab_core::drury::{expand_q, extract_p};
use helson_lab_core::torus::{
    a_norm_lattice, dense_fft_oracle, fourier_coeff, independence_check, l1_norm_monte_carlo, l1_norm_torus,
    AtomicCircleMeasure, FiniteFrequencySet, Frequency, Independence, SparseTrigPoly,
};
use helson_lab_core::{Complex64, Error};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn poly(dim: usize, terms: &[(Vec<i32>, Complex64)]) -> SparseTrigPoly {
    SparseTrigPoly::from_terms(dim, terms.iter().cloned()).unwrap()
}

#[test]
fn a_norm_examples() {
    assert_eq!(a_norm_lattice(&poly(1, &[(vec![0], c(1.0, 0.0))])), 1.0);
    assert_eq!(
        a_norm_lattice(&poly(1, &[(vec![1], c(0.5, 0.0)), (vec![-1], c(0.5, 0.0))])),
        1.0
    );
    // 3·0.4 + 3·0.4³
    let p = extract_p(3, 0.4).unwrap();
    assert!((a_norm_lattice(&p) - 1.392).abs() < 1e-12);
    assert_eq!(a_norm_lattice(&SparseTrigPoly::zero(2).unwrap()), 0.0);
}

#[test]
fn l1_quadrature_examples() {
    assert!((l1_norm_torus(&poly(1, &[(vec![0], c(1.0, 0.0))]), 16).unwrap() - 1.0).abs() < 1e-14);
    assert!((l1_norm_torus(&poly(1, &[(vec![1], c(1.0, 0.0))]), 64).unwrap() - 1.0).abs() < 1e-14);
    let q = expand_q(1, 0.5).unwrap();
    assert!((l1_norm_torus(&q, 256).unwrap() - 1.0).abs() < 1e-12);
    let high = poly(5, &[(vec![1, 0, 0, 0, 0], c(1.0, 0.0))]);
    assert!(matches!(l1_norm_torus(&high, 8), Err(Error::DimensionTooLarge { .. })));
}

#[test]
fn l1_monte_carlo_examples() {
    let (v, se) = l1_norm_monte_carlo(&poly(1, &[(vec![0], c(1.0, 0.0))]), 1000, 3).unwrap();
    assert_eq!((v, se), (1.0, 0.0));
    let mut e1 = vec![0; 8];
    e1[0] = 1;
    let (v, se) = l1_norm_monte_carlo(&poly(8, &[(e1, c(1.0, 0.0))]), 100_000, 3).unwrap();
    assert!((v - 1.0).abs() < 1e-12 && se < 1e-12, "{v} ± {se}");
    let p = extract_p(8, 0.3).unwrap();
    let (v, se) = l1_norm_monte_carlo(&p, 200_000, 11).unwrap();
    assert!(v <= 1.0 + 3.0 * se, "‖P‖₁ ≈ {v} ± {se}");
    assert_eq!(
        l1_norm_monte_carlo(&p, 2000, 5).unwrap(),
        l1_norm_monte_carlo(&p, 2000, 5).unwrap()
    );
}

#[test]
fn fourier_coeff_examples() {
    let one = AtomicCircleMeasure::from_pairs(&[(0.25, 1.0)]).unwrap();
    assert!((fourier_coeff(&one, 2) - c(-1.0, 0.0)).norm() < 1e-15);
    let two = AtomicCircleMeasure::from_pairs(&[(0.0, 0.5), (0.5, 0.5)]).unwrap();
    assert!(fourier_coeff(&two, 1).norm() < 1e-15);
    assert!((fourier_coeff(&two, 2) - c(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(fourier_coeff(&two, 0), c(1.0, 0.0));
}

#[test]
fn dense_oracle_examples() {
    let p = poly(1, &[(vec![1], c(0.7, 0.0))]);
    let d = dense_fft_oracle(&p, 8).unwrap();
    assert!((d.coeff(&[1]) - c(0.7, 0.0)).norm() < 1e-15);
    for m in [-3, -2, -1, 0, 2, 3] {
        assert!(d.coeff(&[m]).norm() < 1e-15);
    }
    let q = expand_q(2, 0.5).unwrap();
    assert!(dense_fft_oracle(&q, 8).unwrap().max_deviation(&q) <= 1e-10);
    let four = poly(4, &[(vec![1, 0, 0, 0], c(1.0, 0.0))]);
    assert!(matches!(
        dense_fft_oracle(&four, 8),
        Err(Error::DimensionTooLarge { .. })
    ));
}

fn set(xs: &[&str]) -> FiniteFrequencySet {
    FiniteFrequencySet::new(xs.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
}

#[test]
fn independence_examples() {
    assert_eq!(
        independence_check(&set(&["1/2"]), 5).unwrap(),
        Independence::Independent
    );
    assert_eq!(
        independence_check(&set(&["1/3", "2/3"]), 3).unwrap(),
        Independence::DependentWitness { witness: vec![1, 1] }
    );
    let floats = FiniteFrequencySet::from_floats(&[2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0]).unwrap();
    assert_eq!(
        independence_check(&floats, 10).unwrap(),
        Independence::Inconclusive { near_witness: None }
    );
    let big = set(&["1/2", "1/3", "1/5", "1/7", "1/11", "1/13", "1/17"]);
    assert!(matches!(
        independence_check(&big, 20),
        Err(Error::BudgetExceeded { .. })
    ));
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

fn random_poly(max_dim: usize, max_deg: i32) -> impl Strategy<Value = SparseTrigPoly> {
    (1..=max_dim).prop_flat_map(move |dim| {
        prop::collection::vec((prop::collection::vec(-max_deg..=max_deg, dim), coeff()), 1..10)
            .prop_map(move |terms| SparseTrigPoly::from_terms(dim, terms).unwrap())
    })
}

fn same_dim_pair() -> impl Strategy<Value = (SparseTrigPoly, SparseTrigPoly)> {
    (1..=3usize).prop_flat_map(|dim| {
        let terms = || prop::collection::vec((prop::collection::vec(-4i32..=4, dim), coeff()), 0..8);
        (terms(), terms()).prop_map(move |(a, b)| {
            (
                SparseTrigPoly::from_terms(dim, a).unwrap(),
                SparseTrigPoly::from_terms(dim, b).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_matches_sparse(p in random_poly(3, 4)) {
        let d = dense_fft_oracle(&p, 16).unwrap();
        prop_assert!(d.max_deviation(&p) <= 1e-10);
    }

    #[test]
    fn a_norm_is_a_norm((p, q) in same_dim_pair(), k in coeff()) {
        let sum = p.add(&q).unwrap();
        prop_assert!(sum.a_norm() <= p.a_norm() + q.a_norm() + 1e-12);
        prop_assert!((p.scale(k).a_norm() - k.norm() * p.a_norm()).abs() <= 1e-12 * (1.0 + p.a_norm()));
    }

    #[test]
    fn l1_below_a_norm(p in random_poly(3, 4)) {
        let l1 = l1_norm_torus(&p, 16).unwrap();
        prop_assert!(l1 <= p.a_norm() + 1e-12, "{} > {}", l1, p.a_norm());
    }

    #[test]
    fn product_is_convolution(
        a in prop::collection::vec(coeff(), 1..=5),
        b in prop::collection::vec(coeff(), 1..=5),
    ) {
        let p = SparseTrigPoly::from_terms(1, a.iter().enumerate().map(|(i, &v)| (vec![i as i32], v))).unwrap();
        let q = SparseTrigPoly::from_terms(1, b.iter().enumerate().map(|(i, &v)| (vec![i as i32], v))).unwrap();
        let pq = p.mul(&q).unwrap();
        for m in 0..(a.len() + b.len() - 1) {
            let conv: Complex64 = (0..=m)
                .filter(|&i| i < a.len() && m - i < b.len())
                .map(|i| a[i] * b[m - i])
                .sum();
            let conv = if conv.norm() <= 1e-15 { c(0.0, 0.0) } else { conv };
            prop_assert!((pq.coeff(&[m as i32]) - conv).norm() <= 1e-12);
        }
        prop_assert!(dense_fft_oracle(&pq, 32).unwrap().max_deviation(&pq) <= 1e-10);
    }

    #[test]
    fn real_symmetric_measure_has_real_transform(
        atoms in prop::collection::btree_map(1u32..500, 0.01..1.0f64, 1..6),
        g in -50i64..50,
    ) {
        let mut pairs = Vec::new();
        for (&k, &w) in &atoms {
            let x = k as f64 / 1000.0;
            pairs.push((x, w));
            pairs.push((1.0 - x, w));
        }
        let mu = AtomicCircleMeasure::from_pairs(&pairs).unwrap();
        let (plus, minus) = (fourier_coeff(&mu, g), fourier_coeff(&mu, -g));
        prop_assert!((minus - plus.conj()).norm() <= 1e-12);
        prop_assert!(plus.im.abs() <= 1e-12);
    }

    #[test]
    fn dependence_witness_is_genuine(fracs in prop::collection::vec((0i64..12, 2i64..12), 1..4)) {
        let freqs: Result<Vec<Frequency>, _> = fracs.iter().map(|&(p, q)| Frequency::rational(p, q)).collect();
        let Ok(set) = FiniteFrequencySet::new(freqs.unwrap()) else { return Ok(()) };
        let first = independence_check(&set, 3).unwrap();
        prop_assert_eq!(&first, &independence_check(&set, 3).unwrap());
        if let Independence::DependentWitness { witness } = first {
            // Common denominator makes every membership test an integer divisibility check.
            let den: i64 = fracs.iter().map(|f| f.1).product();
            let nums: Vec<i64> = fracs.iter().map(|&(p, q)| p * (den / q)).collect();
            let total: i64 = witness.iter().zip(&nums).map(|(n, a)| n * a).sum();
            prop_assert_eq!(total % den, 0);
            prop_assert!(witness.iter().zip(&nums).any(|(n, a)| (n * a) % den != 0));
        }
    }
}
