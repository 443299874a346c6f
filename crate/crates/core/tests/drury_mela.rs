use helson_lab_core::drury::{
    drury_support, expand_q, extract_p, mix_drury, support_count, verify_drury, wbar_coefficient,
};
use helson_lab_core::lp::{lp_solve, LinearProgram, LpError};
use helson_lab_core::mela::{check_moments, mela_bound, solve_mela, SignedGridMeasure};
use helson_lab_core::torus::{dense_fft_oracle, grid_min_real, l1_norm_torus, LatticePoint};
use helson_lab_core::{Complex64, Error};
use proptest::prelude::*;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn q_examples() {
    let q = expand_q(1, 0.5).unwrap();
    assert_eq!(q.len(), 3);
    assert_eq!(q.coeff(&[0, 0]), re(1.0));
    assert_eq!(q.coeff(&[1, 1]), re(0.5));
    assert_eq!(q.coeff(&[-1, -1]), re(0.5));
    let q = expand_q(2, 0.3).unwrap();
    assert_eq!(q.len(), 9);
    assert!((q.coeff(&[1, 1, 2]) - re(0.09)).norm() < 1e-15);
    assert!(matches!(expand_q(2, 0.6), Err(Error::OutOfRange { .. })));
    assert!(matches!(expand_q(2, 0.0), Err(Error::OutOfRange { .. })));
}

#[test]
fn q_is_a_probability_density() {
    for n in 1..=3 {
        for s in [0.1, 0.3, 0.5] {
            let q = expand_q(n, s).unwrap();
            assert_eq!(q.coeff(&vec![0; n + 1]), re(1.0));
            assert!(grid_min_real(&q, 32).unwrap() >= -1e-9, "n={n} s={s}");
            let l1 = l1_norm_torus(&q, 16).unwrap();
            assert!((l1 - 1.0).abs() <= 1e-6, "n={n} s={s}: {l1}");
            if n < 3 {
                assert!(dense_fft_oracle(&q, 8).unwrap().max_deviation(&q) <= 1e-10);
            }
        }
    }
}

#[test]
fn p_examples() {
    let p = extract_p(1, 0.4).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p.coeff(&[-1]), re(0.4));
    let p = extract_p(2, 0.4).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p.coeff(&[-1, 0]), re(0.4));
    assert_eq!(p.coeff(&[0, -1]), re(0.4));
    let p = extract_p(3, 0.4).unwrap();
    assert_eq!(p.len(), 6);
    for j in 0..3 {
        assert_eq!(p.coeff(LatticePoint::basis(3, j, -1).coords()), re(0.4));
    }
    assert_eq!(p.coeff(&[1, -1, -1]), re(0.4f64.powi(3)));
    assert_eq!(p.coeff(&[-1, 1, -1]), re(0.4f64.powi(3)));
    assert_eq!(p.coeff(&[-1, -1, 1]), re(0.4f64.powi(3)));
    for n in 1..=3 {
        let p = extract_p(n, 0.3).unwrap();
        assert!(dense_fft_oracle(&p, 8).unwrap().max_deviation(&p) <= 1e-10);
        assert!(l1_norm_torus(&p, 32).unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn support_counts() {
    assert_eq!(support_count(1).unwrap(), 1);
    assert_eq!(support_count(2).unwrap(), 2);
    assert_eq!(support_count(3).unwrap(), 6);
    for n in 1..=12 {
        assert_eq!(support_count(n).unwrap(), drury_support(n).len() as u64, "n={n}");
    }
    assert!(support_count(31).is_err());
}

#[test]
fn single_atom_drury() {
    let sigma = SignedGridMeasure::single(0.5, 2.0).unwrap();
    let f = mix_drury(2, &sigma, 0.01).unwrap();
    assert_eq!(f.basis_values(), vec![re(1.0), re(1.0)]);
    assert_eq!(f.max_off_basis(), 0.0);
    assert_eq!(f.a_norm_bound, 2.0);
    // n = 3 brings in the third moment 0.25, which breaks any ε below it.
    assert!(matches!(mix_drury(3, &sigma, 0.1), Err(Error::MomentCheckFailed(_))));
}

#[test]
fn drury_from_mela_measure() {
    let eps = (-2.0f64).exp();
    let sigma = solve_mela(eps, 1000, 0).unwrap().measure;
    let f = mix_drury(3, &sigma, eps).unwrap();
    assert!(f.a_norm_bound <= 10.0);
    assert!(verify_drury(&f, &sigma, 20_000, 1).valid);

    let sigma = solve_mela(0.1, 1000, 0).unwrap().measure;
    let f = mix_drury(8, &sigma, 0.1).unwrap();
    assert_eq!(f.psi.len() as u64, support_count(8).unwrap());
    assert!(f.max_off_basis() <= 0.1 + 1e-8);
    assert!(f.max_basis_error() <= 1e-8);
    for v in f.basis_values() {
        assert_eq!(v, re(sigma.odd_moment(0)));
    }
}

#[test]
fn mela_examples() {
    let half = solve_mela(0.5, 1000, 0).unwrap();
    assert!(half.certificate.valid);
    assert!(half.certificate.tv <= 2.0 * 2f64.ln() + 6.0);
    // The single atom (1/2, 2) has third moment 1/4, inside the ε/2 budget once ε ≥ 1/2.
    assert!(half.certificate.tv <= 2.0 + 1e-9);
    // Below that the truncated moments get only ε/2, and the atom is cut off.
    assert!(solve_mela(0.3, 1000, 0).unwrap().certificate.tv > 2.0);
    let e2 = solve_mela((-2.0f64).exp(), 1000, 0).unwrap();
    assert!(e2.certificate.valid && e2.certificate.tv <= 10.0);
    assert!(matches!(solve_mela(0.6, 1000, 0), Err(Error::OutOfRange { .. })));
    assert!(matches!(solve_mela(0.1, 10, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn check_moments_examples() {
    let sigma = SignedGridMeasure::single(0.5, 2.0).unwrap();
    let c = check_moments(&sigma, 0.3, 10);
    assert!(c.valid);
    assert_eq!(c.max_odd_moment, 0.25);
    assert_eq!(c.tail_bound, 2.0 * 0.5f64.powi(21));
    assert!(!check_moments(&sigma, 0.1, 10).valid);
    let sol = solve_mela(0.05, 1000, 0).unwrap();
    assert_eq!(
        check_moments(&sol.measure, 0.05, sol.certificate.k_max),
        sol.certificate
    );
}

const EPS_GRID: [f64; 4] = [0.5, 0.1, 0.01, 0.001];

#[test]
fn mela_sweep_properties() {
    let sols: Vec<_> = EPS_GRID.iter().map(|&e| solve_mela(e, 1000, 0).unwrap()).collect();
    for (s, &e) in sols.iter().zip(&EPS_GRID) {
        let c = check_moments(&s.measure, e, s.certificate.k_max);
        assert!(c.valid, "ε={e}");
        assert!(c.tv <= mela_bound(e) + 1e-6, "ε={e}");
        assert!(
            (s.lp_objective - s.lp_dual_objective).abs() <= 1e-8 * (1.0 + s.lp_objective.abs()),
            "duality gap at ε={e}: {} vs {}",
            s.lp_objective,
            s.lp_dual_objective
        );
    }
    for w in sols.windows(2) {
        assert!(w[0].certificate.tv <= w[1].certificate.tv + 1e-6);
    }
    for (s, &e) in sols.iter().zip(&EPS_GRID) {
        let fine = solve_mela(e, 2000, 0).unwrap();
        let change = (fine.certificate.tv - s.certificate.tv).abs() / s.certificate.tv;
        assert!(change < 0.01, "ε={e}: grid doubling moved tv by {change}");
    }
}

#[test]
fn lp_examples() {
    let sol = lp_solve(&LinearProgram::new(vec![1.0]).ub(vec![-1.0], -3.0)).unwrap();
    assert!((sol.objective - 3.0).abs() < 1e-12);
    let sol = lp_solve(&LinearProgram::new(vec![1.0, 1.0]).eq(vec![1.0, -1.0], 1.0)).unwrap();
    assert!((sol.objective - 1.0).abs() < 1e-12);
    assert!((sol.x[0] - 1.0).abs() < 1e-12 && sol.x[1].abs() < 1e-12);
    let bad = LinearProgram::new(vec![1.0]).ub(vec![1.0], -1.0);
    assert_eq!(lp_solve(&bad).unwrap_err(), LpError::Infeasible);
    let unbounded = LinearProgram::new(vec![-1.0]).ub(vec![-1.0], 0.0);
    assert_eq!(lp_solve(&unbounded).unwrap_err(), LpError::Unbounded);
}

/// A problem built around a chosen primal-dual pair satisfying complementary
/// slackness, so its optimum is known before solving.
fn planted() -> impl Strategy<Value = (LinearProgram, f64)> {
    (3usize..12, 1usize..6, 0usize..3).prop_flat_map(|(n, m_ub, m_eq)| {
        (
            prop::collection::vec(prop::collection::vec(-2.0..2.0f64, n), m_ub + m_eq),
            prop::collection::vec((0.0..2.0f64, any::<bool>()), n),
            prop::collection::vec((0.1..1.0f64, any::<bool>()), m_ub),
            prop::collection::vec(-1.0..1.0f64, m_eq),
            prop::collection::vec(0.1..1.0f64, n),
        )
            .prop_map(move |(rows, xs, ys, y_eq, d)| {
                // x_j > 0 ⇒ reduced cost 0; y_i < 0 ⇒ row tight.
                let x: Vec<f64> = xs.iter().map(|&(v, on)| if on { v + 0.1 } else { 0.0 }).collect();
                let y_ub: Vec<f64> = ys.iter().map(|&(v, on)| if on { -v } else { 0.0 }).collect();
                let dot = |r: &[f64]| r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
                let (ub_rows, eq_rows) = rows.split_at(m_ub);
                let mut c = vec![0.0; n];
                for j in 0..n {
                    let aty: f64 = ub_rows.iter().zip(&y_ub).map(|(r, y)| r[j] * y).sum::<f64>()
                        + eq_rows.iter().zip(&y_eq).map(|(r, y)| r[j] * y).sum::<f64>();
                    c[j] = aty + if x[j] > 0.0 { 0.0 } else { d[j] };
                }
                let mut lp = LinearProgram::new(c.clone());
                for (r, &y) in ub_rows.iter().zip(&y_ub) {
                    let slack = if y < 0.0 { 0.0 } else { 0.5 };
                    lp = lp.ub(r.clone(), dot(r) + slack);
                }
                for r in eq_rows {
                    lp = lp.eq(r.clone(), dot(r));
                }
                let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
                (lp, value)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn planted_optimum_is_found((lp, value) in planted()) {
        let sol = lp_solve(&lp).unwrap();
        prop_assert!((sol.objective - value).abs() <= 1e-7 * (1.0 + value.abs()), "{} vs {}", sol.objective, value);
        prop_assert!(sol.primal_residual <= 1e-9);
        prop_assert!((sol.objective - sol.dual_objective).abs() <= 1e-8 * (1.0 + sol.objective.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn p_matches_expanded_q(n in 1usize..=7, s in 0.01..=0.5f64) {
        let from_q = wbar_coefficient(&expand_q(n, s).unwrap()).unwrap();
        let p = extract_p(n, s).unwrap();
        prop_assert_eq!(from_q.len(), p.len());
        for (m, v) in p.iter() {
            prop_assert!((from_q.coeff(m.coords()) - v).norm() <= 1e-15);
        }
    }

    #[test]
    fn p_coefficients_are_odd_powers(n in 1usize..=8, s in 0.01..=0.5f64) {
        let p = extract_p(n, s).unwrap();
        for (m, v) in p.iter() {
            let a = m.coords().iter().filter(|&&x| x == 1).count() as i32;
            let b = m.coords().iter().filter(|&&x| x == -1).count() as i32;
            prop_assert_eq!(b, a + 1);
            prop_assert_eq!(*v, re(s.powi(2 * a + 1)));
        }
    }

    #[test]
    fn mixed_basis_value_is_first_moment(
        atoms in prop::collection::btree_map(1u32..=500, -3.0..3.0f64, 1..6),
        n in 1usize..=6,
    ) {
        let sigma = SignedGridMeasure::new(
            atoms.iter().map(|(&k, &w)| helson_lab_core::mela::GridAtom { s: k as f64 / 1000.0, w }).collect(),
        ).unwrap();
        // Rescale so the first moment is 1 up to rounding.
        let m1 = sigma.moment(1);
        prop_assume!(m1.abs() > 1e-3);
        let sigma = SignedGridMeasure::new(
            sigma.atoms().iter().map(|a| helson_lab_core::mela::GridAtom { s: a.s, w: a.w / m1 }).collect(),
        ).unwrap();
        if let Ok(f) = mix_drury(n, &sigma, 10.0) {
            for v in f.basis_values() {
                prop_assert_eq!(v, re(sigma.odd_moment(0)));
            }
            prop_assert_eq!(f.a_norm_bound, sigma.total_variation());
        }
    }
}
