//! Cross-checks of the numerical core against independent references:
//! least squares against the normal equations, distribution tails against
//! adaptive quadrature, and the FDR step-up against the textbook rule.

mod common;

use cgci::causality::fdr_reject;
use cgci::regression::{build_design, fit_model, ols_fit};
use cgci::simulate::{gen_var, make_s1};
use cgci::special::{f_survival, ln_gamma, t_two_sided};
use cgci::ExplanatoryVector;
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[test]
fn ols_matches_the_normal_equations_on_random_designs() {
    for (seed, n, p) in [(1u64, 40, 3), (2, 80, 6), (3, 200, 12), (4, 30, 1), (5, 500, 8)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let design = Array2::from_shape_fn((n, p), |_| rng.sample::<f64, _>(StandardNormal));
        let truth: Vec<f64> = (0..p).map(|c| (c as f64 - 1.5) / 2.0).collect();
        let y = Array1::from_shape_fn(n, |r| {
            let signal: f64 = (0..p).map(|c| truth[c] * design[[r, c]]).sum();
            signal + 0.3 * rng.sample::<f64, _>(StandardNormal)
        });

        let fit = ols_fit(design.view(), y.view()).unwrap();
        assert!(!fit.condition_flag);
        let reference = common::normal_equations_ols(design.view(), y.view());
        for (a, b) in fit.coefficients.iter().zip(&reference) {
            assert!((a - b).abs() <= 1e-8, "coefficient {a} vs oracle {b}");
        }
        let ref_sse = common::residual_sse(design.view(), y.view(), &reference);
        assert!((fit.sse - ref_sse).abs() <= 1e-8 * (1.0 + ref_sse));
    }
}

#[test]
fn var_fits_match_the_normal_equations() {
    let (spec, _) = make_s1();
    let ts = gen_var(&spec, 400, 9).unwrap().demean();
    for response in 0..ts.k() {
        let ev = ExplanatoryVector::full(response, ts.k(), 4);
        let fit = fit_model(&ts, &ev, 4).unwrap();
        let (design, y) = build_design(&ts, &ev, 4).unwrap();
        let reference = common::normal_equations_ols(design.view(), y.view());
        for (a, b) in fit.coefficients.iter().zip(&reference) {
            assert!((a - b).abs() <= 1e-8, "coefficient {a} vs oracle {b}");
        }
    }
}

#[test]
fn ln_gamma_matches_the_stirling_series() {
    for x in [0.5, 1.0, 1.5, 2.0, 2.5, 3.7, 5.0, 10.0, 24.5, 100.0, 350.5] {
        let a = ln_gamma(x);
        let b = common::stirling_ln_gamma(x);
        assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "ln_gamma({x}): {a} vs {b}");
    }
}

#[test]
fn f_tail_matches_numerical_integration() {
    for d1 in [1.0, 2.0, 3.0, 5.0, 10.0] {
        for d2 in [1.0, 5.0, 20.0, 100.0, 250.0] {
            for x in [0.05, 0.5, 1.0, 2.0, 5.0, 10.0] {
                let lib = f_survival(x, d1, d2);
                let oracle = common::f_survival_by_quadrature(x, d1, d2);
                assert!(
                    (lib - oracle).abs() <= 1e-6,
                    "F sf({x}; {d1}, {d2}) = {lib} vs oracle {oracle}"
                );
            }
        }
    }
}

#[test]
fn t_tail_matches_numerical_integration() {
    for dof in [1.0, 2.0, 5.0, 30.0, 200.0] {
        for t in [0.0, 0.3, 1.0, 2.0, 4.0] {
            let lib = t_two_sided(t, dof);
            let oracle = common::t_two_sided_by_quadrature(t, dof);
            assert!(
                (lib - oracle).abs() <= 1e-6,
                "t two-sided({t}; {dof}) = {lib} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn fdr_matches_the_textbook_step_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..20 {
        let m = 1 + (case * 7) % 40;
        let mut pvalues: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        // Force ties in half the cases, including potential boundary ties.
        if case % 2 == 0 && m >= 4 {
            pvalues[1] = pvalues[0];
            pvalues[3] = pvalues[2];
        }
        for alpha in [0.01, 0.05, 0.2] {
            let lib = fdr_reject(&pvalues, alpha);
            let oracle = common::naive_benjamini_hochberg(&pvalues, alpha);
            assert_eq!(lib, oracle, "case {case}, alpha {alpha}: {pvalues:?}");
        }
    }
    assert!(fdr_reject(&[], 0.05).is_empty());
}
