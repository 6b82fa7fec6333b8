//! Behavioral checks of the simulators: spectral radius against an
//! eigenvalue oracle, coefficient recovery on long samples, coupling
//! structure of the map lattice, and reproducibility.

use cgci::benchmark::{run_benchmark, BenchmarkConfig};
use cgci::regression::fit_model;
use cgci::simulate::{
    gen_henon, gen_var, gen_var_with_burn_in, make_s1, make_s2, make_s3, HenonSpec, System,
    VarSystemSpec,
};
use cgci::{analyze, ExplanatoryVector, Method, TestMode};
use nalgebra::{DMatrix, Schur};
use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Spectral radius of the VAR companion matrix by dense eigenvalues.
///
/// Companion matrices are exactly the structure on which an unbalanced QR
/// iteration can stall, so the matrix is first conjugated with a random
/// orthogonal factor; similarity leaves the eigenvalues untouched.
fn companion_radius(coefficients: &Array3<f64>) -> f64 {
    let (k, _, p) = coefficients.dim();
    let size = k * p;
    let m = DMatrix::from_fn(size, size, |r, c| {
        if r < k {
            let lag = c / k;
            let var = c % k;
            coefficients[[r, var, lag]]
        } else if r - k == c {
            1.0
        } else {
            0.0
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let random = DMatrix::from_fn(size, size, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = random.qr().q();
    let conjugated = q.transpose() * m * q;
    Schur::try_new(conjugated, 1e-12, 100_000)
        .expect("eigenvalue iteration did not converge")
        .complex_eigenvalues()
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max)
}

#[test]
fn spectral_radius_matches_the_eigenvalue_oracle() {
    let (s1, _) = make_s1();
    let (s2, _) = make_s2();
    let (s3, _) = make_s3(5);
    let mut ar2 = Array3::zeros((2, 2, 2));
    ar2[[0, 0, 0]] = 1.1;
    ar2[[0, 0, 1]] = -0.3;
    ar2[[1, 1, 0]] = 0.25;
    ar2[[1, 0, 0]] = 0.8;
    let cross = VarSystemSpec::with_unit_noise("ar2", ar2).unwrap();
    for spec in [&s1, &s2, &s3, &cross] {
        let lib = spec.spectral_radius();
        let oracle = companion_radius(spec.coefficients());
        assert!(
            (lib - oracle).abs() <= 1e-8 * (1.0 + oracle),
            "{}: {lib} vs eigenvalue oracle {oracle}",
            spec.name()
        );
        assert!(lib < 1.0, "{} is not stationary", spec.name());
    }
}

#[test]
fn s1_coefficients_are_recovered_on_a_long_sample() {
    let (spec, _) = make_s1();
    let ts = gen_var(&spec, 100_000, 17).unwrap().demean();
    for response in 0..5 {
        let ev = ExplanatoryVector::full(response, 5, 4);
        let fit = fit_model(&ts, &ev, 4).unwrap();
        for (idx, term) in ev.terms().iter().enumerate() {
            let truth = spec.coefficients()[[response, term.variable, term.lag - 1]];
            assert!(
                (fit.coefficients[idx] - truth).abs() <= 0.02,
                "response {response} term {term}: {} vs {truth}",
                fit.coefficients[idx]
            );
        }
    }
}

#[test]
fn uncoupled_henon_channels_stay_disconnected() {
    let spec = HenonSpec::new(5, 0.0).unwrap();
    assert!(spec.true_graph().edges().is_empty());
    let (ts, _) = gen_henon(&spec, 2000, 3).unwrap();
    let m = analyze(&ts, Method::Bts, 5, 0.05, TestMode::Fdr).unwrap();
    assert!(
        m.edges().len() <= 2,
        "uncoupled lattice produced edges {:?}",
        m.edges()
    );
}

#[test]
fn coupled_henon_chain_is_largely_recovered() {
    let spec = HenonSpec::new(5, 0.3).unwrap();
    let truth = spec.true_graph();
    let expected: Vec<(usize, usize)> =
        vec![(0, 1), (1, 2), (2, 1), (2, 3), (3, 2), (4, 3)];
    assert_eq!(truth.edges(), expected);

    let system = System::Henon { k: 5, c: 0.3 }.build().unwrap();
    let mut config = BenchmarkConfig::new(vec![Method::Bts], 1024, 5, 10);
    config.seed = 42;
    let result = run_benchmark(&system, &config).unwrap();
    let (sens, _) = result.methods[0].mean_sd(cgci::benchmark::IndexKind::Sensitivity).unwrap();
    let (spc, _) = result.methods[0].mean_sd(cgci::benchmark::IndexKind::Specificity).unwrap();
    assert!(sens >= 0.5, "sensitivity {sens}");
    assert!(spc >= 0.7, "specificity {spc}");
}

#[test]
fn burn_in_reaches_the_stationary_law() {
    let mut diag = Array3::zeros((2, 2, 1));
    diag[[0, 0, 0]] = 0.6;
    diag[[1, 1, 0]] = 0.6;
    let spec = VarSystemSpec::with_unit_noise("ar1", diag).unwrap();
    // Stationary variance of an AR(1) with unit innovations: 1/(1 - 0.36).
    let theory = 1.0 / (1.0 - 0.36);
    for burn_in in [1000, 2000] {
        let ts = gen_var_with_burn_in(&spec, 20_000, burn_in, 77).unwrap();
        for j in 0..2 {
            let col = ts.variable(j);
            let mean = col.sum() / col.len() as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / (col.len() - 1) as f64;
            assert!(
                (var - theory).abs() <= 0.08 * theory,
                "burn-in {burn_in}, variable {j}: variance {var} vs {theory}"
            );
        }
    }
}

#[test]
fn generation_is_reproducible_and_seed_sensitive() {
    let (spec, _) = make_s1();
    let a = gen_var(&spec, 150, 9).unwrap();
    let b = gen_var(&spec, 150, 9).unwrap();
    assert_eq!(a.values(), b.values());
    let c = gen_var(&spec, 150, 10).unwrap();
    assert_ne!(a.values(), c.values());

    let hspec = HenonSpec::new(4, 0.2).unwrap();
    let (ha, _) = gen_henon(&hspec, 200, 5).unwrap();
    let (hb, _) = gen_henon(&hspec, 200, 5).unwrap();
    assert_eq!(ha.values(), hb.values());
    let (hc, _) = gen_henon(&hspec, 200, 6).unwrap();
    assert_ne!(ha.values(), hc.values());

    let (s3a, ga) = make_s3(11);
    let (s3b, gb) = make_s3(11);
    assert_eq!(s3a.coefficients(), s3b.coefficients());
    assert_eq!(ga, gb);
    let (_, gc) = make_s3(12);
    assert_ne!(ga, gc);
}
