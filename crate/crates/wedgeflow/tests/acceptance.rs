//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured numbers. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use wedgeflow::assembly::{
    assemble_forms, equivalence_constant, form_equivalence_check, make_grid,
};
use wedgeflow::evolve::{
    energy_identity_defect, fit_decay, heat_kernel_prefactor, integrate, pointwise_bound,
    SelfSimilarState,
};
use wedgeflow::geometry::{builtin_profile, SIN_CAPPED_SUPPORT};
use wedgeflow::hardy::{
    angular_poincare, angular_poincare_numeric, certify_global, local_hardy_constant,
    verify_certificate,
};
use wedgeflow::spectral::{exact_spectrum, lowest_eigenpairs};

use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

fn gamma_theory(a: f64) -> f64 {
    0.5 + 1.0 / (4.0 * a)
}

#[test]
fn criterion_01_exact_spectrum_reproduction() {
    for &a in &[0.25, 0.5, 1.0] {
        let clock = Instant::now();
        let grid = make_grid(a, 12.0, 400, 64).unwrap();
        let straight = builtin_profile("straight").unwrap();
        let forms = assemble_forms(&grid, &straight, 0.0).unwrap();
        let pairs = lowest_eigenpairs(&forms, 3, 1e-9).unwrap();
        let exact = exact_spectrum(a, 3).unwrap();
        let mut worst = 0.0f64;
        for (p, e) in pairs.iter().zip(&exact) {
            let rel = (p.value - e.value).abs() / e.value;
            assert!(
                rel <= 0.01,
                "a = {a}: {} vs exact {} (rel {rel:.3e})",
                p.value,
                e.value
            );
            worst = worst.max(rel);
        }
        let elapsed = clock.elapsed().as_secs_f64();
        assert!(elapsed <= 60.0, "a = {a}: took {elapsed:.1} s");
        println!(
            "criterion 1 PASS (a = {a}): three lowest eigenvalues on 400x64 within {:.2e} rel \
             (tolerance 1e-2), {elapsed:.1} s (cap 60 s)",
            worst
        );
    }
}

#[test]
fn criterion_02_decay_rate_straight_wedge() {
    for &a in &[0.25, 1.0] {
        let grid = make_grid(a, 12.0, 320, 48).unwrap();
        let straight = builtin_profile("straight").unwrap();
        let forms = assemble_forms(&grid, &straight, 0.0).unwrap();
        let ground = lowest_eigenpairs(&forms, 1, 1e-10).unwrap();
        let phi0 = SelfSimilarState {
            s: 0.0,
            phi_vec: ground[0].vector.clone(),
            norm: 1.0,
        };
        let ds = 0.05;
        let s_max = 4.0;
        let series = integrate(&grid, &straight, &phi0, s_max, ds).unwrap();
        let gamma = gamma_theory(a);

        // pointwise trace against e^{−Γs}: within 10 ds² per unit s
        let mut worst = 0.0f64;
        for &(s, norm) in &series {
            let expect = (-gamma * s).exp();
            let tol = 10.0 * ds * ds * (s + ds);
            let rel = (norm - expect).abs() / expect;
            assert!(rel <= tol, "a = {a}, s = {s}: rel {rel:.3e} > {tol:.3e}");
            if s > 0.0 {
                worst = worst.max(rel / s);
            }
        }
        let fit = fit_decay(&series, (0.5 * s_max, s_max)).unwrap();
        let gap = (fit.gamma_hat - gamma).abs() / gamma;
        assert!(gap <= 0.02, "a = {a}: gamma_hat {} vs {gamma}", fit.gamma_hat);
        println!(
            "criterion 2 PASS (a = {a}): gamma_hat = {:.6} vs {gamma} (rel {gap:.2e}, \
             tolerance 2e-2); trace deviation {worst:.2e} per unit s (cap {:.2e})",
            fit.gamma_hat,
            10.0 * ds * ds
        );
    }
}

#[test]
fn criterion_03_decay_rate_curved_wedge() {
    let grid = make_grid(1.0, 12.0, 240, 40).unwrap();
    let profile = builtin_profile("sin-capped").unwrap();
    let phi0 = wedgeflow::evolve::prepare_initial(
        &grid,
        |rho, phi| (-rho * rho).exp() * (0.5 * phi).sin(),
        true,
    )
    .unwrap();
    let series = integrate(&grid, &profile, &phi0, 12.0, 0.025).unwrap();
    let fit = fit_decay(&series, (6.0, 12.0)).unwrap();
    let gap = (fit.gamma_hat - 0.75).abs() / 0.75;
    assert!(gap <= 0.05, "gamma_hat {} (gap {gap:.3e})", fit.gamma_hat);
    println!(
        "criterion 3 PASS: sin-capped a = 1, s_max = 12: gamma_hat = {:.6} vs 0.75 \
         (rel {gap:.2e}, tolerance 5e-2)",
        fit.gamma_hat
    );
}

#[test]
fn criterion_04_eigenvalue_trajectory_freeze() {
    let grid = make_grid(1.0, 12.0, 400, 64).unwrap();
    let profile = builtin_profile("sin-capped").unwrap();
    let d_rho = grid.d_rho();
    // threshold: e^{−s/2}·(3π/2) < Δρ
    let s_star = 2.0 * (SIN_CAPPED_SUPPORT / d_rho).ln();
    assert!(s_star < 10.2 && s_star > 9.0, "threshold {s_star}");

    // before the threshold the matrices still differ
    let before = assemble_forms(&grid, &profile, 8.0).unwrap();
    assert!(before.l_s_mat != before.l_mat);

    let mut lambda_frozen = None;
    for &s in &[10.2f64, 11.0, 12.0] {
        assert!((-0.5 * s).exp() * SIN_CAPPED_SUPPORT < d_rho);
        let forms = assemble_forms(&grid, &profile, s).unwrap();
        assert_eq!(forms.l_s_mat, forms.l_mat, "matrix identity at s = {s}");
        if lambda_frozen.is_none() {
            let pairs = lowest_eigenpairs(&forms, 1, 1e-9).unwrap();
            lambda_frozen = Some(pairs[0].value);
        }
    }
    let lambda = lambda_frozen.unwrap();
    let rel = (lambda - 0.75).abs() / 0.75;
    assert!(rel <= 0.01, "lambda0 past threshold: {lambda} (rel {rel:.3e})");
    println!(
        "criterion 4 PASS: L_s = L bitwise for s in {{10.2, 11, 12}} (threshold {s_star:.2}); \
         lambda0 = {lambda:.6} within {rel:.2e} of 0.75 (tolerance 1e-2)"
    );
}

#[test]
fn criterion_05_skew_identity() {
    let grid = make_grid(1.0, 10.0, 60, 16).unwrap();
    let mut worst = 0.0f64;
    for name in ["straight", "sinc", "sin-capped", "log3"] {
        let profile = builtin_profile(name).unwrap();
        for &s in &[0.0, 1.0, 5.0] {
            let forms = assemble_forms(&grid, &profile, s).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(500 + s as u64);
            for _ in 0..100 {
                let v: Vec<f64> = (0..grid.n_unknowns())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let q = forms.m_s_mat.quad_form(&v);
                let scale = forms.m_s_mat.abs_quad_form(&v);
                if scale == 0.0 {
                    assert_eq!(q, 0.0, "{name} s = {s}");
                } else {
                    let rel = q.abs() / scale;
                    assert!(rel <= 1e-13, "{name} s = {s}: {rel:.3e}");
                    worst = worst.max(rel);
                }
            }
        }
    }
    println!(
        "criterion 5 PASS: |v'M_s v| <= 1e-13 relative for 100 random v, all profiles, \
         s in {{0,1,5}} (worst {worst:.2e})"
    );
}

#[test]
fn criterion_06_energy_identity_defect_order() {
    let grid = make_grid(1.0, 10.0, 48, 12).unwrap();
    let profile = builtin_profile("sin-capped").unwrap();
    let phi0 = wedgeflow::evolve::prepare_initial(
        &grid,
        |rho, phi| (-rho * rho / 2.0).exp() * (0.5 * phi).sin(),
        true,
    )
    .unwrap();
    let d1 = energy_identity_defect(&grid, &profile, &phi0, 1.0, 0.1).unwrap();
    let d2 = energy_identity_defect(&grid, &profile, &phi0, 1.0, 0.05).unwrap();
    let ratio = d1 / d2;
    assert!(
        (3.5..=4.5).contains(&ratio),
        "defect ratio {ratio} outside [3.5, 4.5] ({d1:.3e} -> {d2:.3e})"
    );
    println!(
        "criterion 6 PASS: energy-identity defect {d1:.3e} -> {d2:.3e} when ds halves \
         (ratio {ratio:.2}, required 3.5..4.5)"
    );
}

#[test]
fn criterion_07_form_equivalence_bounds() {
    let grid = make_grid(1.0, 10.0, 60, 16).unwrap();
    for name in ["straight", "sinc", "sin-capped", "log3"] {
        let profile = builtin_profile(name).unwrap();
        let k_bound = equivalence_constant(profile.twist_bound());
        let (lo, hi) = form_equivalence_check(&grid, &profile, 0.0, 100).unwrap();
        assert!(
            lo >= 1.0 / k_bound && hi <= k_bound,
            "{name}: ({lo}, {hi}) vs K = {k_bound}"
        );
        println!(
            "criterion 7 PASS ({name}): 100 random ratios in [{lo:.4}, {hi:.4}] within \
             [1/K, K], K = {k_bound:.3}"
        );
    }
}

#[test]
fn criterion_08_hardy_dichotomy() {
    let straight = builtin_profile("straight").unwrap();
    let s1 = local_hardy_constant(&straight, 1.0, 6.0, 120, 32, 1e-9).unwrap();
    let s2 = local_hardy_constant(&straight, 1.0, 6.0, 240, 64, 1e-9).unwrap();
    assert!(s2.lambda <= 1e-6, "straight clamp {}", s2.lambda);
    assert!(
        s2.lambda_raw.abs() < s1.lambda_raw.abs(),
        "raw not decreasing: {} -> {}",
        s1.lambda_raw,
        s2.lambda_raw
    );

    let sc = builtin_profile("sin-capped").unwrap();
    let c1 = local_hardy_constant(&sc, 1.0, 6.0, 120, 32, 1e-9).unwrap();
    let c2 = local_hardy_constant(&sc, 1.0, 6.0, 240, 64, 1e-9).unwrap();
    assert!(c1.lambda > 0.0 && c2.lambda > 0.0);
    let drift = (c1.lambda - c2.lambda).abs() / c2.lambda;
    assert!(drift <= 0.10, "lambda_R drift {drift:.3e}");
    println!(
        "criterion 8 PASS: straight lambda_R raw {:.2e} -> {:.2e} (clamped {} <= 1e-6); \
         sin-capped R = 6 lambda_R {:.6} -> {:.6} (drift {drift:.2e} <= 0.1)",
        s1.lambda_raw, s2.lambda_raw, s2.lambda, c1.lambda, c2.lambda
    );
}

#[test]
fn criterion_09_global_certificate() {
    let sc = builtin_profile("sin-capped").unwrap();
    let cert = certify_global(&sc, 1.0, 6.0, 120, 32).unwrap();
    assert!(cert.c > 0.0, "c = {}", cert.c);
    assert!(!cert.critical_flag);
    let vgrid = make_grid(1.0, 12.0, 240, 32).unwrap();
    let slack = verify_certificate(&cert, &vgrid, &sc, 100).unwrap();
    assert!(slack >= -1e-8, "worst slack {slack:.3e}");

    let straight = builtin_profile("straight").unwrap();
    let crit = certify_global(&straight, 1.0, 6.0, 120, 32).unwrap();
    assert_eq!(crit.c, 0.0);
    assert!(crit.critical_flag);
    println!(
        "criterion 9 PASS: sin-capped certificate c = {:.6e} > 0, worst slack {slack:.2e} \
         >= -1e-8 on 100 random psi; straight c = 0 with critical flag",
        cert.c
    );
}

#[test]
fn criterion_10_angular_poincare() {
    for &a in &[0.125, 0.25, 0.5, 1.0] {
        let exact = angular_poincare(a).unwrap();
        let numeric = angular_poincare_numeric(a, 2000).unwrap();
        let rel = (numeric - exact).abs() / exact;
        assert!(rel <= 1e-4, "a = {a}: rel {rel:.3e}");
        println!(
            "criterion 10 PASS (a = {a}): 1/(4a^2) = {exact} vs 1D eigenvalue {numeric:.10} \
             (rel {rel:.2e} <= 1e-4)"
        );
    }
}

#[test]
fn criterion_11_pointwise_bound_plumbing() {
    let pi = std::f64::consts::PI;
    let c = heat_kernel_prefactor(1.0 / (4.0 * pi)).unwrap();
    assert!((c - 0.5f64.sqrt()).abs() < 1e-15);
    let c = heat_kernel_prefactor(1.0).unwrap();
    assert!((c - (2.0 * pi).sqrt() / (4.0 * pi)).abs() < 1e-15);

    // monotone decay in t whenever gamma > delta, property-based
    let mut rng = ChaCha8Rng::seed_from_u64(1100);
    for _ in 0..50 {
        let gamma: f64 = rng.gen_range(0.05..2.0);
        let delta: f64 = rng.gen_range(0.0..1.0) * gamma * 0.95;
        let eps: f64 = rng.gen_range(0.01..2.0);
        let norm: f64 = rng.gen_range(0.1..10.0);
        let c_delta: f64 = rng.gen_range(0.1..10.0);
        let mut prev = f64::INFINITY;
        for k in 0..30 {
            let t = eps + k as f64 * 0.37;
            let b = pointwise_bound(norm, t, eps, delta, gamma, c_delta).unwrap();
            assert!(b <= prev, "gamma {gamma}, delta {delta}, t {t}");
            prev = b;
        }
    }
    assert!(pointwise_bound(1.0, 0.1, 0.2, 0.0, 1.0, 1.0).is_err());
    println!(
        "criterion 11 PASS: c_eps exact at eps = 1/(4pi) and eps = 1; bound curves \
         monotone decreasing for 50 random (gamma, delta) with gamma > delta"
    );
}
