//! Acceptance gate: one test per release criterion, each printing a
//! PASS/FAIL line. Run with
//!
//! ```text
//! cargo test --release --test acceptance -- --nocapture --test-threads 1
//! ```
//!
//! The widths criterion propagates three couplings over a hundred periods
//! and takes a few minutes on one core; everything else is fast.

use std::process::Command;

use floquet_width::config::{benchmark_config, ExperimentConfig, HarmonicSpec};
use floquet_width::floquet::{
    f_value_with_offset, fourier_modes, gamma_fgr, gamma_limiting, genericity_sample,
    DrivenModel, GaussianBumpGenerator, Harmonic, HarmonicKind, Perturbation, SpatialProfile,
};
use floquet_width::grid::{
    build_hamiltonian, eigenpairs_below, GridFunction, Potential, SpatialGrid,
};
use floquet_width::propagation::{
    averaged_survival, default_window, fit_decay, scaling_study, PropagationConfig, Propagator,
};
use floquet_width::spectral::{boundary_value, resolvent_element, EpsilonLadder};
use num_complex::Complex64;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "ACCEPTANCE {id:>2} {} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

/// 1. Bound-state energy -1 within 1e-3 at h = 0.02, O(h^2) across three
/// resolutions.
#[test]
fn criterion_01_eigenvalue_oracle() {
    let mut errors = Vec::new();
    for n in [751, 1501, 3001] {
        let grid = SpatialGrid::symmetric(30.0, n).unwrap();
        let h = build_hamiltonian(&Potential::PoschlTeller { depth: 2.0 }, &grid).unwrap();
        let pairs = eigenpairs_below(&h, -1e-2).unwrap();
        errors.push((pairs[0].0 + 1.0).abs());
    }
    let at_benchmark = errors[2];
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    let pass = at_benchmark < 1e-3 && (3.0..5.0).contains(&r1) && (3.0..5.0).contains(&r2);
    report(
        1,
        "eigenvalue oracle",
        pass,
        format!("|E_0 + 1| = {at_benchmark:.2e} at h = 0.02; error ratios {r1:.2}, {r2:.2}"),
    );
}

/// 2. Free-resolvent oracle: extrapolated Im for the unit Gaussian at
/// lambda = 1 equals sqrt(pi)/e within 1e-3.
#[test]
fn criterion_02_free_resolvent_oracle() {
    let half = 1040.0;
    let n = (2.0 * half / 0.02) as usize + 1;
    let grid = SpatialGrid::symmetric(half, n).unwrap();
    let h = build_hamiltonian(&Potential::Zero, &grid).unwrap();
    let psi = GridFunction::from_real_fn(grid, |x| (-x * x / 2.0).exp()).normalized();
    let sample = boundary_value(&h, &psi, 1.0, &EpsilonLadder::default()).unwrap();
    let oracle = std::f64::consts::PI.sqrt() * (-1.0f64).exp();
    let err = (sample.boundary.im - oracle).abs();
    report(
        2,
        "free-resolvent oracle",
        err < 1e-3,
        format!("Im = {:.8} vs sqrt(pi)/e = {oracle:.8}, error {err:.2e}", sample.boundary.im),
    );
}

/// 3. Route equivalence: golden-rule and limiting-absorption widths agree
/// within 1% on the benchmark.
#[test]
fn criterion_03_route_equivalence() {
    let config = benchmark_config();
    let fgr = gamma_fgr(&config.driven_model(0.1).unwrap(), 4).unwrap();
    let limiting =
        gamma_limiting(&config.resolvent_model(0.1).unwrap(), 4, &EpsilonLadder::default())
            .unwrap();
    let ratio = fgr.gamma / limiting.gamma;
    report(
        3,
        "route equivalence",
        (ratio - 1.0).abs() < 0.01,
        format!(
            "Gamma_fgr = {:.6e}, Gamma_limiting = {:.6e}, ratio = {ratio:.5}",
            fgr.gamma, limiting.gamma
        ),
    );
}

/// 4. Herglotz positivity: Im of the resolvent element is nonnegative for
/// 100 random (psi, lambda, eps); closed-channel and projector-term
/// extrapolated Im stay below 1e-6.
#[test]
fn criterion_04_herglotz_positivity() {
    let grid = SpatialGrid::symmetric(20.0, 1001).unwrap();
    let h = build_hamiltonian(&Potential::PoschlTeller { depth: 2.0 }, &grid).unwrap();
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut min_im = f64::INFINITY;
    for _ in 0..100 {
        let (a, b, c) = (next(), next(), next());
        let psi = GridFunction::from_fn(grid, |x| {
            Complex64::new(
                ((3.0 * a - 1.5) * x).sin() * (-x * x / 9.0).exp(),
                ((3.0 * b - 1.5) * x).cos() * (-x * x / 7.0).exp(),
            )
        });
        let lambda = 8.0 * c - 4.0;
        let eps = 0.01 + next() * 0.2;
        let v = resolvent_element(&h, &psi, lambda, eps).unwrap();
        min_im = min_im.min(v.im);
    }

    // closed channel of the benchmark: z = E_0 - omega = -3, distance 2 from
    // the spectrum, and the projected static term at z = E_0
    let config = benchmark_config();
    let big = config.resolvent_model(0.1).unwrap();
    let ladder = EpsilonLadder::default();
    let phi0 = &big.static_model.bound.wavefunction;
    let modes = fourier_modes(&big, 2).unwrap();
    let w1 = modes.iter().find(|m| m.n == 1).unwrap();
    let psi_closed = w1.profile.mul_pointwise(phi0);
    let e0 = big.static_model.bound.energy;
    let closed = boundary_value(&big.static_model.hamiltonian, &psi_closed, e0 - big.omega, &ladder)
        .unwrap();

    // projector term with an explicit static component
    let mut with_static = config.clone();
    with_static.harmonics.push(HarmonicSpec {
        m: 0,
        kind: HarmonicKind::Static,
        amplitude: 0.5,
        center: 0.0,
        width: 1.0,
    });
    let big_s = with_static.resolvent_model(0.1).unwrap();
    let phi0s = &big_s.static_model.bound.wavefunction;
    let modes_s = fourier_modes(&big_s, 2).unwrap();
    let w0 = modes_s.iter().find(|m| m.n == 0).unwrap();
    let mut proj = w0.profile.mul_pointwise(phi0s);
    let overlap = phi0s.inner(&proj);
    for (p, b) in proj.values.iter_mut().zip(&phi0s.values) {
        *p -= overlap * b;
    }
    let e0s = big_s.static_model.bound.energy;
    let projector = boundary_value(&big_s.static_model.hamiltonian, &proj, e0s, &ladder).unwrap();

    let pass = min_im >= 0.0
        && closed.boundary.im.abs() <= 1e-6
        && projector.boundary.im.abs() <= 1e-6;
    report(
        4,
        "Herglotz positivity",
        pass,
        format!(
            "min Im = {min_im:.2e}; closed-channel Im = {:.2e}; projector Im = {:.2e}",
            closed.boundary.im, projector.boundary.im
        ),
    );
}

/// 5. F is independent of the reference rung n_0 to 1e-12.
#[test]
fn criterion_05_reference_rung_independence() {
    let config = benchmark_config();
    let model = config.resolvent_model(0.1).unwrap();
    let (base, _) = f_value_with_offset(&model, 0.05, 4, 0).unwrap();
    let mut max_diff: f64 = 0.0;
    for n0 in [-3i64, 1, 5] {
        let (shifted, _) = f_value_with_offset(&model, 0.05, 4, n0).unwrap();
        max_diff = max_diff.max((shifted - base).norm());
    }
    report(
        5,
        "n_0 independence of F",
        max_diff <= 1e-12,
        format!("max |F(n_0) - F(0)| = {max_diff:.2e} over n_0 in {{-3, 1, 5}}"),
    );
}

/// 6. Propagator invariants: norm drift < 1e-8 over 1e4 steps, Floquet
/// periodicity to 1e-12, survival normalization, unimodular undriven decay.
#[test]
fn criterion_06_propagator_invariants() {
    let config = benchmark_config();
    let mut small = config.clone();
    small.grid.half_width = 20.0;
    small.grid.n_points = 2001;
    let model = small.driven_model(0.3).unwrap();
    let propagator = Propagator::new(model.clone(), PropagationConfig::default()).unwrap();
    let dt = propagator.dt();

    let psi0 = GridFunction::from_fn(model.static_model.grid, |x| {
        Complex64::new((-x * x / 3.0).exp(), (0.9 * x).sin() * (-x * x / 5.0).exp())
    })
    .normalized();
    let (after, _) = propagator.propagate(&psi0, 0.0, 10_000.0 * dt).unwrap();
    let drift = (after.norm() - 1.0).abs();

    let span = 5.0 * model.period;
    let (a, _) = propagator.propagate(&psi0, 0.0, span).unwrap();
    let (b, _) = propagator
        .propagate(&psi0, model.period, model.period + span)
        .unwrap();
    let periodicity: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();

    let driven = averaged_survival(&model, 0.3, 8.0 * model.period, 8, PropagationConfig::default(), None)
        .unwrap();
    let a0 = (driven.amplitudes[0].norm() - 1.0).abs();

    let undriven =
        averaged_survival(&model, 0.0, 8.0 * model.period, 8, PropagationConfig::default(), None)
            .unwrap();
    let max_dev = undriven
        .amplitudes
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);

    let pass = drift < 1e-8 && periodicity < 1e-12 && a0 < 1e-12 && max_dev < 1e-9;
    report(
        6,
        "propagator invariants",
        pass,
        format!(
            "norm drift {drift:.2e}; periodicity {periodicity:.2e}; |A(0)-1| = {a0:.2e}; \
             undriven |A| deviation {max_dev:.2e}"
        ),
    );
}

fn scaling_config() -> ExperimentConfig {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/scaling.conf");
    ExperimentConfig::parse_file(path).unwrap()
}

/// 7. Width validation: Gamma_fit/(2 alpha^2 Im F) in [0.85, 1.15] for
/// couplings with Gamma_fit * s_max in [1, 3]; log-log slope 2.0 +- 0.1.
#[test]
fn criterion_07_width_validation() {
    let config = scaling_config();
    let im_f = gamma_limiting(
        &config.resolvent_model(0.0).unwrap(),
        config.numerics.n_max,
        &EpsilonLadder::default(),
    )
    .unwrap()
    .c2_im;
    let model = config.driven_model(0.0).unwrap();
    let s_max = config.numerics.s_max.unwrap();
    let study = scaling_study(
        &model,
        &config.alphas,
        s_max,
        config.numerics.stride,
        PropagationConfig::default(),
        None,
        im_f,
    )
    .unwrap();

    let mut detail = String::new();
    let mut ratios_ok = true;
    let mut windows_ok = true;
    for row in &study.rows {
        ratios_ok &= (0.85..=1.15).contains(&row.ratio);
        windows_ok &= (1.0..=3.0).contains(&(row.gamma_fit * row.s_max));
        detail.push_str(&format!(
            "alpha {}: ratio {:.4}, Gamma*s = {:.2}; ",
            row.alpha,
            row.ratio,
            row.gamma_fit * row.s_max
        ));
    }
    detail.push_str(&format!("slope {:.4}", study.slope));
    let pass = ratios_ok && windows_ok && (study.slope - 2.0).abs() <= 0.1;
    report(7, "width validation", pass, detail);
}

/// 8. First-order shift: with a static component, the linear coefficient of
/// E_fit(alpha) - E_0 matches c1 within 10%.
#[test]
fn criterion_08_first_order_shift() {
    let mut config = benchmark_config();
    config.grid.half_width = 120.0;
    config.grid.n_points = 12001;
    config.harmonics.push(HarmonicSpec {
        m: 0,
        kind: HarmonicKind::Static,
        amplitude: 0.5,
        center: 0.0,
        width: 1.0,
    });
    let model = config.driven_model(0.0).unwrap();
    let phi0 = &model.static_model.bound.wavefunction;

    // c1 = <phi_0, w_static phi_0> directly from the static profile
    let w_static = GridFunction::from_real_fn(model.static_model.grid, |x| {
        0.5 * (-x * x / 2.0).exp()
    });
    let c1 = phi0.inner(&w_static.mul_pointwise(phi0)).re;

    let alphas = [0.0, 0.12, 0.24, 0.36];
    let s_max = 44.0 * model.period;
    let mut e_fits = Vec::new();
    for &alpha in &alphas {
        let series =
            averaged_survival(&model, alpha, s_max, 8, PropagationConfig::default(), None).unwrap();
        let fit = fit_decay(&series, default_window(s_max)).unwrap();
        e_fits.push(fit.e_fit);
    }

    // least-squares quadratic in alpha; the linear coefficient is c1
    let m = 3;
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (&alpha, &e) in alphas.iter().zip(&e_fits) {
        let pow = [1.0, alpha, alpha * alpha];
        for i in 0..m {
            for j in 0..m {
                a[i][j] += pow[i] * pow[j];
            }
            b[i] += pow[i] * e;
        }
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for j in col..m {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..m).rev() {
        for j in col + 1..m {
            b[col] -= a[col][j] * b[j];
        }
        b[col] /= a[col][col];
    }
    let linear = b[1];
    let rel = (linear - c1).abs() / c1.abs();
    report(
        8,
        "first-order shift",
        rel < 0.10,
        format!("linear coefficient {linear:.6} vs c1 = {c1:.6} ({:.1}% off)", rel * 100.0),
    );
}

/// 9. Quadratic scaling: Gamma(cW) = c^2 Gamma(W) to 1e-10 relative.
#[test]
fn criterion_09_quadratic_scaling() {
    let config = benchmark_config();
    let base_model = config.driven_model(0.1).unwrap();
    let base = gamma_fgr(&base_model, 4).unwrap().gamma;
    let mut worst: f64 = 0.0;
    for c in [-1.0, 2.0, 0.5] {
        let scaled = DrivenModel::new(
            base_model.static_model.clone(),
            Perturbation::Separable(vec![Harmonic {
                m: 1,
                kind: HarmonicKind::Cos,
                profile: SpatialProfile::Gaussian {
                    amplitude: c,
                    center: 0.0,
                    width: 1.0,
                },
            }]),
            base_model.period,
            0.1,
        )
        .unwrap();
        let gamma = gamma_fgr(&scaled, 4).unwrap().gamma;
        worst = worst.max((gamma - c * c * base).abs() / (c * c * base));
    }
    report(
        9,
        "quadratic scaling",
        worst <= 1e-10,
        format!("max relative defect {worst:.2e} over c in {{-1, 2, 0.5}}"),
    );
}

/// 10. Genericity proxy: at least 99 of 100 seeded random smooth drives give
/// Gamma > 1e-10.
#[test]
fn criterion_10_genericity() {
    let config = benchmark_config();
    let model = config.driven_model(0.1).unwrap();
    let sample =
        genericity_sample(&model, 4, 100, 20260823, &GaussianBumpGenerator::default()).unwrap();
    report(
        10,
        "genericity proxy",
        sample.positive >= 99,
        format!("{}/{} positive widths", sample.positive, sample.trials),
    );
}

/// 11. Determinism: `compare` run twice with the same seed produces
/// byte-identical payload files.
#[test]
fn criterion_11_determinism() {
    let bin = env!("CARGO_BIN_EXE_floquet-width");
    let dir = std::env::temp_dir().join(format!("acceptance-determinism-{}", std::process::id()));
    let conf = dir.join("run.conf");
    std::fs::create_dir_all(&dir).unwrap();

    let mut config = benchmark_config();
    config.grid.half_width = 120.0;
    config.grid.n_points = 12001;
    config.alphas = vec![0.38, 0.46, 0.56];
    config.numerics.n_max = 4;
    config.numerics.s_max = Some(44.0 * config.period);
    std::fs::write(&conf, config.render()).unwrap();

    let mut payloads = Vec::new();
    for run in 0..2 {
        let out = dir.join(format!("run{run}"));
        let status = Command::new(bin)
            .args(["compare", "--config"])
            .arg(&conf)
            .arg("--out")
            .arg(&out)
            .args(["--seed", "7"])
            .status()
            .unwrap();
        assert!(status.success(), "compare run {run} failed");
        let mut files: Vec<_> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != "run_metadata.json")
            .collect();
        files.sort();
        assert!(!files.is_empty());
        let bytes: Vec<(String, Vec<u8>)> = files
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(p).unwrap(),
                )
            })
            .collect();
        payloads.push(bytes);
    }
    let identical = payloads[0] == payloads[1];
    report(
        11,
        "determinism",
        identical,
        format!("{} payload files byte-compared", payloads[0].len()),
    );
    std::fs::remove_dir_all(&dir).ok();
}
