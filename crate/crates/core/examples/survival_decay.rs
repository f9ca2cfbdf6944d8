//! Exponential decay of the period-averaged survival amplitude.
//!
//! Propagates the bound state under the driven Hamiltonian from several
//! launch times within one period, averages the overlaps, and fits
//! `|A(s)| ~ a exp(-Gamma s / 2)`. The fitted rate is compared with the
//! perturbative prediction `Gamma = 2 alpha^2 Im F`; the fitted phase slope
//! recovers the bound-state energy.
//!
//! Takes a couple of minutes: the box must be big enough that the decay
//! products do not reflect back into the fit window.

use floquet_width::config::benchmark_config;
use floquet_width::floquet::gamma_limiting;
use floquet_width::propagation::{
    averaged_survival, default_window, fit_decay, PropagationConfig,
};
use floquet_width::spectral::EpsilonLadder;

fn main() -> floquet_width::Result<()> {
    let alpha = 0.46;
    let mut config = benchmark_config();
    config.grid.half_width = 290.0;
    config.grid.n_points = 29001;

    let im_f = gamma_limiting(&config.resolvent_model(alpha)?, 4, &EpsilonLadder::default())?.c2_im;
    let expected = 2.0 * alpha * alpha * im_f;
    println!("expected Gamma = 2 alpha^2 Im F = {expected:.6e}");

    let model = config.driven_model(alpha)?;
    let s_max = 111.0 * model.period;
    let series = averaged_survival(&model, alpha, s_max, 8, PropagationConfig::default(), None)?;
    println!(
        "propagated {} launches to s = {:.1}; valid horizon {:?}",
        PropagationConfig::default().steps_per_period / 4,
        s_max,
        series.valid_horizon
    );
    for &i in &[0, 40, 80, 120, 160] {
        println!("  s = {:>7.2}  |A| = {:.6}", series.s_values[i], series.amplitudes[i].norm());
    }

    let fit = fit_decay(&series, default_window(s_max))?;
    println!("\nGamma_fit = {:.6e} (ratio to prediction: {:.4})", fit.gamma_fit, fit.gamma_fit / expected);
    println!("E_fit     = {:.8} (E_0 = {:.8})", fit.e_fit, model.static_model.bound.energy);
    println!("residual  = {:.2e}", fit.residual);
    assert!((fit.gamma_fit / expected - 1.0).abs() < 0.15);
    Ok(())
}
