//! The alpha^2 law: fitted decay rates against the coupling strength.
//!
//! Runs the survival-decay fit for three couplings and regresses
//! `log Gamma_fit` on `log alpha`. The slope comes out at 2 and the
//! intercept reproduces `2 Im F`, which ties the direct dynamics to the
//! perturbative width without sharing any code path.
//!
//! Settings are trimmed for a desk-scale run (about a minute); the shipped
//! `configs/scaling.conf` holds the full-size version.

use floquet_width::config::benchmark_config;
use floquet_width::floquet::gamma_limiting;
use floquet_width::propagation::{scaling_study, PropagationConfig};
use floquet_width::spectral::EpsilonLadder;

fn main() -> floquet_width::Result<()> {
    let mut config = benchmark_config();
    config.grid.half_width = 120.0;
    config.grid.n_points = 12001;

    let im_f = gamma_limiting(&config.resolvent_model(0.0)?, 4, &EpsilonLadder::default())?.c2_im;
    let model = config.driven_model(0.0)?;
    let alphas = [0.38, 0.46, 0.56];
    let s_max = 44.0 * model.period;

    let report = scaling_study(
        &model,
        &alphas,
        s_max,
        8,
        PropagationConfig::default(),
        None,
        im_f,
    )?;
    println!("{:>7} {:>10} {:>14} {:>8}", "alpha", "s_max", "Gamma_fit", "ratio");
    for row in &report.rows {
        println!(
            "{:>7} {:>10.1} {:>14.6e} {:>8.4}",
            row.alpha, row.s_max, row.gamma_fit, row.ratio
        );
    }
    println!("\nlog-log slope       = {:.4} (expected 2)", report.slope);
    println!("exp(intercept)/2ImF = {:.4} (expected 1)", report.intercept_ratio);
    assert!((report.slope - 2.0).abs() < 0.1);
    Ok(())
}
