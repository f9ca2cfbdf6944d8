//! Temporal Fourier modes of a periodic perturbation.
//!
//! `W_n(x) = T^{-1/2} \int_0^T e^{-i n omega t} W(x, t) dt`. A pure cosine
//! drive has exactly two nonzero modes (n = +-1, each half the profile times
//! sqrt(T)); adding a static component populates n = 0. The second half
//! re-derives the same modes from time samples of `W` to show that the
//! trapezoid rule on the period grid is exact for band-limited drives.

use floquet_width::config::benchmark_config;
use floquet_width::floquet::{fourier_modes, DrivenModel, Perturbation};

fn print_modes(label: &str, model: &DrivenModel) -> floquet_width::Result<()> {
    println!("{label}");
    for mode in fourier_modes(model, 3)? {
        println!("  n = {:>2}: |W_n|_2 = {:.12}", mode.n, mode.profile.norm());
    }
    Ok(())
}

fn main() -> floquet_width::Result<()> {
    let config = benchmark_config();
    let model = config.driven_model(0.1)?;
    print_modes("analytic cos drive:", &model)?;

    // sample W(x, t) on a uniform time grid and recover the same modes
    let grid = model.static_model.grid;
    let n_t = 64;
    let frames: Vec<Vec<f64>> = (0..n_t)
        .map(|j| {
            let t = j as f64 * model.period / n_t as f64;
            grid.points()
                .map(|x| (-x * x / 2.0).exp() * (model.omega * t).cos())
                .collect()
        })
        .collect();
    let sampled = DrivenModel::new(
        model.static_model.clone(),
        Perturbation::Sampled { frames },
        model.period,
        0.1,
    )?;
    print_modes("same drive from 64 time samples:", &sampled)?;

    let a = fourier_modes(&model, 3)?;
    let b = fourier_modes(&sampled, 3)?;
    let max_diff = a
        .iter()
        .zip(&b)
        .flat_map(|(x, y)| x.profile.values.iter().zip(&y.profile.values))
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max);
    println!("max pointwise difference: {max_diff:.3e}");
    Ok(())
}
