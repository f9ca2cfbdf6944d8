//! Thin command-line front end: configuration in, CSV/JSON artifacts out.
//! All numerics live in the library; this file only orchestrates.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use floquet_width::config::{benchmark_config, ExperimentConfig};
use floquet_width::floquet::{
    self, fourier_modes, gamma_fgr, gamma_limiting, genericity_sample, resonance_expansion,
    GaussianBumpGenerator,
};
use floquet_width::propagation::{
    averaged_survival, default_window, fit_decay, scaling_study, PropagationConfig,
};
use floquet_width::report::{
    render_survival_csv, render_table_csv, write_json, write_metadata, ResultRecord,
};
use floquet_width::spectral::{boundary_value, EpsilonLadder};

#[derive(Parser)]
#[command(name = "floquet-width", version, about = "Resonance widths of a periodically driven bound state")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration file (defaults to the built-in benchmark).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: config output.dir, else `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Promote numerical-quality warnings to errors (exit code 2).
    #[arg(long, global = true)]
    strict: bool,

    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker thread count (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Bound states of the static operator.
    BoundStates,
    /// Temporal Fourier modes of the perturbation.
    Modes,
    /// Resolvent boundary values at the open-channel energies.
    Resolvent,
    /// Width by the golden-rule sum over scattering states.
    Fgr,
    /// Width by limiting absorption (epsilon-ladder extrapolation).
    Limiting,
    /// Second-order resonance expansion and quasi-energy ladder.
    Expand,
    /// Averaged survival amplitude with decay fits, per coupling.
    Propagate,
    /// Full pipeline: golden rule vs limiting absorption vs fitted decay.
    Compare,
    /// Seeded random-perturbation genericity sample.
    GenericSample,
    /// Fast internal consistency checks.
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::BoundStates => "bound-states",
            Command::Modes => "modes",
            Command::Resolvent => "resolvent",
            Command::Fgr => "fgr",
            Command::Limiting => "limiting",
            Command::Expand => "expand",
            Command::Propagate => "propagate",
            Command::Compare => "compare",
            Command::GenericSample => "generic-sample",
            Command::Selftest => "selftest",
        }
    }
}

struct Ctx {
    config: ExperimentConfig,
    digest: String,
    out_dir: PathBuf,
    seed: u64,
    warnings: Vec<String>,
}

impl Ctx {
    fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    fn ladder(&self) -> floquet_width::Result<EpsilonLadder> {
        EpsilonLadder::new(self.config.numerics.epsilon_ladder.clone())
    }

    fn prop_config(&self) -> PropagationConfig {
        PropagationConfig {
            steps_per_period: self.config.numerics.steps_per_period,
            ..Default::default()
        }
    }

    fn write_record(&self, name: &str, outputs: serde_json::Value) -> floquet_width::Result<()> {
        let record = ResultRecord::new(self.digest.clone(), name, self.seed).with_outputs(outputs);
        write_json(self.out_dir.join(format!("{name}.json")), &record)
    }

    fn write_csv(&self, name: &str, text: String) -> floquet_width::Result<()> {
        std::fs::write(self.out_dir.join(name), text)?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let config = match &cli.config {
        Some(path) => match ExperimentConfig::parse_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        None => benchmark_config(),
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| config.output_dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return ExitCode::from(1);
    }
    let seed = cli.seed.unwrap_or(config.numerics.seed);
    let digest = config.digest();
    let mut ctx = Ctx {
        config,
        digest,
        out_dir,
        seed,
        warnings: Vec::new(),
    };

    match run(cli.command, &mut ctx) {
        Ok(()) => {
            let _ = write_metadata(&ctx.out_dir, cli.command.name(), &ctx.digest);
            if cli.strict && !ctx.warnings.is_empty() {
                eprintln!(
                    "error: {} quality warning(s) under --strict",
                    ctx.warnings.len()
                );
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, ctx: &mut Ctx) -> floquet_width::Result<()> {
    match command {
        Command::BoundStates => bound_states_cmd(ctx),
        Command::Modes => modes_cmd(ctx),
        Command::Resolvent => resolvent_cmd(ctx),
        Command::Fgr => fgr_cmd(ctx),
        Command::Limiting => limiting_cmd(ctx),
        Command::Expand => expand_cmd(ctx),
        Command::Propagate => propagate_cmd(ctx),
        Command::Compare => compare_cmd(ctx),
        Command::GenericSample => generic_sample_cmd(ctx),
        Command::Selftest => selftest_cmd(ctx),
    }
}

fn first_alpha(ctx: &Ctx) -> f64 {
    ctx.config.alphas.first().copied().unwrap_or(0.0)
}

fn bound_states_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.driven_model(first_alpha(ctx))?;
    let states = floquet_width::spectral::bound_states(
        &model.static_model.hamiltonian,
        floquet_width::spectral::DEFAULT_THRESHOLD_MARGIN,
    )?;
    let rows: Vec<Vec<f64>> = states
        .iter()
        .map(|s| vec![s.index as f64, s.energy, s.boundary_amplitude])
        .collect();
    ctx.write_csv(
        "bound_states.csv",
        render_table_csv(&["index", "energy", "boundary_amplitude"], &rows, &ctx.digest),
    )?;
    for s in &states {
        if s.contaminated {
            ctx.warn(format!(
                "bound state {} is box-contaminated (boundary amplitude {:.2e})",
                s.index, s.boundary_amplitude
            ));
        }
        println!("E_{} = {:.12}", s.index, s.energy);
    }
    ctx.write_record(
        "bound_states",
        json!({
            "energies": states.iter().map(|s| s.energy).collect::<Vec<_>>(),
            "boundary_amplitudes": states.iter().map(|s| s.boundary_amplitude).collect::<Vec<_>>(),
        }),
    )
}

fn modes_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.driven_model(first_alpha(ctx))?;
    let modes = fourier_modes(&model, ctx.config.numerics.n_max)?;
    let rows: Vec<Vec<f64>> = modes
        .iter()
        .map(|m| {
            let norm = m.profile.norm();
            let max_abs = m
                .profile
                .values
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            vec![m.n as f64, norm, max_abs]
        })
        .collect();
    ctx.write_csv(
        "modes.csv",
        render_table_csv(&["n", "l2_norm", "max_abs"], &rows, &ctx.digest),
    )?;
    for r in &rows {
        println!("W_{:>3}: |W_n| = {:.6e}", r[0] as i64, r[1]);
    }
    ctx.write_record(
        "modes",
        json!({
            "n": modes.iter().map(|m| m.n).collect::<Vec<_>>(),
            "l2_norm": rows.iter().map(|r| r[1]).collect::<Vec<_>>(),
        }),
    )
}

fn resolvent_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.resolvent_model(first_alpha(ctx))?;
    let ladder = ctx.ladder()?;
    let modes = fourier_modes(&model, ctx.config.numerics.n_max)?;
    let phi0 = &model.static_model.bound.wavefunction;
    let e0 = model.static_model.bound.energy;
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for m in 1..=ctx.config.numerics.n_max as i64 {
        let energy = e0 + m as f64 * model.omega;
        if energy <= ctx.config.numerics.delta_thr {
            continue;
        }
        let mode = modes
            .iter()
            .find(|md| md.n == -m)
            .expect("mode list covers |n| <= n_max");
        let psi = mode.profile.mul_pointwise(phi0);
        if psi.norm_sq() <= 1e-28 {
            // channel decoupled: no boundary value to extrapolate
            continue;
        }
        let sample = boundary_value(&model.static_model.hamiltonian, &psi, energy, &ladder)?;
        if sample.ill_conditioned {
            ctx.warn(format!(
                "ill-conditioned extrapolation at channel n = {m} (lambda = {energy})"
            ));
        }
        println!(
            "channel n = {m}: lambda = {energy:.6}, density = {:.6e}",
            sample.density
        );
        rows.push(vec![
            m as f64,
            energy,
            sample.density,
            sample.boundary.re,
            sample.boundary.im,
            if sample.ill_conditioned { 1.0 } else { 0.0 },
        ]);
        samples.push(json!({
            "n": m,
            "lambda": energy,
            "density": sample.density,
            "boundary_re": sample.boundary.re,
            "boundary_im": sample.boundary.im,
            "epsilon_ladder": sample.epsilon_ladder,
            "ill_conditioned": sample.ill_conditioned,
        }));
    }
    ctx.write_csv(
        "resolvent.csv",
        render_table_csv(
            &["n", "lambda", "density", "boundary_re", "boundary_im", "ill_conditioned"],
            &rows,
            &ctx.digest,
        ),
    )?;
    ctx.write_record("resolvent", json!({ "channels": samples }))
}

fn channel_rows(data: &floquet::ResonanceData) -> Vec<Vec<f64>> {
    data.channels
        .iter()
        .map(|c| vec![c.n as f64, c.energy, c.contribution])
        .collect()
}

fn fgr_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.driven_model(first_alpha(ctx))?;
    let data = gamma_fgr(&model, ctx.config.numerics.n_max)?;
    println!("Gamma (golden rule) = {:.12e}", data.gamma);
    ctx.write_csv(
        "fgr_channels.csv",
        render_table_csv(&["n", "energy", "contribution"], &channel_rows(&data), &ctx.digest),
    )?;
    ctx.write_record("fgr", serde_json::to_value(&data).unwrap())
}

fn limiting_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.resolvent_model(first_alpha(ctx))?;
    let data = gamma_limiting(&model, ctx.config.numerics.n_max, &ctx.ladder()?)?;
    for w in &data.warnings {
        ctx.warn(w.clone());
    }
    println!("Gamma (limiting absorption) = {:.12e}", data.gamma);
    ctx.write_csv(
        "limiting_channels.csv",
        render_table_csv(&["n", "energy", "contribution"], &channel_rows(&data), &ctx.digest),
    )?;
    ctx.write_record("limiting", serde_json::to_value(&data).unwrap())
}

fn expand_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let ladder = ctx.ladder()?;
    let mut records = Vec::new();
    let alphas = ctx.config.alphas.clone();
    for &alpha in &alphas {
        let model = ctx.config.resolvent_model(alpha)?;
        let data = resonance_expansion(&model, alpha, ctx.config.numerics.n_max, &ladder)?;
        for w in &data.warnings {
            ctx.warn(w.clone());
        }
        println!(
            "alpha = {alpha}: E_alpha = {:.9} - {:.3e} i",
            data.e_alpha_re.unwrap_or(f64::NAN),
            -data.e_alpha_im.unwrap_or(f64::NAN)
        );
        records.push(serde_json::to_value(&data).unwrap());
    }
    ctx.write_record("expand", json!({ "expansions": records }))
}

/// Pick a horizon: the configured one, else enough lifetimes of the expected
/// decay, in whole periods.
fn auto_s_max(ctx: &Ctx, gamma_coefficient: f64, alpha: f64) -> f64 {
    let period = ctx.config.period;
    if let Some(s) = ctx.config.numerics.s_max {
        return s;
    }
    let gamma = gamma_coefficient * alpha * alpha;
    let periods = if gamma > 0.0 {
        (2.0 / gamma / period).floor().clamp(8.0, 512.0)
    } else {
        32.0
    };
    periods * period
}

fn propagate_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.driven_model(first_alpha(ctx))?;
    let gamma_coefficient = gamma_fgr(&model, ctx.config.numerics.n_max)?.gamma;
    let mut outputs = Vec::new();
    let alphas = ctx.config.alphas.clone();
    for (i, &alpha) in alphas.iter().enumerate() {
        let s_max = auto_s_max(ctx, gamma_coefficient, alpha);
        let mut series = averaged_survival(
            &model,
            alpha,
            s_max,
            ctx.config.numerics.stride,
            ctx.prop_config(),
            ctx.config.numerics.n_t0,
        )?;
        match fit_decay(&series, default_window(s_max)) {
            Ok(fit) => {
                for w in &fit.warnings {
                    ctx.warn(format!("alpha = {alpha}: {w}"));
                }
                println!(
                    "alpha = {alpha}: Gamma_fit = {:.6e}, E_fit = {:.9}",
                    fit.gamma_fit, fit.e_fit
                );
                series.fit = Some(fit);
            }
            Err(e) => ctx.warn(format!("alpha = {alpha}: fit skipped: {e}")),
        }
        ctx.write_csv(
            &format!("survival_{i}.csv"),
            render_survival_csv(&series, &ctx.digest),
        )?;
        outputs.push(floquet_width::report::survival_to_json(&series));
    }
    ctx.write_record("propagate", json!({ "series": outputs }))
}

fn compare_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let n_max = ctx.config.numerics.n_max;
    let model = ctx.config.driven_model(first_alpha(ctx))?;
    let fgr = gamma_fgr(&model, n_max)?;
    let limiting = gamma_limiting(&ctx.config.resolvent_model(first_alpha(ctx))?, n_max, &ctx.ladder()?)?;
    let route_ratio = fgr.gamma / limiting.gamma.max(1e-300);
    println!("Gamma_fgr      = {:.9e}", fgr.gamma);
    println!("Gamma_limiting = {:.9e}", limiting.gamma);
    println!("route ratio    = {route_ratio:.6}");
    if (route_ratio - 1.0).abs() > 0.01 {
        ctx.warn(format!(
            "golden-rule and limiting-absorption widths disagree by {:.2}%",
            (route_ratio - 1.0).abs() * 100.0
        ));
    }

    let im_f = limiting.c2_im;
    let s_max = auto_s_max(ctx, limiting.gamma, first_alpha(ctx));
    let report = scaling_study(
        &model,
        &ctx.config.alphas,
        s_max,
        ctx.config.numerics.stride,
        ctx.prop_config(),
        ctx.config.numerics.n_t0,
        im_f,
    );
    let scaling = match report {
        Ok(r) => {
            let mut rows = Vec::new();
            for row in &r.rows {
                println!(
                    "alpha = {}: Gamma_fit = {:.6e}, ratio = {:.4}",
                    row.alpha, row.gamma_fit, row.ratio
                );
                if !(0.85..=1.15).contains(&row.ratio) {
                    ctx.warn(format!(
                        "alpha = {}: Gamma_fit/(2 alpha^2 Im F) = {:.4} outside [0.85, 1.15]",
                        row.alpha, row.ratio
                    ));
                }
                rows.push(vec![row.alpha, row.s_max, row.gamma_fit, row.e_fit, row.ratio]);
            }
            println!("log-log slope  = {:.4}", r.slope);
            if (r.slope - 2.0).abs() > 0.1 {
                ctx.warn(format!("log-log slope {:.4} deviates from 2 by > 0.1", r.slope));
            }
            ctx.write_csv(
                "scaling.csv",
                render_table_csv(&["alpha", "s_max", "gamma_fit", "e_fit", "ratio"], &rows, &ctx.digest),
            )?;
            Some(r)
        }
        Err(e) if ctx.config.alphas.len() < 3 => {
            ctx.warn(format!("scaling study skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };

    ctx.write_record(
        "compare",
        json!({
            "gamma_fgr": fgr.gamma,
            "gamma_limiting": limiting.gamma,
            "route_ratio": route_ratio,
            "im_f": im_f,
            "fgr": serde_json::to_value(&fgr).unwrap(),
            "limiting": serde_json::to_value(&limiting).unwrap(),
            "scaling": scaling,
        }),
    )
}

fn generic_sample_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let model = ctx.config.driven_model(first_alpha(ctx))?;
    let sample = genericity_sample(
        &model,
        ctx.config.numerics.n_max,
        ctx.config.numerics.n_trials,
        ctx.seed,
        &GaussianBumpGenerator::default(),
    )?;
    println!(
        "{}/{} trials with Gamma > {:.1e}",
        sample.positive, sample.trials, sample.threshold
    );
    let rows: Vec<Vec<f64>> = sample
        .per_trial
        .iter()
        .map(|t| vec![t.trial as f64, t.gamma])
        .collect();
    ctx.write_csv(
        "generic_sample.csv",
        render_table_csv(&["trial", "gamma"], &rows, &ctx.digest),
    )?;
    ctx.write_record("generic_sample", serde_json::to_value(&sample).unwrap())
}

fn selftest_cmd(ctx: &mut Ctx) -> floquet_width::Result<()> {
    let mut failures = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let cfg = benchmark_config();
    let model = cfg.driven_model(0.1)?;
    check(
        "bound-state energy near -1",
        (model.static_model.bound.energy + 1.0).abs() < 1e-3,
    );

    let fgr = gamma_fgr(&model, 4)?;
    check("golden-rule width positive", fgr.gamma > 1e-10);

    let big = cfg.resolvent_model(0.1)?;
    let limiting = gamma_limiting(&big, 4, &EpsilonLadder::default())?;
    let ratio = fgr.gamma / limiting.gamma;
    check(
        "route agreement within 1%",
        (ratio - 1.0).abs() < 0.01,
    );

    let series = averaged_survival(&model, 0.0, 4.0 * model.period, 8, ctx.prop_config(), Some(4))?;
    check(
        "survival normalization",
        (series.amplitudes[0].norm() - 1.0).abs() < 1e-12,
    );
    check(
        "undriven survival stays unimodular",
        series.amplitudes.iter().all(|a| (a.norm() - 1.0).abs() < 1e-9),
    );

    if failures > 0 {
        return Err(floquet_width::Error::Precondition(format!(
            "{failures} selftest check(s) failed"
        )));
    }
    Ok(())
}
