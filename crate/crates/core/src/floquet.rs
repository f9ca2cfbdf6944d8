//! Second-order Floquet perturbation theory for the driven operator
//! `H + alpha W(x, t)`: temporal Fourier modes `W_n`, the function
//! `F(E_0 + i eps, 0)`, the width `Gamma` by two independent routes, and the
//! quasi-energy resonance ladder.
//!
//! Conventions fixed here:
//! - Fourier kernel `e^{-i n omega t}` with `W_n = T^{-1/2} \int_0^T
//!   e^{-i n omega t} W(., t) dt`.
//! - Each insertion of `W` between time-harmonic basis vectors carries a
//!   factor `T^{-1/2}`, so every term of `F` carries `1/T`.
//! - A channel `n >= 1` is open when `e_n = E_0 + n*omega` lies inside the
//!   continuum; the golden-rule sum runs over open channels only.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{solve_shifted, GridFunction, SpatialGrid};
use crate::spectral::{
    check_hypotheses, scattering_state, EpsilonLadder, ScatteringState, StaticModel,
    DEFAULT_DELTA_THR,
};
use crate::{Error, Result};

/// Default truncation of the harmonic sum.
pub const DEFAULT_N_MAX: usize = 8;
/// Numerical zero floor for "strictly positive width".
pub const GAMMA_POSITIVE_THRESHOLD: f64 = 1e-10;

/// Real spatial profile `w(x)` of one temporal harmonic.
#[derive(Clone, Debug, PartialEq)]
pub enum SpatialProfile {
    /// `amplitude * exp(-((x - center)/width)^2 / 2)`.
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    Samples(Vec<f64>),
}

impl SpatialProfile {
    pub fn is_analytic(&self) -> bool {
        !matches!(self, SpatialProfile::Samples(_))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SpatialProfile::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let u = (x - center) / width;
                amplitude * (-u * u / 2.0).exp()
            }
            SpatialProfile::Samples(_) => panic!("sampled profile has no analytic form"),
        }
    }

    pub fn sample(&self, grid: &SpatialGrid) -> Result<Vec<f64>> {
        match self {
            SpatialProfile::Samples(v) => {
                if v.len() != grid.n_points() {
                    return Err(Error::InvalidModel(format!(
                        "profile has {} samples but the grid has {} points",
                        v.len(),
                        grid.n_points()
                    )));
                }
                Ok(v.clone())
            }
            _ => Ok(grid.points().map(|x| self.eval(x)).collect()),
        }
    }
}

/// Time dependence of one separable term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmonicKind {
    Cos,
    Sin,
    /// Time-independent component (`m` is ignored).
    Static,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Harmonic {
    pub m: u32,
    pub kind: HarmonicKind,
    pub profile: SpatialProfile,
}

/// Periodic perturbation `W(x, t)`, either in analytic separable form
/// `sum_m w_m(x) cos/sin(m omega t)` or sampled on a uniform time grid
/// over one period.
#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    Separable(Vec<Harmonic>),
    /// `frames[j]` holds `W(., t_j)` for `t_j = j T / frames.len()`.
    Sampled { frames: Vec<Vec<f64>> },
}

impl Perturbation {
    pub fn monochromatic(profile: SpatialProfile) -> Self {
        Perturbation::Separable(vec![Harmonic {
            m: 1,
            kind: HarmonicKind::Cos,
            profile,
        }])
    }

    pub fn is_analytic(&self) -> bool {
        match self {
            Perturbation::Separable(hs) => hs.iter().all(|h| h.profile.is_analytic()),
            Perturbation::Sampled { .. } => false,
        }
    }

    /// Uniform bound `sup_x sup_t |W|` (computed over the given grid).
    pub fn sup_bound(&self, grid: &SpatialGrid) -> Result<f64> {
        match self {
            Perturbation::Separable(hs) => {
                let mut acc = vec![0.0; grid.n_points()];
                for h in hs {
                    for (a, w) in acc.iter_mut().zip(h.profile.sample(grid)?) {
                        *a += w.abs();
                    }
                }
                Ok(acc.into_iter().fold(0.0, f64::max))
            }
            Perturbation::Sampled { frames } => Ok(frames
                .iter()
                .flatten()
                .map(|v| v.abs())
                .fold(0.0, f64::max)),
        }
    }
}

/// Driven model: static operator plus periodic perturbation.
#[derive(Clone, Debug)]
pub struct DrivenModel {
    pub static_model: StaticModel,
    pub perturbation: Perturbation,
    pub period: f64,
    pub omega: f64,
    /// Nominal coupling used by propagation runs.
    pub alpha: f64,
}

impl DrivenModel {
    pub fn new(
        static_model: StaticModel,
        perturbation: Perturbation,
        period: f64,
        alpha: f64,
    ) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidModel("period must be positive".into()));
        }
        if let Perturbation::Sampled { frames } = &perturbation {
            if frames.is_empty()
                || frames
                    .iter()
                    .any(|f| f.len() != static_model.grid.n_points())
            {
                return Err(Error::InvalidModel(
                    "sampled perturbation frames must match the grid".into(),
                ));
            }
            if frames.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel(
                    "non-finite perturbation sample".into(),
                ));
            }
        }
        let omega = 2.0 * std::f64::consts::PI / period;
        Ok(Self {
            static_model,
            perturbation,
            period,
            omega,
            alpha,
        })
    }

    /// Rebuild on another box with the same spacing (analytic data only).
    pub fn on_grid(&self, grid: SpatialGrid) -> Result<Self> {
        if !self.perturbation.is_analytic() {
            return Err(Error::InvalidModel(
                "sampled perturbations cannot be re-gridded".into(),
            ));
        }
        Self::new(
            self.static_model.on_grid(grid)?,
            self.perturbation.clone(),
            self.period,
            self.alpha,
        )
    }
}

/// Complex spatial profile of the `n`-th temporal harmonic of `W`.
#[derive(Clone, Debug)]
pub struct FourierMode {
    pub n: i64,
    pub profile: GridFunction,
}

/// `W_n(x) = T^{-1/2} \int_0^T e^{-i n omega t} W(x, t) dt` for `|n| <= n_max`,
/// ascending in `n`. Exact for the separable form, trapezoidal (spectrally
/// accurate) for sampled `W`.
pub fn fourier_modes(model: &DrivenModel, n_max: usize) -> Result<Vec<FourierMode>> {
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let grid = model.static_model.grid;
    let t_period = model.period;
    let sqrt_t = t_period.sqrt();
    let mut modes: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
    let mut add = |n: i64, coeff: Complex64, w: &[f64]| {
        let entry = modes
            .entry(n)
            .or_insert_with(|| vec![Complex64::new(0.0, 0.0); grid.n_points()]);
        for (e, &wv) in entry.iter_mut().zip(w) {
            *e += coeff * wv;
        }
    };
    match &model.perturbation {
        Perturbation::Separable(harmonics) => {
            for harm in harmonics {
                let w = harm.profile.sample(&grid)?;
                match harm.kind {
                    HarmonicKind::Static => add(0, Complex64::new(sqrt_t, 0.0), &w),
                    HarmonicKind::Cos => {
                        let m = harm.m as i64;
                        if m == 0 {
                            add(0, Complex64::new(sqrt_t, 0.0), &w);
                        } else {
                            let c = Complex64::new(sqrt_t / 2.0, 0.0);
                            add(m, c, &w);
                            add(-m, c, &w);
                        }
                    }
                    HarmonicKind::Sin => {
                        let m = harm.m as i64;
                        if m == 0 {
                            continue;
                        }
                        add(m, Complex64::new(0.0, -sqrt_t / 2.0), &w);
                        add(-m, Complex64::new(0.0, sqrt_t / 2.0), &w);
                    }
                }
            }
        }
        Perturbation::Sampled { frames } => {
            let n_t = frames.len();
            if n_t < 4 * n_max {
                return Err(Error::Sampling(format!(
                    "sampled W has {n_t} frames; need at least 4*n_max = {}",
                    4 * n_max
                )));
            }
            let dt = t_period / n_t as f64;
            for n in -(n_max as i64)..=n_max as i64 {
                for (j, frame) in frames.iter().enumerate() {
                    let phase = -(n as f64) * model.omega * dt * j as f64;
                    let coeff = Complex64::from_polar(dt / sqrt_t, phase);
                    add(n, coeff, frame);
                }
            }
        }
    }
    let mut out: Vec<FourierMode> = (-(n_max as i64)..=n_max as i64)
        .map(|n| FourierMode {
            n,
            profile: GridFunction::new(
                grid,
                modes
                    .remove(&n)
                    .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); grid.n_points()]),
            ),
        })
        .collect();
    out.sort_by_key(|m| m.n);
    Ok(out)
}

fn mode_lookup(modes: &[FourierMode], n: i64) -> &FourierMode {
    modes
        .iter()
        .find(|m| m.n == n)
        .expect("mode index within truncation")
}

/// Per-channel piece of the width.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ChannelContribution {
    /// Open-channel harmonic index (`n >= 1`).
    pub n: i64,
    /// `e_n = E_0 + n*omega`.
    pub energy: f64,
    /// Contribution to `Gamma/2`, nonnegative.
    pub contribution: f64,
    pub ill_conditioned: bool,
}

/// Resonance parameters of the driven bound state. Routes that only produce
/// part of the data leave the remaining fields `None`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ResonanceData {
    pub e0: f64,
    pub omega: f64,
    /// First-order shift `c1`.
    pub c1: Option<f64>,
    /// `Re c2`; unavailable from the golden-rule route.
    pub c2_re: Option<f64>,
    /// `Im c2 = Gamma/2`.
    pub c2_im: f64,
    /// Width coefficient before `alpha^2`.
    pub gamma: f64,
    pub channels: Vec<ChannelContribution>,
    pub alpha: Option<f64>,
    /// `E_alpha = E_0 + alpha c1 - alpha^2 c2`.
    pub e_alpha_re: Option<f64>,
    pub e_alpha_im: Option<f64>,
    /// `E_alpha + n*omega` for `|n| <= n_max` (expansion route only).
    pub quasi_energy_ladder: Vec<(i64, f64)>,
    /// Estimate of the truncated harmonic tail of `F`.
    pub tail_bound: Option<f64>,
    pub warnings: Vec<String>,
}

impl ResonanceData {
    fn width_only(e0: f64, omega: f64, half_width: f64, channels: Vec<ChannelContribution>) -> Self {
        Self {
            e0,
            omega,
            c1: None,
            c2_re: None,
            c2_im: half_width,
            gamma: 2.0 * half_width,
            channels,
            alpha: None,
            e_alpha_re: None,
            e_alpha_im: None,
            quasi_energy_ladder: Vec::new(),
            tail_bound: None,
            warnings: Vec::new(),
        }
    }

    pub fn c2(&self) -> Complex64 {
        Complex64::new(self.c2_re.unwrap_or(0.0), self.c2_im)
    }
}

fn ensure_hypotheses(model: &DrivenModel, n_max: usize) -> Result<()> {
    let sigma = model.static_model.discrete_spectrum(DEFAULT_DELTA_THR)?;
    let report = check_hypotheses(
        &model.static_model.bound,
        &sigma,
        model.omega,
        n_max,
        DEFAULT_DELTA_THR,
    );
    if !report.pass {
        return Err(Error::Precondition(format!(
            "quasi-energy ladder hits the spectrum: {:?}",
            report.failures
        )));
    }
    Ok(())
}

/// One term of `F`: `T^{-1} <psi, (H - z)^{-1} psi>` with optional projection
/// of `phi0` out of both sides.
fn f_term(
    model: &DrivenModel,
    psi: &GridFunction,
    z: Complex64,
    project_out_bound: bool,
) -> Result<Complex64> {
    let phi0 = &model.static_model.bound.wavefunction;
    let mut rhs = psi.clone();
    if project_out_bound {
        let overlap = phi0.inner(&rhs);
        for (r, p) in rhs.values.iter_mut().zip(&phi0.values) {
            *r -= overlap * p;
        }
    }
    let mut u = solve_shifted(&model.static_model.hamiltonian, z, &rhs)?;
    if project_out_bound {
        let overlap = phi0.inner(&u);
        for (uv, p) in u.values.iter_mut().zip(&phi0.values) {
            *uv -= overlap * p;
        }
    }
    Ok(rhs.inner(&u) / model.period)
}

/// `F(E_0 + i eps, 0)` truncated at `|n| <= n_max`, plus a tail estimate.
///
/// `F = T^{-1} [ sum_{0<|n|<=n_max} <W_n phi0, (H + n omega - E_0 - i eps)^{-1}
/// W_n phi0> + <W_0 phi0, (1-pi0)(H - E_0 - i eps)^{-1}(1-pi0) W_0 phi0> ]`.
pub fn f_value(model: &DrivenModel, eps: f64, n_max: usize) -> Result<(Complex64, f64)> {
    f_value_with_offset(model, eps, n_max, 0)
}

/// Same sum with every harmonic label shifted by `n_0`; the result must not
/// depend on `n_0`.
pub fn f_value_with_offset(
    model: &DrivenModel,
    eps: f64,
    n_max: usize,
    n_0: i64,
) -> Result<(Complex64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let modes = fourier_modes(model, n_max)?;
    let e0 = model.static_model.bound.energy;
    let omega = model.omega;
    let phi0 = &model.static_model.bound.wavefunction;
    let mut total = Complex64::new(0.0, 0.0);
    // reference energy on the n_0-th ladder rung; independence of n_0 is a
    // consequence of the exact omega-periodicity of the ladder
    let e_ref = e0 + n_0 as f64 * omega;
    for n in (n_0 - n_max as i64)..=(n_0 + n_max as i64) {
        let rel = n - n_0;
        let psi = mode_lookup(&modes, rel).profile.mul_pointwise(phi0);
        let z = Complex64::new(e_ref - n as f64 * omega, eps);
        total += f_term(model, &psi, z, rel == 0)?;
    }
    let tail = {
        let hi = mode_lookup(&modes, n_max as i64).profile.mul_pointwise(phi0);
        let lo = mode_lookup(&modes, -(n_max as i64)).profile.mul_pointwise(phi0);
        (hi.norm_sq() + lo.norm_sq()) / (n_max as f64 * omega) / model.period
    };
    Ok((total, tail))
}

/// Width by limiting absorption: extrapolate `F(E_0 + i eps, 0)` down the
/// epsilon ladder; `Gamma = 2 Im c2`.
pub fn gamma_limiting(
    model: &DrivenModel,
    n_max: usize,
    ladder: &EpsilonLadder,
) -> Result<ResonanceData> {
    ensure_hypotheses(model, n_max)?;
    let modes = fourier_modes(model, n_max)?;
    let e0 = model.static_model.bound.energy;
    let omega = model.omega;
    let phi0 = &model.static_model.bound.wavefunction;

    let mut re = Vec::new();
    let mut im = Vec::new();
    let mut tail = 0.0;
    for &eps in &ladder.epsilons {
        let (f, t) = f_value(model, eps, n_max)?;
        re.push(f.re);
        im.push(f.im);
        tail = t;
    }
    let c2 = Complex64::new(
        extrapolate_ladder(&ladder.epsilons, &re),
        extrapolate_ladder(&ladder.epsilons, &im),
    );

    // per-channel extrapolated densities for open channels
    let mut channels = Vec::new();
    for m in 1..=n_max as i64 {
        let energy = e0 + m as f64 * omega;
        if energy <= DEFAULT_DELTA_THR {
            continue;
        }
        let psi = mode_lookup(&modes, -m).profile.mul_pointwise(phi0);
        // decoupled channel: nothing to extrapolate, and the box-spacing
        // precondition at high energies would reject a vacuous solve
        if psi.norm_sq() <= 1e-28 {
            channels.push(ChannelContribution {
                n: m,
                energy,
                contribution: 0.0,
                ill_conditioned: false,
            });
            continue;
        }
        let sample =
            crate::spectral::boundary_value(&model.static_model.hamiltonian, &psi, energy, ladder)?;
        channels.push(ChannelContribution {
            n: m,
            energy,
            contribution: sample.boundary.im.max(0.0) / model.period,
            ill_conditioned: sample.ill_conditioned,
        });
    }
    let mut data = ResonanceData::width_only(e0, omega, c2.im, channels);
    data.c2_re = Some(c2.re);
    data.tail_bound = Some(tail);
    Ok(data)
}

fn extrapolate_ladder(eps: &[f64], vals: &[f64]) -> f64 {
    crate::spectral::extrapolate_to_zero(eps, vals)
}

/// Golden-rule normalization: converts the delta-in-momentum coupling
/// integrals to the `Im F` convention (`pi` from the boundary value of the
/// resolvent, `1/T` from the two Howland insertions).
fn golden_rule_constant(period: f64) -> f64 {
    std::f64::consts::PI / period
}

fn open_channels(e0: f64, omega: f64, n_max: usize) -> Vec<(i64, f64)> {
    (1..=n_max as i64)
        .map(|m| (m, e0 + m as f64 * omega))
        .filter(|&(_, e)| e > DEFAULT_DELTA_THR)
        .collect()
}

/// Scattering states for the open channels, reusable across perturbations of
/// the same static model.
pub fn open_channel_states(
    model: &StaticModel,
    omega: f64,
    n_max: usize,
) -> Result<Vec<(i64, f64, ScatteringState, ScatteringState)>> {
    open_channels(model.bound.energy, omega, n_max)
        .into_iter()
        .map(|(m, e)| {
            let k = e.sqrt();
            let right = scattering_state(&model.hamiltonian, k)?;
            let left = scattering_state(&model.hamiltonian, -k)?;
            Ok((m, e, right, left))
        })
        .collect()
}

fn fgr_half_width(
    model: &DrivenModel,
    modes: &[FourierMode],
    states: &[(i64, f64, ScatteringState, ScatteringState)],
) -> Vec<ChannelContribution> {
    let phi0 = &model.static_model.bound.wavefunction;
    let c_norm = golden_rule_constant(model.period);
    states
        .iter()
        .map(|(m, energy, right, left)| {
            let psi = mode_lookup(modes, -*m).profile.mul_pointwise(phi0);
            let k = energy.sqrt();
            let i_plus = right.wavefunction.inner(&psi);
            let i_minus = left.wavefunction.inner(&psi);
            let contribution =
                c_norm * (i_plus.norm_sqr() + i_minus.norm_sqr()) / (2.0 * k);
            ChannelContribution {
                n: *m,
                energy: *energy,
                contribution,
                ill_conditioned: false,
            }
        })
        .collect()
}

/// Width by the golden-rule sum over open-channel scattering states.
pub fn gamma_fgr(model: &DrivenModel, n_max: usize) -> Result<ResonanceData> {
    ensure_hypotheses(model, n_max)?;
    let states = open_channel_states(&model.static_model, model.omega, n_max)?;
    let modes = fourier_modes(model, n_max)?;
    let channels = fgr_half_width(model, &modes, &states);
    let half: f64 = channels.iter().map(|c| c.contribution).sum();
    Ok(ResonanceData::width_only(
        model.static_model.bound.energy,
        model.omega,
        half,
        channels,
    ))
}

/// Second-order resonance expansion `E_alpha = E_0 + alpha c1 - alpha^2 c2`
/// and the quasi-energy ladder `E_alpha + n*omega`.
pub fn resonance_expansion(
    model: &DrivenModel,
    alpha: f64,
    n_max: usize,
    ladder: &EpsilonLadder,
) -> Result<ResonanceData> {
    let mut data = gamma_limiting(model, n_max, ladder)?;
    let phi0 = &model.static_model.bound.wavefunction;
    let modes = fourier_modes(model, n_max)?;
    let w0 = mode_lookup(&modes, 0).profile.mul_pointwise(phi0);
    let c1 = phi0.inner(&w0).re / model.period.sqrt();

    let sup = model.perturbation.sup_bound(&model.static_model.grid)?;
    if alpha.abs() * sup >= 0.5 * data.e0.abs() {
        data.warnings.push(format!(
            "perturbative regime: |alpha| * sup|W| = {} exceeds 0.5 |E0| = {}",
            alpha.abs() * sup,
            0.5 * data.e0.abs()
        ));
    }
    let c2 = data.c2();
    let e_alpha = Complex64::new(data.e0 + alpha * c1, 0.0) - alpha * alpha * c2;
    data.c1 = Some(c1);
    data.alpha = Some(alpha);
    data.e_alpha_re = Some(e_alpha.re);
    data.e_alpha_im = Some(e_alpha.im);
    data.quasi_energy_ladder = (-(n_max as i64)..=n_max as i64)
        .map(|n| (n, e_alpha.re + n as f64 * model.omega))
        .collect();
    Ok(data)
}

/// Seeded generator of random smooth perturbations for the genericity proxy.
#[derive(Clone, Debug)]
pub struct GaussianBumpGenerator {
    pub amplitude: (f64, f64),
    pub center: (f64, f64),
    pub width: (f64, f64),
    /// Harmonic index of the emitted `cos(m omega t)` drive.
    pub m: u32,
}

impl Default for GaussianBumpGenerator {
    fn default() -> Self {
        Self {
            amplitude: (0.2, 1.0),
            center: (-3.0, 3.0),
            width: (0.5, 2.0),
            m: 1,
        }
    }
}

impl GaussianBumpGenerator {
    pub fn generate(&self, rng: &mut ChaCha8Rng) -> Perturbation {
        let amplitude = rng.gen_range(self.amplitude.0..self.amplitude.1);
        let center = rng.gen_range(self.center.0..self.center.1);
        let width = rng.gen_range(self.width.0..self.width.1);
        Perturbation::Separable(vec![Harmonic {
            m: self.m,
            kind: HarmonicKind::Cos,
            profile: SpatialProfile::Gaussian {
                amplitude,
                center,
                width,
            },
        }])
    }
}

/// Per-trial outcome of the genericity sampler.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TrialDiagnostics {
    pub trial: usize,
    pub gamma: f64,
    pub channels: Vec<ChannelContribution>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GenericitySample {
    pub trials: usize,
    pub positive: usize,
    pub fraction: f64,
    pub threshold: f64,
    pub per_trial: Vec<TrialDiagnostics>,
}

/// Fraction of seeded random perturbations with `Gamma` above the numerical
/// zero floor. Deterministic given `seed`; each trial draws from its own
/// stream so trials are order-independent.
pub fn genericity_sample(
    model: &DrivenModel,
    n_max: usize,
    trials: usize,
    seed: u64,
    generator: &GaussianBumpGenerator,
) -> Result<GenericitySample> {
    if trials < 1 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    ensure_hypotheses(model, n_max)?;
    let states = open_channel_states(&model.static_model, model.omega, n_max)?;
    let mut per_trial = Vec::with_capacity(trials);
    let mut positive = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let perturbation = generator.generate(&mut rng);
        let trial_model = DrivenModel::new(
            model.static_model.clone(),
            perturbation,
            model.period,
            model.alpha,
        )?;
        let modes = fourier_modes(&trial_model, n_max)?;
        let channels = fgr_half_width(&trial_model, &modes, &states);
        let gamma: f64 = 2.0 * channels.iter().map(|c| c.contribution).sum::<f64>();
        if gamma > GAMMA_POSITIVE_THRESHOLD {
            positive += 1;
        }
        per_trial.push(TrialDiagnostics {
            trial,
            gamma,
            channels,
        });
    }
    Ok(GenericitySample {
        trials,
        positive,
        fraction: positive as f64 / trials as f64,
        threshold: GAMMA_POSITIVE_THRESHOLD,
        per_trial,
    })
}
