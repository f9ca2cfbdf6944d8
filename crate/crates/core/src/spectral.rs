//! Spectral inputs of the static operator `H`: bound states, generalized
//! (scattering) eigenfunctions, and boundary values of resolvent matrix
//! elements obtained by limiting absorption.
//!
//! Scattering states use the delta-in-momentum convention: `phi(k, x)` is the
//! traveling solution with unit incident amplitude scaled by `(2*pi)^(-1/2)`,
//! incident from the left for `k > 0` and from the right for `k < 0`. With
//! this convention the spectral density of any `psi` at `lambda > 0` equals
//! `(1/(2*sqrt(lambda))) * (|<phi(k), psi>|^2 + |<phi(-k), psi>|^2)` with no
//! extra constant, which is what pins the golden-rule normalization.

use num_complex::Complex64;

use crate::grid::{
    build_hamiltonian, eigenpairs_below, solve_shifted, DiscreteHamiltonian, GridFunction,
    Potential, SpatialGrid,
};
use crate::{Error, Result};

/// Default separation from thresholds and from the discrete spectrum.
pub const DEFAULT_DELTA_THR: f64 = 1e-2;
/// Default margin below zero for calling an eigenvalue a bound state.
pub const DEFAULT_THRESHOLD_MARGIN: f64 = 1e-2;
/// Boundary amplitude above which a box eigenvector is flagged as
/// contaminated by the Dirichlet truncation.
pub const BOX_CONTAMINATION_TOL: f64 = 1e-6;
/// Points per side inspected by the contamination check.
const BOUNDARY_WINDOW: usize = 8;

/// Discrete eigenstate of `H` below the continuum.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub energy: f64,
    /// Real-valued, h-normalized.
    pub wavefunction: GridFunction,
    pub index: usize,
    pub boundary_amplitude: f64,
    /// Set when the boundary amplitude exceeds [`BOX_CONTAMINATION_TOL`].
    pub contaminated: bool,
}

/// Eigenpairs with eigenvalue below `-threshold_margin`, ascending.
pub fn bound_states(
    hamiltonian: &DiscreteHamiltonian,
    threshold_margin: f64,
) -> Result<Vec<BoundState>> {
    if !(threshold_margin > 0.0) {
        return Err(Error::Precondition(
            "threshold_margin must be positive".into(),
        ));
    }
    let pairs = eigenpairs_below(hamiltonian, -threshold_margin)?;
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(index, (energy, mut wavefunction))| {
            // fix the overall sign: largest-modulus component positive
            let lead = wavefunction
                .values
                .iter()
                .cloned()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or_default();
            if lead.re < 0.0 {
                for v in &mut wavefunction.values {
                    *v = -*v;
                }
            }
            let boundary_amplitude = wavefunction.boundary_amplitude(BOUNDARY_WINDOW);
            BoundState {
                energy,
                wavefunction,
                index,
                boundary_amplitude,
                contaminated: boundary_amplitude >= BOX_CONTAMINATION_TOL,
            }
        })
        .collect())
}

/// Static operator bundle: potential, its discretization, and the bound state
/// the driven analysis perturbs.
#[derive(Clone, Debug)]
pub struct StaticModel {
    pub potential: Potential,
    pub grid: SpatialGrid,
    pub hamiltonian: DiscreteHamiltonian,
    pub bound: BoundState,
}

impl StaticModel {
    /// Discretize `potential` and pick the lowest bound state.
    pub fn new(potential: Potential, grid: SpatialGrid) -> Result<Self> {
        let hamiltonian = build_hamiltonian(&potential, &grid)?;
        let states = bound_states(&hamiltonian, DEFAULT_THRESHOLD_MARGIN)?;
        let bound = states.into_iter().next().ok_or_else(|| {
            Error::InvalidModel("potential has no bound state below the margin".into())
        })?;
        Ok(Self {
            potential,
            grid,
            hamiltonian,
            bound,
        })
    }

    /// Rebuild the model on a different box with the same analytic potential.
    pub fn on_grid(&self, grid: SpatialGrid) -> Result<Self> {
        if !self.potential.is_analytic() {
            return Err(Error::InvalidModel(
                "sampled potentials cannot be re-gridded".into(),
            ));
        }
        Self::new(self.potential.clone(), grid)
    }

    /// Discrete eigenvalues below `-margin`.
    pub fn discrete_spectrum(&self, margin: f64) -> Result<Vec<f64>> {
        Ok(bound_states(&self.hamiltonian, margin)?
            .into_iter()
            .map(|s| s.energy)
            .collect())
    }
}

/// One offending quasi-energy in a hypothesis check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HypothesisFailure {
    pub n: i64,
    pub mu: f64,
    /// Distance to the nearest point of `sigma_d(H) U {0}`.
    pub distance: f64,
}

/// Report of the non-resonance hypotheses on `E_0 + n*omega`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HypothesisReport {
    pub pass: bool,
    pub failures: Vec<HypothesisFailure>,
    /// `|E_0| < 1` as required for the perturbative window.
    pub e0_in_unit_window: bool,
}

/// Verify `|E_0 + n*omega| > delta_thr` and
/// `dist(E_0 + n*omega, sigma_d) > delta_thr` for `1 <= n <= n_max`.
pub fn check_hypotheses(
    state: &BoundState,
    discrete_spectrum: &[f64],
    omega: f64,
    n_max: usize,
    delta_thr: f64,
) -> HypothesisReport {
    assert!(omega > 0.0, "omega must be positive");
    let mut failures = Vec::new();
    for n in 1..=n_max as i64 {
        let mu = state.energy + n as f64 * omega;
        let dist_zero = mu.abs();
        let dist_disc = discrete_spectrum
            .iter()
            .map(|e| (mu - e).abs())
            .fold(f64::INFINITY, f64::min);
        let distance = dist_zero.min(dist_disc);
        if distance <= delta_thr {
            failures.push(HypothesisFailure { n, mu, distance });
        }
    }
    HypothesisReport {
        pass: failures.is_empty(),
        failures,
        e0_in_unit_window: state.energy.abs() < 1.0,
    }
}

/// Generalized eigenfunction of `H` at energy `k^2`, delta-in-momentum
/// normalized traveling wave (incident from the left for `k > 0`).
#[derive(Clone, Debug)]
pub struct ScatteringState {
    pub k: f64,
    pub energy: f64,
    pub wavefunction: GridFunction,
    /// Transmission amplitude of the underlying matching problem.
    pub transmission: Complex64,
}

/// Lattice momentum solving the discrete dispersion
/// `(2/h^2)(1 - cos(q h)) = k^2`; using it makes the plane-wave seeds exact
/// solutions of the discrete stationary equation.
fn lattice_momentum(k: f64, h: f64) -> Result<f64> {
    let c = 1.0 - k * k * h * h / 2.0;
    if c <= -1.0 {
        return Err(Error::Precondition(format!(
            "energy {} is outside the discrete band",
            k * k
        )));
    }
    Ok(c.acos() / h)
}

/// Build the scattering state by integrating the stationary three-term
/// recurrence from the transmitted side and matching incident/reflected
/// plane waves at the opposite edge.
pub fn scattering_state(hamiltonian: &DiscreteHamiltonian, k: f64) -> Result<ScatteringState> {
    if k == 0.0 {
        return Err(Error::Precondition("k must be nonzero".into()));
    }
    let grid = hamiltonian.grid;
    let h = grid.h();
    let n = grid.n_points();
    let q = lattice_momentum(k.abs(), h)?;
    let qs = q * k.signum();
    let v = &hamiltonian.potential_samples;
    let k2 = k * k;

    let plane = |j: usize| Complex64::from_polar(1.0, qs * grid.point(j));
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    if k > 0.0 {
        // transmitted wave on the right, integrate leftward
        psi[n - 1] = plane(n - 1);
        psi[n - 2] = plane(n - 2);
        for j in (1..n - 1).rev() {
            psi[j - 1] = (2.0 + h * h * (v[j] - k2)) * psi[j] - psi[j + 1];
        }
    } else {
        psi[0] = plane(0);
        psi[1] = plane(1);
        for j in 1..n - 1 {
            psi[j + 1] = (2.0 + h * h * (v[j] - k2)) * psi[j] - psi[j - 1];
        }
    }
    // decompose psi = A e^{i qs x} + B e^{-i qs x} at the incidence edge
    let (j0, j1) = if k > 0.0 { (0, 1) } else { (n - 1, n - 2) };
    let e0 = plane(j0);
    let e1 = plane(j1);
    let det = e0 * e1.conj() - e1 * e0.conj();
    let incident = (psi[j0] * e1.conj() - psi[j1] * e0.conj()) / det;
    if incident.norm() < 1e-12 {
        return Err(Error::DegenerateEnergy { k });
    }
    let scale = Complex64::new(1.0 / (2.0 * std::f64::consts::PI).sqrt(), 0.0) / incident;
    for p in &mut psi {
        *p *= scale;
    }
    Ok(ScatteringState {
        k,
        energy: k2,
        wavefunction: GridFunction::new(grid, psi),
        transmission: scale * (2.0 * std::f64::consts::PI).sqrt(),
    })
}

/// Discrete Wronskian `u_{j+1} v_j - u_j v_{j+1}` along the grid; constant
/// for two solutions of the same stationary recurrence.
pub fn wronskian(u: &GridFunction, v: &GridFunction) -> Vec<Complex64> {
    u.values
        .windows(2)
        .zip(v.values.windows(2))
        .map(|(uw, vw)| uw[1] * vw[0] - uw[0] * vw[1])
        .collect()
}

/// Max relative deviation of the Wronskian from its mean.
pub fn wronskian_constancy(u: &GridFunction, v: &GridFunction) -> f64 {
    let w = wronskian(u, v);
    let mean = w.iter().sum::<Complex64>() / w.len() as f64;
    if mean.norm() == 0.0 {
        return f64::INFINITY;
    }
    w.iter()
        .map(|wj| (wj - mean).norm())
        .fold(0.0, f64::max)
        / mean.norm()
}

/// `<psi, (H - lambda - i eps)^{-1} psi>`; its imaginary part is
/// `eps * ||(H - lambda - i eps)^{-1} psi||^2 >= 0`.
pub fn resolvent_element(
    hamiltonian: &DiscreteHamiltonian,
    psi: &GridFunction,
    lambda: f64,
    eps: f64,
) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let u = solve_shifted(hamiltonian, Complex64::new(lambda, eps), psi)?;
    Ok(psi.inner(&u))
}

/// Strictly decreasing ladder of regularization widths for the
/// limiting-absorption extrapolation.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonLadder {
    pub epsilons: Vec<f64>,
}

impl Default for EpsilonLadder {
    fn default() -> Self {
        Self {
            epsilons: vec![1e-1, 5e-2, 2.5e-2, 1.25e-2],
        }
    }
}

impl EpsilonLadder {
    pub fn new(epsilons: Vec<f64>) -> Result<Self> {
        if epsilons.is_empty() || epsilons.windows(2).any(|w| w[1] >= w[0]) || epsilons.iter().any(|&e| e <= 0.0)
        {
            return Err(Error::Precondition(
                "epsilon ladder must be strictly decreasing and positive".into(),
            ));
        }
        Ok(Self { epsilons })
    }

    pub fn min(&self) -> f64 {
        *self.epsilons.last().unwrap()
    }
}

/// Boundary value of a resolvent matrix element with its diagnostics.
#[derive(Clone, Debug)]
pub struct SpectralMeasureSample {
    pub lambda: f64,
    /// `Im F / pi >= 0` after extrapolation.
    pub density: f64,
    /// Extrapolated complex boundary value `<psi, (H - lambda - i0)^{-1} psi>`.
    pub boundary: Complex64,
    /// `(eps, Im value)` pairs used for the extrapolation.
    pub epsilon_ladder: Vec<(f64, f64)>,
    /// Non-monotone extrapolation residuals or a negative limit.
    pub ill_conditioned: bool,
}

/// Least-squares polynomial extrapolation to zero (degree <= 3).
pub(crate) fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let deg = xs.len().saturating_sub(1).min(3);
    // normal equations for a degree-`deg` fit
    let m = deg + 1;
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut pow = vec![1.0; 2 * m - 1];
        for p in 1..2 * m - 1 {
            pow[p] = pow[p - 1] * x;
        }
        for i in 0..m {
            for j in 0..m {
                a[i][j] += pow[i + j];
            }
            b[i] += pow[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
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
    b[0] // value at x = 0
}

/// Continuum level spacing of the boxed operator near energy `lambda`.
pub fn box_level_spacing(grid: &SpatialGrid, lambda: f64) -> f64 {
    2.0 * lambda.max(0.0).sqrt() * std::f64::consts::PI / (grid.x_max() - grid.x_min())
}

/// Polynomial-in-eps extrapolation of [`resolvent_element`] to `eps -> 0+`.
///
/// For `lambda` inside the continuum the smallest ladder entry must exceed
/// twice the box level spacing, otherwise the extrapolation sees individual
/// box levels instead of the smoothed density.
pub fn boundary_value(
    hamiltonian: &DiscreteHamiltonian,
    psi: &GridFunction,
    lambda: f64,
    ladder: &EpsilonLadder,
) -> Result<SpectralMeasureSample> {
    let spacing = box_level_spacing(&hamiltonian.grid, lambda);
    if lambda > 0.0 && ladder.min() <= 2.0 * spacing {
        return Err(Error::Precondition(format!(
            "eps_min {} must exceed twice the box level spacing {spacing} at lambda {lambda}; \
             enlarge the box or raise the ladder",
            ladder.min()
        )));
    }
    let mut re = Vec::with_capacity(ladder.epsilons.len());
    let mut im = Vec::with_capacity(ladder.epsilons.len());
    let mut pairs = Vec::with_capacity(ladder.epsilons.len());
    for &eps in &ladder.epsilons {
        let v = resolvent_element(hamiltonian, psi, lambda, eps)?;
        re.push(v.re);
        im.push(v.im);
        pairs.push((eps, v.im));
    }
    let re0 = extrapolate_to_zero(&ladder.epsilons, &re);
    let im0 = extrapolate_to_zero(&ladder.epsilons, &im);
    let raw_density = im0 / std::f64::consts::PI;
    let mut ill_conditioned = raw_density < -1e-6;
    // monotonicity of successive ladder differences
    let diffs: Vec<f64> = im.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if diffs.windows(2).any(|d| d[1] > 4.0 * d[0] + 1e-14) {
        ill_conditioned = true;
    }
    let density = raw_density.max(0.0);
    Ok(SpectralMeasureSample {
        lambda,
        density,
        boundary: Complex64::new(re0, im0),
        epsilon_ladder: pairs,
        ill_conditioned,
    })
}
