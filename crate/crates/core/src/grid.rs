//! Uniform-grid discretization of 1D Schrodinger operators and the complex
//! tridiagonal linear algebra every other module consumes.
//!
//! The Hamiltonian is the 3-point finite-difference discretization of
//! `-d^2/dx^2 + V(x)` with Dirichlet conditions at the box edges. All inner
//! products carry the quadrature weight `h`, so discrete results converge to
//! their L^2 counterparts as `h -> 0`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Default cap on dense (all-pairs) eigensolves.
pub const DENSE_SOLVE_CAP: usize = 8192;

/// Uniform discretization of the truncated line `[x_min, x_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    h: f64,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidModel(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidModel(format!(
                "invalid grid interval [{x_min}, {x_max}]"
            )));
        }
        let h = (x_max - x_min) / (n_points - 1) as f64;
        Ok(Self {
            x_min,
            x_max,
            n_points,
            h,
        })
    }

    /// Symmetric box `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Grid spacing; also the quadrature weight of every inner product.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.h
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.point(j))
    }
}

/// Analytic potential families plus raw samples.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Zero,
    /// `V(x) = -depth * sech^2(x)`; `depth = 2` has the single bound state
    /// `E_0 = -1` with eigenfunction proportional to `sech(x)`.
    PoschlTeller { depth: f64 },
    /// `V(x) = -depth * exp(-((x - center)/width)^2)`.
    GaussianWell { depth: f64, center: f64, width: f64 },
    /// Pointwise samples; must match the grid they are used with.
    Samples(Vec<f64>),
}

/// Overflow-safe sech.
pub fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

impl Potential {
    pub fn is_analytic(&self) -> bool {
        !matches!(self, Potential::Samples(_))
    }

    /// Pointwise value; panics on `Samples` (use [`Potential::sample`]).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::PoschlTeller { depth } => {
                let s = sech(x);
                -depth * s * s
            }
            Potential::GaussianWell {
                depth,
                center,
                width,
            } => {
                let u = (x - center) / width;
                -depth * (-u * u).exp()
            }
            Potential::Samples(_) => panic!("sampled potential has no analytic form"),
        }
    }

    pub fn sample(&self, grid: &SpatialGrid) -> Result<Vec<f64>> {
        match self {
            Potential::Samples(v) => {
                if v.len() != grid.n_points() {
                    return Err(Error::InvalidModel(format!(
                        "potential has {} samples but the grid has {} points",
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

/// Complex-valued function sampled on a [`SpatialGrid`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub grid: SpatialGrid,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>) -> Self {
        assert_eq!(grid.n_points(), values.len());
        Self { grid, values }
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `<self, other> = h * sum conj(self_j) * other_j`.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        s * self.grid.h()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.h()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for v in &mut self.values {
                *v /= n;
            }
        }
        self
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for v in &mut self.values {
            *v *= c;
        }
        self
    }

    /// Largest modulus within `width` points of either box edge.
    pub fn boundary_amplitude(&self, width: usize) -> f64 {
        let n = self.len();
        let w = width.min(n / 2);
        let head = self.values[..w].iter().map(|v| v.norm());
        let tail = self.values[n - w..].iter().map(|v| v.norm());
        head.chain(tail).fold(0.0, f64::max)
    }

    /// Pointwise product with another grid function (no conjugation).
    pub fn mul_pointwise(&self, other: &GridFunction) -> GridFunction {
        debug_assert_eq!(self.len(), other.len());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    /// Pointwise product with a real sample vector.
    pub fn mul_real(&self, w: &[f64]) -> GridFunction {
        debug_assert_eq!(self.len(), w.len());
        let values = self
            .values
            .iter()
            .zip(w)
            .map(|(v, &s)| v * s)
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }
}

/// Real symmetric tridiagonal discretization of `-d^2/dx^2 + V` with
/// Dirichlet boundary conditions.
#[derive(Clone, Debug)]
pub struct DiscreteHamiltonian {
    pub grid: SpatialGrid,
    /// `2/h^2 + V(x_j)`.
    pub diagonal: Vec<f64>,
    /// `-1/h^2`, shared by every off-diagonal entry.
    pub off_diagonal: f64,
    pub potential_samples: Vec<f64>,
}

/// 3-point finite-difference discretization of `H = -Laplacian + V`.
pub fn build_hamiltonian(potential: &Potential, grid: &SpatialGrid) -> Result<DiscreteHamiltonian> {
    let samples = potential.sample(grid)?;
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "non-finite potential sample {bad}"
        )));
    }
    let h = grid.h();
    let diagonal = samples.iter().map(|v| 2.0 / (h * h) + v).collect();
    Ok(DiscreteHamiltonian {
        grid: *grid,
        diagonal,
        off_diagonal: -1.0 / (h * h),
        potential_samples: samples,
    })
}

impl DiscreteHamiltonian {
    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    /// `H f` (Dirichlet: values outside the box are zero).
    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        let n = self.n();
        let e = self.off_diagonal;
        let v = &f.values;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = v[j] * self.diagonal[j];
            if j > 0 {
                acc += v[j - 1] * e;
            }
            if j + 1 < n {
                acc += v[j + 1] * e;
            }
            out.push(acc);
        }
        GridFunction {
            grid: f.grid,
            values: out,
        }
    }

    /// `<f, H f>` for a real vector (used by eigenvalue refinement).
    pub fn rayleigh(&self, v: &[f64]) -> f64 {
        let n = self.n();
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..n {
            let mut hv = self.diagonal[j] * v[j];
            if j > 0 {
                hv += self.off_diagonal * v[j - 1];
            }
            if j + 1 < n {
                hv += self.off_diagonal * v[j + 1];
            }
            num += v[j] * hv;
            den += v[j] * v[j];
        }
        num / den
    }

    /// Number of eigenvalues strictly below `bound` (Sturm sequence count).
    pub fn count_below(&self, bound: f64) -> usize {
        sturm_count(&self.diagonal, self.off_diagonal, bound)
    }
}

fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let e2 = off * off;
    let mut count = 0;
    let mut q = f64::INFINITY;
    for &d in diag {
        q = d - lambda - if q.is_infinite() { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = f64::MIN_POSITIVE * (2.0 / off.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solve a general complex tridiagonal system by Gaussian elimination with
/// partial pivoting (gtsv-style: one extra superdiagonal of fill).
pub fn solve_tridiag(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    assert!(n >= 1 && lower.len() == n - 1 && upper.len() == n - 1 && rhs.len() == n);
    let dl = lower.to_vec();
    let mut d = diag.to_vec();
    let mut du = upper.to_vec();
    let mut du2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
    let mut b = rhs.to_vec();

    let singular = |re: f64, im: f64| Error::NearSpectrum { re, im };

    for i in 0..n - 1 {
        if d[i].norm_sqr() >= dl[i].norm_sqr() {
            if d[i] == Complex64::new(0.0, 0.0) {
                return Err(singular(d[i].re, d[i].im));
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            let t = fact * b[i];
            b[i + 1] -= t;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i < n - 2 {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1] == Complex64::new(0.0, 0.0) {
        return Err(singular(d[n - 1].re, d[n - 1].im));
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    Ok(b)
}

/// Solve `(H - z) u = rhs` by complex tridiagonal elimination.
///
/// The residual contract `||(H - z)u - rhs|| <= 1e-10 ||rhs||` is checked; a
/// violation means `z` is numerically on the spectrum of the boxed operator.
pub fn solve_shifted(
    hamiltonian: &DiscreteHamiltonian,
    z: Complex64,
    rhs: &GridFunction,
) -> Result<GridFunction> {
    let n = hamiltonian.n();
    let off = Complex64::new(hamiltonian.off_diagonal, 0.0);
    let lower = vec![off; n - 1];
    let upper = vec![off; n - 1];
    let diag: Vec<Complex64> = hamiltonian
        .diagonal
        .iter()
        .map(|&d| Complex64::new(d, 0.0) - z)
        .collect();
    let u = solve_tridiag(&lower, &diag, &upper, &rhs.values)?;
    let u = GridFunction::new(rhs.grid, u);

    let mut res = hamiltonian.apply(&u);
    for (r, (uj, bj)) in res.values.iter_mut().zip(u.values.iter().zip(&rhs.values)) {
        *r = *r - z * uj - bj;
    }
    let rhs_norm = rhs.norm();
    if res.norm() > 1e-10 * rhs_norm && rhs_norm > 0.0 {
        return Err(Error::NearSpectrum { re: z.re, im: z.im });
    }
    Ok(u)
}

fn bisect_eigenvalue(h: &DiscreteHamiltonian, index: usize, mut lo: f64, mut hi: f64) -> f64 {
    // smallest lambda with count_below(lambda) > index
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if h.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn gershgorin(h: &DiscreteHamiltonian) -> (f64, f64) {
    let r = 2.0 * h.off_diagonal.abs();
    let lo = h.diagonal.iter().cloned().fold(f64::INFINITY, f64::min) - r;
    let hi = h.diagonal.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
    (lo, hi)
}

/// Eigenvector by inverse iteration at an already-converged eigenvalue.
fn inverse_iteration(h: &DiscreteHamiltonian, lambda: f64) -> Result<Vec<f64>> {
    let n = h.n();
    // deterministic pseudo-random start vector
    let mut seed = 0x2545f4914f6cdd1du64;
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    let off = Complex64::new(h.off_diagonal, 0.0);
    let lower = vec![off; n - 1];
    let upper = vec![off; n - 1];
    // tiny relative offset keeps the shifted matrix invertible
    let scale = h.diagonal.iter().fold(0.0f64, |a, &d| a.max(d.abs()));
    let shift = lambda + 1e-14 * scale.max(1.0);
    let diag: Vec<Complex64> = h
        .diagonal
        .iter()
        .map(|&d| Complex64::new(d - shift, 0.0))
        .collect();
    for _ in 0..4 {
        let rhs: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let u = solve_tridiag(&lower, &diag, &upper, &rhs)?;
        let nrm = u.iter().map(|c| c.re * c.re).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return Err(Error::NearSpectrum {
                re: lambda,
                im: 0.0,
            });
        }
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui.re / nrm;
        }
    }
    Ok(v)
}

fn orthonormalize_cluster(vectors: &mut [Vec<f64>]) {
    for i in 0..vectors.len() {
        let (head, tail) = vectors.split_at_mut(i);
        let vi = &mut tail[0];
        for vj in head.iter() {
            let dot: f64 = vi.iter().zip(vj.iter()).map(|(a, b)| a * b).sum();
            for (a, b) in vi.iter_mut().zip(vj.iter()) {
                *a -= dot * b;
            }
        }
        let nrm = vi.iter().map(|x| x * x).sum::<f64>().sqrt();
        for a in vi.iter_mut() {
            *a /= nrm;
        }
    }
}

/// Eigenvalues of `H` strictly below `bound`, ascending, with h-normalized
/// eigenvectors. No size cap: cost is `O(n)` per eigenpair.
pub fn eigenpairs_below(
    h: &DiscreteHamiltonian,
    bound: f64,
) -> Result<Vec<(f64, GridFunction)>> {
    let (glo, _) = gershgorin(h);
    let m = h.count_below(bound);
    let mut out = Vec::with_capacity(m);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut lambdas = Vec::with_capacity(m);
    for idx in 0..m {
        let lambda = bisect_eigenvalue(h, idx, glo, bound);
        let v = inverse_iteration(h, lambda)?;
        lambdas.push(lambda);
        vectors.push(v);
    }
    // re-orthogonalize near-degenerate neighbours
    let scale = h.diagonal.iter().fold(1.0f64, |a, &d| a.max(d.abs()));
    let mut i = 0;
    while i < m {
        let mut j = i + 1;
        while j < m && lambdas[j] - lambdas[j - 1] < 1e-8 * scale {
            j += 1;
        }
        orthonormalize_cluster(&mut vectors[i..j]);
        i = j;
    }
    for (lambda, v) in lambdas.into_iter().zip(vectors) {
        let mut gf = GridFunction::new(
            h.grid,
            v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        );
        let nrm = gf.norm();
        for c in &mut gf.values {
            *c /= nrm;
        }
        out.push((lambda, gf));
    }
    Ok(out)
}

/// All eigenpairs of the tridiagonal matrix, eigenvalues ascending,
/// eigenvectors h-orthonormal.
pub fn eigensolve(h: &DiscreteHamiltonian) -> Result<Vec<(f64, GridFunction)>> {
    eigensolve_capped(h, DENSE_SOLVE_CAP)
}

pub fn eigensolve_capped(
    h: &DiscreteHamiltonian,
    cap: usize,
) -> Result<Vec<(f64, GridFunction)>> {
    let n = h.n();
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let (_, ghi) = gershgorin(h);
    eigenpairs_below(h, ghi + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn free_grid(half: f64, n: usize) -> (SpatialGrid, DiscreteHamiltonian) {
        let g = SpatialGrid::symmetric(half, n).unwrap();
        let h = build_hamiltonian(&Potential::Zero, &g).unwrap();
        (g, h)
    }

    #[test]
    fn grid_spacing_and_points() {
        let g = SpatialGrid::new(-10.0, 10.0, 5).unwrap();
        assert_abs_diff_eq!(g.h(), 5.0);
        assert_abs_diff_eq!(g.point(0), -10.0);
        assert_abs_diff_eq!(g.point(4), 10.0);
        assert!(SpatialGrid::new(-1.0, 1.0, 2).is_err());
        assert!(SpatialGrid::new(1.0, -1.0, 9).is_err());
    }

    #[test]
    fn free_laplacian_stencil() {
        let (g, h) = free_grid(10.0, 5);
        let inv_h2 = 1.0 / (g.h() * g.h());
        for d in &h.diagonal {
            assert_abs_diff_eq!(*d, 2.0 * inv_h2, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(h.off_diagonal, -inv_h2, epsilon = 1e-12);
        assert!(h.off_diagonal < 0.0);
    }

    #[test]
    fn poschl_teller_diagonal_is_pointwise() {
        let g = SpatialGrid::symmetric(20.0, 201).unwrap();
        let h = build_hamiltonian(&Potential::PoschlTeller { depth: 2.0 }, &g).unwrap();
        let inv_h2 = 1.0 / (g.h() * g.h());
        for (j, x) in g.points().enumerate() {
            let s = sech(x);
            assert_abs_diff_eq!(h.diagonal[j], 2.0 * inv_h2 - 2.0 * s * s, epsilon = 1e-12);
        }
    }

    #[test]
    fn non_finite_potential_rejected() {
        let g = SpatialGrid::symmetric(1.0, 5).unwrap();
        let v = Potential::Samples(vec![0.0, f64::NAN, 0.0, 0.0, 0.0]);
        assert!(matches!(
            build_hamiltonian(&v, &g),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn solve_shifted_zero_rhs() {
        let (g, h) = free_grid(10.0, 101);
        let rhs = GridFunction::zeros(g);
        let u = solve_shifted(&h, Complex64::new(-1.0, 0.0), &rhs).unwrap();
        assert_eq!(u.norm(), 0.0);
    }

    #[test]
    fn solve_shifted_residual_contract() {
        let (g, h) = free_grid(10.0, 401);
        let rhs = GridFunction::from_real_fn(g, |x| (-x * x / 2.0).exp()).normalized();
        let z = Complex64::new(-1.0, 0.0);
        let u = solve_shifted(&h, z, &rhs).unwrap();
        let mut res = h.apply(&u);
        for (r, (uj, bj)) in res.values.iter_mut().zip(u.values.iter().zip(&rhs.values)) {
            *r = *r - z * uj - bj;
        }
        assert!(res.norm() <= 1e-10 * rhs.norm());
    }

    #[test]
    fn eigensolve_three_point_closed_form() {
        // free Laplacian on [0,2] with n=3 has h=1: eigenvalues 2-sqrt2, 2, 2+sqrt2
        let g = SpatialGrid::new(0.0, 2.0, 3).unwrap();
        let h = build_hamiltonian(&Potential::Zero, &g).unwrap();
        let pairs = eigensolve(&h).unwrap();
        let want = [2.0 - 2.0_f64.sqrt(), 2.0, 2.0 + 2.0_f64.sqrt()];
        assert_eq!(pairs.len(), 3);
        for (p, w) in pairs.iter().zip(want) {
            assert_abs_diff_eq!(p.0, w, epsilon = 1e-10);
        }
    }

    #[test]
    fn eigensolve_orthonormal() {
        let g = SpatialGrid::symmetric(8.0, 120).unwrap();
        let h = build_hamiltonian(&Potential::PoschlTeller { depth: 2.0 }, &g).unwrap();
        let pairs = eigensolve(&h).unwrap();
        for i in (0..pairs.len()).step_by(17) {
            for j in (0..pairs.len()).step_by(13) {
                let ip = pairs[i].1.inner(&pairs[j].1);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(ip.re, expect, epsilon = 1e-10);
                assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn eigensolve_cap() {
        let g = SpatialGrid::symmetric(8.0, 64).unwrap();
        let h = build_hamiltonian(&Potential::Zero, &g).unwrap();
        assert!(matches!(
            eigensolve_capped(&h, 32),
            Err(Error::SizeCap { n: 64, cap: 32 })
        ));
    }

    #[test]
    fn poschl_teller_single_bound_state_and_energy() {
        // oracle: the analytic model has exactly one bound state at -1
        let g = SpatialGrid::symmetric(20.0, 2001).unwrap();
        let h = build_hamiltonian(&Potential::PoschlTeller { depth: 2.0 }, &g).unwrap();
        assert_eq!(h.count_below(-1e-2), 1);
        let pairs = eigenpairs_below(&h, -1e-2).unwrap();
        assert_abs_diff_eq!(pairs[0].0, -1.0, epsilon = 1e-3);
    }

    #[test]
    fn spectral_convergence_order_two() {
        let mut errs = Vec::new();
        for n in [501usize, 1001, 2001] {
            let g = SpatialGrid::symmetric(20.0, n).unwrap();
            let h = build_hamiltonian(&Potential::PoschlTeller { depth: 2.0 }, &g).unwrap();
            let pairs = eigenpairs_below(&h, -1e-2).unwrap();
            errs.push((pairs[0].0 - (-1.0)).abs());
        }
        // halving h should reduce the error by about 4
        assert!(errs[0] / errs[1] > 3.0 && errs[0] / errs[1] < 5.0);
        assert!(errs[1] / errs[2] > 3.0 && errs[1] / errs[2] < 5.0);
    }

    #[test]
    fn hermiticity() {
        let g = SpatialGrid::symmetric(6.0, 200).unwrap();
        let h = build_hamiltonian(&Potential::GaussianWell { depth: 1.3, center: 0.4, width: 1.1 }, &g)
            .unwrap();
        let f = GridFunction::from_fn(g, |x| Complex64::new((x * 0.7).sin(), (x * 1.3).cos()));
        let gfun = GridFunction::from_fn(g, |x| Complex64::new((-x * x / 3.0).exp(), x * 0.1));
        let lhs = h.apply(&f).inner(&gfun);
        let rhs = f.inner(&h.apply(&gfun));
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }
}
