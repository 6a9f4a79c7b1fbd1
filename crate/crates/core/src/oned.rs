//! One-dimensional solvers on `[0, R]`: the Schrödinger operator
//! `−d²/dx² + V` and the weighted (drift) operator in self-adjoint form.
//!
//! Both are discretized as the quadratic-form pair
//! `(Σ c_{i+1/2} (u_{i+1} − u_i)² / h + Σ V_i m_i u_i², Σ m_i u_i²)`
//! with diagonal mass `m_i`. For `c ≡ 1` and trapezoid masses this is the
//! three-point finite-difference operator, with the second-order ghost-point
//! closure under Neumann conditions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub use crate::assembly::BoundaryCondition;
use crate::assembly::SymPencil;
use crate::eigen::{richardson_extrapolate, Spectrum};
use crate::linalg::tridiag::SymTridiagonal;
use crate::sparse::CsrMatrix;
use crate::{Error, Result, PI2};

/// Samples of a function on `n + 1` equispaced nodes of `[0, R]`, linearly
/// interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D {
    length: f64,
    samples: Vec<f64>,
}

impl Profile1D {
    pub fn new(length: f64, samples: Vec<f64>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid_arg(format!("interval length must be positive, got {length}")));
        }
        if samples.len() < 3 {
            return Err(Error::invalid_arg("a profile needs at least 3 samples"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_arg("profile samples must be finite"));
        }
        Ok(Profile1D { length, samples })
    }

    /// Samples `f` at the nodes of an `n`-interval grid.
    pub fn from_fn(length: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let n = n.max(2);
        let samples = (0..=n).map(|i| f(length * i as f64 / n as f64)).collect();
        Profile1D { length, samples }
    }

    pub fn constant(length: f64, value: f64) -> Self {
        Profile1D { length, samples: vec![value; 3] }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn nodes(&self) -> Vec<f64> {
        let n = self.intervals();
        (0..=n).map(|i| self.length * i as f64 / n as f64).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.intervals();
        let t = (x / self.length * n as f64).clamp(0.0, n as f64);
        let i = (t.floor() as usize).min(n - 1);
        let s = t - i as f64;
        if s == 0.0 {
            return self.samples[i];
        }
        (1.0 - s) * self.samples[i] + s * self.samples[i + 1]
    }

    /// Trapezoid rule.
    pub fn integral(&self) -> f64 {
        let n = self.intervals();
        let h = self.length / n as f64;
        let inner: f64 = self.samples[1..n].iter().sum();
        h * (inner + 0.5 * (self.samples[0] + self.samples[n]))
    }

    pub fn is_concave(&self) -> bool {
        let scale = self.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        self.samples.windows(3).all(|w| w[0] + w[2] - 2.0 * w[1] <= 1e-12 * scale)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise `e^{−φ}` of this profile taken as `φ`.
    pub fn exp_neg(&self) -> Profile1D {
        Profile1D { length: self.length, samples: self.samples.iter().map(|p| (-p).exp()).collect() }
    }
}

/// Discrete form on the `n`-interval grid: fluxes at midpoints, masses and
/// potential at nodes.
#[derive(Debug, Clone)]
struct Form1D {
    h: f64,
    flux: Vec<f64>,
    mass: Vec<f64>,
    potential: Vec<f64>,
}

/// Unknown nodes after applying the boundary condition, plus the tridiagonal
/// pencil over them.
#[derive(Debug, Clone)]
struct Reduced {
    nodes: Vec<usize>,
    stiff_diag: Vec<f64>,
    stiff_off: Vec<f64>,
    mass: Vec<f64>,
    n: usize,
    bc: BoundaryCondition,
}

impl Form1D {
    fn schrodinger(v: &Profile1D, n: usize) -> Self {
        let h = v.length() / n as f64;
        let x = |i: usize| v.length() * i as f64 / n as f64;
        let mut mass = vec![h; n + 1];
        mass[0] = 0.5 * h;
        mass[n] = 0.5 * h;
        Form1D { h, flux: vec![1.0; n], mass, potential: (0..=n).map(|i| v.eval(x(i))).collect() }
    }

    fn weighted(w: &Profile1D, n: usize) -> Result<Self> {
        if w.samples().iter().any(|&v| v < 0.0) {
            return Err(Error::invalid_arg("weight must be nonnegative"));
        }
        let h = w.length() / n as f64;
        let x = |t: f64| w.length() * t / n as f64;
        let mut mass: Vec<f64> = (0..=n).map(|i| w.eval(x(i as f64)) * h).collect();
        mass[0] *= 0.5;
        mass[n] *= 0.5;
        let flux: Vec<f64> = (0..n).map(|i| w.eval(x(i as f64 + 0.5))).collect();
        for i in 1..n {
            if mass[i] <= 0.0 {
                return Err(Error::DisconnectedWeight { x: x(i as f64) });
            }
        }
        if let Some(i) = flux.iter().position(|&c| c <= 0.0) {
            return Err(Error::DisconnectedWeight { x: x(i as f64 + 0.5) });
        }
        Ok(Form1D { h, flux, mass, potential: vec![0.0; n + 1] })
    }

    fn reduce(&self, bc: BoundaryCondition) -> Reduced {
        let n = self.flux.len();
        let nodes: Vec<usize> = match bc {
            BoundaryCondition::Dirichlet => (1..n).collect(),
            // Zero-mass end nodes are slaved to their neighbour and carry no energy.
            BoundaryCondition::Neumann => (0..=n)
                .filter(|&i| !((i == 0 || i == n) && self.mass[i] <= 0.0))
                .collect(),
        };
        let mut stiff_diag = Vec::with_capacity(nodes.len());
        let mut stiff_off = Vec::with_capacity(nodes.len());
        let mut mass = Vec::with_capacity(nodes.len());
        let first = nodes[0];
        let last = *nodes.last().unwrap();
        for (k, &i) in nodes.iter().enumerate() {
            let left = if i > 0 && (bc == BoundaryCondition::Dirichlet || i > first) { self.flux[i - 1] } else { 0.0 };
            let right = if i < n && (bc == BoundaryCondition::Dirichlet || i < last) { self.flux[i] } else { 0.0 };
            stiff_diag.push((left + right) / self.h + self.potential[i] * self.mass[i]);
            if k + 1 < nodes.len() {
                stiff_off.push(-self.flux[i] / self.h);
            }
            mass.push(self.mass[i]);
        }
        Reduced { nodes, stiff_diag, stiff_off, mass, n, bc }
    }
}

impl Reduced {
    fn normalized(&self) -> Result<SymTridiagonal> {
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let diag = self.stiff_diag.iter().zip(&s).map(|(d, si)| d * si * si).collect();
        let off = self.stiff_off.iter().enumerate().map(|(k, o)| o * s[k] * s[k + 1]).collect();
        SymTridiagonal::new(diag, off)
    }

    /// Scatters reduced values to all `n + 1` nodes.
    fn expand(&self, u: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n + 1];
        for (k, &i) in self.nodes.iter().enumerate() {
            full[i] = u[k];
        }
        if self.bc == BoundaryCondition::Neumann {
            let (first, last) = (self.nodes[0], *self.nodes.last().unwrap());
            if first > 0 {
                full[0] = full[first];
            }
            if last < self.n {
                full[self.n] = full[last];
            }
        }
        full
    }

    fn solve(&self, k: usize, h: f64) -> Result<Spectrum> {
        if k > self.nodes.len() {
            return Err(Error::invalid_arg("more eigenvalues requested than grid unknowns"));
        }
        let t = self.normalized()?;
        let values = t.smallest_eigenvalues(k)?;
        let mut ys: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        for &lambda in &values {
            let y = t.eigenvector(lambda, &ys);
            let u: Vec<f64> = y.iter().zip(&self.mass).map(|(yi, m)| yi / m.sqrt()).collect();
            let m = self.nodes.len();
            let mut r2 = 0.0;
            let mut mu2 = 0.0;
            for i in 0..m {
                let mut au = self.stiff_diag[i] * u[i];
                if i > 0 {
                    au += self.stiff_off[i - 1] * u[i - 1];
                }
                if i + 1 < m {
                    au += self.stiff_off[i] * u[i + 1];
                }
                let mu = self.mass[i] * u[i];
                r2 += (au - lambda * mu).powi(2);
                mu2 += mu * mu;
            }
            residuals.push((r2 / mu2).sqrt());
            let mut full = self.expand(&u);
            let big = full.iter().copied().fold(0.0_f64, |a, v| if v.abs() > a.abs() { v } else { a });
            if big < 0.0 {
                full.iter_mut().for_each(|v| *v = -*v);
            }
            vectors.push(full);
            ys.push(y);
        }
        Ok(Spectrum { eigenvalues: values, eigenvectors: vectors, residuals, h, seed: 0, iterations: 0 })
    }

    fn pencil(&self) -> Result<SymPencil> {
        let a = CsrMatrix::tridiagonal(&self.stiff_diag, &self.stiff_off);
        let m = CsrMatrix::tridiagonal(&self.mass, &vec![0.0; self.mass.len() - 1]);
        let mut p = SymPencil::new(a, m)?;
        let mut dof_map = vec![None; self.n + 1];
        for (k, &i) in self.nodes.iter().enumerate() {
            dof_map[i] = Some(k);
        }
        p.dof_map = dof_map;
        Ok(p)
    }
}

fn check_grid(n: usize, k: usize) -> Result<()> {
    if n < 2 || k == 0 {
        return Err(Error::invalid_arg(format!("need n >= 2 and k >= 1, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Single-grid eigenpairs of `−d²/dx² + V` on an `n`-interval grid.
pub fn schrodinger_fd(v: &Profile1D, bc: BoundaryCondition, n: usize, k: usize) -> Result<Spectrum> {
    check_grid(n, k)?;
    let form = Form1D::schrodinger(v, n);
    form.reduce(bc).solve(k, form.h)
}

/// Single-grid eigenpairs of the weighted operator with density `w = e^{−φ}`.
pub fn bakry_emery_fd(w: &Profile1D, bc: BoundaryCondition, n: usize, k: usize) -> Result<Spectrum> {
    check_grid(n, k)?;
    let form = Form1D::weighted(w, n)?;
    form.reduce(bc).solve(k, form.h)
}

fn extrapolated(coarse: Spectrum, fine: &Spectrum) -> Spectrum {
    let eigenvalues = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(c, f)| richardson_extrapolate(*c, *f, 2))
        .collect();
    Spectrum { eigenvalues, ..coarse }
}

/// Eigenvalues of `−d²/dx² + V` Richardson-extrapolated from grids `n` and
/// `2n`; eigenvectors and residuals are those of the `n` grid.
pub fn schrodinger_eigs_1d(v: &Profile1D, bc: BoundaryCondition, n: usize, k: usize) -> Result<Spectrum> {
    if n < 16 || k > 6 {
        return Err(Error::invalid_arg(format!("need n >= 16 and k <= 6, got n = {n}, k = {k}")));
    }
    let coarse = schrodinger_fd(v, bc, n, k)?;
    let fine = schrodinger_fd(v, bc, 2 * n, k)?;
    Ok(extrapolated(coarse, &fine))
}

/// Weighted-operator eigenvalues extrapolated from grids `n` and `2n`. The
/// profile is evaluated at nodes and cell midpoints, so it should be sampled
/// on a grid that contains the `4n`-interval nodes for exact evaluation.
pub fn bakry_emery_eigs_1d(w: &Profile1D, bc: BoundaryCondition, n: usize, k: usize) -> Result<Spectrum> {
    if n < 16 || k > 6 {
        return Err(Error::invalid_arg(format!("need n >= 16 and k <= 6, got n = {n}, k = {k}")));
    }
    let coarse = bakry_emery_fd(w, bc, n, k)?;
    let fine = bakry_emery_fd(w, bc, 2 * n, k)?;
    Ok(extrapolated(coarse, &fine))
}

/// Closed-form spectrum of `−d²/dx²` on `[0, R]`.
pub fn exact_interval_eigs(r: f64, bc: BoundaryCondition, k: usize) -> Vec<f64> {
    (0..k)
        .map(|j| {
            let m = match bc {
                BoundaryCondition::Dirichlet => (j + 1) as f64,
                BoundaryCondition::Neumann => j as f64,
            };
            m * m * PI2 / (r * r)
        })
        .collect()
}

/// Ground state on the `n`-interval grid: positive, sup-norm one, with the
/// (zero) Dirichlet end values included.
pub fn ground_state_1d(v: &Profile1D, bc: BoundaryCondition, n: usize) -> Result<Vec<f64>> {
    let s = schrodinger_fd(v, bc, n, 1)?;
    let mut u = s.eigenvectors.into_iter().next().unwrap();
    let big = u.iter().copied().fold(0.0_f64, |a, x| if x.abs() > a.abs() { x } else { a });
    u.iter_mut().for_each(|x| *x /= big);
    Ok(u)
}

/// The Schrödinger form as a sparse pencil over the grid nodes.
pub fn schrodinger_pencil(v: &Profile1D, bc: BoundaryCondition, n: usize) -> Result<SymPencil> {
    check_grid(n, 1)?;
    let floor = v.min().min(0.0);
    Ok(Form1D::schrodinger(v, n).reduce(bc).pencil()?.with_floor(floor))
}

/// The weighted form as a sparse pencil over the grid nodes.
pub fn bakry_emery_pencil(w: &Profile1D, bc: BoundaryCondition, n: usize) -> Result<SymPencil> {
    check_grid(n, 1)?;
    Form1D::weighted(w, n)?.reduce(bc).pencil()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn free_dirichlet_gap_is_three_pi_squared() {
        let v = Profile1D::constant(1.0, 0.0);
        let s = schrodinger_eigs_1d(&v, BoundaryCondition::Dirichlet, 512, 2).unwrap();
        assert!((s.eigenvalues[0] - PI2).abs() < 1e-6);
        assert!((s.eigenvalues[1] - s.eigenvalues[0] - 3.0 * PI2).abs() < 1e-6);
    }

    #[test]
    fn free_neumann_spectrum() {
        let v = Profile1D::constant(1.0, 0.0);
        let s = schrodinger_eigs_1d(&v, BoundaryCondition::Neumann, 256, 3).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-9);
        assert!((s.eigenvalues[1] - PI2).abs() < 1e-6);
        assert!((s.eigenvalues[2] - 4.0 * PI2).abs() < 1e-5);
    }

    #[test]
    fn constant_potential_shifts_exactly() {
        let v0 = Profile1D::constant(1.0, 0.0);
        let v5 = Profile1D::constant(1.0, 5.0);
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let a = schrodinger_fd(&v0, bc, 64, 4).unwrap();
            let b = schrodinger_fd(&v5, bc, 64, 4).unwrap();
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert!((y - x - 5.0).abs() < 1e-9, "{x} {y}");
            }
        }
    }

    #[test]
    fn exact_values() {
        let d = exact_interval_eigs(1.0, BoundaryCondition::Dirichlet, 3);
        assert_eq!(d, vec![PI2, 4.0 * PI2, 9.0 * PI2]);
        let d2 = exact_interval_eigs(2.0, BoundaryCondition::Dirichlet, 2);
        assert!((d2[1] - d2[0] - 0.75 * PI2).abs() < 1e-14);
        assert_eq!(exact_interval_eigs(1.0, BoundaryCondition::Neumann, 2), vec![0.0, PI2]);
    }

    #[test]
    fn ground_states() {
        let v = Profile1D::constant(1.0, 0.0);
        let n = 64;
        let u = ground_state_1d(&v, BoundaryCondition::Dirichlet, n).unwrap();
        let err = (0..=n)
            .map(|i| (u[i] - (PI * i as f64 / n as f64).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
        let c = ground_state_1d(&v, BoundaryCondition::Neumann, n).unwrap();
        assert!(c.iter().all(|x| (x - 1.0).abs() < 1e-10));
        let tilted = Profile1D::from_fn(1.0, 64, |x| 30.0 * x);
        let g = ground_state_1d(&tilted, BoundaryCondition::Dirichlet, n).unwrap();
        assert!(g[1..n].iter().all(|&x| x > 0.0));
    }

    #[test]
    fn weighted_matches_plain_for_unit_weight() {
        let one = Profile1D::constant(1.0, 1.0);
        let zero = Profile1D::constant(1.0, 0.0);
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let a = bakry_emery_fd(&one, bc, 100, 4).unwrap();
            let b = schrodinger_fd(&zero, bc, 100, 4).unwrap();
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sin_squared_weight_gives_shifted_dirichlet_spectrum() {
        let w = Profile1D::from_fn(1.0, 4 * 256, |x| (PI * x).sin().powi(2));
        let s = bakry_emery_eigs_1d(&w, BoundaryCondition::Neumann, 256, 3).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-8);
        assert!((s.eigenvalues[1] / (3.0 * PI2) - 1.0).abs() < 1e-5, "{}", s.eigenvalues[1]);
        assert!((s.eigenvalues[2] / (8.0 * PI2) - 1.0).abs() < 1e-5, "{}", s.eigenvalues[2]);
    }

    #[test]
    fn disconnected_weight_is_rejected() {
        let w = Profile1D::from_fn(1.0, 64, |x| if (0.4..0.6).contains(&x) { 0.0 } else { 1.0 });
        assert!(matches!(
            bakry_emery_fd(&w, BoundaryCondition::Neumann, 32, 2),
            Err(Error::DisconnectedWeight { .. })
        ));
    }

    #[test]
    fn profile_interpolation() {
        let p = Profile1D::from_fn(2.0, 4, |x| x * x);
        assert_eq!(p.eval(1.0), 1.0);
        assert!((p.eval(0.25) - 0.125).abs() < 1e-15);
        assert_eq!(p.eval(-1.0), 0.0);
        assert_eq!(p.eval(3.0), 4.0);
        assert!(Profile1D::new(1.0, vec![0.0, 1.0]).is_err());
        assert!(Profile1D::new(0.0, vec![0.0; 3]).is_err());
    }
}
