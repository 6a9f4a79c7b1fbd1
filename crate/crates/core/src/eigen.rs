//! Smallest eigenpairs of symmetric-definite pencils `A x = λ M x`.
//!
//! The solver is a shift-invert block Lanczos iteration in the M-inner
//! product with full reorthogonalization and thick restarts. The operator
//! `(A − σM)⁻¹ M` is applied through an envelope LDLᵀ factorization, with the
//! shift `σ` placed below the spectrum so the factorization is definite.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::SymPencil;
use crate::linalg::dense::{generalized_eigen, symmetric_eigen, DenseMatrix};
use crate::linalg::EnvelopeLdl;
use crate::{Error, Result};

/// Seed for the starting block when none is given.
pub const DEFAULT_SEED: u64 = 0x5_eed0_f9a9;

/// Relative distance under which neighbouring eigenvalues are reported as a cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Residuals within this many ulps of `(‖A‖ + |λ|‖M‖)‖x‖` count as converged
/// even when the relative target is below what rounding allows.
pub const ATTAINABLE_ULPS: f64 = 256.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// M-orthonormal, one per eigenvalue, in DOF numbering.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖A v − λ M v‖ / ‖M v‖` per pair.
    pub residuals: Vec<f64>,
    /// Mesh size that produced the pencil (0 when unknown).
    pub h: f64,
    pub seed: u64,
    /// Restarts (Lanczos) or sweeps used.
    pub iterations: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    /// `clusters()[i]` is set when `λ_i` lies within [`CLUSTER_TOL`] (relative)
    /// of a neighbour.
    pub fn clusters(&self) -> Vec<bool> {
        let ev = &self.eigenvalues;
        (0..ev.len())
            .map(|i| {
                let close = |j: usize| {
                    (ev[i] - ev[j]).abs() <= CLUSTER_TOL * ev[i].abs().max(ev[j].abs()).max(1.0)
                };
                (i > 0 && close(i - 1)) || (i + 1 < ev.len() && close(i + 1))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenOptions {
    /// Relative residual target.
    pub tol: f64,
    pub seed: u64,
    pub block_size: usize,
    pub max_restarts: usize,
    /// Overrides the default shift `spectrum_floor − 1`.
    pub shift: Option<f64>,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-9, seed: DEFAULT_SEED, block_size: 2, max_restarts: 500, shift: None }
    }
}

struct Basis<'a> {
    m: &'a crate::sparse::CsrMatrix,
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
    /// `w[i] = (A − σM)⁻¹ M v[i]` once computed.
    w: Vec<Option<Vec<f64>>>,
}

impl Basis<'_> {
    fn len(&self) -> usize {
        self.v.len()
    }

    /// M-orthogonalizes `c` against the basis (two passes) and appends it if
    /// it keeps more than `keep` of its original norm.
    fn push_orthonormal(&mut self, mut c: Vec<f64>, keep: f64) -> bool {
        let mut mc = self.m.mul_vec(&c);
        let before = dot(&c, &mc).max(0.0).sqrt();
        if before == 0.0 || !before.is_finite() {
            return false;
        }
        for _ in 0..2 {
            for (v, mv) in self.v.iter().zip(&self.mv) {
                let coef = dot(mv, &c);
                axpy(-coef, v, &mut c);
            }
        }
        self.m.mul_vec_into(&c, &mut mc);
        let after = dot(&c, &mc).max(0.0).sqrt();
        if !(after > keep * before) {
            return false;
        }
        c.iter_mut().for_each(|x| *x /= after);
        mc.iter_mut().for_each(|x| *x /= after);
        self.v.push(c);
        self.mv.push(mc);
        self.w.push(None);
        true
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The `k` smallest eigenpairs of `pencil`.
pub fn smallest_eigenpairs(pencil: &SymPencil, k: usize, opts: &EigenOptions) -> Result<Spectrum> {
    let n = pencil.dim();
    if k == 0 || k >= n {
        return Err(Error::invalid_arg(alloc::format!(
            "need 1 <= k < dimension, got k = {k} for dimension {n}"
        )));
    }
    let sigma = opts.shift.unwrap_or(pencil.spectrum_floor - 1.0);
    let shifted = pencil.a.add_scaled(&pencil.m, -sigma)?;
    let factor = EnvelopeLdl::factor(&shifted)?;
    let apply = |x: &[f64]| factor.solve(&pencil.m.mul_vec(x));
    let a_norm = pencil.a.max_row_sum();
    let m_norm = pencil.m.max_row_sum();

    let b = opts.block_size.clamp(1, n);
    let max_basis = n.min((3 * k).max(k + 20) + 2 * b);
    let keep_after_restart = (k + b + 2).min(max_basis.saturating_sub(2 * b)).max(k);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let random_vec = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.random_range(-1.0..1.0)).collect() };

    let mut basis = Basis { m: &pencil.m, v: Vec::new(), mv: Vec::new(), w: Vec::new() };
    let mut frontier: Vec<usize> = Vec::new();
    for _ in 0..b {
        if basis.push_orthonormal(random_vec(&mut rng), 1e-8) {
            frontier.push(basis.len() - 1);
        }
    }

    let mut worst = f64::INFINITY;
    for restart in 0..=opts.max_restarts {
        // Krylov expansion.
        while basis.len() < max_basis {
            let mut added = Vec::new();
            for &f in &frontier {
                if basis.len() >= max_basis || added.len() >= b {
                    break;
                }
                if basis.w[f].is_none() {
                    basis.w[f] = Some(apply(&basis.v[f]));
                }
                let cand = basis.w[f].clone().unwrap();
                if basis.push_orthonormal(cand, 1e-10) {
                    added.push(basis.len() - 1);
                }
            }
            if added.is_empty() {
                // Invariant subspace reached: continue from a fresh direction.
                let mut tries = 0;
                while added.is_empty() && tries < 8 && basis.len() < max_basis {
                    if basis.push_orthonormal(random_vec(&mut rng), 1e-8) {
                        added.push(basis.len() - 1);
                    }
                    tries += 1;
                }
                if added.is_empty() {
                    break;
                }
            }
            frontier = added;
        }
        for i in 0..basis.len() {
            if basis.w[i].is_none() {
                basis.w[i] = Some(apply(&basis.v[i]));
            }
        }

        // Rayleigh-Ritz on the whole basis.
        let m = basis.len();
        let mut t = DenseMatrix::zeros(m);
        for i in 0..m {
            for j in 0..=i {
                let wi = basis.w[i].as_ref().unwrap();
                let wj = basis.w[j].as_ref().unwrap();
                let s = 0.5 * (dot(&basis.mv[i], wj) + dot(&basis.mv[j], wi));
                t.set(i, j, s);
                t.set(j, i, s);
            }
        }
        let (theta, s) = symmetric_eigen(&t);
        let order: Vec<usize> = (0..m).rev().collect();
        let ritz = |col: usize, src: &[Vec<f64>]| -> Vec<f64> {
            let mut x = vec![0.0; n];
            for (i, vi) in src.iter().enumerate() {
                axpy(s.at(i, col), vi, &mut x);
            }
            x
        };

        let mut values = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        let mut converged = true;
        worst = 0.0;
        for &col in order.iter().take(k) {
            let lambda = sigma + 1.0 / theta[col];
            let x = ritz(col, &basis.v);
            let mx = ritz(col, &basis.mv);
            let mut r = pencil.a.mul_vec(&x);
            axpy(-lambda, &mx, &mut r);
            let res = norm(&r) / norm(&mx);
            let rel = res / lambda.abs().max(sigma.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
            // Rounding floor: a backward error of a few hundred ulps of the pencil.
            let floor = ATTAINABLE_ULPS * f64::EPSILON * (a_norm + lambda.abs() * m_norm) * norm(&x) / norm(&mx);
            if !(rel <= opts.tol || res <= floor) {
                converged = false;
            }
            values.push(lambda);
            vectors.push(x);
            residuals.push(res);
        }
        if converged {
            for x in &mut vectors {
                let big = x.iter().copied().fold(0.0_f64, |a, v| if v.abs() > a.abs() { v } else { a });
                if big < 0.0 {
                    x.iter_mut().for_each(|v| *v = -*v);
                }
            }
            return Ok(Spectrum {
                eigenvalues: values,
                eigenvectors: vectors,
                residuals,
                h: 0.0,
                seed: opts.seed,
                iterations: restart,
            });
        }
        if m == n {
            // Nothing left to add; the projection is the full problem.
            return Err(Error::NoConvergence { restarts: restart, residual: worst });
        }

        // Thick restart: keep the leading Ritz vectors and continue from their images.
        let keep = keep_after_restart.min(m);
        let cols: Vec<usize> = order.iter().take(keep).copied().collect();
        let w_all: Vec<Vec<f64>> = basis.w.iter().map(|w| w.clone().unwrap()).collect();
        let new_v: Vec<Vec<f64>> = cols.iter().map(|&c| ritz(c, &basis.v)).collect();
        let new_mv: Vec<Vec<f64>> = cols.iter().map(|&c| ritz(c, &basis.mv)).collect();
        let new_w: Vec<Option<Vec<f64>>> = cols.iter().map(|&c| Some(ritz(c, &w_all))).collect();
        basis.v = new_v;
        basis.mv = new_mv;
        basis.w = new_w;
        // Unconverged Ritz vectors first: their images carry the new directions.
        frontier = (0..keep).rev().collect();
    }
    Err(Error::NoConvergence { restarts: opts.max_restarts, residual: worst })
}

/// Brute-force reference: dense reduction of the whole pencil.
///
/// Reduces `M x = θ (A − σM) x` with `σ = spectrum_floor − 1` rather than
/// factoring `M`: a nearly singular mass matrix (weights that vanish to
/// rounding at an endpoint) makes `L⁻¹ A L⁻ᵀ` graded and the low end of its
/// spectrum unresolvable, while here those modes just land near `θ = 0`.
pub fn dense_eigenpairs(pencil: &SymPencil, k: usize) -> Result<Spectrum> {
    let n = pencil.dim();
    if k == 0 || k > n {
        return Err(Error::invalid_arg("requested eigenpair count out of range"));
    }
    let sigma = pencil.spectrum_floor - 1.0;
    let shifted = DenseMatrix::from_row_major(n, pencil.a.add_scaled(&pencil.m, -sigma)?.to_dense())?;
    let m = DenseMatrix::from_row_major(n, pencil.m.to_dense())?;
    let (theta, y) = generalized_eigen(&m, &shifted)?;
    let mut values = Vec::with_capacity(k);
    let mut x = Vec::with_capacity(k);
    for j in (n - k..n).rev() {
        if !(theta[j] > 0.0) {
            return Err(Error::Factorization { index: j, value: theta[j] });
        }
        values.push(sigma + 1.0 / theta[j]);
        let mut v: Vec<f64> = (0..n).map(|i| y.at(i, j)).collect();
        let s = pencil.m.form(&v, &v).sqrt();
        v.iter_mut().for_each(|c| *c /= s);
        x.push(v);
    }
    let mut eigenvectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (j, v) in x.into_iter().enumerate() {
        let mv = pencil.m.mul_vec(&v);
        let mut r = pencil.a.mul_vec(&v);
        axpy(-values[j], &mv, &mut r);
        residuals.push(norm(&r) / norm(&mv));
        eigenvectors.push(v);
    }
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors,
        residuals,
        h: 0.0,
        seed: 0,
        iterations: 0,
    })
}

/// `(vᵀ A v) / (vᵀ M v)`.
pub fn rayleigh_quotient(pencil: &SymPencil, v: &[f64]) -> Result<f64> {
    if v.len() != pencil.dim() {
        return Err(Error::DimensionMismatch { expected: pencil.dim(), got: v.len() });
    }
    let den = pencil.m.form(v, v);
    if !(den > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok(pencil.a.form(v, v) / den)
}

/// Extrapolates values from meshes `h` and `h/2` assuming an `h^order` error term.
pub fn richardson_extrapolate(coarse: f64, fine: f64, order: u32) -> f64 {
    let r = (2.0_f64).powi(order as i32) - 1.0;
    fine + (fine - coarse) / r
}

/// Observed convergence order from three consecutive refinements.
pub fn observed_order(coarse: f64, mid: f64, fine: f64) -> f64 {
    ((coarse - mid) / (mid - fine)).abs().log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{laplacian_pencil, BoundaryCondition, Weight};
    use crate::mesh::rectangle_mesh;
    use crate::sparse::CsrMatrix;

    #[test]
    fn richardson_formula() {
        assert!((richardson_extrapolate(20.1, 19.83, 2) - 19.74).abs() < 1e-12);
        let exact = |h: f64| 3.0 + 7.0 * h * h;
        assert!((richardson_extrapolate(exact(0.1), exact(0.05), 2) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lanczos_matches_dense_on_small_square() {
        let mesh = rectangle_mesh(1.0, 1.0, 8, 8).unwrap();
        let p = laplacian_pencil(&mesh, BoundaryCondition::Dirichlet, &Weight::Uniform, None).unwrap();
        let s = smallest_eigenpairs(&p, 4, &EigenOptions::default()).unwrap();
        let d = dense_eigenpairs(&p, 4).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&d.eigenvalues) {
            assert!((a - b).abs() <= 1e-8 * b.abs(), "{a} vs {b}");
        }
        for (i, x) in s.eigenvectors.iter().enumerate() {
            for (j, y) in s.eigenvectors.iter().enumerate() {
                let g = p.m.form(x, y);
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() <= 1e-8);
            }
        }
        assert!(s.clusters().iter().all(|c| !c));
    }

    #[test]
    fn exact_multiplicity_is_resolved_and_flagged() {
        // Two identical disconnected chains: every eigenvalue is double.
        let n = 40;
        let diag = alloc::vec![2.0; 2 * n];
        let mut off = alloc::vec![-1.0; 2 * n - 1];
        off[n - 1] = 0.0;
        let a = CsrMatrix::tridiagonal(&diag, &off);
        let m = CsrMatrix::identity(2 * n);
        let p = SymPencil::new(a, m).unwrap();
        let s = smallest_eigenpairs(&p, 4, &EigenOptions::default()).unwrap();
        let d = dense_eigenpairs(&p, 4).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&d.eigenvalues) {
            assert!((a - b).abs() <= 1e-10 * b.abs(), "{a} vs {b}");
        }
        assert_eq!(s.clusters(), alloc::vec![true; 4]);
    }

    #[test]
    fn rayleigh_quotient_properties() {
        let mesh = rectangle_mesh(1.0, 1.0, 6, 6).unwrap();
        let p = laplacian_pencil(&mesh, BoundaryCondition::Dirichlet, &Weight::Uniform, None).unwrap();
        let s = smallest_eigenpairs(&p, 1, &EigenOptions::default()).unwrap();
        let v = &s.eigenvectors[0];
        assert!((rayleigh_quotient(&p, v).unwrap() - s.eigenvalues[0]).abs() < 1e-9 * s.eigenvalues[0]);
        let w: Vec<f64> = (0..p.dim()).map(|i| 1.0 + (i % 3) as f64).collect();
        let w2: Vec<f64> = w.iter().map(|x| 2.0 * x).collect();
        let r = rayleigh_quotient(&p, &w).unwrap();
        assert!(r >= s.eigenvalues[0] - 1e-9);
        assert!((rayleigh_quotient(&p, &w2).unwrap() - r).abs() <= 1e-12 * r);
        assert_eq!(rayleigh_quotient(&p, &vec![0.0; p.dim()]), Err(Error::ZeroNorm));
    }

    #[test]
    fn rejects_bad_k() {
        let mesh = rectangle_mesh(1.0, 1.0, 3, 3).unwrap();
        let p = laplacian_pencil(&mesh, BoundaryCondition::Dirichlet, &Weight::Uniform, None).unwrap();
        assert!(smallest_eigenpairs(&p, 4, &EigenOptions::default()).is_err());
        assert!(smallest_eigenpairs(&p, 0, &EigenOptions::default()).is_err());
        assert!(smallest_eigenpairs(&p, 3, &EigenOptions::default()).is_ok());
    }
}
