//! The ground-state transform: `ψ_k = φ_k / φ₁` solves the drift equation
//! for the weight `φ₁²`, so the Dirichlet gaps are the weighted Neumann
//! eigenvalues; and the eigenvalue-sum bound for orthogonal test families.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{assemble_mass, assemble_stiffness, laplacian_pencil, BoundaryCondition, SymPencil, Weight};
use crate::domain::Domain;
use crate::eigen::{rayleigh_quotient, richardson_extrapolate, smallest_eigenpairs, EigenOptions};
use crate::lab::gap::{coarse_for, dirichlet_pencil, hierarchy, GapOptions};
use crate::mesh::TriMesh;
use crate::oned::{bakry_emery_eigs_1d, bakry_emery_pencil, ground_state_1d, schrodinger_eigs_1d, schrodinger_fd, Profile1D};
use crate::{Error, Result};

/// Vertices where `φ₁` is this small relative to its maximum are excluded.
pub const GROUND_STATE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Report {
    /// `‖A_w ψ − (λ_k − λ₁) M_w ψ‖ / ‖M_w ψ‖` over the sampled rows.
    pub residual: f64,
    pub gap: f64,
    pub h: f64,
    pub rows: usize,
}

/// Dirichlet eigenpairs on a mesh, scattered to all vertices (zero on the boundary).
fn dirichlet_modes(mesh: &TriMesh, k: usize, opts: &EigenOptions) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let p = dirichlet_pencil(mesh, None)?;
    let s = smallest_eigenpairs(&p, k, opts)?;
    let modes = s.eigenvectors.iter().map(|v| p.expand(v, 0.0)).collect();
    Ok((s.eigenvalues, modes))
}

fn finest_mesh(domain: &Domain, opts: &GapOptions) -> Result<Vec<TriMesh>> {
    Ok(hierarchy(coarse_for(domain, &opts.coarse)?, opts.levels))
}

/// Residual of the drift equation for `ψ_k = φ_k/φ₁` on the finest mesh of
/// the hierarchy, measured on interior vertices whose neighbours are all
/// interior.
pub fn prop1_residual_check(domain: &Domain, k: usize, opts: &GapOptions) -> Result<Prop1Report> {
    if k == 0 {
        return Err(Error::invalid_arg("k starts at 1"));
    }
    let meshes = finest_mesh(domain, opts)?;
    let mesh = meshes.last().unwrap();
    let (lambda, modes) = dirichlet_modes(mesh, k.max(2), &opts.eigen)?;
    let phi1 = &modes[0];
    let phik = &modes[k - 1];
    let top = phi1.iter().copied().fold(0.0, f64::max);
    let n = mesh.num_vertices();
    let defined: Vec<bool> = (0..n).map(|v| !mesh.is_boundary(v) && phi1[v] >= GROUND_STATE_GUARD * top).collect();
    let mut psi: Vec<f64> = (0..n).map(|v| if defined[v] { phik[v] / phi1[v] } else { 0.0 }).collect();
    // ψ is smooth up to the boundary; extend it by neighbour averages. Only
    // rows one layer in are measured, so the extension never enters.
    let nbrs = mesh.vertex_neighbors();
    for v in 0..n {
        if !defined[v] {
            let (s, c) = nbrs[v].iter().filter(|&&u| defined[u]).fold((0.0, 0), |(s, c), &u| (s + psi[u], c + 1));
            if c > 0 {
                psi[v] = s / c as f64;
            }
        }
    }
    let w = Weight::nodal(phi1.iter().map(|p| p * p).collect())?;
    let a = assemble_stiffness(mesh, &w)?;
    let m = assemble_mass(mesh, &w)?;
    let gap = lambda[k - 1] - lambda[0];
    let apsi = a.mul_vec(&psi);
    let mpsi = m.mul_vec(&psi);
    let (mut num, mut den, mut rows) = (0.0, 0.0, 0);
    for v in 0..n {
        if defined[v] && nbrs[v].iter().all(|&u| defined[u]) {
            num += (apsi[v] - gap * mpsi[v]).powi(2);
            den += mpsi[v] * mpsi[v];
            rows += 1;
        }
    }
    if rows == 0 || den == 0.0 {
        return Err(Error::EmptyInterior);
    }
    Ok(Prop1Report { residual: (num / den).sqrt(), gap, h: mesh.h_max(), rows })
}

/// The same residual on `[0, R]` with the finite-difference solver.
pub fn prop1_residual_interval(v: &Profile1D, k: usize, n: usize) -> Result<Prop1Report> {
    if k == 0 {
        return Err(Error::invalid_arg("k starts at 1"));
    }
    let s = schrodinger_fd(v, BoundaryCondition::Dirichlet, n, k.max(2))?;
    let phi1 = &s.eigenvectors[0];
    let phik = &s.eigenvectors[k - 1];
    let psi: Vec<f64> = (0..=n).map(|i| if i == 0 || i == n { 0.0 } else { phik[i] / phi1[i] }).collect();
    let mut psi = psi;
    psi[0] = psi[1];
    psi[n] = psi[n - 1];
    let w = Profile1D::new(v.length(), phi1.iter().map(|p| p * p).collect())?;
    let p = bakry_emery_pencil(&w, BoundaryCondition::Neumann, n)?;
    let gap = s.eigenvalues[k - 1] - s.eigenvalues[0];
    let x = p.restrict(&psi);
    let ax = p.a.mul_vec(&x);
    let mx = p.m.mul_vec(&x);
    let (mut num, mut den, mut rows) = (0.0, 0.0, 0);
    for i in 2..n - 1 {
        if let Some(d) = p.dof_map[i] {
            num += (ax[d] - gap * mx[d]).powi(2);
            den += mx[d] * mx[d];
            rows += 1;
        }
    }
    Ok(Prop1Report { residual: (num / den).sqrt(), gap, h: v.length() / n as f64, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop2Row {
    pub k: usize,
    /// `λ_k − λ₁`.
    pub dirichlet_gap: f64,
    /// `μ_{k−1}` of the drift Laplacian with weight `φ₁²`.
    pub mu: f64,
    pub difference: f64,
}

impl Prop2Row {
    fn new(k: usize, dirichlet_gap: f64, mu: f64) -> Self {
        Prop2Row { k, dirichlet_gap, mu, difference: dirichlet_gap - mu }
    }

    pub fn relative(&self) -> f64 {
        self.difference.abs() / self.dirichlet_gap.abs().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Report {
    /// Rows `k = 1 … k_max` after extrapolation (finest level when only one).
    pub rows: Vec<Prop2Row>,
    pub per_level: Vec<(f64, Vec<Prop2Row>)>,
}

fn prop2_rows(lambda: &[f64], mu: &[f64]) -> Vec<Prop2Row> {
    (1..=lambda.len()).map(|k| Prop2Row::new(k, lambda[k - 1] - lambda[0], mu[k - 1])).collect()
}

/// Dirichlet gaps against the weighted Neumann spectrum for `φ₁²` on the
/// same meshes.
pub fn prop2_identity_check(domain: &Domain, k: usize, opts: &GapOptions) -> Result<Prop2Report> {
    if !(2..=4).contains(&k) {
        return Err(Error::invalid_arg("prop2 check supports 2 <= k <= 4"));
    }
    let meshes = finest_mesh(domain, opts)?;
    let mut per_level = Vec::with_capacity(meshes.len());
    let mut values = Vec::with_capacity(meshes.len());
    for mesh in &meshes {
        let (lambda, modes) = dirichlet_modes(mesh, k, &opts.eigen)?;
        let w = Weight::nodal(modes[0].iter().map(|p| p * p).collect())?;
        let p = laplacian_pencil(mesh, BoundaryCondition::Neumann, &w, None)?;
        let mu = smallest_eigenpairs(&p, k, &opts.eigen)?.eigenvalues;
        per_level.push((mesh.h_max(), prop2_rows(&lambda, &mu)));
        values.push((lambda, mu));
    }
    let rows = match values.len() {
        1 => per_level[0].1.clone(),
        l => {
            let (lc, mc) = &values[l - 2];
            let (lf, mf) = &values[l - 1];
            let ex = |c: &[f64], f: &[f64]| -> Vec<f64> {
                c.iter().zip(f).map(|(a, b)| richardson_extrapolate(*a, *b, 2)).collect()
            };
            prop2_rows(&ex(lc, lf), &ex(mc, mf))
        }
    };
    Ok(Prop2Report { rows, per_level })
}

/// One-dimensional version on `[0, R]` with potential `v`: both sides
/// extrapolated from grids `n` and `2n`, the weight taken from a ground
/// state computed on the `4n` grid.
pub fn prop2_identity_interval(v: &Profile1D, k: usize, n: usize) -> Result<Vec<Prop2Row>> {
    let lambda = schrodinger_eigs_1d(v, BoundaryCondition::Dirichlet, n, k)?.eigenvalues;
    let phi1 = ground_state_1d(v, BoundaryCondition::Dirichlet, 4 * n)?;
    let w = Profile1D::new(v.length(), phi1.iter().map(|p| p * p).collect())?;
    let mu = bakry_emery_eigs_1d(&w, BoundaryCondition::Neumann, n, k)?.eigenvalues;
    Ok(prop2_rows(&lambda, &mu))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop4Report {
    /// `Σ_{j=0}^{k} μ_j`.
    pub lhs: f64,
    /// `Σ_{j=1}^{k} RQ(ξ_j)`.
    pub rhs: f64,
    pub holds: bool,
    pub eigenvalues: Vec<f64>,
    pub quotients: Vec<f64>,
}

/// Off-diagonal Gram entries above this (after normalization) are rejected.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

fn m_norm(p: &SymPencil, v: &[f64]) -> f64 {
    p.m.form(v, v).max(0.0).sqrt()
}

/// Eigenvalue-sum bound for `k` test vectors. The family must be pairwise
/// M-orthogonal and M-orthogonal to the lowest mode (index 0 in
/// [`Error::NotOrthogonal`], test vectors numbered from 1).
pub fn prop4_sum_bound_check(pencil: &SymPencil, test_vectors: &[Vec<f64>], opts: &EigenOptions) -> Result<Prop4Report> {
    let k = test_vectors.len();
    if k == 0 || k + 1 > pencil.dim() {
        return Err(Error::invalid_arg("need 1 <= k < pencil dimension test vectors"));
    }
    let mut norms = Vec::with_capacity(k);
    for v in test_vectors {
        if v.len() != pencil.dim() {
            return Err(Error::DimensionMismatch { expected: pencil.dim(), got: v.len() });
        }
        let n = m_norm(pencil, v);
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        norms.push(n);
    }
    let s = smallest_eigenpairs(pencil, k + 1, opts)?;
    let ground = &s.eigenvectors[0];
    for (j, v) in test_vectors.iter().enumerate() {
        let c = pencil.m.form(ground, v) / norms[j];
        if c.abs() > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { i: 0, j: j + 1, value: c });
        }
        for (i, u) in test_vectors.iter().enumerate().take(j) {
            let g = pencil.m.form(u, v) / (norms[i] * norms[j]);
            if g.abs() > ORTHOGONALITY_TOL {
                return Err(Error::NotOrthogonal { i: i + 1, j: j + 1, value: g });
            }
        }
    }
    let quotients = test_vectors.iter().map(|v| rayleigh_quotient(pencil, v)).collect::<Result<Vec<_>>>()?;
    let lhs: f64 = s.eigenvalues.iter().sum();
    let rhs: f64 = quotients.iter().sum();
    Ok(Prop4Report { lhs, rhs, holds: lhs <= rhs + 1e-9, eigenvalues: s.eigenvalues, quotients })
}

/// M-orthonormalizes `raw` against `against` and itself (two Gram-Schmidt passes).
pub fn m_orthonormalize(pencil: &SymPencil, raw: Vec<Vec<f64>>, against: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(raw.len());
    for mut v in raw {
        for _ in 0..2 {
            for u in against.iter().chain(out.iter()) {
                let c = pencil.m.form(u, &v) / pencil.m.form(u, u);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let n = m_norm(pencil, &v);
        if !(n > 1e-12) {
            return Err(Error::ZeroNorm);
        }
        v.iter_mut().for_each(|a| *a /= n);
        out.push(v);
    }
    Ok(out)
}

/// `k` random vectors, M-orthonormal and orthogonal to `ground`.
pub fn random_family(pencil: &SymPencil, k: usize, ground: &[f64], seed: u64) -> Result<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = (0..k).map(|_| (0..pencil.dim()).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    m_orthonormalize(pencil, raw, &[ground.to_vec()])
}
