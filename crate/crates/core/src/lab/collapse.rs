//! Neumann spectra of thin graph domains `{0 ≤ y ≤ ε w(x)}` against the
//! weighted one-dimensional spectrum they collapse onto.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::assembly::{laplacian_pencil, BoundaryCondition, Weight};
use crate::domain::GraphDomain;
use crate::eigen::{richardson_extrapolate, smallest_eigenpairs, EigenOptions};
use crate::mesh::mesh_graph_domain;
use crate::oned::{bakry_emery_eigs_1d, Profile1D};
use crate::{Error, Result, PI2};

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOptions {
    /// Coarse mapped mesh; one uniform refinement is added for extrapolation.
    pub nx: usize,
    pub ny: usize,
    /// Largest admissible cell aspect ratio `(L/nx) / (ε max w / ny)`, either way up.
    pub max_aspect: f64,
    /// Grid of the 1D reference solve.
    pub n_1d: usize,
    pub eigen: EigenOptions,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions { nx: 64, ny: 4, max_aspect: 32.0, n_1d: 512, eigen: EigenOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseRow {
    pub epsilon: f64,
    /// Mesh size of the finer of the two meshes.
    pub h: f64,
    /// `μ_{0,ε} … μ_{k,ε}`, extrapolated.
    pub mu: Vec<f64>,
    /// `|μ_{j,ε} − μ_j|` for `j = 0 … k`.
    pub errors: Vec<f64>,
    /// Self-reported discretization error per eigenvalue.
    pub error_estimates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseTable {
    /// The limiting values `μ_0 … μ_k`.
    pub reference: Vec<f64>,
    pub rows: Vec<CollapseRow>,
}

impl CollapseTable {
    /// `|μ_{j,ε} − μ_j| / μ_j` along the sweep.
    pub fn relative_errors(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.errors[j] / self.reference[j].abs().max(f64::MIN_POSITIVE)).collect()
    }
}

fn check_eps(eps_list: &[f64]) -> Result<()> {
    if eps_list.len() < 3 {
        return Err(Error::invalid_arg("need at least three values of epsilon"));
    }
    if eps_list.iter().any(|e| !(*e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid_arg("epsilon list must be positive and strictly decreasing"));
    }
    Ok(())
}

/// Neumann eigenvalues `μ_{0,ε} … μ_{k,ε}` of the flat Laplacian on the graph
/// domain of `w` for each `ε`, compared with `reference`.
pub fn collapse_with_weight(
    w: &Profile1D,
    k: usize,
    eps_list: &[f64],
    reference: Vec<f64>,
    opts: &CollapseOptions,
) -> Result<CollapseTable> {
    check_eps(eps_list)?;
    let top = w.max();
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let width = w.length() / opts.nx as f64;
        let height = eps * top / opts.ny as f64;
        let ratio = (width / height).max(height / width);
        if ratio > opts.max_aspect {
            return Err(Error::AspectRatio { ratio, limit: opts.max_aspect });
        }
        let domain = GraphDomain::new(w.clone(), eps)?;
        let coarse = mesh_graph_domain(&domain, opts.nx, opts.ny)?;
        let fine = coarse.refine();
        let mut spectra = Vec::with_capacity(2);
        for mesh in [&coarse, &fine] {
            let p = laplacian_pencil(mesh, BoundaryCondition::Neumann, &Weight::Uniform, None)?;
            spectra.push(smallest_eigenpairs(&p, k + 1, &opts.eigen)?.eigenvalues);
        }
        let mu: Vec<f64> = (0..=k).map(|j| richardson_extrapolate(spectra[0][j], spectra[1][j], 2)).collect();
        rows.push(CollapseRow {
            epsilon: eps,
            h: fine.h_max(),
            errors: mu.iter().zip(&reference).map(|(m, r)| (m - r).abs()).collect(),
            error_estimates: mu.iter().zip(&spectra[1]).map(|(m, f)| (m - f).abs()).collect(),
            mu,
        });
    }
    Ok(CollapseTable { reference, rows })
}

/// Collapse onto the drift Laplacian of `φ`: profile `w = e^{−φ}`, reference
/// values from the 1D weighted Neumann solver.
pub fn collapse_theorem1(phi: &Profile1D, k: usize, eps_list: &[f64], opts: &CollapseOptions) -> Result<CollapseTable> {
    let w = phi.exp_neg();
    // The 1D solver samples nodes and midpoints of the 2n grid.
    let resampled = Profile1D::from_fn(w.length(), 4 * opts.n_1d, |x| w.eval(x));
    let reference = bakry_emery_eigs_1d(&resampled, BoundaryCondition::Neumann, opts.n_1d, k + 1)?.eigenvalues;
    collapse_with_weight(&w, k, eps_list, reference, opts)
}

/// Collapse with profile `sin²(πx)`, the squared interval ground state; the
/// limits are the Dirichlet gaps `λ_{j+1} − λ_1 = ((j+1)² − 1)π²`.
pub fn collapse_corollary1(k: usize, eps_list: &[f64], opts: &CollapseOptions) -> Result<CollapseTable> {
    let samples = (16 * opts.nx).max(64);
    let w = Profile1D::from_fn(1.0, samples, |x| {
        let s = (core::f64::consts::PI * x).sin();
        s * s
    });
    let reference = (0..=k).map(|j| (((j + 1) * (j + 1)) as f64 - 1.0) * PI2).collect();
    collapse_with_weight(&w, k, eps_list, reference, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_profile_is_separable() {
        let phi = Profile1D::constant(1.0, 0.0);
        let opts = CollapseOptions { nx: 16, ny: 2, ..Default::default() };
        let t = collapse_theorem1(&phi, 1, &[0.4, 0.2, 0.1], &opts).unwrap();
        for row in &t.rows {
            assert!(row.mu[0].abs() < 1e-8);
            assert!((row.mu[1] - PI2).abs() < 1e-3, "{:?}", row.mu);
        }
    }

    #[test]
    fn guards() {
        let phi = Profile1D::constant(1.0, 0.0);
        let opts = CollapseOptions { nx: 16, ny: 2, ..Default::default() };
        assert!(collapse_theorem1(&phi, 1, &[0.4, 0.2], &opts).is_err());
        assert!(collapse_theorem1(&phi, 1, &[0.1, 0.2, 0.05], &opts).is_err());
        assert!(matches!(
            collapse_theorem1(&phi, 1, &[0.4, 0.2, 1e-4], &opts),
            Err(Error::AspectRatio { .. })
        ));
    }
}
