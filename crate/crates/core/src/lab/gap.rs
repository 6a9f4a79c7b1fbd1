use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::assembly::{laplacian_pencil, BoundaryCondition, Potential2D, SymPencil, Weight};
use crate::domain::{Domain, Point, Polygon};
use crate::eigen::{richardson_extrapolate, smallest_eigenpairs, EigenOptions, Spectrum};
use crate::lab::Field;
use crate::mesh::{mesh_graph_domain, mesh_triangle_over_base, rectangle_mesh, triangulate, TriMesh};
use crate::{Error, Result, PI2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub h: f64,
    pub dofs: usize,
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapResult {
    /// Extrapolated when `extrapolated` is set, finest-level otherwise.
    pub lambda1: f64,
    pub lambda2: f64,
    pub d: f64,
    pub xi: f64,
    pub per_level: Vec<Level>,
    pub extrapolated: bool,
    /// `|gap_extrapolated − gap_finest|`, the self-reported discretization error.
    pub error_estimate: f64,
    /// λ₂ is (numerically) degenerate on the finest mesh.
    pub cluster_flag: bool,
}

impl GapResult {
    pub fn gap(&self) -> f64 {
        self.lambda2 - self.lambda1
    }

    pub fn finest(&self) -> &Level {
        self.per_level.last().expect("at least one level")
    }

    /// `max(2·error_estimate, floor)`.
    pub fn tolerance(&self, floor: f64) -> f64 {
        (2.0 * self.error_estimate).max(floor)
    }
}

/// How the coarsest mesh of a refinement hierarchy is built.
#[derive(Debug, Clone, PartialEq)]
pub enum CoarseMesh {
    /// Per-shape default, see [`coarse_mesh`].
    Auto,
    /// Triangles only: mapped `nx × ny` mesh over the longest edge.
    OverLongestEdge { nx: usize, ny: usize },
    /// Graph domains only: mapped `nx × ny` mesh.
    Mapped { nx: usize, ny: usize },
    Given(TriMesh),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapOptions {
    pub levels: usize,
    pub coarse: CoarseMesh,
    pub eigen: EigenOptions,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { levels: 4, coarse: CoarseMesh::Auto, eigen: EigenOptions::default() }
    }
}

impl GapOptions {
    pub fn levels(levels: usize) -> Self {
        GapOptions { levels, ..Default::default() }
    }
}

/// Mapped mesh of a triangle: the longest edge is sent to the unit base, the
/// structured apex mesh is built there and mapped back by the similarity.
pub fn triangle_mesh(poly: &Polygon, nx: usize, ny: usize) -> Result<TriMesh> {
    let v = poly.vertices();
    if v.len() != 3 {
        return Err(Error::invalid_arg("triangle mesh needs a 3-vertex polygon"));
    }
    let i = (0..3)
        .max_by(|&a, &b| v[a].dist(v[(a + 1) % 3]).total_cmp(&v[b].dist(v[(b + 1) % 3])))
        .unwrap();
    let (p, q, r) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
    let e = q - p;
    let len2 = e.dot(e);
    // Complex division (r − p) / e: coordinates of the apex in the base frame.
    let rel = r - p;
    let apex = Point::new(rel.dot(e) / len2, e.cross(rel) / len2);
    let apex = Point::new(apex.x.clamp(0.0, 1.0), apex.y);
    let unit = mesh_triangle_over_base(apex, nx, ny)?;
    let mapped = unit
        .vertices()
        .iter()
        .map(|u| Point::new(p.x + u.x * e.x - u.y * e.y, p.y + u.x * e.y + u.y * e.x))
        .collect();
    TriMesh::new(mapped, unit.triangles().to_vec())
}

/// Default coarse mesh: four cells across the short side of a rectangle, an
/// `8 × 4` mapped mesh on triangles, `h = d/4` on other polygons and a
/// `16 × 2` mapped mesh on graph domains.
pub fn coarse_mesh(domain: &Domain) -> Result<TriMesh> {
    match domain {
        Domain::Rectangle { a, b } => {
            let s = a.min(*b);
            let nx = ((4.0 * a / s).round() as usize).max(2);
            let ny = ((4.0 * b / s).round() as usize).max(2);
            rectangle_mesh(*a, *b, nx, ny)
        }
        Domain::Polygon(p) if p.len() == 3 => triangle_mesh(p, 8, 4),
        Domain::Polygon(p) => triangulate(p, p.diameter() / 4.0),
        Domain::Graph(g) => mesh_graph_domain(g, 16, 2),
    }
}

pub(crate) fn coarse_for(domain: &Domain, plan: &CoarseMesh) -> Result<TriMesh> {
    match (plan, domain) {
        (CoarseMesh::Auto, _) => coarse_mesh(domain),
        (CoarseMesh::OverLongestEdge { nx, ny }, Domain::Polygon(p)) => triangle_mesh(p, *nx, *ny),
        (CoarseMesh::Mapped { nx, ny }, Domain::Graph(g)) => mesh_graph_domain(g, *nx, *ny),
        (CoarseMesh::Given(m), _) => Ok(m.clone()),
        _ => Err(Error::invalid_arg("coarse mesh plan does not fit the domain")),
    }
}

/// Uniform refinements of `coarse`, `levels` meshes in total.
pub fn hierarchy(coarse: TriMesh, levels: usize) -> Vec<TriMesh> {
    let mut out = Vec::with_capacity(levels);
    out.push(coarse);
    while out.len() < levels {
        let next = out.last().unwrap().refine();
        out.push(next);
    }
    out
}

/// Dirichlet pencil of `−Δ + V` on a mesh.
pub fn dirichlet_pencil(mesh: &TriMesh, potential: Option<Field>) -> Result<SymPencil> {
    let v = match potential {
        Some(f) => Some(Potential2D::new(mesh.vertices().iter().map(|&p| f(p)).collect())?),
        None => None,
    };
    laplacian_pencil(mesh, BoundaryCondition::Dirichlet, &Weight::Uniform, v.as_ref())
}

/// Smallest Dirichlet eigenpairs of `−Δ + V` on a mesh.
pub fn dirichlet_spectrum(mesh: &TriMesh, k: usize, potential: Option<Field>, opts: &EigenOptions) -> Result<Spectrum> {
    let p = dirichlet_pencil(mesh, potential)?;
    Ok(smallest_eigenpairs(&p, k, opts)?.with_h(mesh.h_max()))
}

/// Gap over an explicit mesh hierarchy (`meshes` ordered coarse to fine, each
/// a uniform refinement of the previous one).
pub fn gap_on_meshes(meshes: &[TriMesh], d: f64, potential: Option<Field>, opts: &EigenOptions) -> Result<GapResult> {
    if meshes.is_empty() {
        return Err(Error::invalid_arg("no meshes"));
    }
    let mut per_level = Vec::with_capacity(meshes.len());
    let mut cluster_flag = false;
    for mesh in meshes {
        let s = dirichlet_spectrum(mesh, 3, potential, opts)?;
        cluster_flag = s.clusters()[1];
        per_level.push(Level {
            h: mesh.h_max(),
            dofs: s.eigenvectors[0].len(),
            lambda1: s.eigenvalues[0],
            lambda2: s.eigenvalues[1],
        });
    }
    let fine = *per_level.last().unwrap();
    let (lambda1, lambda2, extrapolated) = if per_level.len() >= 2 {
        let coarse = per_level[per_level.len() - 2];
        (
            richardson_extrapolate(coarse.lambda1, fine.lambda1, 2),
            richardson_extrapolate(coarse.lambda2, fine.lambda2, 2),
            true,
        )
    } else {
        (fine.lambda1, fine.lambda2, false)
    };
    let error_estimate = ((lambda2 - lambda1) - (fine.lambda2 - fine.lambda1)).abs();
    Ok(GapResult {
        lambda1,
        lambda2,
        d,
        xi: d * d * (lambda2 - lambda1),
        per_level,
        extrapolated,
        error_estimate,
        cluster_flag,
    })
}

/// Dirichlet gap and gap function `ξ = d²(λ₂ − λ₁)` over `levels` uniform
/// refinements, Richardson-extrapolated from the two finest levels.
pub fn fundamental_gap(domain: &Domain, levels: usize) -> Result<GapResult> {
    fundamental_gap_with(domain, &GapOptions::levels(levels), None)
}

pub fn fundamental_gap_with(domain: &Domain, opts: &GapOptions, potential: Option<Field>) -> Result<GapResult> {
    if opts.levels < 2 {
        return Err(Error::invalid_arg("need at least two refinement levels"));
    }
    let meshes = hierarchy(coarse_for(domain, &opts.coarse)?, opts.levels);
    gap_on_meshes(&meshes, domain.diameter(), potential, &opts.eigen)
}

/// Closed-form Dirichlet data of the rectangle `[0,a] × [0,b]`, `a ≥ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleSpectrum {
    /// Sorted `π²(j²/a² + k²/b²)` for `1 ≤ j, k ≤ 4`.
    pub eigenvalues: Vec<f64>,
    pub gap: f64,
    pub xi: f64,
}

pub fn rectangle_gap_exact(a: f64, b: f64) -> Result<RectangleSpectrum> {
    if !(b > 0.0 && a >= b && a.is_finite()) {
        return Err(Error::invalid_arg("rectangle needs a >= b > 0"));
    }
    let mut eigenvalues: Vec<f64> = (1..=4)
        .flat_map(|j| (1..=4).map(move |k| PI2 * ((j * j) as f64 / (a * a) + (k * k) as f64 / (b * b))))
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let gap = eigenvalues[1] - eigenvalues[0];
    Ok(RectangleSpectrum { xi: (a * a + b * b) * gap, eigenvalues, gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rectangle() {
        let r = rectangle_gap_exact(1.0, 1.0).unwrap();
        assert!((r.eigenvalues[0] - 2.0 * PI2).abs() < 1e-12);
        assert!((r.eigenvalues[1] - 5.0 * PI2).abs() < 1e-12);
        assert!((r.xi - 6.0 * PI2).abs() < 1e-12);
        let r = rectangle_gap_exact(2.0, 1.0).unwrap();
        assert!((r.gap - 0.75 * PI2).abs() < 1e-12);
        assert!((r.xi - 3.75 * PI2).abs() < 1e-12);
        assert!(rectangle_gap_exact(1.0, 2.0).is_err());
    }

    #[test]
    fn triangle_mesh_preserves_shape() {
        let poly = Polygon::new(alloc::vec![Point::new(0.3, 0.2), Point::new(2.0, 0.5), Point::new(0.9, 1.4)]).unwrap();
        let m = triangle_mesh(&poly, 6, 3).unwrap();
        assert!((m.area() - poly.area()).abs() < 1e-12);
        for v in poly.vertices() {
            assert!(m.vertices().iter().any(|p| p.dist(*v) < 1e-12));
        }
    }

    #[test]
    fn square_gap_converges() {
        let g = fundamental_gap(&Domain::rectangle(1.0, 1.0).unwrap(), 4).unwrap();
        assert!(g.extrapolated);
        assert!((g.xi / (6.0 * PI2) - 1.0).abs() < 5e-3, "{}", g.xi);
        assert!(g.per_level.windows(2).all(|w| w[1].lambda1 <= w[0].lambda1));
    }
}
