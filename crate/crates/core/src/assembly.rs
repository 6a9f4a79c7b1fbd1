//! Piecewise-linear finite-element matrices for the weighted quadratic forms
//! `∫ |∇u|² w` and `∫ u² w`, plus Schrödinger potentials.
//!
//! All element integrals use the three-edge-midpoint rule (exact for
//! polynomials of degree two). Weights and potentials are nodal values,
//! interpolated linearly inside each triangle.

use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::{barycentric_gradients, TriMesh};
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Density `e^{−φ}` of the reference measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Uniform,
    Nodal(Vec<f64>),
}

impl Weight {
    pub fn nodal(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid_arg("weights must be finite and nonnegative"));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(Error::invalid_arg("weight is identically zero"));
        }
        Ok(Weight::Nodal(values))
    }

    fn check(&self, mesh: &TriMesh) -> Result<()> {
        match self {
            Weight::Nodal(v) if v.len() != mesh.num_vertices() => {
                Err(Error::DimensionMismatch { expected: mesh.num_vertices(), got: v.len() })
            }
            _ => Ok(()),
        }
    }

    #[inline]
    fn at(&self, v: usize) -> f64 {
        match self {
            Weight::Uniform => 1.0,
            Weight::Nodal(w) => w[v],
        }
    }
}

/// Nodal values of a Schrödinger potential `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential2D(pub Vec<f64>);

impl Potential2D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_arg("potential values must be finite"));
        }
        Ok(Potential2D(values))
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

const MIDPOINT_BARY: [[f64; 3]; 3] = [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]];

/// `K_ij = Σ_T area(T) w̄_T ∇λ_i·∇λ_j`, with `w̄_T` the midpoint-rule mean of `w`.
pub fn assemble_stiffness(mesh: &TriMesh, w: &Weight) -> Result<CsrMatrix> {
    w.check(mesh)?;
    let mut b = TripletBuilder::with_capacity(mesh.num_vertices(), 9 * mesh.num_triangles());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let grads = barycentric_gradients(tri.map(|v| mesh.vertices()[v]));
        let area = mesh.triangle_area(t);
        let wbar = MIDPOINT_BARY
            .iter()
            .map(|q| (0..3).map(|k| q[k] * w.at(tri[k])).sum::<f64>())
            .sum::<f64>()
            / 3.0;
        for i in 0..3 {
            for j in 0..3 {
                b.push(tri[i], tri[j], area * wbar * grads[i].dot(grads[j]));
            }
        }
    }
    Ok(b.build())
}

fn assemble_weighted_mass(mesh: &TriMesh, at: impl Fn(usize) -> f64) -> CsrMatrix {
    let mut b = TripletBuilder::with_capacity(mesh.num_vertices(), 9 * mesh.num_triangles());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.triangle_area(t);
        let mut local = [[0.0; 3]; 3];
        for q in &MIDPOINT_BARY {
            let wq: f64 = (0..3).map(|k| q[k] * at(tri[k])).sum();
            for i in 0..3 {
                for j in 0..3 {
                    local[i][j] += q[i] * q[j] * wq;
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                b.push(tri[i], tri[j], area / 3.0 * local[i][j]);
            }
        }
    }
    b.build()
}

/// `M_ij = Σ_T ∫_T λ_i λ_j w`.
pub fn assemble_mass(mesh: &TriMesh, w: &Weight) -> Result<CsrMatrix> {
    w.check(mesh)?;
    Ok(assemble_weighted_mass(mesh, |v| w.at(v)))
}

/// `P_ij = Σ_T ∫_T λ_i λ_j V`; may be indefinite.
pub fn assemble_potential(mesh: &TriMesh, v: &Potential2D) -> Result<CsrMatrix> {
    if v.0.len() != mesh.num_vertices() {
        return Err(Error::DimensionMismatch { expected: mesh.num_vertices(), got: v.0.len() });
    }
    Ok(assemble_weighted_mass(mesh, |i| v.0[i]))
}

/// Symmetric pencil `A x = λ M x` over the free degrees of freedom of a mesh.
#[derive(Debug, Clone)]
pub struct SymPencil {
    pub a: CsrMatrix,
    pub m: CsrMatrix,
    /// Mesh vertex → degree of freedom, `None` when eliminated.
    pub dof_map: Vec<Option<usize>>,
    /// A number no larger than the smallest eigenvalue (used to place shifts).
    pub spectrum_floor: f64,
}

impl SymPencil {
    pub fn new(a: CsrMatrix, m: CsrMatrix) -> Result<Self> {
        if a.dim() != m.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: m.dim() });
        }
        let n = a.dim();
        Ok(SymPencil { a, m, dof_map: (0..n).map(Some).collect(), spectrum_floor: 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.spectrum_floor = floor;
        self
    }

    /// Scatters a DOF vector onto all mesh vertices (eliminated vertices get `fill`).
    pub fn expand(&self, x: &[f64], fill: f64) -> Vec<f64> {
        self.dof_map.iter().map(|d| d.map_or(fill, |i| x[i])).collect()
    }

    /// Gathers the DOF entries of a vertex vector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (v, d) in self.dof_map.iter().enumerate() {
            if let Some(i) = d {
                out[*i] = full[v];
            }
        }
        out
    }

    /// Drops degrees of freedom whose mass diagonal vanishes (vertices
    /// outside the support of a degenerate weight).
    pub fn restricted_to_support(self) -> Result<Self> {
        let diag = self.m.diagonal();
        let scale = diag.iter().copied().fold(0.0, f64::max);
        let mut keep = vec![None; self.dim()];
        let mut next = 0;
        for (i, d) in diag.iter().enumerate() {
            if *d > 1e-300_f64.max(1e-15 * scale) {
                keep[i] = Some(next);
                next += 1;
            }
        }
        if next == 0 {
            return Err(Error::EmptyInterior);
        }
        let dof_map = self.dof_map.iter().map(|d| d.and_then(|i| keep[i])).collect();
        Ok(SymPencil {
            a: self.a.principal_submatrix(&keep, next),
            m: self.m.principal_submatrix(&keep, next),
            dof_map,
            spectrum_floor: self.spectrum_floor,
        })
    }
}

/// Eliminates boundary-marked vertices.
pub fn apply_dirichlet(a: CsrMatrix, m: CsrMatrix, mesh: &TriMesh) -> Result<SymPencil> {
    let n = mesh.num_vertices();
    if a.dim() != n || m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.dim().min(m.dim()) });
    }
    let mut keep = vec![None; n];
    let mut next = 0;
    for (v, slot) in keep.iter_mut().enumerate() {
        if !mesh.is_boundary(v) {
            *slot = Some(next);
            next += 1;
        }
    }
    if next == 0 {
        return Err(Error::EmptyInterior);
    }
    Ok(SymPencil {
        a: a.principal_submatrix(&keep, next),
        m: m.principal_submatrix(&keep, next),
        dof_map: keep,
        spectrum_floor: 0.0,
    })
}

/// The Neumann condition is natural: the pencil is the assembled pair itself.
pub fn apply_neumann(a: CsrMatrix, m: CsrMatrix) -> Result<SymPencil> {
    SymPencil::new(a, m)
}

/// Assembles `(K_w + P_V, M_w)` with the given boundary condition. Vertices
/// outside the support of a degenerate weight are dropped under Neumann.
pub fn laplacian_pencil(
    mesh: &TriMesh,
    bc: BoundaryCondition,
    weight: &Weight,
    potential: Option<&Potential2D>,
) -> Result<SymPencil> {
    let mut a = assemble_stiffness(mesh, weight)?;
    let m = assemble_mass(mesh, weight)?;
    let mut floor = 0.0;
    if let Some(v) = potential {
        if !matches!(weight, Weight::Uniform) {
            return Err(Error::invalid_arg("potentials are only supported with the uniform weight"));
        }
        a = a.add_scaled(&assemble_potential(mesh, v)?, 1.0)?;
        floor = v.min().min(0.0);
    }
    let pencil = match bc {
        BoundaryCondition::Dirichlet => apply_dirichlet(a, m, mesh)?,
        BoundaryCondition::Neumann => match weight {
            Weight::Uniform => apply_neumann(a, m)?,
            Weight::Nodal(_) => apply_neumann(a, m)?.restricted_to_support()?,
        },
    };
    Ok(pencil.with_floor(floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Point, Polygon};
    use crate::linalg::EnvelopeLdl;
    use crate::mesh::{rectangle_mesh, triangulate};

    fn unit_right_triangle() -> TriMesh {
        TriMesh::new(
            alloc::vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            alloc::vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn element_stiffness_rows_sum_to_zero() {
        let k = assemble_stiffness(&unit_right_triangle(), &Weight::Uniform).unwrap();
        let expected = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k.get(i, j) - expected[i][j]).abs() < 1e-15);
            }
            assert!(k.row(i).map(|(_, v)| v).sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn linear_function_energy_is_exact() {
        let mesh = triangulate(&Polygon::rectangle(1.0, 1.0).unwrap(), 0.2).unwrap();
        let k = assemble_stiffness(&mesh, &Weight::Uniform).unwrap();
        let x: Vec<f64> = mesh.vertices().iter().map(|p| p.x).collect();
        assert!((k.form(&x, &x) - 1.0).abs() < 1e-12);
        assert!(k.asymmetry() <= 1e-12 * k.max_abs());
    }

    #[test]
    fn weight_scaling_is_linear() {
        let mesh = rectangle_mesh(1.0, 1.0, 4, 4).unwrap();
        let k1 = assemble_stiffness(&mesh, &Weight::Uniform).unwrap();
        let k2 = assemble_stiffness(&mesh, &Weight::nodal(alloc::vec![2.0; mesh.num_vertices()]).unwrap()).unwrap();
        let m1 = assemble_mass(&mesh, &Weight::Uniform).unwrap();
        let m2 = assemble_mass(&mesh, &Weight::nodal(alloc::vec![2.0; mesh.num_vertices()]).unwrap()).unwrap();
        for (a, b) in k1.triplets().iter().zip(k2.triplets()) {
            assert_eq!(2.0 * a.2, b.2);
        }
        for (a, b) in m1.triplets().iter().zip(m2.triplets()) {
            assert_eq!(2.0 * a.2, b.2);
        }
    }

    #[test]
    fn mass_reproduces_area_and_constant_potential() {
        let mesh = triangulate(&Polygon::regular(6, 1.0).unwrap(), 0.3).unwrap();
        let m = assemble_mass(&mesh, &Weight::Uniform).unwrap();
        let ones = alloc::vec![1.0; mesh.num_vertices()];
        assert!((m.form(&ones, &ones) - mesh.area()).abs() < 1e-12);
        let p0 = assemble_potential(&mesh, &Potential2D(alloc::vec![0.0; mesh.num_vertices()])).unwrap();
        assert_eq!(p0.max_abs(), 0.0);
        let p3 = assemble_potential(&mesh, &Potential2D(alloc::vec![3.0; mesh.num_vertices()])).unwrap();
        for (a, b) in m.triplets().iter().zip(p3.triplets()) {
            assert!((3.0 * a.2 - b.2).abs() < 1e-15);
        }
        assert!(assemble_mass(&mesh, &Weight::Nodal(alloc::vec![1.0; 3])).is_err());
    }

    #[test]
    fn dirichlet_elimination() {
        let mesh = rectangle_mesh(1.0, 0.1, 8, 2).unwrap();
        let p = laplacian_pencil(&mesh, BoundaryCondition::Dirichlet, &Weight::Uniform, None).unwrap();
        assert_eq!(p.dim(), mesh.num_interior());
        assert_eq!(p.dim(), 7);
        assert!(EnvelopeLdl::factor(&p.m).is_ok());
        let all_boundary = rectangle_mesh(1.0, 1.0, 1, 1).unwrap();
        assert!(matches!(
            laplacian_pencil(&all_boundary, BoundaryCondition::Dirichlet, &Weight::Uniform, None),
            Err(Error::EmptyInterior)
        ));
    }

    #[test]
    fn neumann_kernel_contains_constants() {
        let mesh = triangulate(&Polygon::equilateral(), 0.1).unwrap();
        let p = laplacian_pencil(&mesh, BoundaryCondition::Neumann, &Weight::Uniform, None).unwrap();
        let ones = alloc::vec![1.0; p.dim()];
        let r = p.a.mul_vec(&ones);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
    }
}
