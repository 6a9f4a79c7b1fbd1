//! Reference values computed independently of the solvers: Bessel zeros,
//! closed-form rectangle and interval spectra, element integrals.

use std::f64::consts::PI;

use gaplab_core::assembly::{assemble_mass, assemble_stiffness, laplacian_pencil, BoundaryCondition, Weight};
use gaplab_core::domain::{Domain, GraphDomain, Point, Polygon};
use gaplab_core::eigen::{observed_order, rayleigh_quotient, smallest_eigenpairs, EigenOptions};
use gaplab_core::lab::collapse::{collapse_with_weight, CollapseOptions};
use gaplab_core::lab::gap::{fundamental_gap, fundamental_gap_with, rectangle_gap_exact, GapOptions};
use gaplab_core::mesh::{rectangle_mesh, TriMesh};
use gaplab_core::oned::{exact_interval_eigs, schrodinger_eigs_1d, schrodinger_fd, schrodinger_pencil, Profile1D};

const PI2: f64 = PI * PI;

/// First zeros of J₀ and J₁ (Abramowitz & Stegun table 9.5).
const J01: f64 = 2.404_825_557_695_773;
const J11: f64 = 3.831_705_970_207_512;

#[test]
fn disk_eigenvalues_are_bessel_zeros() {
    let disk = Domain::Polygon(Polygon::regular(64, 1.0).unwrap());
    let g = fundamental_gap_with(&disk, &GapOptions::levels(3), None).unwrap();
    assert!((g.lambda1 - J01 * J01).abs() / (J01 * J01) < 0.01, "{}", g.lambda1);
    assert!((g.lambda2 - J11 * J11).abs() / (J11 * J11) < 0.01, "{}", g.lambda2);
}

#[test]
fn single_element_integrals() {
    let tri = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.5, 1.5)];
    let area = 1.5;
    let mesh = TriMesh::new(tri.to_vec(), vec![[0, 1, 2]]).unwrap();
    let m = assemble_mass(&mesh, &Weight::Uniform).unwrap();
    let k = assemble_stiffness(&mesh, &Weight::Uniform).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { area / 6.0 } else { area / 12.0 };
            assert!((m.get(i, j) - want).abs() < 1e-14, "M[{i}][{j}]");
        }
        // Constants are in the kernel of the stiffness.
        assert!((0..3).map(|j| k.get(i, j)).sum::<f64>().abs() < 1e-14);
    }
    // ∫|∇x|² = area.
    let x = [0.0, 2.0, 0.5];
    assert!((k.form(&x, &x) - area).abs() < 1e-13);
    // A constant weight c scales both matrices by c.
    let k3 = assemble_stiffness(&mesh, &Weight::nodal(vec![3.0; 3]).unwrap()).unwrap();
    assert!((k3.get(0, 1) - 3.0 * k.get(0, 1)).abs() < 1e-14);
}

#[test]
fn neumann_quotient_of_linear_function() {
    // ∫(1)² / ∫(x − 1/2)² = 12 on [0, 1].
    let n = 400;
    let p = schrodinger_pencil(&Profile1D::constant(1.0, 0.0), BoundaryCondition::Neumann, n).unwrap();
    let lin: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64 - 0.5).collect();
    assert!((rayleigh_quotient(&p, &lin).unwrap() - 12.0).abs() < 1e-3);
    let p2 = laplacian_pencil(&rectangle_mesh(1.0, 1.0, 8, 8).unwrap(), BoundaryCondition::Neumann, &Weight::Uniform, None)
        .unwrap();
    let m = rectangle_mesh(1.0, 1.0, 8, 8).unwrap();
    let lin: Vec<f64> = m.vertices().iter().map(|p| p.x - 0.5).collect();
    // P1 integrates the gradient exactly, the mass of x² exactly with the consistent matrix.
    assert!((rayleigh_quotient(&p2, &lin).unwrap() - 12.0).abs() < 1e-10);
}

#[test]
fn rectangle_closed_form() {
    for (a, b) in [(1.0, 1.0), (2.0, 1.0), (3.0, 0.5)] {
        let r = rectangle_gap_exact(a, b).unwrap();
        assert!((r.eigenvalues[0] - PI2 * (1.0 / (a * a) + 1.0 / (b * b))).abs() < 1e-12);
        assert!((r.gap - 3.0 * PI2 / (a * a)).abs() < 1e-12 * r.gap);
        assert!((r.xi - 3.0 * PI2 * (1.0 + b * b / (a * a))).abs() < 1e-10);
        let g = fundamental_gap(&Domain::rectangle(a, b).unwrap(), 4).unwrap();
        assert!((g.xi - r.xi).abs() <= g.tolerance(1e-6 * r.xi) * g.d * g.d + 1e-3 * r.xi, "{} vs {}", g.xi, r.xi);
    }
    assert!(rectangle_gap_exact(1.0, 2.0).is_err());
}

#[test]
fn interval_spectra() {
    for (bc, first) in [(BoundaryCondition::Dirichlet, PI2), (BoundaryCondition::Neumann, 0.0)] {
        let e = exact_interval_eigs(2.0, bc, 3);
        assert!((e[0] - first / 4.0).abs() < 1e-12);
        let s = schrodinger_eigs_1d(&Profile1D::constant(2.0, 0.0), bc, 256, 3).unwrap();
        for (x, y) in s.eigenvalues.iter().zip(&e) {
            assert!((x - y).abs() < 1e-6 * y.max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn finite_differences_converge_at_second_order() {
    let v = Profile1D::from_fn(1.0, 4096, |x| 30.0 * (x - 0.4).powi(2));
    let lam = |n: usize| schrodinger_fd(&v, BoundaryCondition::Dirichlet, n, 2).unwrap().eigenvalues[1];
    let p = observed_order(lam(64), lam(128), lam(256));
    assert!((1.8..=2.2).contains(&p), "order {p}");
}

#[test]
fn constant_profile_collapse_is_exact_strip() {
    // Neumann spectrum of [0, 1] × [0, ε] below the first transverse mode is π²j².
    let w = Profile1D::constant(1.0, 1.0);
    let reference = vec![0.0, PI2, 4.0 * PI2];
    let opts = CollapseOptions { nx: 32, ny: 2, ..Default::default() };
    let t = collapse_with_weight(&w, 2, &[0.2, 0.1, 0.05], reference.clone(), &opts).unwrap();
    for r in &t.rows {
        assert!(r.errors[0] < 1e-9);
        assert!(r.errors[1..].iter().zip(&reference[1..]).all(|(e, x)| *e < 1e-4 * x), "{:?}", r.errors);
    }
}

#[test]
fn graph_domain_area() {
    let w = Profile1D::from_fn(1.0, 200, |x| 1.0 + x);
    let g = GraphDomain::new(w, 0.1).unwrap();
    assert!((g.area() - 0.15).abs() < 1e-12);
    let s = smallest_eigenpairs(
        &laplacian_pencil(&rectangle_mesh(1.0, 0.5, 8, 4).unwrap(), BoundaryCondition::Dirichlet, &Weight::Uniform, None)
            .unwrap(),
        1,
        &EigenOptions::default(),
    )
    .unwrap();
    // Upper bound by Galerkin: λ₁ ≥ π²(1 + 4).
    assert!(s.eigenvalues[0] >= 5.0 * PI2);
}
