use std::f64::consts::PI;

use gaplab_core::assembly::{assemble_stiffness, laplacian_pencil, BoundaryCondition, Potential2D, SymPencil, Weight};
use gaplab_core::domain::{Domain, Point, Polygon};
use gaplab_core::eigen::{dense_eigenpairs, rayleigh_quotient, smallest_eigenpairs, EigenOptions};
use gaplab_core::lab::collapse::{collapse_theorem1, CollapseOptions};
use gaplab_core::lab::gap::{dirichlet_spectrum, fundamental_gap, fundamental_gap_with, rectangle_gap_exact, GapOptions};
use gaplab_core::lab::modulus::{check_modulus_continuity, check_modulus_convexity, log_concavity_segments, sample_pairs};
use gaplab_core::lab::props::{prop2_identity_interval, prop4_sum_bound_check, random_family};
use gaplab_core::lab::suites::lavine_suite;
use gaplab_core::mesh::{mesh_triangle_over_base, rectangle_mesh};
use gaplab_core::oned::{schrodinger_eigs_1d, Profile1D};
use proptest::prelude::*;

const PI2: f64 = PI * PI;

fn small_pencil(nx: usize, ny: usize, bc: BoundaryCondition, w: &[f64]) -> SymPencil {
    let m = rectangle_mesh(1.0, 0.7, nx, ny).unwrap();
    let w: Vec<f64> = (0..m.num_vertices()).map(|i| w[i % w.len()]).collect();
    laplacian_pencil(&m, bc, &Weight::nodal(w).unwrap(), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stiffness_is_linear_in_the_weight(
        w1 in prop::collection::vec(0.1f64..5.0, 16),
        w2 in prop::collection::vec(0.1f64..5.0, 16),
        a in 0.0f64..3.0, b in 0.0f64..3.0,
    ) {
        let m = rectangle_mesh(1.0, 1.0, 3, 3).unwrap();
        let k = |w: Vec<f64>| assemble_stiffness(&m, &Weight::nodal(w).unwrap()).unwrap().to_dense();
        let mix: Vec<f64> = w1.iter().zip(&w2).map(|(x, y)| a * x + b * y + 1e-3).collect();
        let (k1, k2, km) = (k(w1), k(w2), k(mix));
        let k0 = assemble_stiffness(&m, &Weight::Uniform).unwrap().to_dense();
        for i in 0..km.len() {
            prop_assert!((km[i] - (a * k1[i] + b * k2[i] + 1e-3 * k0[i])).abs() < 1e-10);
        }
    }

    #[test]
    fn rayleigh_quotient_bounds_the_ground_state(v in prop::collection::vec(-1.0f64..1.0, 25)) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let p = small_pencil(6, 6, BoundaryCondition::Dirichlet, &[1.0]);
        let l1 = smallest_eigenpairs(&p, 1, &EigenOptions::default()).unwrap().eigenvalues[0];
        prop_assert!(rayleigh_quotient(&p, &v).unwrap() >= l1 * (1.0 - 1e-12));
    }

    #[test]
    fn lanczos_matches_dense(
        nx in 3usize..12, ny in 3usize..10,
        w in prop::collection::vec(0.2f64..4.0, 1..7),
        neumann in any::<bool>(), seed in any::<u64>(),
    ) {
        let bc = if neumann { BoundaryCondition::Neumann } else { BoundaryCondition::Dirichlet };
        let p = small_pencil(nx, ny, bc, &w);
        prop_assume!(p.dim() <= 200 && p.dim() > 6);
        let opts = EigenOptions { seed, ..Default::default() };
        let a = smallest_eigenpairs(&p, 5, &opts).unwrap().eigenvalues;
        let b = dense_eigenpairs(&p, 5).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * y.abs().max(1.0), "{} vs {}", x, y);
        }
    }

    #[test]
    fn constant_potential_shifts_the_spectrum(c in -50.0f64..50.0) {
        let m = rectangle_mesh(1.0, 1.0, 6, 6).unwrap();
        let free = laplacian_pencil(&m, BoundaryCondition::Dirichlet, &Weight::Uniform, None).unwrap();
        let v = Potential2D::new(vec![c; m.num_vertices()]).unwrap();
        let shifted = laplacian_pencil(&m, BoundaryCondition::Dirichlet, &Weight::Uniform, Some(&v)).unwrap();
        let opts = EigenOptions::default();
        let a = smallest_eigenpairs(&free, 3, &opts).unwrap().eigenvalues;
        let b = smallest_eigenpairs(&shifted, 3, &opts).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((y - x - c).abs() < 1e-8 * (1.0 + x.abs()));
        }
        let s0 = schrodinger_eigs_1d(&Profile1D::constant(1.0, 0.0), BoundaryCondition::Neumann, 64, 2).unwrap();
        let s1 = schrodinger_eigs_1d(&Profile1D::constant(1.0, c), BoundaryCondition::Neumann, 64, 2).unwrap();
        prop_assert!((s1.eigenvalues[1] - s0.eigenvalues[1] - c).abs() < 1e-8 * (1.0 + c.abs()));
    }

    #[test]
    fn galerkin_refinement_lowers_dirichlet_eigenvalues(x in 0.5f64..0.9, y in 0.3f64..0.85) {
        let apex = Point::new(x, y);
        prop_assume!(apex.norm() <= 1.0);
        let coarse = mesh_triangle_over_base(apex, 8, 4).unwrap();
        let fine = coarse.refine();
        let opts = EigenOptions::default();
        let a = dirichlet_spectrum(&coarse, 3, None, &opts).unwrap().eigenvalues;
        let b = dirichlet_spectrum(&fine, 3, None, &opts).unwrap().eigenvalues;
        for (c, f) in a.iter().zip(&b) {
            prop_assert!(f <= &(c * (1.0 + 1e-10)));
        }
    }

    #[test]
    fn gap_function_is_scale_invariant(a in 0.2f64..5.0, r in 0.05f64..1.0, t in 0.1f64..10.0) {
        let b = a * r;
        let x = rectangle_gap_exact(a, b).unwrap();
        let y = rectangle_gap_exact(t * a, t * b).unwrap();
        prop_assert!((x.xi - y.xi).abs() <= 1e-12 * x.xi);
        prop_assert!((y.gap * t * t - x.gap).abs() <= 1e-12 * x.gap);
    }

    #[test]
    fn modulus_reports_ignore_pair_orientation(seed in any::<u64>(), k in 0.5f64..3.0) {
        let m = rectangle_mesh(1.0, 1.0, 5, 5).unwrap();
        let pts = m.vertices();
        let f: Vec<f64> = pts.iter().map(|p| (k * p.x).sin() + p.y * p.y).collect();
        let idx: Vec<usize> = (0..pts.len()).collect();
        let pairs = sample_pairs(pts, &idx, 6, 50, seed);
        let swapped: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (j, i)).collect();
        let eta = |s: f64| (k + 2.0) * s;
        prop_assert_eq!(
            check_modulus_continuity(pts, &f, eta, &pairs, 1e-12),
            check_modulus_continuity(pts, &f, eta, &swapped, 1e-12)
        );
        let omega = |s: f64| -k * s;
        prop_assert_eq!(
            check_modulus_convexity(&m, &f, omega, &pairs, 1e-12).unwrap(),
            check_modulus_convexity(&m, &f, omega, &swapped, 1e-12).unwrap()
        );
    }

    #[test]
    fn eigenvalue_sum_bound_holds(k in 1usize..5, seed in any::<u64>(), w in prop::collection::vec(0.3f64..3.0, 1..5)) {
        let p = small_pencil(7, 5, BoundaryCondition::Neumann, &w);
        let opts = EigenOptions::default();
        let ground = smallest_eigenpairs(&p, 1, &opts).unwrap().eigenvectors.remove(0);
        let fam = random_family(&p, k, &ground, seed).unwrap();
        prop_assert!(prop4_sum_bound_check(&p, &fam, &opts).unwrap().holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lavine_bounds_hold(seed in any::<u64>(), r in 0.5f64..3.0) {
        let rep = lavine_suite(4, r, seed).unwrap();
        prop_assert_eq!(rep.violations, 0);
        prop_assert!(rep.equality_error.0 < 1e-6 && rep.equality_error.1 < 1e-6);
    }
}

#[test]
fn fem_gap_is_similarity_invariant() {
    let base = Polygon::rectangle(1.0, 1.0).unwrap();
    let g1 = fundamental_gap(&Domain::Polygon(base.clone()), 4).unwrap();
    for t in [0.5, 2.0] {
        let gt = fundamental_gap(&Domain::Polygon(base.scaled(t).unwrap()), 4).unwrap();
        let tol = (g1.tolerance(0.0) + gt.tolerance(0.0)) * g1.d * g1.d;
        assert!((g1.xi - gt.xi).abs() <= tol.max(1e-9 * g1.xi), "{} vs {}", g1.xi, gt.xi);
        assert!((gt.lambda1 * t * t - g1.lambda1).abs() < 1e-8 * g1.lambda1);
    }
    let x = rectangle_gap_exact(1.0, 1.0).unwrap().xi;
    for t in [0.5, 2.0] {
        assert!((rectangle_gap_exact(t, t).unwrap().xi - x).abs() <= 1e-6 * x);
    }
}

#[test]
fn dirichlet_domain_monotonicity() {
    let sq = fundamental_gap(&Domain::rectangle(1.0, 1.0).unwrap(), 4).unwrap();
    let h = 0.75f64.sqrt();
    let tri = Polygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)]).unwrap();
    let t = fundamental_gap(&Domain::Polygon(tri), 4).unwrap();
    assert!(sq.lambda1 < t.lambda1);
    assert!((sq.lambda1 - 2.0 * PI2).abs() < 1e-4);
}

#[test]
fn identity_residual_decreases_under_refinement() {
    // Finest-level rows, without extrapolation.
    let v = Profile1D::from_fn(1.0, 1024, |x| 15.0 * (x - 0.35).powi(2));
    let diff = |n: usize| -> f64 {
        let rows = prop2_identity_interval(&v, 3, n).unwrap();
        rows.iter().map(|r| r.difference.abs()).fold(0.0, f64::max)
    };
    let (a, b) = (diff(16), diff(32));
    assert!(a > 0.0 && b < a, "{a} {b}");
    assert!((a / b).log2() >= 1.0, "order {}", (a / b).log2());
}

#[test]
fn collapse_errors_shrink_with_epsilon() {
    let phi = Profile1D::from_fn(1.0, 1024, |x| 2.0 * (x - 0.5).powi(2));
    let eps = [0.2, 0.1, 0.05, 0.025];
    let opts = CollapseOptions { nx: 64, ny: 2, ..Default::default() };
    let t = collapse_theorem1(&phi, 1, &eps, &opts).unwrap();
    let e: Vec<f64> = t.rows.iter().map(|r| r.errors[1]).collect();
    for w in e.windows(2) {
        assert!(w[1] <= 1.1 * w[0], "{e:?}");
    }
    assert!(e[3] < 0.02 * t.reference[1], "{e:?}");
}

#[test]
fn log_concavity_violation_is_detected() {
    // exp(sin) oscillates in log: not log-concave.
    let d = Domain::rectangle(1.0, 1.0).unwrap();
    let mesh = rectangle_mesh(1.0, 1.0, 32, 32).unwrap();
    let bumpy: Vec<f64> = mesh.vertices().iter().map(|p| (3.0 * (8.0 * p.x).sin()).exp()).collect();
    let segs: Vec<(Point, Point)> = (0..40)
        .map(|i| {
            let y = 0.2 + 0.015 * i as f64;
            (Point::new(0.2 + 0.01 * i as f64, y), Point::new(0.6 + 0.005 * i as f64, y))
        })
        .collect();
    let r = log_concavity_segments(&d, &mesh, &bumpy, &segs, 0.05, 1e-3).unwrap();
    assert!(!r.holds && r.margin < -0.1, "{r:?}");
    // A log-concave field on the same segments passes.
    let good: Vec<f64> = mesh.vertices().iter().map(|p| (PI * p.x).sin() * (PI * p.y).sin() + 1e-12).collect();
    assert!(log_concavity_segments(&d, &mesh, &good, &segs, 0.05, 1e-3).unwrap().holds);
    // Segments reaching into the boundary layer are refused.
    let out = [(Point::new(0.01, 0.5), Point::new(0.5, 0.5))];
    assert!(log_concavity_segments(&d, &mesh, &good, &out, 0.05, 1e-3).is_err());
}

#[test]
fn convex_potential_raises_the_ac_margin() {
    let sq = Domain::rectangle(1.0, 1.0).unwrap();
    let bowl = |p: Point| 20.0 * ((p.x - 0.5).powi(2) + (p.y - 0.5).powi(2));
    let g = fundamental_gap_with(&sq, &GapOptions::levels(3), Some(&bowl)).unwrap();
    assert!(g.gap() >= 3.0 * PI2 / (g.d * g.d));
}
