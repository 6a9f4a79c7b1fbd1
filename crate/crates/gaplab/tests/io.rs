use std::io::Cursor;

use gaplab::io::{mesh_from_reader, mesh_to_string, profile_from_reader, profile_to_csv, triplets_to_string, SpectrumRecord};
use gaplab::spec::{DomainSpec, PotentialSpec};
use gaplab_core::assembly::{laplacian_pencil, BoundaryCondition, Weight};
use gaplab_core::domain::{Domain, Point};
use gaplab_core::eigen::{smallest_eigenpairs, EigenOptions};
use gaplab_core::mesh::{rectangle_mesh, subdivide_triangle};
use gaplab_core::oned::Profile1D;
use proptest::prelude::*;

#[test]
fn mesh_round_trip() {
    let m = subdivide_triangle([Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.3, 0.7)], 5).unwrap();
    let s = mesh_to_string(&m);
    assert!(s.starts_with(&format!("vertices {}\n", m.num_vertices())));
    let back = mesh_from_reader(Cursor::new(s.clone())).unwrap();
    assert_eq!(back.vertices(), m.vertices());
    assert_eq!(back.triangles(), m.triangles());
    assert_eq!(mesh_to_string(&back), s);
}

#[test]
fn malformed_meshes_are_rejected() {
    for bad in ["", "vertices 2\n0 0\n", "vertices 1\n0 0\ntriangles 1\n0 0 1\n", "nodes 3\n"] {
        assert!(mesh_from_reader(Cursor::new(bad)).is_err(), "{bad:?}");
    }
}

#[test]
fn triplets_are_sorted_and_complete() {
    let m = rectangle_mesh(1.0, 1.0, 3, 3).unwrap();
    let p = laplacian_pencil(&m, BoundaryCondition::Neumann, &Weight::Uniform, None).unwrap();
    let s = triplets_to_string(&p.a);
    let keys: Vec<(usize, usize)> = s
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<usize>());
            (it.next().unwrap().unwrap(), it.next().unwrap().unwrap())
        })
        .collect();
    assert_eq!(keys.len(), p.a.nnz());
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    let sum: f64 = s.lines().map(|l| l.rsplit(' ').next().unwrap().parse::<f64>().unwrap()).sum();
    // Constants lie in the kernel of the Neumann stiffness.
    assert!(sum.abs() < 1e-10);
}

#[test]
fn spectrum_record_round_trip() {
    let m = rectangle_mesh(1.0, 1.0, 6, 6).unwrap();
    let p = laplacian_pencil(&m, BoundaryCondition::Dirichlet, &Weight::Uniform, None).unwrap();
    let s = smallest_eigenpairs(&p, 3, &EigenOptions::default()).unwrap().with_h(m.h_max());
    let rec = SpectrumRecord::from(&s);
    let text = serde_json::to_string(&rec).unwrap();
    for key in ["eigenvalues", "residuals", "h", "seed", "iterations"] {
        assert!(text.contains(&format!("\"{key}\"")), "{key}");
    }
    assert_eq!(serde_json::from_str::<SpectrumRecord>(&text).unwrap(), rec);
}

#[test]
fn profile_csv_validation() {
    assert!(profile_from_reader(Cursor::new("0,1\n0.5,2\n1,3\n")).is_ok());
    assert!(profile_from_reader(Cursor::new("# comment\nx,value\n0,1\n0.5,2\n1,3\n")).is_ok());
    assert!(profile_from_reader(Cursor::new("0,1\n0.4,2\n1,3\n")).is_err());
    assert!(profile_from_reader(Cursor::new("0,1\n1,3\n")).is_err());
    assert!(profile_from_reader(Cursor::new("0,1\n0.5,x\n1,3\n")).is_err());
    assert!(profile_from_reader(Cursor::new("0,1,2\n0.5,2,2\n1,3,3\n")).is_err());
}

#[test]
fn weight_file_spec_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let w = Profile1D::from_fn(2.0, 40, |x| 1.0 + x * (2.0 - x));
    std::fs::write(dir.path().join("w.csv"), profile_to_csv(&w)).unwrap();
    let spec_path = dir.path().join("graph.json");
    std::fs::write(&spec_path, r#"{"type":"graph","L":2,"epsilon":0.1,"profile":"weight_file","file":"w.csv"}"#).unwrap();
    let (spec, base) = DomainSpec::load(&spec_path).unwrap();
    match spec.to_domain(&base).unwrap() {
        Domain::Graph(g) => {
            assert_eq!(g.length(), 2.0);
            assert_eq!(g.profile().samples(), w.samples());
        }
        other => panic!("{other:?}"),
    }
    // The declared length must match the file.
    std::fs::write(&spec_path, r#"{"type":"graph","L":1,"epsilon":0.1,"profile":"weight_file","file":"w.csv"}"#).unwrap();
    let (spec, base) = DomainSpec::load(&spec_path).unwrap();
    assert!(spec.to_domain(&base).is_err());
    let v: PotentialSpec = format!("file:{}", dir.path().join("w.csv").display()).parse().unwrap();
    assert_eq!(v.profile(2.0, 10).unwrap().samples(), w.samples());
    assert!(v.profile(1.0, 10).is_err());
}

proptest! {
    #[test]
    fn profile_csv_round_trip(len in 0.1f64..10.0, vals in prop::collection::vec(-1e3f64..1e3, 3..40)) {
        let p = Profile1D::new(len, vals).unwrap();
        let back = profile_from_reader(Cursor::new(profile_to_csv(&p))).unwrap();
        prop_assert_eq!(back.samples(), p.samples());
        prop_assert!((back.length() - len).abs() <= 1e-12 * len);
    }

    #[test]
    fn rectangle_spec_round_trip(a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let spec = DomainSpec::Rectangle { a, b };
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(DomainSpec::from_json(&text).unwrap(), spec);
    }
}
