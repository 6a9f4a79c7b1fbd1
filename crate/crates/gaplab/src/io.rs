//! Plain-text mesh and matrix exports, spectrum records, profile CSV.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use gaplab_core::domain::Point;
use gaplab_core::eigen::Spectrum;
use gaplab_core::mesh::TriMesh;
use gaplab_core::oned::Profile1D;
use gaplab_core::sparse::CsrMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    File::create(path).and_then(|mut f| f.write_all(contents)).map_err(|e| Error::io(path.display(), e))
}

/// `vertices N`, N lines `x y`, `triangles M`, M lines `a b c` (0-based).
pub fn mesh_to_string(mesh: &TriMesh) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", mesh.num_vertices()).unwrap();
    for p in mesh.vertices() {
        writeln!(out, "{} {}", p.x, p.y).unwrap();
    }
    writeln!(out, "triangles {}", mesh.num_triangles()).unwrap();
    for t in mesh.triangles() {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

pub fn mesh_from_reader(r: impl BufRead) -> Result<TriMesh> {
    let mut lines = r.lines();
    let mut next = || -> Result<String> {
        loop {
            match lines.next() {
                Some(l) => {
                    let l = l.map_err(|e| Error::io("mesh", e))?;
                    if !l.trim().is_empty() {
                        return Ok(l);
                    }
                }
                None => return Err(Error::input("mesh file ended early")),
            }
        }
    };
    let count = |line: String, key: &str| -> Result<usize> {
        let mut it = line.split_whitespace();
        match (it.next(), it.next().and_then(|n| n.parse().ok())) {
            (Some(k), Some(n)) if k == key => Ok(n),
            _ => Err(Error::input(format!("expected `{key} <count>`, got `{line}`"))),
        }
    };
    let nums = |line: &str| -> Vec<f64> { line.split_whitespace().filter_map(|t| t.parse().ok()).collect() };
    let nv = count(next()?, "vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        match nums(&next()?)[..] {
            [x, y] => vertices.push(Point::new(x, y)),
            _ => return Err(Error::input("vertex lines hold two numbers")),
        }
    }
    let nt = count(next()?, "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let line = next()?;
        let idx: Vec<usize> = line.split_whitespace().filter_map(|t| t.parse().ok()).collect();
        match idx[..] {
            [a, b, c] => triangles.push([a, b, c]),
            _ => return Err(Error::input(format!("bad triangle line `{line}`"))),
        }
    }
    Ok(TriMesh::new(vertices, triangles)?)
}

/// One `i j value` line per stored entry, sorted by row then column.
pub fn triplets_to_string(m: &CsrMatrix) -> String {
    let mut t = m.triplets();
    t.sort_by_key(|e| (e.0, e.1));
    let mut out = String::new();
    for (i, j, v) in t {
        writeln!(out, "{i} {j} {v}").unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub h: f64,
    pub seed: u64,
    pub iterations: usize,
}

impl From<&Spectrum> for SpectrumRecord {
    fn from(s: &Spectrum) -> Self {
        SpectrumRecord {
            eigenvalues: s.eigenvalues.clone(),
            residuals: s.residuals.clone(),
            h: s.h,
            seed: s.seed,
            iterations: s.iterations,
        }
    }
}

/// Rows `x,value` on equispaced nodes starting at 0; an optional header row is skipped.
pub fn profile_from_reader(r: impl std::io::Read) -> Result<Profile1D> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_reader(r);
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::input(format!("profile row {} needs two columns", k + 1)));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(x), Ok(v)) => rows.push((x, v)),
            _ if k == 0 => continue,
            _ => return Err(Error::input(format!("profile row {} is not numeric", k + 1))),
        }
    }
    if rows.len() < 3 {
        return Err(Error::input("a profile needs at least three rows"));
    }
    let length = rows.last().unwrap().0;
    let n = rows.len() - 1;
    for (i, (x, _)) in rows.iter().enumerate() {
        let expected = length * i as f64 / n as f64;
        if (x - expected).abs() > 1e-9 * length.abs().max(1.0) {
            return Err(Error::input(format!("profile nodes must be equispaced from 0; row {} has x = {x}", i + 1)));
        }
    }
    Ok(Profile1D::new(length, rows.into_iter().map(|r| r.1).collect())?)
}

pub fn read_profile_csv(path: &Path) -> Result<Profile1D> {
    let f = File::open(path).map_err(|e| Error::io(path.display(), e))?;
    profile_from_reader(BufReader::new(f))
}

pub fn profile_to_csv(p: &Profile1D) -> String {
    let mut out = String::from("x,value\n");
    for (x, v) in p.nodes().iter().zip(p.samples()) {
        writeln!(out, "{x},{v}").unwrap();
    }
    out
}
