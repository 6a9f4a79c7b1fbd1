//! Triangles over the unit base `[(0,0), (1,0)]`: blow-up of the gap
//! function along thin triangles and the scan of the moduli region.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{in_moduli_region, make_triangle_from_moduli, Point};
use crate::eigen::EigenOptions;
use crate::lab::gap::{gap_on_meshes, hierarchy, GapResult};
use crate::mesh::mesh_triangle_over_base;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleOptions {
    pub levels: usize,
    /// Coarse mapped mesh over the base.
    pub nx: usize,
    pub ny: usize,
    /// Largest admissible cell aspect ratio on the coarse mesh.
    pub max_aspect: f64,
    pub eigen: EigenOptions,
}

impl TriangleOptions {
    /// Default for the moduli scan.
    pub fn scan(levels: usize) -> Self {
        TriangleOptions { levels, nx: 8, ny: 4, max_aspect: 32.0, eigen: EigenOptions::default() }
    }

    /// Default for thin triangles: finer along the base, few cells across.
    pub fn thin(levels: usize) -> Self {
        TriangleOptions { levels, nx: 32, ny: 2, max_aspect: 32.0, eigen: EigenOptions::default() }
    }
}

/// Gap of the triangle with vertices `(0,0)`, `(1,0)`, `apex`.
pub fn triangle_gap(apex: Point, opts: &TriangleOptions) -> Result<GapResult> {
    if opts.levels < 2 {
        return Err(Error::invalid_arg("need at least two refinement levels"));
    }
    let simplex = make_triangle_from_moduli(apex)?;
    let width = 1.0 / opts.nx as f64;
    let height = apex.y / opts.ny as f64;
    let ratio = (width / height).max(height / width);
    if ratio > opts.max_aspect {
        return Err(Error::AspectRatio { ratio, limit: opts.max_aspect });
    }
    let coarse = mesh_triangle_over_base(apex, opts.nx, opts.ny)?;
    gap_on_meshes(&hierarchy(coarse, opts.levels), simplex.diameter(), None, &opts.eigen)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// `(h, ξ)` in the order of the input.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of `log ξ` against `log h`.
    pub slope: f64,
    pub intercept: f64,
    pub results: Vec<GapResult>,
}

impl ScalingFit {
    /// ξ strictly increases as h decreases.
    pub fn increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 > w[0].1)
    }
}

/// Least-squares line through `(ln x, ln y)`: `(slope, intercept)`.
pub fn log_log_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

pub fn fit_scaling(h_list: &[f64], results: Vec<GapResult>) -> ScalingFit {
    let points: Vec<(f64, f64)> = h_list.iter().zip(&results).map(|(h, r)| (*h, r.xi)).collect();
    let (slope, intercept) = log_log_fit(&points);
    ScalingFit { points, slope, intercept, results }
}

pub fn check_h_list(h_list: &[f64]) -> Result<()> {
    if h_list.len() < 4 {
        return Err(Error::invalid_arg("need at least four heights"));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) || h_list.iter().any(|h| !(*h > 0.0 && *h <= 0.75f64.sqrt())) {
        return Err(Error::invalid_arg("heights must decrease strictly within (0, sqrt(3)/2]"));
    }
    Ok(())
}

/// ξ of the isosceles triangles with apex `(1/2, h)` and the log-log fit.
pub fn thin_triangle_scaling(h_list: &[f64], opts: &TriangleOptions) -> Result<ScalingFit> {
    check_h_list(h_list)?;
    let results = h_list.iter().map(|&h| triangle_gap(Point::new(0.5, h), opts)).collect::<Result<Vec<_>>>()?;
    Ok(fit_scaling(h_list, results))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub i: usize,
    pub j: usize,
    pub p: Point,
}

/// Candidate apexes `x_i = 1/2 + i/(2(n−1))`, `y_j = (√3/2)(j+1)/n` for
/// `0 ≤ i, j < n`, keeping those in the moduli region. The equilateral apex
/// `(1/2, √3/2)` is the grid point `(0, n−1)`.
pub fn moduli_grid(grid_n: usize) -> Result<Vec<GridPoint>> {
    if grid_n < 2 {
        return Err(Error::invalid_arg("grid_n must be at least 2"));
    }
    let top = 0.75f64.sqrt();
    let mut out = Vec::new();
    for j in 0..grid_n {
        for i in 0..grid_n {
            let x = 0.5 + 0.5 * i as f64 / (grid_n - 1) as f64;
            let y = if j + 1 == grid_n { top } else { top * (j + 1) as f64 / grid_n as f64 };
            let p = Point::new(x, y);
            if in_moduli_region(p) {
                out.push(GridPoint { i, j, p });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub point: GridPoint,
    pub xi: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliScan {
    pub grid_n: usize,
    pub entries: Vec<ScanEntry>,
    pub argmin: GridPoint,
    pub min_xi: f64,
    /// Grid point closest to the equilateral apex.
    pub nearest_equilateral: GridPoint,
}

impl ModuliScan {
    pub fn argmin_is_equilateral(&self) -> bool {
        self.argmin.p == self.nearest_equilateral.p
    }
}

/// Orders entries by grid key and locates the minimum.
pub fn summarize_scan(grid_n: usize, mut entries: Vec<ScanEntry>) -> Result<ModuliScan> {
    if entries.is_empty() {
        return Err(Error::invalid_arg("empty scan"));
    }
    entries.sort_by_key(|e| (e.point.j, e.point.i));
    let best = entries.iter().min_by(|a, b| a.xi.total_cmp(&b.xi)).unwrap();
    let eq = Point::new(0.5, 0.75f64.sqrt());
    let nearest = entries.iter().min_by(|a, b| a.point.p.dist(eq).total_cmp(&b.point.p.dist(eq))).unwrap();
    Ok(ModuliScan {
        grid_n,
        argmin: best.point,
        min_xi: best.xi,
        nearest_equilateral: nearest.point,
        entries,
    })
}

pub fn scan_entry(point: GridPoint, opts: &TriangleOptions) -> Result<ScanEntry> {
    let g = triangle_gap(point.p, opts)?;
    Ok(ScanEntry { point, xi: g.xi, error_estimate: g.error_estimate })
}

/// ξ over the moduli grid (sequential; the points are independent).
pub fn triangle_moduli_scan(grid_n: usize, opts: &TriangleOptions) -> Result<ModuliScan> {
    let entries = moduli_grid(grid_n)?.into_iter().map(|p| scan_entry(p, opts)).collect::<Result<Vec<_>>>()?;
    summarize_scan(grid_n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_contains_equilateral() {
        let g = moduli_grid(12).unwrap();
        assert!(g.iter().any(|p| p.p == Point::new(0.5, 0.75f64.sqrt())));
        assert!(g.iter().all(|p| in_moduli_region(p.p)));
        assert!(g.len() < 144);
    }

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = [0.2, 0.1, 0.05].iter().map(|&h: &f64| (h, 3.0 * h.powf(-1.5))).collect();
        let (s, c) = log_log_fit(&pts);
        assert!((s + 1.5).abs() < 1e-12 && (c - 3.0f64.ln()).abs() < 1e-12);
    }
}
