//! Conforming triangle meshes and the generators used by the experiments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{orient2d, Domain, GraphDomain, Point, Polygon};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    h_max: f64,
}

impl TriMesh {
    /// Builds a mesh from counterclockwise triangles. Boundary markers are
    /// derived from the topology: a vertex is on the boundary iff it lies on
    /// an edge used by exactly one triangle.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("mesh has no triangles".into()));
        }
        let nv = vertices.len();
        let mut edges: BTreeMap<(usize, usize), (u8, u8)> = BTreeMap::new();
        let mut h_max = 0.0_f64;
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            let [a, b, c] = tri.map(|v| vertices[v]);
            if !(orient2d(a, b, c) > 0.0) {
                return Err(Error::InvalidMesh(format!("triangle {t} has non-positive area")));
            }
            for k in 0..3 {
                let (i, j) = (tri[k], tri[(k + 1) % 3]);
                h_max = h_max.max(vertices[i].dist(vertices[j]));
                let entry = edges.entry((i.min(j), i.max(j))).or_insert((0, 0));
                if i < j {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        let mut boundary = vec![false; nv];
        for (&(i, j), &(fwd, bwd)) in &edges {
            match (fwd, bwd) {
                (1, 0) | (0, 1) => {
                    boundary[i] = true;
                    boundary[j] = true;
                }
                (1, 1) => {}
                _ => {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({i}, {j}) is not shared consistently by at most two triangles"
                    )))
                }
            }
        }
        let mut used = vec![false; nv];
        triangles.iter().flatten().for_each(|&v| used[v] = true);
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {v} belongs to no triangle")));
        }
        Ok(TriMesh { vertices, triangles, boundary, h_max })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_markers(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_interior(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    /// Longest edge length.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        0.5 * orient2d(a, b, c)
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Largest distance from a boundary-marked vertex to the domain boundary.
    pub fn boundary_marker_error(&self, domain: &Domain) -> f64 {
        self.vertices
            .iter()
            .zip(&self.boundary)
            .filter(|(_, b)| **b)
            .map(|(p, _)| domain.distance_to_boundary(*p).abs())
            .fold(0.0, f64::max)
    }

    /// Splits every triangle into four through its edge midpoints.
    pub fn refine(&self) -> TriMesh {
        let mut vertices = self.vertices.clone();
        let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |i: usize, j: usize, vertices: &mut Vec<Point>| -> usize {
            *mid.entry((i.min(j), i.max(j))).or_insert_with(|| {
                vertices.push(vertices[i].midpoint(vertices[j]));
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        TriMesh::new(vertices, triangles).expect("refinement of a valid mesh is valid")
    }

    /// Gradient of the P1 function with nodal `values` on triangle `t`.
    pub fn element_gradient(&self, t: usize, values: &[f64]) -> Point {
        let tri = self.triangles[t];
        let grads = barycentric_gradients(tri.map(|v| self.vertices[v]));
        let mut g = Point::default();
        for k in 0..3 {
            g = g + grads[k].scale(values[tri[k]]);
        }
        g
    }

    /// Vertex gradients recovered by area-weighted averaging of element gradients.
    pub fn recover_gradient(&self, values: &[f64]) -> Vec<Point> {
        let mut acc = vec![Point::default(); self.vertices.len()];
        let mut weight = vec![0.0; self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            let g = self.element_gradient(t, values);
            let a = self.triangle_area(t);
            for &v in tri {
                acc[v] = acc[v] + g.scale(a);
                weight[v] += a;
            }
        }
        acc.iter().zip(&weight).map(|(g, w)| g.scale(1.0 / w)).collect()
    }

    /// Vertex adjacency (sorted, without self loops).
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for tri in &self.triangles {
            for k in 0..3 {
                adj[tri[k]].push(tri[(k + 1) % 3]);
                adj[tri[k]].push(tri[(k + 2) % 3]);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

/// Gradients of the three barycentric coordinates of a triangle.
pub fn barycentric_gradients(p: [Point; 3]) -> [Point; 3] {
    let area2 = orient2d(p[0], p[1], p[2]);
    core::array::from_fn(|k| {
        let a = p[(k + 1) % 3];
        let b = p[(k + 2) % 3];
        // Rotate the opposite edge by -90 degrees and scale.
        Point::new(a.y - b.y, b.x - a.x).scale(1.0 / area2)
    })
}

/// Meshes a simple polygon with longest edge at most `target_h`.
///
/// Triangles are subdivided into similar copies of themselves; other convex
/// polygons start from a centroid fan and non-convex ones from ear clipping.
/// The coarse mesh is then refined uniformly.
pub fn triangulate(poly: &Polygon, target_h: f64) -> Result<TriMesh> {
    if !(target_h > 0.0 && target_h.is_finite()) {
        return Err(Error::invalid_arg(format!("target_h must be positive, got {target_h}")));
    }
    let v = poly.vertices();
    if v.len() == 3 {
        let longest = (0..3).map(|i| v[i].dist(v[(i + 1) % 3])).fold(0.0, f64::max);
        let n = (longest / target_h).ceil().max(1.0) as usize;
        return subdivide_triangle([v[0], v[1], v[2]], n);
    }
    let mut mesh = if poly.is_convex() {
        let c = poly.centroid();
        let mut vertices = v.to_vec();
        vertices.push(c);
        let ci = vertices.len() - 1;
        let n = v.len();
        TriMesh::new(vertices, (0..n).map(|i| [i, (i + 1) % n, ci]).collect())?
    } else {
        TriMesh::new(v.to_vec(), ear_clip(v)?)?
    };
    while mesh.h_max() > target_h {
        mesh = mesh.refine();
    }
    Ok(mesh)
}

/// Splits a triangle into `n²` similar triangles.
pub fn subdivide_triangle(p: [Point; 3], n: usize) -> Result<TriMesh> {
    if n == 0 {
        return Err(Error::invalid_arg("subdivision count must be positive"));
    }
    let (e1, e2) = (p[1] - p[0], p[2] - p[0]);
    let mut vertices = Vec::with_capacity((n + 1) * (n + 2) / 2);
    let mut index = vec![vec![0usize; n + 1]; n + 1];
    for j in 0..=n {
        for i in 0..=n - j {
            index[i][j] = vertices.len();
            let (s, t) = (i as f64 / n as f64, j as f64 / n as f64);
            vertices.push(p[0] + e1.scale(s) + e2.scale(t));
        }
    }
    let mut triangles = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n - j {
            triangles.push([index[i][j], index[i + 1][j], index[i][j + 1]]);
            if i + j + 2 <= n {
                triangles.push([index[i + 1][j], index[i + 1][j + 1], index[i][j + 1]]);
            }
        }
    }
    TriMesh::new(vertices, triangles)
}

fn ear_clip(v: &[Point]) -> Result<Vec<[usize; 3]>> {
    let mut remaining: Vec<usize> = (0..v.len()).collect();
    let mut triangles = Vec::with_capacity(v.len() - 2);
    while remaining.len() > 3 {
        let m = remaining.len();
        let ear = (0..m).find(|&k| {
            let (a, b, c) = (remaining[(k + m - 1) % m], remaining[k], remaining[(k + 1) % m]);
            if orient2d(v[a], v[b], v[c]) <= 0.0 {
                return false;
            }
            remaining.iter().all(|&q| {
                q == a || q == b || q == c || !point_in_closed_triangle(v[q], v[a], v[b], v[c])
            })
        });
        let k = ear.ok_or_else(|| Error::InvalidDomain("ear clipping failed".into()))?;
        triangles.push([remaining[(k + m - 1) % m], remaining[k], remaining[(k + 1) % m]]);
        remaining.remove(k);
    }
    triangles.push([remaining[0], remaining[1], remaining[2]]);
    Ok(triangles)
}

fn point_in_closed_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    orient2d(a, b, p) >= 0.0 && orient2d(b, c, p) >= 0.0 && orient2d(c, a, p) >= 0.0
}

/// Structured mapped mesh of a region `{x_i ≤ x ≤ x_{i+1}, 0 ≤ y ≤ top(x)}`
/// given the column positions `xs` and the fiber heights at them. Columns of
/// (numerically) zero height collapse to a single vertex and the resulting
/// zero-area triangles are dropped.
pub fn mapped_mesh(xs: &[f64], heights: &[f64], ny: usize) -> Result<TriMesh> {
    if xs.len() < 2 || xs.len() != heights.len() || ny == 0 {
        return Err(Error::invalid_arg("mapped mesh needs at least two columns and ny >= 1"));
    }
    let span = xs[xs.len() - 1] - xs[0];
    let merge_tol = 1e-12 * span.abs();
    let mut vertices = Vec::with_capacity(xs.len() * (ny + 1));
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(xs.len());
    for (&x, &hgt) in xs.iter().zip(heights) {
        if hgt <= merge_tol {
            vertices.push(Point::new(x, 0.0));
            columns.push(vec![vertices.len() - 1; ny + 1]);
        } else {
            let start = vertices.len();
            for j in 0..=ny {
                vertices.push(Point::new(x, if j == ny { hgt } else { hgt * j as f64 / ny as f64 }));
            }
            columns.push((start..=start + ny).collect());
        }
    }
    let mut triangles = Vec::with_capacity(2 * (xs.len() - 1) * ny);
    for i in 0..xs.len() - 1 {
        for j in 0..ny {
            let p00 = columns[i][j];
            let p01 = columns[i][j + 1];
            let p10 = columns[i + 1][j];
            let p11 = columns[i + 1][j + 1];
            for tri in [[p00, p10, p11], [p00, p11, p01]] {
                if tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2] {
                    triangles.push(tri);
                }
            }
        }
    }
    TriMesh::new(vertices, triangles)
}

/// Mapped mesh of the graph domain: reference grid `(i/nx, j/ny)` sent to
/// `(x_i, (j/ny) ε w(x_i))`.
pub fn mesh_graph_domain(gd: &GraphDomain, nx: usize, ny: usize) -> Result<TriMesh> {
    if nx < 2 || ny < 2 {
        return Err(Error::invalid_arg(format!("need nx, ny >= 2, got {nx} x {ny}")));
    }
    let xs: Vec<f64> = (0..=nx).map(|i| gd.length() * i as f64 / nx as f64).collect();
    let heights: Vec<f64> = xs.iter().map(|&x| gd.height_at(x)).collect();
    mapped_mesh(&xs, &heights, ny)
}

/// Structured mesh of `[0, a] × [0, b]`.
pub fn rectangle_mesh(a: f64, b: f64, nx: usize, ny: usize) -> Result<TriMesh> {
    let xs: Vec<f64> = (0..=nx).map(|i| a * i as f64 / nx as f64).collect();
    mapped_mesh(&xs, &vec![b; nx + 1], ny)
}

/// Mapped mesh of the triangle `(0,0), (1,0), apex` with `0 ≤ apex.x ≤ 1`,
/// viewed as the graph of a tent over the base. The apex column is always a
/// mesh column; `nx` columns are split between the two sides in proportion.
pub fn mesh_triangle_over_base(apex: Point, nx: usize, ny: usize) -> Result<TriMesh> {
    if !(apex.y > 0.0 && (0.0..=1.0).contains(&apex.x)) {
        return Err(Error::invalid_arg("apex must lie above the unit base"));
    }
    if nx < 2 || ny < 1 {
        return Err(Error::invalid_arg("need nx >= 2 and ny >= 1"));
    }
    let mut left = ((nx as f64) * apex.x).round() as usize;
    if apex.x > 0.0 && left == 0 {
        left = 1;
    }
    if apex.x < 1.0 && left == nx {
        left = nx - 1;
    }
    let right = nx - left;
    let mut xs = Vec::with_capacity(nx + 1);
    for i in 0..left {
        xs.push(apex.x * i as f64 / left as f64);
    }
    xs.push(apex.x);
    for i in 1..=right {
        xs.push(apex.x + (1.0 - apex.x) * i as f64 / right as f64);
    }
    let heights: Vec<f64> = xs
        .iter()
        .map(|&x| {
            if x == apex.x {
                apex.y
            } else if x < apex.x {
                if apex.x > 0.0 { apex.y * x / apex.x } else { apex.y }
            } else {
                apex.y * (1.0 - x) / (1.0 - apex.x)
            }
        })
        .collect();
    mapped_mesh(&xs, &heights, ny)
}

/// Bucket grid for locating points in a mesh.
#[derive(Debug, Clone)]
pub struct Locator<'a> {
    mesh: &'a TriMesh,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> Locator<'a> {
    pub fn new(mesh: &'a TriMesh) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in mesh.vertices() {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let extent = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let target = (mesh.num_triangles() as f64).sqrt().ceil().max(1.0);
        let cell = extent / target;
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).max(1);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let pts = tri.map(|v| mesh.vertices()[v]);
            let (mut tlo, mut thi) = (pts[0], pts[0]);
            for p in &pts[1..] {
                tlo = Point::new(tlo.x.min(p.x), tlo.y.min(p.y));
                thi = Point::new(thi.x.max(p.x), thi.y.max(p.y));
            }
            let (i0, j0) = Self::cell_of(lo, cell, nx, ny, tlo);
            let (i1, j1) = Self::cell_of(lo, cell, nx, ny, thi);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        Locator { mesh, origin: lo, cell, nx, ny, buckets }
    }

    fn cell_of(origin: Point, cell: f64, nx: usize, ny: usize, p: Point) -> (usize, usize) {
        let i = ((p.x - origin.x) / cell).floor().max(0.0) as usize;
        let j = ((p.y - origin.y) / cell).floor().max(0.0) as usize;
        (i.min(nx - 1), j.min(ny - 1))
    }

    /// Triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        let (i, j) = Self::cell_of(self.origin, self.cell, self.nx, self.ny, p);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for &t in &self.buckets[j * self.nx + i] {
            let pts = self.mesh.triangles()[t].map(|v| self.mesh.vertices()[v]);
            let area2 = orient2d(pts[0], pts[1], pts[2]);
            let bary = [
                orient2d(p, pts[1], pts[2]) / area2,
                orient2d(pts[0], p, pts[2]) / area2,
                orient2d(pts[0], pts[1], p) / area2,
            ];
            let worst = bary.iter().copied().fold(f64::INFINITY, f64::min);
            if worst >= 0.0 {
                return Some((t, bary));
            }
            if best.as_ref().is_none_or(|b| worst > b.2) {
                best = Some((t, bary, worst));
            }
        }
        best.filter(|b| b.2 >= -1e-10).map(|b| (b.0, b.1))
    }

    /// Value at `p` of the P1 interpolant of nodal `values`.
    pub fn interpolate(&self, values: &[f64], p: Point) -> Option<f64> {
        let (t, bary) = self.locate(p)?;
        let tri = self.mesh.triangles()[t];
        Some((0..3).map(|k| bary[k] * values[tri[k]]).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oned::Profile1D;

    fn square() -> Polygon {
        Polygon::rectangle(1.0, 1.0).unwrap()
    }

    #[test]
    fn square_mesh_at_half() {
        let m = triangulate(&square(), 0.5).unwrap();
        assert!(m.num_triangles() >= 8);
        assert!(m.h_max() <= 0.5 + 1e-15);
        assert!((0..m.num_triangles()).all(|t| m.triangle_area(t) > 0.0));
        assert!((m.area() - 1.0).abs() <= 1e-12);
        let d = Domain::Polygon(square());
        assert!(m.boundary_marker_error(&d) <= 1e-12 * 2f64.sqrt());
    }

    #[test]
    fn equilateral_at_unit_h_is_itself() {
        let m = triangulate(&Polygon::equilateral(), 1.0).unwrap();
        assert_eq!(m.num_triangles(), 1);
        let m = triangulate(&Polygon::equilateral(), 0.25).unwrap();
        assert_eq!(m.num_triangles(), 16);
        assert!((m.area() - 0.75f64.sqrt() / 2.0).abs() <= 1e-15);
    }

    #[test]
    fn nonconvex_polygon_is_triangulated() {
        let l = Polygon::new(alloc::vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let m = triangulate(&l, 0.3).unwrap();
        assert!((m.area() - 3.0).abs() <= 3e-12);
        assert!(m.boundary_marker_error(&Domain::Polygon(l)) <= 1e-12);
    }

    #[test]
    fn refine_quadruples_and_halves() {
        let m = triangulate(&Polygon::regular(7, 1.0).unwrap(), 0.6).unwrap();
        let r = m.refine();
        assert_eq!(r.num_triangles(), 4 * m.num_triangles());
        assert!((r.h_max() - m.h_max() / 2.0).abs() <= 1e-15);
        assert_eq!(&r.vertices()[..m.num_vertices()], m.vertices());
        assert!((r.area() - m.area()).abs() <= 1e-14);
    }

    #[test]
    fn graph_domain_rectangle_has_eight_triangles() {
        let p = Profile1D::new(1.0, alloc::vec![1.0; 3]).unwrap();
        let gd = GraphDomain::new(p, 0.1).unwrap();
        let m = mesh_graph_domain(&gd, 2, 2).unwrap();
        assert_eq!(m.num_triangles(), 8);
        assert!((m.area() - 0.1).abs() <= 1e-15);
        assert_eq!(m.num_interior(), 1);
    }

    #[test]
    fn sin2_graph_domain_area_converges() {
        let mut errs = alloc::vec::Vec::new();
        for nx in [16usize, 32, 64] {
            let p = Profile1D::from_fn(1.0, nx, |x| {
                let s = (core::f64::consts::PI * x).sin();
                s * s
            });
            let gd = GraphDomain::new(p, 0.1).unwrap();
            let m = mesh_graph_domain(&gd, nx, 4).unwrap();
            assert!((0..m.num_triangles()).all(|t| m.triangle_area(t) > 0.0));
            let d = Domain::Graph(gd);
            assert!(m.boundary_marker_error(&d) <= 1e-12);
            errs.push((m.area() - 0.05).abs());
        }
        // Trapezoid rule on sin² over a full period is exact.
        assert!(errs.iter().all(|e| *e <= 1e-15));
    }

    #[test]
    fn triangle_over_base_keeps_apex_column() {
        let apex = Point::new(0.7, 0.05);
        let m = mesh_triangle_over_base(apex, 10, 3).unwrap();
        assert!((m.area() - 0.025).abs() <= 1e-15);
        assert!(m.vertices().iter().any(|p| p.dist(apex) == 0.0));
        let right = mesh_triangle_over_base(Point::new(1.0, 0.4), 8, 4).unwrap();
        assert!((right.area() - 0.2).abs() <= 1e-15);
    }

    #[test]
    fn locator_interpolates_linear_functions_exactly() {
        let m = triangulate(&Polygon::regular(9, 1.0).unwrap(), 0.2).unwrap();
        let f: Vec<f64> = m.vertices().iter().map(|p| 2.0 * p.x - p.y + 0.5).collect();
        let loc = Locator::new(&m);
        for p in [Point::new(0.1, 0.2), Point::new(-0.5, 0.3), Point::new(0.0, -0.7)] {
            let v = loc.interpolate(&f, p).unwrap();
            assert!((v - (2.0 * p.x - p.y + 0.5)).abs() <= 1e-13);
        }
        assert!(loc.locate(Point::new(2.0, 2.0)).is_none());
        let g = m.recover_gradient(&f);
        assert!(g.iter().all(|g| (g.x - 2.0).abs() < 1e-12 && (g.y + 1.0).abs() < 1e-12));
    }
}
