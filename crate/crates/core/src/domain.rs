//! Geometric domains: polygons, rectangles, simplices and thin graph domains.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::oned::Profile1D;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl core::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl core::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// Twice the signed area of the triangle `(a, b, c)`.
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Largest pairwise distance in a point set.
pub fn max_pairwise_distance(points: &[Point]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidDomain("empty vertex list".into()));
    }
    let mut best = 0.0_f64;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            best = best.max(p.dist(q));
        }
    }
    Ok(best)
}

/// A simple polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates the vertex loop and reorients it counterclockwise.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidDomain("non-finite vertex coordinate".into()));
        }
        let n = vertices.len();
        let scale = max_pairwise_distance(&vertices)?;
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) <= 1e-14 * scale {
                return Err(Error::InvalidDomain(format!(
                    "consecutive vertices {} and {} coincide",
                    i,
                    (i + 1) % n
                )));
            }
        }
        let area2: f64 = (0..n)
            .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
            .sum();
        if area2.abs() <= 1e-14 * scale * scale {
            return Err(Error::InvalidDomain("polygon has zero area".into()));
        }
        if area2 < 0.0 {
            vertices.reverse();
        }
        let poly = Polygon { vertices };
        if !poly.is_simple() {
            return Err(Error::InvalidDomain("polygon is not simple".into()));
        }
        Ok(poly)
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidDomain(format!("rectangle sides must be positive: {a} x {b}")));
        }
        Polygon::new(alloc::vec![
            Point::new(0.0, 0.0),
            Point::new(a, 0.0),
            Point::new(a, b),
            Point::new(0.0, b),
        ])
    }

    /// Equilateral triangle with unit sides on the base `[(0,0), (1,0)]`.
    pub fn equilateral() -> Self {
        Polygon {
            vertices: alloc::vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.5, 0.75.sqrt()),
            ],
        }
    }

    /// Regular `n`-gon inscribed in the circle of the given radius about the origin.
    pub fn regular(n: usize, radius: f64) -> Result<Self> {
        let step = 2.0 * core::f64::consts::PI / n as f64;
        Polygon::new(
            (0..n)
                .map(|i| {
                    let t = step * i as f64;
                    Point::new(radius * t.cos(), radius * t.sin())
                })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(p, q)| p.cross(q)).sum::<f64>()
    }

    pub fn diameter(&self) -> f64 {
        // Non-empty by construction.
        max_pairwise_distance(&self.vertices).unwrap_or(0.0)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let scale = self.diameter();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            orient2d(a, b, c) >= -1e-14 * scale * scale
        })
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = (self.vertices[j], self.vertices[(j + 1) % n]);
                if adjacent {
                    // Adjacent edges may only share their common endpoint.
                    let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    let o = orient2d(shared, p, q);
                    if o == 0.0 && (p - shared).dot(q - shared) > 0.0 {
                        return false;
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Point-in-polygon by winding number; boundary points count as inside.
    pub fn contains(&self, p: Point) -> bool {
        let scale = self.diameter();
        if self.distance_to_boundary(p) <= 1e-12 * scale {
            return true;
        }
        let mut winding = 0i32;
        for (a, b) in self.edges() {
            if a.y <= p.y {
                if b.y > p.y && orient2d(a, b, p) > 0.0 {
                    winding += 1;
                }
            } else if b.y <= p.y && orient2d(a, b, p) < 0.0 {
                winding -= 1;
            }
        }
        winding != 0
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn centroid(&self) -> Point {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    /// Image under `x -> factor * x`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Polygon::new(self.vertices.iter().map(|p| p.scale(factor)).collect())
    }
}

pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.dist(a + ab.scale(t))
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// An `n`-simplex given by `n + 1` affinely independent vertices in ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::InvalidDomain("a simplex needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| v.len() != n || v.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidDomain(format!(
                "a {n}-simplex needs {} finite points in R^{n}",
                n + 1
            )));
        }
        let edges: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        let scale = edges.iter().map(|e| norm(e)).fold(0.0, f64::max);
        if gram_schmidt(&edges, 1e-12 * scale).is_none() {
            return Err(Error::InvalidDomain("simplex vertices are affinely dependent".into()));
        }
        Ok(Simplex { vertices })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                best = best.max(norm(&sub(p, q)));
            }
        }
        best
    }

    /// Distance from the vertex opposite `facet_index` to the affine hull of
    /// that facet. The facet is indexed by the vertex it omits.
    pub fn height(&self, facet_index: usize) -> Result<f64> {
        if facet_index > self.dim() {
            return Err(Error::invalid_arg(format!(
                "facet index {facet_index} out of range for a {}-simplex",
                self.dim()
            )));
        }
        let facet: Vec<&Vec<f64>> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != facet_index)
            .map(|(_, v)| v)
            .collect();
        let origin = facet[0];
        let edges: Vec<Vec<f64>> = facet[1..].iter().map(|v| sub(v, origin)).collect();
        let scale = edges.iter().map(|e| norm(e)).fold(0.0, f64::max);
        let basis = gram_schmidt(&edges, 1e-12 * scale.max(f64::MIN_POSITIVE))
            .ok_or(Error::DegenerateFacet { facet: facet_index })?;
        let mut r = sub(&self.vertices[facet_index], origin);
        for q in &basis {
            let c = dot(&r, q);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * qi;
            }
        }
        Ok(norm(&r))
    }

    /// The triangle as a polygon (only for 2-simplices).
    pub fn to_polygon(&self) -> Result<Polygon> {
        if self.dim() != 2 {
            return Err(Error::invalid_arg("only 2-simplices are polygons"));
        }
        Polygon::new(self.vertices.iter().map(|v| Point::new(v[0], v[1])).collect())
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of the span of `vectors`, or `None` if they are
/// dependent at tolerance `tol`.
fn gram_schmidt(vectors: &[Vec<f64>], tol: f64) -> Option<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = norm(&w);
        if !(n > tol) {
            return None;
        }
        w.iter_mut().for_each(|x| *x /= n);
        basis.push(w);
    }
    Some(basis)
}

/// Is `p` in the fundamental region `{y > 0, x ≥ 1/2, |p| ≤ 1, |p − (1,0)| ≤ 1}`?
pub fn in_moduli_region(p: Point) -> bool {
    const TOL: f64 = 1e-12;
    p.is_finite()
        && p.y > 0.0
        && p.x >= 0.5 - TOL
        && p.norm() <= 1.0 + TOL
        && (p - Point::new(1.0, 0.0)).norm() <= 1.0 + TOL
}

/// Triangle with vertices `(0,0)`, `(1,0)` and `p`. Inside the fundamental
/// region the base is the longest side, so the diameter is exactly one.
pub fn make_triangle_from_moduli(p: Point) -> Result<Simplex> {
    if !in_moduli_region(p) {
        return Err(Error::OutsideModuliRegion { x: p.x, y: p.y });
    }
    Simplex::new(alloc::vec![
        alloc::vec![0.0, 0.0],
        alloc::vec![1.0, 0.0],
        alloc::vec![p.x, p.y],
    ])
}

/// The thin domain `{(x, y) : 0 ≤ x ≤ L, 0 ≤ y ≤ ε w(x)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDomain {
    profile: Profile1D,
    epsilon: f64,
}

impl GraphDomain {
    pub fn new(profile: Profile1D, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidDomain(format!("epsilon must be positive, got {epsilon}")));
        }
        if profile.samples().iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidDomain("profile must be nonnegative".into()));
        }
        if profile.samples().iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidDomain("profile is identically zero".into()));
        }
        Ok(GraphDomain { profile, epsilon })
    }

    pub fn length(&self) -> f64 {
        self.profile.length()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn profile(&self) -> &Profile1D {
        &self.profile
    }

    /// Fiber height `ε w(x)`.
    pub fn height_at(&self, x: f64) -> f64 {
        self.epsilon * self.profile.eval(x)
    }

    /// `ε ∫ w` by the trapezoid rule on the profile samples.
    pub fn area(&self) -> f64 {
        self.epsilon * self.profile.integral()
    }

    /// Largest distance between sampled boundary points (bottom edge and top curve).
    pub fn diameter(&self) -> f64 {
        let xs = self.profile.nodes();
        let mut pts: Vec<Point> = Vec::with_capacity(2 * xs.len());
        for (&x, &w) in xs.iter().zip(self.profile.samples()) {
            pts.push(Point::new(x, 0.0));
            if w > 0.0 {
                pts.push(Point::new(x, self.epsilon * w));
            }
        }
        // Only the convex hull matters; the bottom edge contributes its two ends.
        let mut hull = Vec::with_capacity(xs.len() + 2);
        hull.push(pts[0]);
        hull.extend(pts.iter().copied().filter(|p| p.y > 0.0));
        hull.push(Point::new(self.length(), 0.0));
        max_pairwise_distance(&hull).unwrap_or(0.0)
    }
}

/// Any domain the laboratory knows how to mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Polygon(Polygon),
    /// `[0, a] × [0, b]`, meshed with a structured grid.
    Rectangle { a: f64, b: f64 },
    Graph(GraphDomain),
}

impl Domain {
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidDomain(format!("rectangle sides must be positive: {a} x {b}")));
        }
        Ok(Domain::Rectangle { a, b })
    }

    pub fn from_moduli(p: Point) -> Result<Self> {
        Ok(Domain::Polygon(make_triangle_from_moduli(p)?.to_polygon()?))
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Polygon(p) => p.diameter(),
            Domain::Rectangle { a, b } => a.hypot(*b),
            Domain::Graph(g) => g.diameter(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Domain::Polygon(p) => p.area(),
            Domain::Rectangle { a, b } => a * b,
            Domain::Graph(g) => g.area(),
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Domain::Polygon(p) => p.is_convex(),
            Domain::Rectangle { .. } => true,
            Domain::Graph(g) => g.profile().is_concave(),
        }
    }

    /// Scales lengths by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match self {
            Domain::Polygon(p) => Ok(Domain::Polygon(p.scaled(factor)?)),
            Domain::Rectangle { a, b } => Domain::rectangle(a * factor, b * factor),
            Domain::Graph(g) => {
                let profile = Profile1D::new(g.length() * factor, g.profile().samples().to_vec())?;
                Ok(Domain::Graph(GraphDomain::new(profile, g.epsilon() * factor)?))
            }
        }
    }

    /// Distance from `p` to the boundary (for points inside the domain).
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        match self {
            Domain::Polygon(poly) => poly.distance_to_boundary(p),
            Domain::Rectangle { a, b } => p.x.min(a - p.x).min(p.y).min(b - p.y),
            Domain::Graph(g) => {
                // Vertical distance to the top curve bounds the true distance from above.
                let top = g.height_at(p.x) - p.y;
                p.y.min(top).min(p.x).min(g.length() - p.x)
            }
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain::Polygon(poly) => poly.contains(p),
            Domain::Rectangle { a, b } => p.x >= 0.0 && p.x <= *a && p.y >= 0.0 && p.y <= *b,
            Domain::Graph(g) => {
                p.x >= 0.0 && p.x <= g.length() && p.y >= 0.0 && p.y <= g.height_at(p.x)
            }
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            Domain::Polygon(poly) => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in poly.vertices() {
                    lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
            Domain::Rectangle { a, b } => (Point::new(0.0, 0.0), Point::new(*a, *b)),
            Domain::Graph(g) => {
                let top = g.profile().samples().iter().fold(0.0_f64, |m, &w| m.max(w));
                (Point::new(0.0, 0.0), Point::new(g.length(), g.epsilon() * top))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn diameters() {
        assert!(close(Polygon::rectangle(1.0, 1.0).unwrap().diameter(), 2f64.sqrt(), 1e-15));
        assert!(close(Polygon::equilateral().diameter(), 1.0, 1e-15));
        assert!(close(Polygon::rectangle(2.0, 1.0).unwrap().diameter(), 5f64.sqrt(), 1e-15));
        assert!(close(Domain::rectangle(2.0, 1.0).unwrap().diameter(), 5f64.sqrt(), 1e-15));
        assert!(max_pairwise_distance(&[]).is_err());
    }

    #[test]
    fn polygon_orientation_and_simplicity() {
        let cw = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(cw.area() > 0.0);
        let bowtie = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(matches!(bowtie, Err(Error::InvalidDomain(_))));
        let dup = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(dup.is_err());
        let l_shape = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        assert!(!l_shape.is_convex());
        assert!(close(l_shape.area(), 3.0, 1e-15));
        assert!(l_shape.contains(Point::new(0.5, 1.5)));
        assert!(!l_shape.contains(Point::new(1.5, 1.5)));
    }

    #[test]
    fn moduli_triangles_have_unit_diameter() {
        for p in [
            Point::new(0.5, 0.75f64.sqrt()),
            Point::new(0.5, 0.05),
            Point::new(0.9, 0.1),
            Point::new(0.95, 0.3),
        ] {
            let t = make_triangle_from_moduli(p).unwrap();
            assert!(close(t.diameter(), 1.0, 1e-14), "{p:?}");
        }
        assert!(make_triangle_from_moduli(Point::new(0.3, 0.5)).is_err());
        assert!(make_triangle_from_moduli(Point::new(0.6, 0.9)).is_err());
        assert!(make_triangle_from_moduli(Point::new(0.6, 0.0)).is_err());
    }

    #[test]
    fn heights() {
        let t = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.3]]).unwrap();
        assert!(close(t.height(2).unwrap(), 0.3, 1e-15));
        let eq = make_triangle_from_moduli(Point::new(0.5, 0.75f64.sqrt())).unwrap();
        for f in 0..3 {
            assert!(close(eq.height(f).unwrap(), 0.75f64.sqrt(), 1e-15));
        }
        let right = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(close(right.height(0).unwrap(), 0.5f64.sqrt(), 1e-15));
        // Apex projecting outside the base: distance to the affine hull.
        let obtuse = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.5, 0.2]]).unwrap();
        assert!(close(obtuse.height(2).unwrap(), 0.2, 1e-15));
        assert!(right.height(3).is_err());
        let regular3 = Simplex::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.75f64.sqrt(), 0.0],
            vec![0.5, 0.75f64.sqrt() / 3.0, (2.0f64 / 3.0).sqrt()],
        ])
        .unwrap();
        assert!(close(regular3.diameter(), 1.0, 1e-14));
        assert!(close(regular3.height(3).unwrap(), (2.0f64 / 3.0).sqrt(), 1e-14));
        assert!(Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).is_err());
    }

    #[test]
    fn graph_domain_validation() {
        let zero = Profile1D::new(1.0, vec![0.0; 5]).unwrap();
        assert!(GraphDomain::new(zero, 0.1).is_err());
        let one = Profile1D::new(2.0, vec![1.0; 5]).unwrap();
        let g = GraphDomain::new(one.clone(), 0.1).unwrap();
        assert!(close(g.area(), 0.2, 1e-15));
        assert!(close(g.diameter(), (4.0f64 + 0.01).sqrt(), 1e-15));
        assert!(GraphDomain::new(one, -1.0).is_err());
    }
}
