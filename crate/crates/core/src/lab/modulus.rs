//! Sampled modulus certificates. A checker evaluates an inequality on a
//! finite set of point pairs and reports the worst one; it certifies the
//! sample, not the function.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Domain, Point};
use crate::eigen::smallest_eigenpairs;
use crate::lab::gap::{coarse_for, dirichlet_pencil, hierarchy, GapOptions};
use crate::mesh::{Locator, TriMesh};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusReport {
    /// `margin ≥ −tolerance`.
    pub holds: bool,
    /// Ordered lexicographically so that the report does not depend on pair orientation.
    pub worst_pair: (Point, Point),
    /// Minimum over the sampled pairs of `RHS − LHS`.
    pub margin: f64,
    pub tolerance: f64,
    pub pairs: usize,
}

fn ordered(a: Point, b: Point) -> (Point, Point) {
    if (a.x, a.y) <= (b.x, b.y) {
        (a, b)
    } else {
        (b, a)
    }
}

fn report(margins: impl Iterator<Item = (f64, Point, Point)>, tolerance: f64) -> ModulusReport {
    let mut worst = (f64::INFINITY, Point::default(), Point::default());
    let mut pairs = 0;
    for m in margins {
        pairs += 1;
        if m.0 < worst.0 {
            worst = m;
        }
    }
    ModulusReport {
        holds: worst.0 >= -tolerance,
        worst_pair: ordered(worst.1, worst.2),
        margin: worst.0,
        tolerance,
        pairs,
    }
}

/// `|f(y) − f(x)| ≤ 2η(|y − x|/2)` over `pairs` of indices into `points`.
pub fn check_modulus_continuity(
    points: &[Point],
    f: &[f64],
    eta: impl Fn(f64) -> f64,
    pairs: &[(usize, usize)],
    tolerance: f64,
) -> ModulusReport {
    report(
        pairs.iter().map(|&(i, j)| {
            let s = points[i].dist(points[j]);
            (2.0 * eta(0.5 * s) - (f[j] - f[i]).abs(), points[i], points[j])
        }),
        tolerance,
    )
}

/// `(X(y) − X(x))·(y − x)/|y − x| ≥ 2ω(|y − x|/2)`.
pub fn check_modulus_expansion(
    points: &[Point],
    x: &[Point],
    omega: impl Fn(f64) -> f64,
    pairs: &[(usize, usize)],
    tolerance: f64,
) -> Result<ModulusReport> {
    let mut margins = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        let d = points[j] - points[i];
        let s = d.norm();
        if s == 0.0 {
            return Err(Error::invalid_arg("coincident pair in modulus check"));
        }
        let lhs = (x[j] - x[i]).dot(d) / s;
        margins.push((lhs - 2.0 * omega(0.5 * s), points[i], points[j]));
    }
    Ok(report(margins.into_iter(), tolerance))
}

/// `ω` is a modulus of contraction for `X` when `−ω` is a modulus of
/// expansion for `−X`.
pub fn check_modulus_contraction(
    points: &[Point],
    x: &[Point],
    omega: impl Fn(f64) -> f64,
    pairs: &[(usize, usize)],
    tolerance: f64,
) -> Result<ModulusReport> {
    let neg: Vec<Point> = x.iter().map(|p| p.scale(-1.0)).collect();
    check_modulus_expansion(points, &neg, |s| -omega(s), pairs, tolerance)
}

/// Modulus of convexity of a nodal function: expansion of its recovered gradient.
pub fn check_modulus_convexity(
    mesh: &TriMesh,
    f: &[f64],
    omega: impl Fn(f64) -> f64,
    pairs: &[(usize, usize)],
    tolerance: f64,
) -> Result<ModulusReport> {
    check_modulus_expansion(mesh.vertices(), &mesh.recover_gradient(f), omega, pairs, tolerance)
}

/// Modulus of concavity: contraction of the recovered gradient.
pub fn check_modulus_concavity(
    mesh: &TriMesh,
    f: &[f64],
    omega: impl Fn(f64) -> f64,
    pairs: &[(usize, usize)],
    tolerance: f64,
) -> Result<ModulusReport> {
    check_modulus_contraction(mesh.vertices(), &mesh.recover_gradient(f), omega, pairs, tolerance)
}

/// Default random batch size of [`sample_pairs`].
pub const DEFAULT_RANDOM_PAIRS: usize = 2000;

/// Index pairs over `candidates`: all pairs of a strided subset of about
/// `lattice` candidates, then `random` fixed-seed pairs. Coincident points are skipped.
pub fn sample_pairs(points: &[Point], candidates: &[usize], lattice: usize, random: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if candidates.len() < 2 {
        return out;
    }
    let stride = (candidates.len() / lattice.max(2)).max(1);
    let sub: Vec<usize> = candidates.iter().copied().step_by(stride).collect();
    for (a, &i) in sub.iter().enumerate() {
        for &j in &sub[a + 1..] {
            out.push((i, j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < sub.len() * (sub.len() - 1) / 2 + random {
        let i = candidates[rng.random_range(0..candidates.len())];
        let j = candidates[rng.random_range(0..candidates.len())];
        if points[i] != points[j] {
            out.push((i, j));
        }
    }
    out.retain(|&(i, j)| points[i] != points[j]);
    out
}

/// Slack constant in the log-concavity tolerance `C·h`. On the unit square,
/// whose ground state is exactly log-concave, the worst sampled second
/// difference of the interpolated log is about `5e−4·h`; this leaves a
/// factor of twenty.
pub const LOG_CONCAVITY_C: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct LogConcavityOptions {
    pub gap: GapOptions,
    /// Segments must stay this far from the boundary, as a fraction of the diameter.
    pub interior_margin: f64,
    pub segments: usize,
    pub seed: u64,
    pub c: f64,
}

impl Default for LogConcavityOptions {
    fn default() -> Self {
        LogConcavityOptions {
            gap: GapOptions::levels(4),
            interior_margin: 0.05,
            segments: 2000,
            seed: 0x10c0_ca4e,
            c: LOG_CONCAVITY_C,
        }
    }
}

/// Ground state (positive, on all vertices) of the finest mesh in the hierarchy.
pub fn ground_state(domain: &Domain, opts: &GapOptions) -> Result<(TriMesh, Vec<f64>)> {
    let mesh = hierarchy(coarse_for(domain, &opts.coarse)?, opts.levels).pop().unwrap();
    let p = dirichlet_pencil(&mesh, None)?;
    let s = smallest_eigenpairs(&p, 1, &opts.eigen)?;
    let phi = p.expand(&s.eigenvectors[0], 0.0);
    Ok((mesh, phi))
}

/// Second differences `log φ(x) + log φ(y) − 2 log φ(m)` over explicit
/// segments, with `φ` interpolated on the mesh. Every segment point must be
/// at least `margin` from the boundary.
pub fn log_concavity_segments(
    domain: &Domain,
    mesh: &TriMesh,
    phi: &[f64],
    segments: &[(Point, Point)],
    margin: f64,
    tolerance: f64,
) -> Result<ModulusReport> {
    let loc = Locator::new(mesh);
    let mut margins = Vec::with_capacity(segments.len());
    for &(x, y) in segments {
        let m = x.midpoint(y);
        let mut logs = [0.0; 3];
        for (slot, p) in logs.iter_mut().zip([x, y, m]) {
            if !domain.contains(p) || domain.distance_to_boundary(p) < margin {
                return Err(Error::SegmentOutsideInterior);
            }
            let v = loc.interpolate(phi, p).ok_or(Error::SegmentOutsideInterior)?;
            if !(v > 0.0) {
                return Err(Error::SegmentOutsideInterior);
            }
            *slot = v.ln();
        }
        margins.push((-(logs[0] + logs[1] - 2.0 * logs[2]), x, y));
    }
    Ok(report(margins.into_iter(), tolerance))
}

/// Brascamp-Lieb check: random interior segments, tolerance `C·h` on the finest mesh.
pub fn log_concavity_check(domain: &Domain, opts: &LogConcavityOptions) -> Result<ModulusReport> {
    if !domain.is_convex() {
        return Err(Error::InvalidDomain("log-concavity needs a convex domain".into()));
    }
    let (mesh, phi) = ground_state(domain, &opts.gap)?;
    let margin = opts.interior_margin * domain.diameter();
    let (lo, hi) = domain.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let loc = Locator::new(&mesh);
    // Discrete ground states may dip below zero next to corners; such points
    // are outside the admissible interior as well.
    let inside = |p: Point| {
        domain.contains(p)
            && domain.distance_to_boundary(p) >= margin
            && loc.interpolate(&phi, p).is_some_and(|v| v > 0.0)
    };
    let mut segments = Vec::with_capacity(opts.segments);
    let mut attempts = 0usize;
    while segments.len() < opts.segments && attempts < 1000 * opts.segments.max(1) {
        attempts += 1;
        let mut draw = || Point::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
        let (x, y) = (draw(), draw());
        // Convexity puts the midpoint inside once both ends are.
        if x != y && inside(x) && inside(y) && inside(x.midpoint(y)) {
            segments.push((x, y));
        }
    }
    if segments.is_empty() {
        return Err(Error::SegmentOutsideInterior);
    }
    log_concavity_segments(domain, &mesh, &phi, &segments, margin, opts.c * mesh.h_max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn line(n: usize) -> Vec<Point> {
        (0..=n).map(|i| Point::new(i as f64 / n as f64, 0.0)).collect()
    }

    fn all_pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    #[test]
    fn continuity_examples() {
        let pts = line(10);
        let pairs = all_pairs(11);
        let f: Vec<f64> = pts.iter().map(|p| p.x).collect();
        let r = check_modulus_continuity(&pts, &f, |s| s, &pairs, 1e-12);
        assert!(r.holds && r.margin.abs() < 1e-12);
        let f2: Vec<f64> = pts.iter().map(|p| 2.0 * p.x).collect();
        assert!(!check_modulus_continuity(&pts, &f2, |s| s, &pairs, 1e-12).holds);
        let c = vec![3.0; 11];
        assert!(check_modulus_continuity(&pts, &c, |_| 0.0, &pairs, 0.0).holds);
    }

    #[test]
    fn log_sine_has_the_cosine_concavity_modulus() {
        let n = 40;
        let pts: Vec<Point> = line(n)[1..n].to_vec();
        let grad: Vec<Point> = pts.iter().map(|p| Point::new(PI / (PI * p.x).tan(), 0.0)).collect();
        let pairs = all_pairs(pts.len());
        let r = check_modulus_contraction(&pts, &grad, |s| -PI * (PI * s).tan(), &pairs, 1e-9).unwrap();
        assert!(r.holds, "{r:?}");
        // Symmetric pairs about 1/2 give equality.
        assert!(r.margin.abs() < 1e-9);
    }

    #[test]
    fn coincident_pairs_are_rejected() {
        let pts = line(3);
        let x = pts.clone();
        assert!(check_modulus_expansion(&pts, &x, |s| s, &[(1, 1)], 0.0).is_err());
        let r = check_modulus_expansion(&pts, &x, |s| s, &all_pairs(4), 1e-12).unwrap();
        assert!(r.holds && r.margin.abs() < 1e-12);
    }
}
