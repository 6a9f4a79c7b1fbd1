//! Property suites for the gap lower bounds: Lavine's interval theorem and
//! the Andrews-Clutterbuck corollary on convex polygons.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::BoundaryCondition;
use crate::domain::{Domain, Point, Polygon};
use crate::lab::gap::{fundamental_gap_with, GapOptions};
use crate::oned::{schrodinger_eigs_1d, Profile1D};
use crate::{Error, Result, PI2};

/// Convex piecewise-affine potential `V(x) = max_i (a_i + b_i x)` on `[0, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPotential {
    pub length: f64,
    pub pieces: Vec<(f64, f64)>,
}

impl ConvexPotential {
    pub fn eval(&self, x: f64) -> f64 {
        self.pieces.iter().map(|(a, b)| a + b * x).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max V − min V` over the interval (attained at the ends or at kinks).
    pub fn amplitude(&self) -> f64 {
        let mut xs = alloc::vec![0.0, self.length];
        for (i, (a1, b1)) in self.pieces.iter().enumerate() {
            for (a2, b2) in &self.pieces[i + 1..] {
                if b1 != b2 {
                    let x = (a2 - a1) / (b1 - b2);
                    if (0.0..=self.length).contains(&x) {
                        xs.push(x);
                    }
                }
            }
        }
        let vals: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        vals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - vals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Between one and five affine pieces with random slopes and offsets,
    /// rescaled to an amplitude drawn uniformly from `[0, max_amplitude]`.
    pub fn random(rng: &mut impl Rng, length: f64, max_amplitude: f64) -> Self {
        let m = rng.random_range(1..=5);
        let raw: Vec<(f64, f64)> =
            (0..m).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0) / length)).collect();
        let base = ConvexPotential { length, pieces: raw };
        let target = rng.random_range(0.0..=max_amplitude);
        let amp = base.amplitude();
        let s = if amp > 1e-12 { target / amp } else { 0.0 };
        ConvexPotential { length, pieces: base.pieces.iter().map(|(a, b)| (s * a, s * b)).collect() }
    }

    /// Samples on a grid whose nodes contain both extrapolation grids of `n`.
    pub fn profile(&self, n: usize) -> Profile1D {
        Profile1D::from_fn(self.length, 2 * n, |x| self.eval(x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LavineTrial {
    pub potential: ConvexPotential,
    pub amplitude: f64,
    pub dirichlet_gap: f64,
    pub neumann_gap: f64,
    /// `gap − 3π²/R²` and `gap − π²/R²`.
    pub dirichlet_margin: f64,
    pub neumann_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LavineReport {
    pub length: f64,
    pub seed: u64,
    pub trials: Vec<LavineTrial>,
    /// Margins below `−VIOLATION_TOL`.
    pub violations: usize,
    /// Nonconstant potentials of amplitude ≥ 1 whose smaller margin is not above `STRICT_MARGIN`.
    pub strict_failures: usize,
    /// `|gap − bound|` at `V ≡ 0`, Dirichlet and Neumann.
    pub equality_error: (f64, f64),
}

impl LavineReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.strict_failures == 0 && self.equality_error.0.max(self.equality_error.1) <= 1e-6
    }
}

pub const VIOLATION_TOL: f64 = 1e-6;
pub const STRICT_MARGIN: f64 = 1e-3;
pub const LAVINE_GRID: usize = 512;

fn gaps_1d(v: &Profile1D, n: usize) -> Result<(f64, f64)> {
    let d = schrodinger_eigs_1d(v, BoundaryCondition::Dirichlet, n, 2)?.eigenvalues;
    let m = schrodinger_eigs_1d(v, BoundaryCondition::Neumann, n, 2)?.eigenvalues;
    Ok((d[1] - d[0], m[1] - m[0]))
}

/// Random convex potentials on `[0, R]`: Dirichlet gap ≥ 3π²/R² and
/// Neumann gap `μ₁ − μ₀` ≥ π²/R², with equality at `V ≡ 0`.
pub fn lavine_suite(trials: usize, r: f64, seed: u64) -> Result<LavineReport> {
    if trials == 0 || !(r > 0.0) {
        return Err(Error::invalid_arg("lavine suite needs trials >= 1 and R > 0"));
    }
    let n = LAVINE_GRID;
    let (bd, bn) = (3.0 * PI2 / (r * r), PI2 / (r * r));
    let (d0, n0) = gaps_1d(&Profile1D::constant(r, 0.0), n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    let (mut violations, mut strict_failures) = (0, 0);
    for _ in 0..trials {
        let potential = ConvexPotential::random(&mut rng, r, 50.0);
        let amplitude = potential.amplitude();
        let (dg, ng) = gaps_1d(&potential.profile(n), n)?;
        let trial = LavineTrial {
            amplitude,
            dirichlet_gap: dg,
            neumann_gap: ng,
            dirichlet_margin: dg - bd,
            neumann_margin: ng - bn,
            potential,
        };
        if trial.dirichlet_margin < -VIOLATION_TOL || trial.neumann_margin < -VIOLATION_TOL {
            violations += 1;
        }
        if amplitude >= 1.0 && trial.dirichlet_margin.min(trial.neumann_margin) <= STRICT_MARGIN {
            strict_failures += 1;
        }
        out.push(trial);
    }
    Ok(LavineReport {
        length: r,
        seed,
        trials: out,
        violations,
        strict_failures,
        equality_error: ((d0 - bd).abs(), (n0 - bn).abs()),
    })
}

pub struct AcCase {
    pub name: String,
    pub domain: Domain,
}

pub struct NamedPotential {
    pub name: String,
    pub f: Box<dyn Fn(Point) -> f64 + Send + Sync>,
}

impl NamedPotential {
    pub fn new(name: &str, f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        NamedPotential { name: name.to_string(), f: Box::new(f) }
    }
}

impl core::fmt::Debug for NamedPotential {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("NamedPotential").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcRow {
    pub domain: String,
    pub potential: String,
    pub diameter: f64,
    pub gap: f64,
    /// `3π²/R²`.
    pub bound: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcReport {
    pub rows: Vec<AcRow>,
    pub violations: usize,
}

/// Absolute floor of the gap tolerance.
pub const AC_TOL_FLOOR: f64 = 1e-8;

/// One (domain, potential) pair of the suite.
pub fn ac_row(case: &AcCase, v: &NamedPotential, opts: &GapOptions) -> Result<AcRow> {
    if !case.domain.is_convex() {
        return Err(Error::InvalidDomain(alloc::format!("{} is not convex", case.name)));
    }
    let g = fundamental_gap_with(&case.domain, opts, Some(&*v.f))?;
    let bound = 3.0 * PI2 / (g.d * g.d);
    let tolerance = g.tolerance(AC_TOL_FLOOR);
    let margin = g.gap() - bound;
    Ok(AcRow {
        domain: case.name.clone(),
        potential: v.name.clone(),
        diameter: g.d,
        gap: g.gap(),
        bound,
        tolerance,
        margin,
        holds: margin >= -tolerance,
    })
}

/// Dirichlet gap of `−Δ + V` against `3π²/R²` for every pair.
pub fn ac_gap_suite(cases: &[AcCase], potentials: &[NamedPotential], opts: &GapOptions) -> Result<AcReport> {
    let mut rows = Vec::with_capacity(cases.len() * potentials.len());
    for case in cases {
        for v in potentials {
            rows.push(ac_row(case, v, opts)?);
        }
    }
    Ok(summarize_ac(rows))
}

pub fn summarize_ac(rows: Vec<AcRow>) -> AcReport {
    let violations = rows.iter().filter(|r| !r.holds).count();
    AcReport { rows, violations }
}

/// Convex polygon with 5–8 vertices on a random ellipse, angles kept apart.
pub fn random_convex_polygon(rng: &mut impl Rng) -> Result<Polygon> {
    loop {
        let a = rng.random_range(0.5..1.0);
        let b = rng.random_range(0.3..0.8);
        let m = rng.random_range(5..=8);
        let mut theta: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        theta.sort_by(f64::total_cmp);
        let min_gap = theta
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(core::iter::once(theta[0] + 2.0 * PI - theta[m - 1]))
            .fold(f64::INFINITY, f64::min);
        if min_gap < 0.35 {
            continue;
        }
        return Polygon::new(theta.iter().map(|t| Point::new(a * t.cos(), b * t.sin())).collect());
    }
}

/// Unit square, unit equilateral triangle and three random convex polygons.
pub fn ac_default_cases(seed: u64) -> Result<Vec<AcCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = alloc::vec![
        AcCase { name: "square".into(), domain: Domain::rectangle(1.0, 1.0)? },
        AcCase { name: "equilateral".into(), domain: Domain::Polygon(Polygon::equilateral()) },
    ];
    for i in 0..3 {
        cases.push(AcCase { name: alloc::format!("ellipse-polygon-{i}"), domain: Domain::Polygon(random_convex_polygon(&mut rng)?) });
    }
    Ok(cases)
}

/// `V ≡ 0` and two convex potentials.
pub fn ac_default_potentials() -> Vec<NamedPotential> {
    alloc::vec![
        NamedPotential::new("zero", |_| 0.0),
        NamedPotential::new("bowl", |p| 10.0 * ((p.x - 0.3).powi(2) + (p.y - 0.2).powi(2))),
        NamedPotential::new("ridge", |p| 20.0 * (p.x + 0.5 * p.y - 0.4).max(0.0)),
    ]
}
