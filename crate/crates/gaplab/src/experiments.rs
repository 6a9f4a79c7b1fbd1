//! One function per subcommand: configuration in, report + table + summary out.

use std::path::Path;

use gaplab_core::assembly::{laplacian_pencil, BoundaryCondition, SymPencil, Weight};
use gaplab_core::domain::{Domain, Point, Polygon};
use gaplab_core::eigen::{smallest_eigenpairs, EigenOptions};
use gaplab_core::lab::collapse::{collapse_corollary1, collapse_theorem1, CollapseOptions, CollapseTable};
use gaplab_core::lab::gap::{fundamental_gap_with, rectangle_gap_exact, GapOptions, GapResult};
use gaplab_core::lab::modulus::{log_concavity_check, LogConcavityOptions, LOG_CONCAVITY_C};
use gaplab_core::lab::props::{
    prop1_residual_check, prop2_identity_check, prop2_identity_interval, prop4_sum_bound_check, random_family, Prop2Row,
};
use gaplab_core::lab::suites::{
    ac_default_cases, ac_default_potentials, ac_row, lavine_suite, summarize_ac, AC_TOL_FLOOR, VIOLATION_TOL,
};
use gaplab_core::lab::triangles::{fit_scaling, moduli_grid, scan_entry, summarize_scan, triangle_gap, TriangleOptions};
use gaplab_core::mesh::rectangle_mesh;
use gaplab_core::oned::{schrodinger_eigs_1d, schrodinger_pencil, Profile1D};
use gaplab_core::PI2;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::parallel::Pool;
use crate::report::{num, Report, Table};
use crate::spec::{DomainSpec, PotentialSpec};

/// What a subcommand produces.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Report,
    pub table: Table,
    pub summary: Vec<String>,
}

/// A domain spec together with the directory its relative paths resolve against.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainArg {
    pub spec: DomainSpec,
    pub base_dir: std::path::PathBuf,
}

impl DomainArg {
    pub fn domain(&self) -> Result<Domain> {
        self.spec.to_domain(&self.base_dir)
    }
}

impl Serialize for DomainArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

fn check_range<T: PartialOrd + std::fmt::Display>(name: &str, v: T, lo: T, hi: T) -> Result<()> {
    if v < lo || v > hi {
        return Err(Error::input(format!("{name} = {v} is outside [{lo}, {hi}]")));
    }
    Ok(())
}

fn gap_json(g: &GapResult) -> Value {
    json!({
        "lambda1": g.lambda1,
        "lambda2": g.lambda2,
        "gap": g.gap(),
        "diameter": g.d,
        "xi": g.xi,
        "extrapolated": g.extrapolated,
        "error_estimate": g.error_estimate,
        "cluster_flag": g.cluster_flag,
        "levels": g.per_level.iter().map(|l| json!({
            "h": l.h, "dofs": l.dofs, "lambda1": l.lambda1, "lambda2": l.lambda2,
        })).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------- gap

#[derive(Debug, Clone, Serialize)]
pub struct GapConfig {
    pub domain: DomainArg,
    pub levels: usize,
}

pub const GAP_COLUMNS: &[&str] = &["level", "h", "dofs", "lambda1", "lambda2", "gap", "xi", "tolerance"];

pub fn gap(cfg: &GapConfig) -> Result<Output> {
    check_range("levels", cfg.levels, 1, 7)?;
    let domain = cfg.domain.domain()?;
    let g = fundamental_gap_with(&domain, &GapOptions::levels(cfg.levels), None)?;
    let xi_tol = g.tolerance(0.0) * g.d * g.d;
    let mut table = Table::new(GAP_COLUMNS);
    for (i, l) in g.per_level.iter().enumerate() {
        let gap = l.lambda2 - l.lambda1;
        table.push(vec![
            i.to_string(),
            num(l.h),
            l.dofs.to_string(),
            num(l.lambda1),
            num(l.lambda2),
            num(gap),
            num(gap * g.d * g.d),
            String::new(),
        ]);
    }
    table.push(vec![
        "extrapolated".into(),
        String::new(),
        String::new(),
        num(g.lambda1),
        num(g.lambda2),
        num(g.gap()),
        num(g.xi),
        num(xi_tol),
    ]);
    let summary = vec![format!(
        "gap = {:.8}  xi = {:.8} ± {:.2e}  (d = {:.6}, {} levels{})",
        g.gap(),
        g.xi,
        xi_tol,
        g.d,
        g.per_level.len(),
        if g.cluster_flag { ", lambda2 clustered" } else { "" }
    )];
    let report = Report::new("gap", cfg, EigenOptions::default().seed, gap_json(&g))?.tolerance("xi", xi_tol);
    Ok(Output { report, table, summary })
}

// ---------------------------------------------------------------- rectangle

#[derive(Debug, Clone, Serialize)]
pub struct RectangleConfig {
    pub a: f64,
    pub b: f64,
    /// Also run the finite-element gap with this many levels.
    pub levels: Option<usize>,
}

pub const RECTANGLE_COLUMNS: &[&str] = &["source", "lambda1", "lambda2", "gap", "xi", "tolerance"];

pub fn rectangle(cfg: &RectangleConfig) -> Result<Output> {
    let (a, b) = if cfg.a >= cfg.b { (cfg.a, cfg.b) } else { (cfg.b, cfg.a) };
    let exact = rectangle_gap_exact(a, b)?;
    let mut table = Table::new(RECTANGLE_COLUMNS);
    let e = &exact.eigenvalues;
    table.push(vec!["exact".into(), num(e[0]), num(e[1]), num(exact.gap), num(exact.xi), num(0.0)]);
    let mut summary = vec![format!("exact: gap = {:.10}  xi = {:.10}", exact.gap, exact.xi)];
    let mut results = json!({
        "exact": {"eigenvalues": exact.eigenvalues, "gap": exact.gap, "xi": exact.xi},
    });
    let mut report_tol = None;
    if let Some(levels) = cfg.levels {
        check_range("levels", levels, 1, 7)?;
        let g = fundamental_gap_with(&Domain::rectangle(a, b)?, &GapOptions::levels(levels), None)?;
        let tol = g.tolerance(0.0) * g.d * g.d;
        table.push(vec!["fem".into(), num(g.lambda1), num(g.lambda2), num(g.gap()), num(g.xi), num(tol)]);
        summary.push(format!(
            "fem:   gap = {:.10}  xi = {:.10} ± {:.2e}  (relative error {:.2e})",
            g.gap(),
            g.xi,
            tol,
            (g.xi - exact.xi).abs() / exact.xi
        ));
        results["fem"] = gap_json(&g);
        report_tol = Some(tol);
    }
    let mut report = Report::new("rectangle", cfg, EigenOptions::default().seed, results)?;
    if let Some(t) = report_tol {
        report = report.tolerance("fem_xi", t);
    }
    Ok(Output { report, table, summary })
}

// ---------------------------------------------------------------- collapse

#[derive(Debug, Clone, Serialize)]
pub struct CollapseConfig {
    /// Potential `φ` of the drift Laplacian (`collapse-t1` only); the thin profile is `e^{−φ}`.
    pub phi: Option<PotentialSpec>,
    #[serde(rename = "L")]
    pub length: f64,
    pub k: usize,
    pub eps_list: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub n_1d: usize,
}

pub const COLLAPSE_COLUMNS: &[&str] = &["epsilon", "h", "j", "mu", "reference", "error", "relative_error", "tolerance"];

fn collapse_output(command: &str, cfg: &CollapseConfig, t: &CollapseTable) -> Result<Output> {
    let mut table = Table::new(COLLAPSE_COLUMNS);
    let mut summary = Vec::new();
    for r in &t.rows {
        for j in 0..r.mu.len() {
            let rel = r.errors[j] / t.reference[j].abs().max(f64::MIN_POSITIVE);
            table.push(vec![
                num(r.epsilon),
                num(r.h),
                j.to_string(),
                num(r.mu[j]),
                num(t.reference[j]),
                num(r.errors[j]),
                num(rel),
                num(2.0 * r.error_estimates[j]),
            ]);
        }
        let j = r.mu.len() - 1;
        summary.push(format!(
            "eps = {:<6} mu_{j} = {:.8}  limit {:.8}  relative error {:.3e}",
            r.epsilon, r.mu[j], t.reference[j], r.errors[j] / t.reference[j].abs().max(f64::MIN_POSITIVE)
        ));
    }
    let results = json!({
        "reference": t.reference,
        "rows": t.rows.iter().map(|r| json!({
            "epsilon": r.epsilon, "h": r.h, "mu": r.mu, "errors": r.errors,
            "error_estimates": r.error_estimates,
        })).collect::<Vec<_>>(),
    });
    let worst = t.rows.iter().flat_map(|r| r.error_estimates.iter()).fold(0.0f64, |a, b| a.max(*b));
    let report = Report::new(command, cfg, EigenOptions::default().seed, results)?.tolerance("mu", 2.0 * worst);
    Ok(Output { report, table, summary })
}

fn collapse_options(cfg: &CollapseConfig) -> Result<CollapseOptions> {
    check_range("k", cfg.k, 1, 6)?;
    check_range("nx", cfg.nx, 4, 4096)?;
    check_range("ny", cfg.ny, 1, 256)?;
    check_range("n_1d", cfg.n_1d, 16, 1 << 16)?;
    Ok(CollapseOptions { nx: cfg.nx, ny: cfg.ny, n_1d: cfg.n_1d, ..Default::default() })
}

pub fn collapse_t1(cfg: &CollapseConfig) -> Result<Output> {
    let opts = collapse_options(cfg)?;
    let phi = cfg.phi.as_ref().ok_or_else(|| Error::input("collapse-t1 needs --phi"))?;
    let phi = phi.profile(cfg.length, 16 * cfg.nx)?;
    let t = collapse_theorem1(&phi, cfg.k, &cfg.eps_list, &opts)?;
    collapse_output("collapse-t1", cfg, &t)
}

pub fn collapse_c1(cfg: &CollapseConfig) -> Result<Output> {
    let opts = collapse_options(cfg)?;
    let t = collapse_corollary1(cfg.k, &cfg.eps_list, &opts)?;
    collapse_output("collapse-c1", cfg, &t)
}

// ---------------------------------------------------------------- prop1 / prop2

#[derive(Debug, Clone, Serialize)]
pub struct Prop1Config {
    pub domain: DomainArg,
    pub k: usize,
    pub levels: usize,
}

pub const PROP1_COLUMNS: &[&str] = &["k", "h", "rows", "gap", "residual", "tolerance"];

pub fn prop1(cfg: &Prop1Config) -> Result<Output> {
    check_range("k", cfg.k, 2, 8)?;
    check_range("levels", cfg.levels, 1, 7)?;
    let r = prop1_residual_check(&cfg.domain.domain()?, cfg.k, &GapOptions::levels(cfg.levels))?;
    let mut table = Table::new(PROP1_COLUMNS);
    table.push(vec![cfg.k.to_string(), num(r.h), r.rows.to_string(), num(r.gap), num(r.residual), String::new()]);
    let summary =
        vec![format!("k = {}: relative residual {:.3e} on {} rows (h = {:.4}, gap {:.6})", cfg.k, r.residual, r.rows, r.h, r.gap)];
    let results = json!({"k": cfg.k, "h": r.h, "rows": r.rows, "gap": r.gap, "residual": r.residual});
    let report = Report::new("prop1", cfg, EigenOptions::default().seed, results)?;
    Ok(Output { report, table, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Config {
    /// 2D domain; when absent the interval `[0, R]` with potential `v` is used.
    pub domain: Option<DomainArg>,
    pub v: PotentialSpec,
    #[serde(rename = "R")]
    pub r: f64,
    pub n: usize,
    pub k: usize,
    pub levels: usize,
}

pub const PROP2_COLUMNS: &[&str] = &["k", "dirichlet_gap", "mu", "difference", "relative"];

pub fn prop2(cfg: &Prop2Config) -> Result<Output> {
    check_range("k", cfg.k, 2, 4)?;
    let rows: Vec<Prop2Row> = match &cfg.domain {
        Some(d) => {
            check_range("levels", cfg.levels, 1, 7)?;
            prop2_identity_check(&d.domain()?, cfg.k, &GapOptions::levels(cfg.levels))?.rows
        }
        None => {
            check_range("n", cfg.n, 16, 1 << 16)?;
            prop2_identity_interval(&cfg.v.profile(cfg.r, 4 * cfg.n)?, cfg.k, cfg.n)?
        }
    };
    let mut table = Table::new(PROP2_COLUMNS);
    let mut summary = Vec::new();
    for r in &rows {
        table.push(vec![r.k.to_string(), num(r.dirichlet_gap), num(r.mu), num(r.difference), num(r.relative())]);
        summary.push(format!(
            "k = {}: lambda_k - lambda_1 = {:.8}  mu_(k-1) = {:.8}  relative difference {:.2e}",
            r.k,
            r.dirichlet_gap,
            r.mu,
            r.relative()
        ));
    }
    let results: Vec<Value> = rows
        .iter()
        .map(|r| json!({"k": r.k, "dirichlet_gap": r.dirichlet_gap, "mu": r.mu, "difference": r.difference}))
        .collect();
    let report = Report::new("prop2", cfg, EigenOptions::default().seed, results)?;
    Ok(Output { report, table, summary })
}

// ---------------------------------------------------------------- prop4

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PencilKind {
    /// Neumann Laplacian on `[0, 1]`, finite differences.
    Interval,
    /// Neumann Laplacian on the unit square, P1 elements.
    Square,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop4Config {
    pub pencil: PencilKind,
    pub n: usize,
    pub families: usize,
    pub k_max: usize,
    pub seed: u64,
}

pub const PROP4_COLUMNS: &[&str] = &["family", "kind", "k", "lhs", "rhs", "slack", "holds"];

pub fn neumann_test_pencil(kind: PencilKind, n: usize) -> Result<SymPencil> {
    Ok(match kind {
        PencilKind::Interval => schrodinger_pencil(&Profile1D::constant(1.0, 0.0), BoundaryCondition::Neumann, n)?,
        PencilKind::Square => {
            laplacian_pencil(&rectangle_mesh(1.0, 1.0, n, n)?, BoundaryCondition::Neumann, &Weight::Uniform, None)?
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop4Row {
    pub family: usize,
    /// `random` or `exact` (the eigenvectors themselves).
    pub kind: &'static str,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `families` random orthogonalized families with `k = 1 + family mod k_max`,
/// then the exact eigenvectors for every `k ≤ k_max`.
pub fn prop4_rows(cfg: &Prop4Config) -> Result<Vec<Prop4Row>> {
    check_range("k_max", cfg.k_max, 1, 8)?;
    check_range("families", cfg.families, 1, 10_000)?;
    let p = neumann_test_pencil(cfg.pencil, cfg.n)?;
    let opts = EigenOptions::default();
    let s = smallest_eigenpairs(&p, cfg.k_max + 1, &opts)?;
    let mut rows = Vec::new();
    for f in 0..cfg.families {
        let k = 1 + f % cfg.k_max;
        let fam = random_family(&p, k, &s.eigenvectors[0], cfg.seed.wrapping_add(f as u64))?;
        let r = prop4_sum_bound_check(&p, &fam, &opts)?;
        rows.push(Prop4Row { family: f, kind: "random", k, lhs: r.lhs, rhs: r.rhs, holds: r.holds });
    }
    for k in 1..=cfg.k_max {
        let r = prop4_sum_bound_check(&p, &s.eigenvectors[1..=k], &opts)?;
        rows.push(Prop4Row { family: cfg.families + k - 1, kind: "exact", k, lhs: r.lhs, rhs: r.rhs, holds: r.holds });
    }
    Ok(rows)
}

pub fn prop4(cfg: &Prop4Config) -> Result<Output> {
    check_range("n", cfg.n, 4, 4096)?;
    let rows = prop4_rows(cfg)?;
    let mut table = Table::new(PROP4_COLUMNS);
    for r in &rows {
        table.push(vec![
            r.family.to_string(),
            r.kind.into(),
            r.k.to_string(),
            num(r.lhs),
            num(r.rhs),
            num(r.rhs - r.lhs),
            r.holds.to_string(),
        ]);
    }
    let failures = rows.iter().filter(|r| !r.holds).count();
    let equality = rows.iter().filter(|r| r.kind == "exact").map(|r| (r.rhs - r.lhs).abs() / r.lhs).fold(0.0, f64::max);
    let summary = vec![format!(
        "{} families, {failures} failures; exact eigenvectors reproduce equality to {:.2e} relative",
        rows.len(),
        equality
    )];
    let report = Report::new("prop4", cfg, cfg.seed, json!({"rows": rows, "failures": failures, "equality_error": equality}))?
        .tolerance("bound", 1e-9);
    Ok(Output { report, table, summary })
}

// ---------------------------------------------------------------- triangles

#[derive(Debug, Clone, Serialize)]
pub struct ModuliScanConfig {
    pub grid_n: usize,
    pub levels: usize,
    pub nx: usize,
    pub ny: usize,
}

impl ModuliScanConfig {
    fn options(&self) -> Result<TriangleOptions> {
        check_range("grid_n", self.grid_n, 2, 64)?;
        check_range("levels", self.levels, 2, 7)?;
        Ok(TriangleOptions { nx: self.nx, ny: self.ny, ..TriangleOptions::scan(self.levels) })
    }
}

pub const SCAN_COLUMNS: &[&str] = &["i", "j", "x", "y", "xi", "tolerance"];
pub const EQUILATERAL_XI: f64 = 64.0 * PI2 / 9.0;

pub fn moduli_scan(cfg: &ModuliScanConfig, pool: &Pool) -> Result<Output> {
    let opts = cfg.options()?;
    let entries = pool.map(moduli_grid(cfg.grid_n)?, |p| scan_entry(p, &opts))?;
    let scan = summarize_scan(cfg.grid_n, entries)?;
    let mut table = Table::new(SCAN_COLUMNS);
    for e in &scan.entries {
        table.push(vec![
            e.point.i.to_string(),
            e.point.j.to_string(),
            num(e.point.p.x),
            num(e.point.p.y),
            num(e.xi),
            num(2.0 * e.error_estimate),
        ]);
    }
    let min_tol = 2.0 * scan.entries.iter().find(|e| e.point.p == scan.argmin.p).map_or(0.0, |e| e.error_estimate);
    let summary = vec![
        format!("{} moduli points; min xi = {:.6} at ({:.6}, {:.6})", scan.entries.len(), scan.min_xi, scan.argmin.p.x, scan.argmin.p.y),
        format!(
            "nearest grid point to the equilateral apex: ({:.6}, {:.6}); argmin there: {}; 64π²/9 = {:.6}",
            scan.nearest_equilateral.p.x,
            scan.nearest_equilateral.p.y,
            scan.argmin_is_equilateral(),
            EQUILATERAL_XI
        ),
    ];
    let results = json!({
        "points": scan.entries.len(),
        "argmin": [scan.argmin.p.x, scan.argmin.p.y],
        "min_xi": scan.min_xi,
        "nearest_equilateral": [scan.nearest_equilateral.p.x, scan.nearest_equilateral.p.y],
        "argmin_is_equilateral": scan.argmin_is_equilateral(),
        "entries": scan.entries.iter().map(|e| json!({
            "i": e.point.i, "j": e.point.j, "x": e.point.p.x, "y": e.point.p.y,
            "xi": e.xi, "error_estimate": e.error_estimate,
        })).collect::<Vec<_>>(),
    });
    let report = Report::new("moduli-scan", cfg, EigenOptions::default().seed, results)?.tolerance("min_xi", min_tol);
    Ok(Output { report, table, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThinConfig {
    pub h_list: Vec<f64>,
    pub levels: usize,
    pub nx: usize,
    pub ny: usize,
}

pub const THIN_COLUMNS: &[&str] = &["h", "lambda1", "lambda2", "xi", "tolerance"];

pub fn thin_fit(cfg: &ThinConfig, pool: &Pool) -> Result<gaplab_core::lab::ScalingFit> {
    check_range("levels", cfg.levels, 2, 7)?;
    gaplab_core::lab::triangles::check_h_list(&cfg.h_list)?;
    let opts = TriangleOptions { nx: cfg.nx, ny: cfg.ny, ..TriangleOptions::thin(cfg.levels) };
    let results = pool.map(cfg.h_list.clone(), |h| triangle_gap(Point::new(0.5, h), &opts))?;
    Ok(fit_scaling(&cfg.h_list, results))
}

pub fn thin_scaling(cfg: &ThinConfig, pool: &Pool) -> Result<Output> {
    let fit = thin_fit(cfg, pool)?;
    let mut table = Table::new(THIN_COLUMNS);
    let mut summary = Vec::new();
    for (h, g) in cfg.h_list.iter().zip(&fit.results) {
        let tol = g.tolerance(0.0) * g.d * g.d;
        table.push(vec![num(*h), num(g.lambda1), num(g.lambda2), num(g.xi), num(tol)]);
        summary.push(format!("h = {:<6} xi = {:.6} ± {:.2e}", h, g.xi, tol));
    }
    summary.push(format!("log-log slope {:.4}; strictly increasing as h decreases: {}", fit.slope, fit.increasing()));
    let results = json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "increasing": fit.increasing(),
        "points": cfg.h_list.iter().zip(&fit.results).map(|(h, g)| json!({"h": h, "gap": gap_json(g)})).collect::<Vec<_>>(),
    });
    let worst = fit.results.iter().map(|g| g.tolerance(0.0) * g.d * g.d / g.xi).fold(0.0, f64::max);
    let report =
        Report::new("thin-scaling", cfg, EigenOptions::default().seed, results)?.tolerance("xi_relative", worst);
    Ok(Output { report, table, summary })
}

// ---------------------------------------------------------------- 1D

#[derive(Debug, Clone, Serialize)]
pub struct Schrodinger1dConfig {
    #[serde(rename = "V")]
    pub v: PotentialSpec,
    #[serde(rename = "R")]
    pub r: f64,
    pub bc: Bc,
    pub n: usize,
    pub k: usize,
}

pub const SCHRODINGER_COLUMNS: &[&str] = &["j", "eigenvalue", "residual"];

pub fn schrodinger1d(cfg: &Schrodinger1dConfig) -> Result<Output> {
    check_range("k", cfg.k, 2, 6)?;
    check_range("n", cfg.n, 16, 1 << 16)?;
    if !(cfg.r > 0.0 && cfg.r.is_finite()) {
        return Err(Error::input("R must be positive"));
    }
    // Extrapolation reads nodes and midpoints of the 2n grid.
    let v = cfg.v.profile(cfg.r, 4 * cfg.n)?;
    let s = schrodinger_eigs_1d(&v, cfg.bc.into(), cfg.n, cfg.k)?;
    let gap = s.eigenvalues[1] - s.eigenvalues[0];
    let mut table = Table::new(SCHRODINGER_COLUMNS);
    for (j, (e, r)) in s.eigenvalues.iter().zip(&s.residuals).enumerate() {
        table.push(vec![j.to_string(), num(*e), num(*r)]);
    }
    let summary = vec![format!(
        "eigenvalues {:?}; gap = {:.10} (3π²/R² = {:.10}, π²/R² = {:.10})",
        s.eigenvalues.iter().map(|e| format!("{e:.8}")).collect::<Vec<_>>(),
        gap,
        3.0 * PI2 / (cfg.r * cfg.r),
        PI2 / (cfg.r * cfg.r)
    )];
    let mut results = serde_json::to_value(crate::io::SpectrumRecord::from(&s))?;
    results["gap"] = json!(gap);
    let report = Report::new("schrodinger1d", cfg, s.seed, results)?;
    Ok(Output { report, table, summary })
}

// ---------------------------------------------------------------- suites

#[derive(Debug, Clone, Serialize)]
pub struct LavineConfig {
    pub trials: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub seed: u64,
}

pub const LAVINE_COLUMNS: &[&str] =
    &["trial", "amplitude", "dirichlet_gap", "neumann_gap", "dirichlet_margin", "neumann_margin", "tolerance"];

pub fn lavine(cfg: &LavineConfig) -> Result<Output> {
    check_range("trials", cfg.trials, 1, 100_000)?;
    let r = lavine_suite(cfg.trials, cfg.r, cfg.seed)?;
    let mut table = Table::new(LAVINE_COLUMNS);
    for (i, t) in r.trials.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            num(t.amplitude),
            num(t.dirichlet_gap),
            num(t.neumann_gap),
            num(t.dirichlet_margin),
            num(t.neumann_margin),
            num(VIOLATION_TOL),
        ]);
    }
    let min_d = r.trials.iter().map(|t| t.dirichlet_margin).fold(f64::INFINITY, f64::min);
    let min_n = r.trials.iter().map(|t| t.neumann_margin).fold(f64::INFINITY, f64::min);
    let summary = vec![format!(
        "{} trials: {} violations, {} strict failures; smallest margins {:.3e} (Dirichlet) {:.3e} (Neumann); \
         V = 0 equality error {:.1e} / {:.1e}",
        r.trials.len(),
        r.violations,
        r.strict_failures,
        min_d,
        min_n,
        r.equality_error.0,
        r.equality_error.1
    )];
    let results = json!({
        "violations": r.violations,
        "strict_failures": r.strict_failures,
        "equality_error": [r.equality_error.0, r.equality_error.1],
        "min_margin": [min_d, min_n],
        "trials": r.trials.iter().map(|t| json!({
            "pieces": t.potential.pieces, "amplitude": t.amplitude,
            "dirichlet_gap": t.dirichlet_gap, "neumann_gap": t.neumann_gap,
        })).collect::<Vec<_>>(),
    });
    let report = Report::new("lavine", cfg, cfg.seed, results)?.tolerance("violation", VIOLATION_TOL);
    Ok(Output { report, table, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct AcConfig {
    pub levels: usize,
    pub seed: u64,
}

pub const AC_COLUMNS: &[&str] = &["domain", "potential", "diameter", "gap", "bound", "margin", "holds", "tolerance"];

pub fn ac_suite(cfg: &AcConfig, pool: &Pool) -> Result<Output> {
    check_range("levels", cfg.levels, 2, 7)?;
    let cases = ac_default_cases(cfg.seed)?;
    let pots = ac_default_potentials();
    let opts = GapOptions::levels(cfg.levels);
    let jobs: Vec<(usize, usize)> = (0..cases.len()).flat_map(|c| (0..pots.len()).map(move |v| (c, v))).collect();
    let rows = pool.map(jobs, |(c, v)| ac_row(&cases[c], &pots[v], &opts))?;
    let report_ac = summarize_ac(rows);
    let mut table = Table::new(AC_COLUMNS);
    for r in &report_ac.rows {
        table.push(vec![
            r.domain.clone(),
            r.potential.clone(),
            num(r.diameter),
            num(r.gap),
            num(r.bound),
            num(r.margin),
            r.holds.to_string(),
            num(r.tolerance),
        ]);
    }
    let min_rel = report_ac.rows.iter().map(|r| r.margin / r.bound).fold(f64::INFINITY, f64::min);
    let summary = vec![format!(
        "{} (domain, potential) pairs: {} violations; smallest relative margin {:.3e}",
        report_ac.rows.len(),
        report_ac.violations,
        min_rel
    )];
    let results = json!({
        "violations": report_ac.violations,
        "rows": report_ac.rows.iter().map(|r| json!({
            "domain": r.domain, "potential": r.potential, "diameter": r.diameter, "gap": r.gap,
            "bound": r.bound, "tolerance": r.tolerance, "margin": r.margin, "holds": r.holds,
        })).collect::<Vec<_>>(),
    });
    let report = Report::new("ac-suite", cfg, cfg.seed, results)?.tolerance("floor", AC_TOL_FLOOR);
    Ok(Output { report, table, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct LogConcavityConfig {
    pub domain: DomainArg,
    pub levels: usize,
    pub segments: usize,
    pub margin: f64,
    pub c: f64,
    pub seed: u64,
}

pub const LOGCONCAVITY_COLUMNS: &[&str] = &["pairs", "margin", "worst_x", "worst_y", "worst_x2", "worst_y2", "holds", "tolerance"];

pub const DEFAULT_LOGCONCAVITY_C: f64 = LOG_CONCAVITY_C;

pub fn logconcavity(cfg: &LogConcavityConfig) -> Result<Output> {
    check_range("levels", cfg.levels, 1, 7)?;
    check_range("segments", cfg.segments, 1, 1_000_000)?;
    check_range("margin", cfg.margin, 0.0, 0.5)?;
    let opts = LogConcavityOptions {
        gap: GapOptions::levels(cfg.levels),
        interior_margin: cfg.margin,
        segments: cfg.segments,
        seed: cfg.seed,
        c: cfg.c,
    };
    let r = log_concavity_check(&cfg.domain.domain()?, &opts)?;
    let (a, b) = r.worst_pair;
    let mut table = Table::new(LOGCONCAVITY_COLUMNS);
    table.push(vec![
        r.pairs.to_string(),
        num(r.margin),
        num(a.x),
        num(a.y),
        num(b.x),
        num(b.y),
        r.holds.to_string(),
        num(r.tolerance),
    ]);
    let summary = vec![format!(
        "{} segments: worst margin {:.3e} (tolerance {:.3e}) between ({:.4}, {:.4}) and ({:.4}, {:.4}); holds: {}",
        r.pairs, r.margin, r.tolerance, a.x, a.y, b.x, b.y, r.holds
    )];
    let results = json!({
        "holds": r.holds, "margin": r.margin, "pairs": r.pairs,
        "worst_pair": [[a.x, a.y], [b.x, b.y]],
    });
    let report = Report::new("logconcavity", cfg, cfg.seed, results)?.tolerance("second_difference", r.tolerance);
    Ok(Output { report, table, summary })
}

/// The unit square and the unit equilateral triangle as specs, for defaults and `verify`.
pub fn square() -> DomainArg {
    DomainArg { spec: DomainSpec::Rectangle { a: 1.0, b: 1.0 }, base_dir: Default::default() }
}

pub fn equilateral() -> DomainArg {
    let v = Polygon::equilateral().vertices().iter().map(|p| [p.x, p.y]).collect();
    DomainArg { spec: DomainSpec::Polygon { vertices: v }, base_dir: Default::default() }
}

/// Loads a spec from a file path or, if the argument starts with `{`, from inline JSON.
pub fn domain_arg(arg: &str) -> Result<DomainArg> {
    if arg.trim_start().starts_with('{') {
        Ok(DomainArg { spec: DomainSpec::from_json(arg)?, base_dir: Default::default() })
    } else {
        let (spec, base_dir) = DomainSpec::load(Path::new(arg))?;
        Ok(DomainArg { spec, base_dir })
    }
}
