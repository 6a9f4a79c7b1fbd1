use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{self as ex, Bc, DomainArg, Output, PencilKind};
use crate::parallel::{default_workers, Pool, WORKERS_ENV};
use crate::report::{Report, Table};
use crate::spec::PotentialSpec;
use crate::verify::{self, Mode};

/// Fundamental-gap laboratory: Dirichlet, Neumann and drift Laplacian
/// eigenvalues on intervals, polygons and thin domains.
///
/// With `--output DIR` every command writes `DIR/<command>.json` (the full
/// record) and `DIR/<command>.csv` (the table described in the command's
/// help); otherwise the JSON record goes to standard output. Human-readable
/// summaries go to standard output when writing files, to standard error
/// otherwise.
///
/// Exit codes: 0 success, 1 acceptance failure (`verify`), 2 bad arguments
/// or input, 3 solver failure.
#[derive(Debug, Parser)]
#[command(name = "gaplab", version)]
pub struct Cli {
    /// Directory for `<command>.json` and `<command>.csv`.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for randomized commands (each has its own default).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for independent experiment points.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DomainOpt {
    /// Domain spec: a JSON file, or inline JSON starting with `{`.
    ///
    /// {"type":"polygon","vertices":[[x,y],...]} | {"type":"rectangle","a":A,"b":B} |
    /// {"type":"triangle_moduli","p":[x,y]} |
    /// {"type":"graph","L":L,"epsilon":E,"profile":"const|sin2|weight_file","samples":[...]}
    #[arg(long)]
    pub domain: String,
}

fn parse_potential(s: &str) -> std::result::Result<PotentialSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental gap and ξ = d²(λ₂ − λ₁) with Richardson extrapolation.
    ///
    /// CSV columns: level,h,dofs,lambda1,lambda2,gap,xi,tolerance
    /// (one row per level, then an `extrapolated` row).
    Gap {
        #[command(flatten)]
        domain: DomainOpt,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Closed-form rectangle spectrum, optionally against the FEM gap.
    ///
    /// CSV columns: source,lambda1,lambda2,gap,xi,tolerance
    Rectangle {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Also compute the finite-element gap with this many levels.
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Neumann spectrum of thin graph domains with profile e^{−φ} against the
    /// weighted 1D limit.
    ///
    /// CSV columns: epsilon,h,j,mu,reference,error,relative_error,tolerance
    #[command(name = "collapse-t1")]
    CollapseT1 {
        /// Potential φ: const:C or file:PATH (CSV x,value on [0, L]).
        #[arg(long, value_parser = parse_potential)]
        phi: PotentialSpec,
        #[arg(long = "L", default_value_t = 1.0)]
        length: f64,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Collapse with profile sin²(πx) onto the interval gaps ((j+1)² − 1)π².
    ///
    /// CSV columns: epsilon,h,j,mu,reference,error,relative_error,tolerance
    #[command(name = "collapse-c1")]
    CollapseC1 {
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Residual of the drift equation satisfied by φ_k/φ₁.
    ///
    /// CSV columns: k,h,rows,gap,residual,tolerance
    Prop1 {
        #[command(flatten)]
        domain: DomainOpt,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// λ_k − λ₁ against μ_{k−1} of the drift Laplacian with weight φ₁².
    ///
    /// Without --domain the interval [0, R] with potential --V is used.
    /// CSV columns: k,dirichlet_gap,mu,difference,relative
    Prop2 {
        #[arg(long)]
        domain: Option<String>,
        #[arg(long = "V", default_value = "const:0", value_parser = parse_potential)]
        v: PotentialSpec,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// Eigenvalue-sum bound on random orthogonalized families and on the
    /// exact eigenvectors.
    ///
    /// CSV columns: family,kind,k,lhs,rhs,slack,holds
    Prop4 {
        #[arg(long, value_enum, default_value_t = PencilKind::Interval)]
        pencil: PencilKind,
        /// Grid intervals per side.
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        families: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
    /// ξ over a grid of the triangle moduli region.
    ///
    /// CSV columns: i,j,x,y,xi,tolerance
    #[command(name = "moduli-scan")]
    ModuliScan {
        #[arg(long, default_value_t = 12)]
        grid_n: usize,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 8)]
        nx: usize,
        #[arg(long, default_value_t = 4)]
        ny: usize,
    },
    /// ξ of isosceles triangles of height h and its log-log slope.
    ///
    /// CSV columns: h,lambda1,lambda2,xi,tolerance
    #[command(name = "thin-scaling")]
    ThinScaling {
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
        h_list: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 128)]
        nx: usize,
        #[arg(long, default_value_t = 2)]
        ny: usize,
    },
    /// Spectrum of −d²/dx² + V on [0, R].
    ///
    /// CSV columns: j,eigenvalue,residual
    Schrodinger1d {
        /// const:C or file:PATH (CSV x,value on [0, R]).
        #[arg(long = "V", value_parser = parse_potential)]
        v: PotentialSpec,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
        #[arg(long, value_enum, default_value_t = Bc::Dirichlet)]
        bc: Bc,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Random convex potentials against the interval gap bounds.
    ///
    /// CSV columns: trial,amplitude,dirichlet_gap,neumann_gap,dirichlet_margin,neumann_margin,tolerance
    Lavine {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
    },
    /// Gap ≥ 3π²/d² on convex polygons with convex potentials.
    ///
    /// CSV columns: domain,potential,diameter,gap,bound,margin,holds,tolerance
    #[command(name = "ac-suite")]
    AcSuite {
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Sampled second differences of log φ₁ along random segments.
    ///
    /// CSV columns: pairs,margin,worst_x,worst_y,worst_x2,worst_y2,holds,tolerance
    Logconcavity {
        #[command(flatten)]
        domain: DomainOpt,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 2000)]
        segments: usize,
        /// Distance from the boundary, as a fraction of the diameter.
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        /// Tolerance constant: violations up to c·h are accepted.
        #[arg(long, default_value_t = ex::DEFAULT_LOGCONCAVITY_C)]
        c: f64,
    },
    /// Runs the acceptance criteria; exits 0 iff all pass.
    ///
    /// CSV columns: criterion,name,passed,detail
    Verify {
        /// Fewer refinement levels and smaller meshes, same thresholds.
        #[arg(long)]
        quick: bool,
        /// Only these criteria (1-12), comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05")]
    pub eps_list: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    pub nx: usize,
    #[arg(long, default_value_t = 4)]
    pub ny: usize,
    /// Grid of the 1D reference solve.
    #[arg(long, default_value_t = 512)]
    pub n_1d: usize,
}

fn collapse_cfg(phi: Option<PotentialSpec>, length: f64, s: Sweep) -> ex::CollapseConfig {
    ex::CollapseConfig { phi, length, k: s.k, eps_list: s.eps_list, nx: s.nx, ny: s.ny, n_1d: s.n_1d }
}

fn domain(d: &str) -> Result<DomainArg> {
    ex::domain_arg(d)
}

/// Result of a command: what to emit and whether acceptance passed.
struct Done {
    output: Output,
    passed: bool,
}

fn run_command(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Done> {
    let workers = cli.workers.unwrap_or_else(default_workers);
    let pool = Pool::new(workers)?;
    let ok = |output: Output| Ok(Done { output, passed: true });
    match cli.command {
        Command::Gap { domain: d, levels } => ok(ex::gap(&ex::GapConfig { domain: domain(&d.domain)?, levels })?),
        Command::Rectangle { a, b, levels } => ok(ex::rectangle(&ex::RectangleConfig { a, b, levels })?),
        Command::CollapseT1 { phi, length, sweep } => ok(ex::collapse_t1(&collapse_cfg(Some(phi), length, sweep))?),
        Command::CollapseC1 { sweep } => ok(ex::collapse_c1(&collapse_cfg(None, 1.0, sweep))?),
        Command::Prop1 { domain: d, k, levels } => ok(ex::prop1(&ex::Prop1Config { domain: domain(&d.domain)?, k, levels })?),
        Command::Prop2 { domain: d, v, r, n, k, levels } => {
            let domain = d.as_deref().map(domain).transpose()?;
            ok(ex::prop2(&ex::Prop2Config { domain, v, r, n, k, levels })?)
        }
        Command::Prop4 { pencil, n, families, k_max } => {
            ok(ex::prop4(&ex::Prop4Config { pencil, n, families, k_max, seed: cli.seed.unwrap_or(11) })?)
        }
        Command::ModuliScan { grid_n, levels, nx, ny } => {
            ok(ex::moduli_scan(&ex::ModuliScanConfig { grid_n, levels, nx, ny }, &pool)?)
        }
        Command::ThinScaling { h_list, levels, nx, ny } => {
            ok(ex::thin_scaling(&ex::ThinConfig { h_list, levels, nx, ny }, &pool)?)
        }
        Command::Schrodinger1d { v, r, bc, n, k } => ok(ex::schrodinger1d(&ex::Schrodinger1dConfig { v, r, bc, n, k })?),
        Command::Lavine { trials, r } => ok(ex::lavine(&ex::LavineConfig { trials, r, seed: cli.seed.unwrap_or(2024) })?),
        Command::AcSuite { levels } => ok(ex::ac_suite(&ex::AcConfig { levels, seed: cli.seed.unwrap_or(7) }, &pool)?),
        Command::Logconcavity { domain: d, levels, segments, margin, c } => {
            let seed = cli.seed.unwrap_or(gaplab_core::lab::modulus::LogConcavityOptions::default().seed);
            ok(ex::logconcavity(&ex::LogConcavityConfig { domain: domain(&d.domain)?, levels, segments, margin, c, seed })?)
        }
        Command::Verify { quick, only } => {
            let ids: Vec<usize> = if only.is_empty() { (1..=12).collect() } else { only };
            if let Some(bad) = ids.iter().find(|i| !(1..=12).contains(*i)) {
                return Err(Error::input(format!("no criterion {bad}")));
            }
            // Progress goes out as each criterion finishes.
            let live: &mut dyn Write = if cli.output.is_some() { out } else { err };
            let outcomes = verify::run(&ids, Mode { quick }, &pool, |o| {
                let _ = writeln!(live, "{}", o.line());
            });
            let passed = outcomes.iter().all(|o| o.passed);
            let mut table = Table::new(&["criterion", "name", "passed", "detail"]);
            for o in &outcomes {
                table.push(vec![o.id.to_string(), o.name.into(), o.passed.to_string(), o.detail.clone()]);
            }
            let n_pass = outcomes.iter().filter(|o| o.passed).count();
            let summary = vec![format!("{n_pass}/{} criteria passed", outcomes.len())];
            let report = Report::new("verify", serde_json::json!({"quick": quick, "criteria": ids}), 0, &outcomes)?;
            Ok(Done { output: Output { report, table, summary }, passed })
        }
    }
}

/// Parses `argv` (including the program name), runs and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let dir = cli.output.clone();
    let result = run_command(cli, out, err).and_then(|done| {
        match &dir {
            Some(d) => {
                let (j, c) = done.output.report.write(&done.output.table, d)?;
                for line in &done.output.summary {
                    writeln!(out, "{line}").map_err(|e| Error::io("stdout", e))?;
                }
                writeln!(out, "wrote {} and {}", j.display(), c.display()).map_err(|e| Error::io("stdout", e))?;
            }
            None => {
                for line in &done.output.summary {
                    writeln!(err, "{line}").map_err(|e| Error::io("stderr", e))?;
                }
                out.write_all(done.output.report.to_json()?.as_bytes()).map_err(|e| Error::io("stdout", e))?;
            }
        }
        Ok(done.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
