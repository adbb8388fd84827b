//! Command-line front end: correlator sweeps, kernel maps, flow dumps and
//! verification suites. Curves and grids go to CSV, metadata and reports to
//! JSON.

use std::f64::consts::FRAC_PI_8;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use cmera::magic::occupation_number;
use cmera::verify::{run_suite, SuiteReport, DEFAULT_SEED};
use cmera::{
    correlator_table, kernel_value, AlphaFn, BoundaryCondition, Error, Geometry, KernelFn, Observable, Profile,
    ProfileKind, QuadratureSpec, Scale, Suite,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(name = "cmera", version, about = "Gaussian cMERA correlators for the free boson")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep exact and cMERA two-point functions at fixed y.
    Correlator(CorrelatorArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Grid of the entangler kernel over (x, y).
    KernelMap(KernelMapArgs),
    /// Tabulate α(k, s) and the occupation number.
    FlowDump(FlowDumpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Full,
    Boundary,
    Defect,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Gaussian,
    Magic,
}

impl From<ProfileArg> for ProfileKind {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Gaussian => ProfileKind::Gaussian,
            ProfileArg::Magic => ProfileKind::Magic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObservableArg {
    Pipi,
    Phiphi,
    PhiphiDiff,
}

#[derive(Args)]
struct Output {
    /// Output directory.
    #[arg(long, env = "CMERA_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// File stem; derived from the command when omitted.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct Physics {
    #[arg(long, value_enum, default_value = "full")]
    geometry: GeometryArg,
    /// Boundary sign: −1 Dirichlet, +1 Neumann.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    xi: f64,
    /// Defect angle in radians; 3π/8 ≈ 1.178097 is the reference panel.
    #[arg(long, default_value_t = 3.0 * FRAC_PI_8, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    profile: ProfileArg,
    /// Cutoff scale Λ.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

impl Physics {
    fn geometry(&self) -> Result<Geometry, Error> {
        match self.geometry {
            GeometryArg::Full => Ok(Geometry::FullLine),
            GeometryArg::Boundary => Ok(Geometry::boundary(BoundaryCondition::from_xi(self.xi)?)),
            GeometryArg::Defect => Geometry::defect(self.theta),
        }
    }

    fn profile(&self) -> Result<Profile, Error> {
        Ok(Profile::new(self.profile.into(), Scale::new(self.lambda)?))
    }
}

#[derive(Args)]
struct CorrelatorArgs {
    #[command(flatten)]
    physics: Physics,
    #[arg(long, value_enum, default_value = "pipi")]
    observable: ObservableArg,
    /// Reference point for the φφ difference.
    #[arg(long, allow_negative_numbers = true)]
    x_ref: Option<f64>,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    y: f64,
    /// Sweep start; defaults to 0.1, or −40 for a defect.
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
    x_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
    /// Absolute tolerance of each transform, in cutoff units.
    #[arg(long, default_value_t = 1e-10)]
    abs_tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    /// Seed for the randomized mode-oracle points.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct KernelMapArgs {
    #[command(flatten)]
    physics: Physics,
    /// Half-width of the grid in units of 1/Λ; a boundary grid covers (0, extent].
    #[arg(long, default_value_t = 5.0)]
    extent: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FlowDumpArgs {
    #[arg(long, value_enum, default_value = "magic")]
    profile: ProfileArg,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Flow time; omitted means the fixed point.
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    k_min: f64,
    #[arg(long, default_value_t = 1e3)]
    k_max: f64,
    /// Log-spaced samples.
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numerical(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numerical(format!("json: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn validation(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn prepare(output: &Output, default_stem: &str) -> Result<(PathBuf, String), Failure> {
    fs::create_dir_all(&output.out_dir)?;
    Ok((output.out_dir.clone(), output.name.clone().unwrap_or_else(|| default_stem.to_string())))
}

fn write_json(path: &Path, value: &impl Serialize) -> Outcome {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct CorrelatorMeta<'a> {
    command: &'a str,
    geometry: Geometry,
    profile: Profile,
    observable: Observable,
    y: f64,
    x_min: f64,
    x_max: f64,
    requested_points: usize,
    written_points: usize,
    spec: QuadratureSpec,
    csv: String,
}

fn cmd_correlator(a: &CorrelatorArgs) -> Outcome {
    let geometry = a.physics.geometry()?;
    let profile = a.physics.profile()?;
    let observable = match a.observable {
        ObservableArg::Pipi => Observable::PiPi,
        ObservableArg::Phiphi => Observable::PhiPhi,
        ObservableArg::PhiphiDiff => Observable::PhiPhiDiff {
            x_ref: a.x_ref.ok_or_else(|| validation("--observable phiphi-diff needs --x-ref"))?,
        },
    };
    let x_min = a.x_min.unwrap_or(match geometry {
        Geometry::Defect { .. } => -40.0,
        _ => 0.1,
    });
    if a.points == 0 || !(ordered(x_min, a.x_max)) {
        return Err(validation("need at least one point and x-min < x-max"));
    }
    let spec = QuadratureSpec::with_abs_tol(a.abs_tol);
    let xs = linspace(x_min, a.x_max, a.points);
    let table = correlator_table(&geometry, &profile, &observable, a.y, &xs, &spec)?;

    let (dir, stem) = prepare(&a.output, &format!("correlator-{}", geometry_stem(&geometry)))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(["x", "y", "exact", "cmera", "rel_err"])?;
    for p in &table.points {
        w.serialize((p.x, p.y, p.exact, p.cmera, p.relative_error()))?;
    }
    w.flush()?;
    write_json(
        &dir.join(format!("{stem}.json")),
        &CorrelatorMeta {
            command: "correlator",
            geometry,
            profile,
            observable,
            y: a.y,
            x_min,
            x_max: a.x_max,
            requested_points: a.points,
            written_points: table.points.len(),
            spec,
            csv: format!("{stem}.csv"),
        },
    )?;
    println!("wrote {} points to {}", table.points.len(), csv_path.display());
    Ok(())
}

fn ordered(lo: f64, hi: f64) -> bool {
    lo.is_finite() && hi.is_finite() && lo < hi
}

fn geometry_stem(g: &Geometry) -> String {
    match g {
        Geometry::FullLine => "full".into(),
        Geometry::Boundary { condition } => match condition {
            BoundaryCondition::Dirichlet => "dirichlet".into(),
            BoundaryCondition::Neumann => "neumann".into(),
        },
        Geometry::Defect { theta } => format!("defect-{theta:.6}"),
    }
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let reports = run_suite(a.suite, a.seed)?;
    let (dir, stem) = prepare(&a.output, &format!("verify-{}", a.suite))?;
    for r in &reports {
        print_report(r);
    }
    write_json(&dir.join(format!("{stem}.json")), &reports)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed suites: {}", failed.join(", "))))
    }
}

fn print_report(r: &SuiteReport) {
    println!("{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.suite);
    for c in &r.checks {
        println!(
            "  [{}] {}: {:.6e} (threshold {:.1e}, margin {:+.3})",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold,
            c.margin
        );
    }
}

#[derive(Serialize)]
struct KernelMapMeta {
    command: &'static str,
    geometry: Geometry,
    profile: Profile,
    extent: f64,
    points: usize,
    csv: String,
}

fn cmd_kernel_map(a: &KernelMapArgs) -> Outcome {
    let geometry = a.physics.geometry()?;
    let profile = a.physics.profile()?;
    if !(a.extent > 0.0 && a.extent.is_finite()) || a.points < 2 {
        return Err(validation("need extent > 0 and at least 2 points per axis"));
    }
    let kernel = KernelFn::new(geometry, profile)?;
    // The half-line grid starts one step off the boundary.
    let axis = match geometry {
        Geometry::Boundary { .. } => (1..=a.points).map(|i| a.extent * i as f64 / a.points as f64).collect(),
        _ => linspace(-a.extent, a.extent, a.points),
    };
    let rows = axis
        .par_iter()
        .map(|&x| {
            axis.iter()
                .map(|&y| Ok((x, y, kernel_value(&kernel, x, y)?, kernel.modification(x, y)?)))
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let (dir, stem) = prepare(&a.output, &format!("kernel-{}", geometry_stem(&geometry)))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(["x", "y", "kernel", "modification", "abs_modification"])?;
    for (x, y, k, m) in rows.into_iter().flatten() {
        w.serialize((x, y, k, m, m.abs()))?;
    }
    w.flush()?;
    write_json(
        &dir.join(format!("{stem}.json")),
        &KernelMapMeta {
            command: "kernel-map",
            geometry,
            profile,
            extent: a.extent,
            points: a.points,
            csv: format!("{stem}.csv"),
        },
    )?;
    println!("wrote {}x{} grid to {}", a.points, a.points, csv_path.display());
    Ok(())
}

#[derive(Serialize)]
struct FlowDumpMeta {
    command: &'static str,
    alpha: AlphaFn,
    k_min: f64,
    k_max: f64,
    points: usize,
    csv: String,
}

fn cmd_flow_dump(a: &FlowDumpArgs) -> Outcome {
    let scale = Scale::new(a.lambda)?;
    let profile = Profile::new(a.profile.into(), scale);
    let s = a.s.unwrap_or(f64::INFINITY);
    let alpha = AlphaFn::new(profile, s)?;
    if !(a.k_min > 0.0 && ordered(a.k_min, a.k_max)) || a.points < 2 {
        return Err(validation("need 0 < k-min < k-max and at least 2 points"));
    }
    let (l0, l1) = (a.k_min.ln(), a.k_max.ln());
    let ks: Vec<f64> = linspace(l0, l1, a.points).into_iter().map(f64::exp).collect();

    let (dir, stem) = prepare(&a.output, &format!("flow-{}", ProfileKind::from(a.profile)))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut w = csv::Writer::from_path(&csv_path)?;
    match profile.kind {
        ProfileKind::Magic => {
            w.write_record(["k", "alpha", "occupation"])?;
            for &k in &ks {
                w.serialize((k, alpha.evaluate(k), occupation_number(&scale, k, s)))?;
            }
        }
        ProfileKind::Gaussian => {
            w.write_record(["k", "alpha"])?;
            for &k in &ks {
                w.serialize((k, alpha.evaluate(k)))?;
            }
        }
    }
    w.flush()?;
    write_json(
        &dir.join(format!("{stem}.json")),
        &FlowDumpMeta {
            command: "flow-dump",
            alpha,
            k_min: a.k_min,
            k_max: a.k_max,
            points: a.points,
            csv: format!("{stem}.csv"),
        },
    )?;
    println!("wrote {} samples to {}", ks.len(), csv_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Correlator(a) => cmd_correlator(a),
        Command::Verify(a) => cmd_verify(a),
        Command::KernelMap(a) => cmd_kernel_map(a),
        Command::FlowDump(a) => cmd_flow_dump(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}
