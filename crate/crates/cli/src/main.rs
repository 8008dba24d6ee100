//! Command-line surface for the dual Orlicz toolkit.
//!
//! Subcommands: `solve` (dual Orlicz-Minkowski problem), `measure`
//! (curvature measure of a body), `quermass` (dual quermassintegral),
//! `addition` (linear Orlicz radial addition samples), `verify` (identity
//! suite), `export` (body JSON to OBJ/CSV).
//!
//! Exit codes: 0 success/converged, 2 degenerate measure (no solution
//! exists), 3 iteration budget exhausted, 4 invalid input. Set
//! `ORLIMINK_THREADS` to cap the worker pool used for per-node evaluation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use orlimink_core::body::{export, HalfspacePolytope};
use orlimink_core::measure::{dual_orlicz_curvature_measure, DiscreteSphericalMeasure};
use orlimink_core::orlicz::{Monotonicity, OrliczPair, PairFamily, RadialAdditionSpec, ScalarFn};
use orlimink_core::quadrature::{GridRule, SphericalGrid};
use orlimink_core::solver::{solve_dual_orlicz_minkowski, SolverConfig, Termination};
use orlimink_core::verify::{run_identity_suite, SuiteResolution};

#[derive(Parser)]
#[command(
    name = "orlimink",
    version,
    about = "Dual Orlicz curvature measures and the dual Orlicz-Minkowski solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the dual Orlicz-Minkowski problem for a measure file.
    Solve(SolveArgs),
    /// Compute the dual Orlicz curvature measure of a body.
    Measure(MeasureArgs),
    /// Compute the dual Orlicz quermassintegral of a body.
    Quermass(QuermassArgs),
    /// Sample the linear Orlicz radial addition of two bodies.
    Addition(AdditionArgs),
    /// Run the cross-checking identity suite.
    Verify(VerifyArgs),
    /// Convert a body JSON file to OBJ (3-D) or CSV (2-D).
    Export(ExportArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Quadrature resolution (node count).
    #[arg(long)]
    grid: Option<usize>,
    /// Quadrature rule: equal_angle_2d | fibonacci_3d | monte_carlo.
    #[arg(long)]
    grid_rule: Option<String>,
    /// Seed (Monte Carlo grids and solver initialization).
    #[arg(long)]
    seed: Option<u64>,
}

impl GridArgs {
    fn build(&self, dim: usize) -> Result<SphericalGrid> {
        let rule = match &self.grid_rule {
            Some(s) => GridRule::from_str(s).map_err(|e| anyhow!("{e}"))?,
            None => SphericalGrid::default_rule(dim),
        };
        let resolution = self.grid.unwrap_or(match dim {
            2 => 4096,
            3 => 100_000,
            _ => 20_000,
        });
        let seed = match rule {
            GridRule::MonteCarlo => Some(self.seed.unwrap_or(0)),
            _ => None,
        };
        SphericalGrid::build(dim, rule, resolution, seed).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Measure JSON file: {dim, atoms: [{direction, mass}]}.
    #[arg(long)]
    measure: PathBuf,
    /// Orlicz pair: power:<q> or table:<path>.
    #[arg(long)]
    pair: String,
    /// Expected dimension (cross-checked against the measure file).
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    /// Solver config JSON file (all fields optional).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Stationarity tolerance.
    #[arg(long)]
    tol_res: Option<f64>,
    /// Relative constraint tolerance.
    #[arg(long)]
    tol_con: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Body JSON file: {dim, normals, offsets}.
    #[arg(long)]
    body: PathBuf,
    /// Orlicz pair supplying the weight varphi.
    #[arg(long)]
    pair: String,
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct QuermassArgs {
    #[arg(long)]
    body: PathBuf,
    /// Orlicz pair supplying the weight phi.
    #[arg(long)]
    pair: Option<String>,
    /// Standalone weight function (power:<q>) used instead of a pair.
    #[arg(long)]
    psi: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct AdditionArgs {
    #[arg(long)]
    body: PathBuf,
    #[arg(long)]
    body2: PathBuf,
    /// First addition function phi1 (the varphi of this pair).
    #[arg(long)]
    pair: String,
    /// Second addition function phi2 (power:<q>), defaults to phi1.
    #[arg(long)]
    psi: Option<String>,
    /// Weight of the second body in the defining equation.
    #[arg(long)]
    epsilon: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Base (2-D) resolution for the suite; the 3-D grid scales with it.
    /// Tolerances are calibrated for the default 4096.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    body: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    input_paths: Vec<String>,
    pair_spec: Option<String>,
    grid_spec: Option<GridSpec>,
    config_overrides: Option<SolverConfig>,
    output_directory: String,
    output_files: Vec<String>,
    tool_version: String,
    duration_seconds: f64,
}

#[derive(Serialize)]
struct GridSpec {
    rule: String,
    resolution: usize,
    seed: Option<u64>,
}

impl GridSpec {
    fn of(grid: &SphericalGrid) -> Self {
        Self {
            rule: grid.rule().as_str().to_string(),
            resolution: grid.resolution(),
            seed: grid.seed(),
        }
    }
}

fn main() -> ExitCode {
    init_worker_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(4)
        }
    }
}

fn init_worker_pool() {
    if let Ok(value) = std::env::var("ORLIMINK_THREADS") {
        if let Ok(threads) = value.trim().parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Measure(args) => cmd_measure(args),
        Command::Quermass(args) => cmd_quermass(args),
        Command::Addition(args) => cmd_addition(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Export(args) => cmd_export(args),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {what} file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("malformed {what} JSON in {}", path.display()))
}

fn parse_pair(spec: &str) -> Result<OrliczPair> {
    if let Some(q) = spec.strip_prefix("power:") {
        let q: f64 = q.parse().with_context(|| format!("bad exponent in pair spec '{spec}'"))?;
        return OrliczPair::power(q).map_err(|e| anyhow!("{e}"));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read pair table {path}"))?;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                bail!("pair table {path} line {}: expected t,phi,phi_prime", lineno + 1);
            }
            // A non-numeric first row is a header.
            if lineno == 0 && fields[0].parse::<f64>().is_err() {
                continue;
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>().with_context(|| {
                    format!("pair table {path} line {}: bad number '{s}'", lineno + 1)
                })
            };
            rows.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
        }
        return OrliczPair::from_table(&rows, format!("table:{path}")).map_err(|e| anyhow!("{e}"));
    }
    bail!("unknown pair spec '{spec}' (expected power:<q> or table:<path>)")
}

/// A standalone monotone weight function, `power:<q>`.
fn parse_weight(spec: &str) -> Result<(ScalarFn, Monotonicity, String)> {
    if let Some(q) = spec.strip_prefix("power:") {
        let q: f64 = q.parse().with_context(|| format!("bad exponent in weight spec '{spec}'"))?;
        if q == 0.0 {
            bail!("weight exponent must be nonzero");
        }
        let f: ScalarFn = Arc::new(move |t: f64| t.powf(q));
        let dir = if q > 0.0 { Monotonicity::Increasing } else { Monotonicity::Decreasing };
        return Ok((f, dir, format!("power:{q}")));
    }
    bail!("unknown weight spec '{spec}' (expected power:<q>)")
}

fn check_dim(expected: Option<usize>, got: usize, what: &str) -> Result<()> {
    if let Some(d) = expected {
        if d != got {
            bail!("--dim {d} does not match {what} dimension {got}");
        }
    }
    Ok(())
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<String> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path.display().to_string())
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    write_output(dir, "manifest.json", &(text + "\n"))?;
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let started = Instant::now();
    let mu: DiscreteSphericalMeasure = read_json(&args.measure, "measure")?;
    check_dim(args.dim, mu.dim(), "measure")?;
    let pair = parse_pair(&args.pair)?;

    let mut config = SolverConfig::default_for_dim(mu.dim());
    if let Some(path) = &args.config {
        apply_config_file(&mut config, path)?;
    }
    if let Some(rule) = &args.grid.grid_rule {
        config.grid_rule = GridRule::from_str(rule).map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(res) = args.grid.grid {
        config.grid_resolution = res;
    }
    if let Some(seed) = args.grid.seed {
        config.seed = Some(seed);
        if config.grid_rule == GridRule::MonteCarlo {
            config.grid_seed = Some(seed);
        }
    }
    if let Some(t) = args.tol_res {
        config.tol_residual = t;
    }
    if let Some(t) = args.tol_con {
        config.tol_constraint = t;
    }
    if let Some(n) = args.max_iters {
        config.max_iterations = n;
    }

    let report = solve_dual_orlicz_minkowski(&mu, &pair, &config).map_err(|e| anyhow!("{e}"))?;

    let mut outputs = Vec::new();
    let report_text = serde_json::to_string_pretty(&report)?;
    outputs.push(write_output(&args.out, "report.json", &(report_text + "\n"))?);

    if let Some(body) = &report.body {
        let body_text = serde_json::to_string_pretty(body)?;
        outputs.push(write_output(&args.out, "body.json", &(body_text + "\n"))?);
        match body.dim() {
            2 => outputs.push(write_output(
                &args.out,
                "body.csv",
                &export::to_csv_loop(body).map_err(|e| anyhow!("{e}"))?,
            )?),
            3 => outputs.push(write_output(
                &args.out,
                "body.obj",
                &export::to_obj(body).map_err(|e| anyhow!("{e}"))?,
            )?),
            _ => {}
        }
    }

    let grid_spec = GridSpec {
        rule: config.grid_rule.as_str().to_string(),
        resolution: config.grid_resolution,
        seed: config.grid_seed,
    };
    write_manifest(
        &args.out,
        &RunManifest {
            subcommand: "solve".into(),
            input_paths: vec![args.measure.display().to_string()],
            pair_spec: Some(args.pair.clone()),
            grid_spec: Some(grid_spec),
            config_overrides: Some(config),
            output_directory: args.out.display().to_string(),
            output_files: outputs,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    )?;

    match report.termination {
        Termination::Converged => {
            println!(
                "converged in {} iterations; tau = {:.12e}",
                report.iterations,
                report.tau.unwrap_or(f64::NAN)
            );
            Ok(0)
        }
        Termination::DegenerateMeasure => {
            let witness = report
                .witness
                .as_ref()
                .map(|w| format!("{w:?}"))
                .unwrap_or_else(|| "unknown".into());
            eprintln!(
                "measure is concentrated in a closed hemisphere (witness direction {witness}); no solution exists"
            );
            Ok(2)
        }
        Termination::MaxIters => {
            eprintln!(
                "iteration budget exhausted after {} iterations (best residual written to report.json)",
                report.iterations
            );
            Ok(3)
        }
        Termination::InvalidPair => {
            eprintln!(
                "pair is not admissible for the solver (needs a fully valid decreasing-family pair)"
            );
            Ok(4)
        }
    }
}

fn apply_config_file(config: &mut SolverConfig, path: &Path) -> Result<()> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct PartialConfig {
        grid_rule: Option<GridRule>,
        grid_resolution: Option<usize>,
        grid_seed: Option<u64>,
        step_size: Option<f64>,
        backtracking_factor: Option<f64>,
        tol_residual: Option<f64>,
        tol_constraint: Option<f64>,
        max_iterations: Option<usize>,
        rescale_bracket: Option<(f64, f64)>,
        seed: Option<u64>,
        fd_step: Option<f64>,
    }
    let partial: PartialConfig = read_json(path, "solver config")?;
    if let Some(v) = partial.grid_rule {
        config.grid_rule = v;
    }
    if let Some(v) = partial.grid_resolution {
        config.grid_resolution = v;
    }
    if let Some(v) = partial.grid_seed {
        config.grid_seed = Some(v);
    }
    if let Some(v) = partial.step_size {
        config.step_size = v;
    }
    if let Some(v) = partial.backtracking_factor {
        config.backtracking_factor = v;
    }
    if let Some(v) = partial.tol_residual {
        config.tol_residual = v;
    }
    if let Some(v) = partial.tol_constraint {
        config.tol_constraint = v;
    }
    if let Some(v) = partial.max_iterations {
        config.max_iterations = v;
    }
    if let Some(v) = partial.rescale_bracket {
        config.rescale_bracket = v;
    }
    if let Some(v) = partial.seed {
        config.seed = Some(v);
    }
    if let Some(v) = partial.fd_step {
        config.fd_step = v;
    }
    Ok(())
}

#[derive(Serialize)]
struct CurvatureDoc {
    dim: usize,
    atoms: Vec<AtomDoc>,
    total: f64,
    phi_label: String,
    grid: GridSpec,
}

#[derive(Serialize)]
struct AtomDoc {
    direction: Vec<f64>,
    mass: f64,
}

fn cmd_measure(args: MeasureArgs) -> Result<u8> {
    let started = Instant::now();
    let body: HalfspacePolytope = read_json(&args.body, "body")?;
    check_dim(args.dim, body.dim(), "body")?;
    let pair = parse_pair(&args.pair)?;
    let grid = args.grid.build(body.dim())?;
    let curvature =
        dual_orlicz_curvature_measure(&body, &pair, &grid).map_err(|e| anyhow!("{e}"))?;

    let doc = CurvatureDoc {
        dim: body.dim(),
        atoms: body
            .normals()
            .iter()
            .zip(curvature.masses())
            .map(|(v, &c)| AtomDoc { direction: v.clone(), mass: c })
            .collect(),
        total: curvature.total(),
        phi_label: pair.label().to_string(),
        grid: GridSpec::of(&grid),
    };
    let text = serde_json::to_string_pretty(&doc)?;
    let out_file = write_output(&args.out, "curvature.json", &(text + "\n"))?;
    println!("total mass {:.12e}", curvature.total());

    write_manifest(
        &args.out,
        &RunManifest {
            subcommand: "measure".into(),
            input_paths: vec![args.body.display().to_string()],
            pair_spec: Some(args.pair.clone()),
            grid_spec: Some(GridSpec::of(&grid)),
            config_overrides: None,
            output_directory: args.out.display().to_string(),
            output_files: vec![out_file],
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    )?;
    Ok(0)
}

fn cmd_quermass(args: QuermassArgs) -> Result<u8> {
    let started = Instant::now();
    let body: HalfspacePolytope = read_json(&args.body, "body")?;
    check_dim(args.dim, body.dim(), "body")?;
    let grid = args.grid.build(body.dim())?;

    let (value, label) = match (&args.pair, &args.psi) {
        (Some(pair_spec), None) => {
            let pair = parse_pair(pair_spec)?;
            let v = orlimink_core::measure::dual_orlicz_quermassintegral(
                &body,
                |t| pair.phi(t),
                &grid,
            )
            .map_err(|e| anyhow!("{e}"))?;
            (v, format!("phi of {pair_spec}"))
        }
        (None, Some(psi_spec)) => {
            let (f, _, label) = parse_weight(psi_spec)?;
            let v = orlimink_core::measure::dual_orlicz_quermassintegral(&body, |t| f(t), &grid)
                .map_err(|e| anyhow!("{e}"))?;
            (v, label)
        }
        _ => bail!("quermass needs exactly one of --pair or --psi"),
    };

    #[derive(Serialize)]
    struct QuermassDoc {
        dim: usize,
        value: f64,
        weight_label: String,
        grid: GridSpec,
    }
    let doc =
        QuermassDoc { dim: body.dim(), value, weight_label: label, grid: GridSpec::of(&grid) };
    let text = serde_json::to_string_pretty(&doc)?;
    let out_file = write_output(&args.out, "quermass.json", &(text + "\n"))?;
    println!("quermassintegral {value:.12e}");

    write_manifest(
        &args.out,
        &RunManifest {
            subcommand: "quermass".into(),
            input_paths: vec![args.body.display().to_string()],
            pair_spec: args.pair.clone().or(args.psi.clone()),
            grid_spec: Some(GridSpec::of(&grid)),
            config_overrides: None,
            output_directory: args.out.display().to_string(),
            output_files: vec![out_file],
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    )?;
    Ok(0)
}

fn cmd_addition(args: AdditionArgs) -> Result<u8> {
    let started = Instant::now();
    let body_k: HalfspacePolytope = read_json(&args.body, "body")?;
    let body_l: HalfspacePolytope = read_json(&args.body2, "body2")?;
    if body_k.dim() != body_l.dim() {
        bail!("bodies have different dimensions: {} vs {}", body_k.dim(), body_l.dim());
    }
    let pair = parse_pair(&args.pair)?;
    let phi1: ScalarFn = {
        let pair = pair.clone();
        Arc::new(move |t| pair.varphi(t))
    };
    let dir1 = match pair.family() {
        PairFamily::ADecreasing => Monotonicity::Decreasing,
        PairFamily::BIncreasing => Monotonicity::Increasing,
    };
    let (phi2, label2) = match &args.psi {
        Some(spec) => {
            let (f, dir2, label) = parse_weight(spec)?;
            if dir2 != dir1 {
                bail!("phi1 and phi2 must share monotonicity direction");
            }
            (f, label)
        }
        None => (phi1.clone(), format!("varphi of {}", args.pair)),
    };

    let grid = args.grid.build(body_k.dim())?;
    let spec =
        RadialAdditionSpec::new(phi1, phi2, dir1, args.epsilon).map_err(|e| anyhow!("{e}"))?;
    let rho_k = body_k.radial_samples(&grid).map_err(|e| anyhow!("{e}"))?;
    let rho_l = body_l.radial_samples(&grid).map_err(|e| anyhow!("{e}"))?;
    let rho = orlimink_core::orlicz::radial_addition(&rho_k, &rho_l, &spec)
        .map_err(|e| anyhow!("{e}"))?;

    let mut csv = String::new();
    let dim = body_k.dim();
    for axis in 0..dim {
        csv.push_str(&format!("u{},", axis + 1));
    }
    csv.push_str("rho_k,rho_l,rho\n");
    for ((u, rk), (rl, r)) in grid.nodes().iter().zip(&rho_k).zip(rho_l.iter().zip(&rho)) {
        for c in u {
            csv.push_str(&format!("{c},"));
        }
        csv.push_str(&format!("{rk},{rl},{r}\n"));
    }
    let out_file = write_output(&args.out, "addition.csv", &csv)?;
    println!("wrote {} radial samples", rho.len());

    write_manifest(
        &args.out,
        &RunManifest {
            subcommand: "addition".into(),
            input_paths: vec![args.body.display().to_string(), args.body2.display().to_string()],
            pair_spec: Some(format!("{} + eps {} * {}", args.pair, args.epsilon, label2)),
            grid_spec: Some(GridSpec::of(&grid)),
            config_overrides: None,
            output_directory: args.out.display().to_string(),
            output_files: vec![out_file],
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    )?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let started = Instant::now();
    let resolution = match args.grid {
        Some(base) => SuiteResolution::from_base(base),
        None => SuiteResolution::default(),
    };
    let outcomes = run_identity_suite(resolution);

    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut all_passed = true;
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", o.name, o.detail);
        all_passed &= o.passed;
    }

    #[derive(Serialize)]
    struct VerifyDoc<'a> {
        res_2d: usize,
        res_3d: usize,
        checks: Vec<CheckDoc<'a>>,
        all_passed: bool,
    }
    #[derive(Serialize)]
    struct CheckDoc<'a> {
        name: &'a str,
        passed: bool,
        detail: &'a str,
    }
    let doc = VerifyDoc {
        res_2d: resolution.res_2d,
        res_3d: resolution.res_3d,
        checks: outcomes
            .iter()
            .map(|o| CheckDoc { name: o.name, passed: o.passed, detail: &o.detail })
            .collect(),
        all_passed,
    };
    let text = serde_json::to_string_pretty(&doc)?;
    let out_file = write_output(&args.out, "verify.json", &(text + "\n"))?;

    write_manifest(
        &args.out,
        &RunManifest {
            subcommand: "verify".into(),
            input_paths: Vec::new(),
            pair_spec: None,
            grid_spec: None,
            config_overrides: None,
            output_directory: args.out.display().to_string(),
            output_files: vec![out_file],
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    )?;
    Ok(if all_passed { 0 } else { 1 })
}

fn cmd_export(args: ExportArgs) -> Result<u8> {
    let started = Instant::now();
    let body: HalfspacePolytope = read_json(&args.body, "body")?;
    let out_file = match body.dim() {
        2 => write_output(
            &args.out,
            "body.csv",
            &export::to_csv_loop(&body).map_err(|e| anyhow!("{e}"))?,
        )?,
        3 => write_output(
            &args.out,
            "body.obj",
            &export::to_obj(&body).map_err(|e| anyhow!("{e}"))?,
        )?,
        d => bail!("export supports dimensions 2 and 3, got {d}"),
    };
    println!("wrote {out_file}");

    write_manifest(
        &args.out,
        &RunManifest {
            subcommand: "export".into(),
            input_paths: vec![args.body.display().to_string()],
            pair_spec: None,
            grid_spec: None,
            config_overrides: None,
            output_directory: args.out.display().to_string(),
            output_files: vec![out_file],
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_seconds: started.elapsed().as_secs_f64(),
        },
    )?;
    Ok(0)
}
