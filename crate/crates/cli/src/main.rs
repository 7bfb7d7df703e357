//! Command line front end: builds a scenario, runs one checker or estimator
//! and emits a diff-stable JSON report.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixed_hardy::constants::{
    hardy_constant, hardy_via_bullet, localized_from_spec, poincare_constant, refine_and_compare, test_battery,
    ChainOptions, SolverOptions, Task,
};
use mixed_hardy::measure::{check_porosity, check_thickness, PointCloud, PorosityOptions};
use mixed_hardy::scenario::{catalog, Built, ScenarioSpec};
use mixed_hardy::sobolev::{extension_partition, glue_extension, gradient, trace_sup, write_field, write_pgm_slice};
use mixed_hardy::topology::{build_bullet, build_star, verify_bullet, HoleClass};
use mixed_hardy::{Error, ErrorKind};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_HYPOTHESIS: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser, Serialize)]
#[command(name = "mixed-hardy", version, about = "Hardy and Poincare constants for mixed boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for report.json and any tables or slices.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Record wall time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Serialize, Clone)]
struct ScenarioArgs {
    /// Built-in scenario name or path to a TOML file.
    #[arg(long)]
    scenario: String,
    /// Cells per unit length (overrides the scenario's resolution).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Serialize, Clone)]
struct SolveArgs {
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Relative eigen residual for the p = 2 solver.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10000)]
    max_iter: usize,
}

impl SolveArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, max_iter: self.max_iter, ..SolverOptions::default() }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TaskKind {
    Hardy,
    Poincare,
    HardyBullet,
    HardyLocal,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Sampled l-thickness test of the Dirichlet part.
    CheckThickness {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        #[arg(long = "R", default_value_t = 0.5)]
        r_max: f64,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Sampled porosity of the Dirichlet part.
    Porosity {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Required porosity; the run fails when the best tested value is lower.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 100)]
        balls: usize,
        #[arg(long, default_value_t = 1.0)]
        r_max: f64,
    },
    /// Completion of the domain inside the padded box.
    BuildBullet {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Reopens every blocked Dirichlet face.
    BuildStar {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Glued extension of a seeded test function.
    Extend {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    Hardy {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    Poincare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Chained estimate through the completed domain.
    HardyBullet {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value_t = 12)]
        battery: usize,
    },
    /// Localized estimate from the scenario's U and V regions.
    HardyLocal {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Reruns a task at several resolutions.
    Converge {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value = "hardy")]
        task: TaskKind,
        #[arg(long, value_delimiter = ',', default_values_t = vec![64usize, 128, 256])]
        levels: Vec<usize>,
    },
    ListScenarios,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckThickness { .. } => "check-thickness",
            Command::Porosity { .. } => "porosity",
            Command::BuildBullet { .. } => "build-bullet",
            Command::BuildStar { .. } => "build-star",
            Command::Extend { .. } => "extend",
            Command::Hardy { .. } => "hardy",
            Command::Poincare { .. } => "poincare",
            Command::HardyBullet { .. } => "hardy-bullet",
            Command::HardyLocal { .. } => "hardy-local",
            Command::Converge { .. } => "converge",
            Command::ListScenarios => "list-scenarios",
        }
    }
}

/// Outcome of a command: the module report, whether its declared
/// expectation held, and files to write next to report.json.
struct Outcome {
    report: Value,
    pass: bool,
    files: Vec<(String, Artifact)>,
}

enum Artifact {
    Text(String),
    Slice { grid: mixed_hardy::scenario::Grid, values: Vec<f64> },
    Field { grid: mixed_hardy::scenario::Grid, values: Vec<f64> },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Rounds every float to 12 significant digits. Keys are already sorted
/// because `serde_json::Map` is a `BTreeMap` here.
fn stabilize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = n.as_f64().unwrap();
            let r: f64 = format!("{x:.11e}").parse().unwrap();
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(stabilize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stabilize(v))).collect()),
        other => other,
    }
}

fn load(s: &ScenarioArgs) -> Result<Built, Error> {
    let mut spec = ScenarioSpec::load(&s.scenario)?;
    if let Some(n) = s.n {
        if n == 0 {
            return Err(Error::InvalidInput("resolution must be positive".into()));
        }
        spec.resolution = n;
    }
    Built::new(&spec)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let seed = cli.seed;
    let outcome = match &cli.command {
        Command::ListScenarios => {
            let list: Vec<Value> = catalog().into_iter().map(|(n, d)| json!({ "name": n, "description": d })).collect();
            Outcome { report: Value::Array(list), pass: true, files: Vec::new() }
        }
        Command::CheckThickness { scenario, l, r_max, gamma, samples } => {
            let built = load(scenario)?;
            let cloud = PointCloud::from_faces(built.domain.grid(), &built.labeling.dirichlet);
            let r = check_thickness(&cloud, *l, *r_max, *gamma, *samples, seed)?;
            Outcome { pass: r.pass, report: to_value(&r), files: Vec::new() }
        }
        Command::Porosity { scenario, kappa, balls, r_max } => {
            let built = load(scenario)?;
            let cloud = PointCloud::from_faces(built.domain.grid(), &built.labeling.dirichlet);
            let opts = PorosityOptions { n_balls: *balls, r_max: *r_max, seed, ..PorosityOptions::default() };
            let r = check_porosity(&cloud, &opts);
            let pass = kappa.map_or(true, |k| r.kappa_best >= k);
            Outcome { pass, report: to_value(&r), files: Vec::new() }
        }
        Command::BuildBullet { scenario } => {
            let built = load(scenario)?;
            let bullet = build_bullet(&built.domain, &built.labeling);
            let check = verify_bullet(&bullet, &built.domain, &built.labeling);
            let report = json!({
                "bullet": to_value(&bullet),
                "check": to_value(&check),
                "dirichlet_enclosed": bullet.count(HoleClass::DirichletEnclosed),
                "attached": bullet.count(HoleClass::Attached),
                "domain_cells": built.domain.inside_count(),
            });
            let g = bullet.domain.grid().clone();
            let mask = bullet.domain.inside().iter().map(|&b| f64::from(u8::from(b))).collect();
            Outcome { pass: check.pass, report, files: vec![("bullet.pgm".into(), Artifact::Slice { grid: g, values: mask })] }
        }
        Command::BuildStar { scenario } => {
            let built = load(scenario)?;
            let star = build_star(&built.domain, &built.labeling.dirichlet)?;
            let identity = star.boundary_identity_holds();
            let report = json!({
                "unblocked_faces": star.unblocked.len(),
                "e_star_faces": star.e_star.len(),
                "xi_faces": star.xi.len(),
                "remaining_blocked": star.domain.blocked().len(),
                "boundary_identity": identity,
            });
            Outcome { pass: identity, report, files: Vec::new() }
        }
        Command::Extend { scenario, p } => {
            let built = load(scenario)?;
            let (u, center, width, a) = test_battery(&built, 1, seed, None).into_iter().next().expect("battery of one");
            let margin = built.spec.margin.unwrap_or(2.0 * built.domain.grid().h);
            let pou = extension_partition(&built.domain, &built.labeling, &built.spec.patches, margin)?;
            let glued = glue_extension(&built.domain, &built.labeling, &u, &pou, &built.spec.patches, *p)?;
            let g = built.domain.grid();
            let identity = (0..g.len()).filter(|&i| built.domain.is_inside(i)).all(|i| glued.values[i] == u.values[i]);
            let trace = trace_sup(g, &glued.values, &built.labeling.dirichlet);
            let bound = 10.0 * g.h * gradient(&built.domain, &built.labeling.dirichlet, &u).max_abs();
            let report = json!({
                "glue": to_value(&glued),
                "test_function": { "center": center, "width": width, "exponent": a },
                "identity_on_domain": identity,
                "trace_sup": trace,
                "trace_bound": bound,
            });
            let files = vec![("extension.pgm".into(), Artifact::Slice { grid: g.clone(), values: glued.values.clone() })];
            Outcome { pass: identity && trace <= bound, report, files }
        }
        Command::Hardy { scenario, solve } => {
            let built = load(scenario)?;
            let r = hardy_constant(&built.domain, &built.labeling, &built.dist, solve.p, &solve.options())?;
            let g = built.domain.grid().clone();
            let files = vec![
                ("witness.pgm".into(), Artifact::Slice { grid: g.clone(), values: r.witness.values.clone() }),
                ("witness".into(), Artifact::Field { grid: g, values: r.witness.values.clone() }),
            ];
            Outcome { pass: true, report: to_value(&r), files }
        }
        Command::Poincare { scenario, solve } => {
            let built = load(scenario)?;
            let r = poincare_constant(&built.domain, &built.labeling, solve.p, &solve.options())?;
            let g = built.domain.grid().clone();
            let files = vec![("witness.pgm".into(), Artifact::Slice { grid: g, values: r.witness.values.clone() })];
            Outcome { pass: true, report: to_value(&r), files }
        }
        Command::HardyBullet { scenario, solve, battery } => {
            let built = load(scenario)?;
            let opts = ChainOptions { battery: *battery, seed, solver: solve.options(), ..ChainOptions::default() };
            let r = hardy_via_bullet(&built, solve.p, &opts)?;
            Outcome { pass: r.dist_monotone && r.bullet_check.pass, report: to_value(&r), files: Vec::new() }
        }
        Command::HardyLocal { scenario, solve } => {
            let built = load(scenario)?;
            let r = localized_from_spec(&built, solve.p, &solve.options())?;
            Outcome { pass: r.checks.all(), report: to_value(&r), files: Vec::new() }
        }
        Command::Converge { scenario, solve, task, levels } => {
            let spec = ScenarioSpec::load(&scenario.scenario)?;
            let p = solve.p;
            let task = match task {
                TaskKind::Hardy => Task::Hardy { p },
                TaskKind::Poincare => Task::Poincare { p },
                TaskKind::HardyBullet => Task::HardyBullet { p },
                TaskKind::HardyLocal => Task::HardyLocal { p },
            };
            let table = refine_and_compare(&spec, levels, task, &solve.options())?;
            let files = vec![("convergence.csv".into(), Artifact::Text(table.to_csv()))];
            Outcome { pass: true, report: to_value(&table), files }
        }
    };
    Ok(outcome)
}

fn write_outputs(dir: &Path, report: &str, files: &[(String, Artifact)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), report)?;
    for (name, art) in files {
        match art {
            Artifact::Text(t) => std::fs::write(dir.join(name), t)?,
            Artifact::Slice { grid, values } => write_pgm_slice(&dir.join(name), grid, values)?,
            Artifact::Field { grid, values } => write_field(dir, name, grid, values)?,
        }
    }
    Ok(())
}

fn exit_for(e: &Failure) -> u8 {
    match e {
        Failure::Core(e) => match e.kind() {
            ErrorKind::Config => EXIT_CONFIG,
            ErrorKind::Hypothesis => EXIT_HYPOTHESIS,
            ErrorKind::Solver => EXIT_SOLVER,
        },
        Failure::Io(_) => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    let (body, pass, files, code) = match result {
        Ok(o) => (json!({ "result": o.report }), o.pass, o.files, if o.pass { 0 } else { EXIT_HYPOTHESIS }),
        Err(e) => {
            let code = exit_for(&e);
            let msg = match &e {
                Failure::Core(e) => e.to_string(),
                Failure::Io(e) => e.to_string(),
            };
            eprintln!("error: {msg}");
            (json!({ "error": msg }), false, Vec::new(), code)
        }
    };
    let mut envelope = json!({
        "command": cli.command.name(),
        "config": to_value(&cli),
        "pass": pass,
        "exit_code": code,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let obj = envelope.as_object_mut().unwrap();
    for (k, v) in body.as_object().unwrap() {
        obj.insert(k.clone(), v.clone());
    }
    if cli.timing {
        obj.insert("wall_time_s".into(), json!(start.elapsed().as_secs_f64()));
    }
    let text = serde_json::to_string_pretty(&stabilize(envelope)).unwrap() + "\n";
    match &cli.out {
        Some(dir) => {
            if let Err(e) = write_outputs(dir, &text, &files) {
                eprintln!("error: cannot write to {}: {e}", dir.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
