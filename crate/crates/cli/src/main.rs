mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use su2align::optimal::{asymptotic_chi1, entangled_benchmark, scan, solve};
use su2align::sim::{run_with, ProtocolSpec, RunOptions, TruthMode};
use su2align::Rotation;

use output::{csv_table, emit_json, emit_with_side_manifest, num, nums, sig12, RunManifest};

/// Largest N simulated without `--force`.
const SIM_COST_LIMIT: u32 = 31;

const THREADS_ENV: &str = "SU2ALIGN_THREADS";

#[derive(Parser)]
#[command(
    name = "su2align",
    version,
    about = "Optimal SU(2) gate estimation with N spins"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal protocol for one odd N.
    Solve(SolveArgs),
    /// Optimal score, benchmark and large-N expansions over a range of N.
    Scan(ScanArgs),
    /// Monte Carlo run of the optimal protocol.
    Simulate(SimulateArgs),
    /// Run the oracle cross-checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 1)]
    n_min: u32,
    #[arg(long)]
    n_max: u32,
    #[arg(long, default_value_t = 2)]
    step: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fix the true element to these ZYZ Euler angles "alpha,beta,gamma".
    #[arg(long, allow_hyphen_values = true)]
    fixed_g: Option<String>,
    /// Allow N above the cost guard.
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sabotage {
    /// Double the top-sector measurement weight.
    #[value(name = "b_J")]
    TopWeight,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    level: VerifyLevel,
    /// Inject a deliberate fault that the checks must catch.
    #[arg(long, value_enum)]
    sabotage: Option<Sabotage>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Usage(String),
    CostGuard(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) | Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::CostGuard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m)
            | Failure::Usage(m)
            | Failure::CostGuard(m)
            | Failure::Runtime(m) => m,
        }
    }
}

impl From<su2align::Error> for Failure {
    fn from(e: su2align::Error) -> Self {
        use su2align::Error as E;
        match e {
            E::Domain(_) | E::UnsupportedParity(_) | E::Capability { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn check_odd(n: u32) -> Outcome {
    if n < 1 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if n.is_multiple_of(2) {
        return Err(Failure::Usage(format!(
            "--n {n} is even; only odd N is supported"
        )));
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Outcome {
    check_odd(args.n)?;
    let opt = solve::<f64>(args.n)?;
    let bench = entangled_benchmark::<f64>(args.n)?;
    let asym = asymptotic_chi1::<f64>(args.n);
    let manifest = RunManifest::new("solve")
        .param("n", args.n)
        .param("format", args.format.name());
    let out = args.out.as_deref();
    match args.format {
        Format::Json => {
            let mut r = Map::new();
            r.insert("N".into(), args.n.into());
            r.insert("chi1".into(), num(opt.chi1));
            r.insert("fidelity".into(), num(opt.fidelity));
            r.insert("holevo".into(), num(opt.holevo));
            r.insert("lambda0".into(), num(opt.lambda0));
            r.insert("a".into(), nums(opt.coefficients.values()));
            r.insert("entangled_chi1".into(), num(bench.chi1_exact));
            r.insert("asymptotic_chi1".into(), num(asym));
            emit_json(out, &manifest, r)?;
        }
        Format::Csv => {
            let a: Vec<String> = opt
                .coefficients
                .values()
                .iter()
                .map(|&x| sig12(x))
                .collect();
            let row = vec![
                args.n.to_string(),
                sig12(opt.chi1),
                sig12(opt.fidelity),
                sig12(opt.holevo),
                sig12(opt.lambda0),
                a.join(";"),
                sig12(bench.chi1_exact),
                sig12(asym),
            ];
            let header = [
                "N",
                "chi1",
                "fidelity",
                "holevo",
                "lambda0",
                "a",
                "entangled_chi1",
                "asymptotic_chi1",
            ];
            emit_with_side_manifest(out, &manifest, &csv_table(&header, &[row])?)?;
        }
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs) -> Outcome {
    if args.n_min > args.n_max {
        return Err(Failure::Usage(format!(
            "empty range: --n-min {} > --n-max {}",
            args.n_min, args.n_max
        )));
    }
    check_odd(args.n_min)?;
    check_odd(args.n_max)?;
    if args.step == 0 || !args.step.is_multiple_of(2) {
        return Err(Failure::Usage(format!(
            "--step must be a positive even number, got {}",
            args.step
        )));
    }
    let rows = scan::<f64>(args.n_min, args.n_max, args.step)?;
    let manifest = RunManifest::new("scan")
        .param("n_min", args.n_min)
        .param("n_max", args.n_max)
        .param("step", args.step)
        .param("format", args.format.name());
    let header = [
        "N",
        "chi1",
        "entangled_chi1",
        "asymptotic_chi1",
        "entangled_asymptotic_chi1",
        "residual_n4",
        "entangled_residual_n4",
    ];
    let out = args.out.as_deref();
    match args.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n_spins.to_string(),
                        sig12(r.chi1),
                        sig12(r.entangled_chi1),
                        sig12(r.asymptotic_chi1),
                        sig12(r.entangled_asymptotic_chi1),
                        sig12(r.residual_n4),
                        sig12(r.entangled_residual_n4),
                    ]
                })
                .collect();
            emit_with_side_manifest(out, &manifest, &csv_table(&header, &table)?)?;
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let values = [
                        r.chi1,
                        r.entangled_chi1,
                        r.asymptotic_chi1,
                        r.entangled_asymptotic_chi1,
                        r.residual_n4,
                        r.entangled_residual_n4,
                    ];
                    let mut m = Map::new();
                    m.insert(header[0].into(), r.n_spins.into());
                    for (key, v) in header[1..].iter().zip(values) {
                        m.insert((*key).into(), num(v));
                    }
                    Value::Object(m)
                })
                .collect();
            let mut report = Map::new();
            report.insert("rows".into(), Value::Array(list));
            emit_json(out, &manifest, report)?;
        }
    }
    Ok(())
}

fn parse_euler(text: &str) -> Result<Rotation, Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("--fixed-g: {e}")))?;
    match parts[..] {
        [alpha, beta, gamma] => Ok(Rotation::from_euler(alpha, beta, gamma)?),
        _ => Err(Failure::Usage(format!(
            "--fixed-g expects three comma-separated angles, got {text:?}"
        ))),
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Outcome {
    check_odd(args.n)?;
    if args.shots == 0 {
        return Err(Failure::Usage("--shots must be at least 1".into()));
    }
    if args.n > SIM_COST_LIMIT && !args.force {
        return Err(Failure::CostGuard(format!(
            "simulation cost grows like N³ per shot; N = {} exceeds {SIM_COST_LIMIT} (pass --force to run anyway)",
            args.n
        )));
    }
    let truth = match &args.fixed_g {
        Some(text) => TruthMode::Fixed(parse_euler(text)?),
        None => TruthMode::Haar,
    };
    let spec = ProtocolSpec::optimal(args.n)?;
    let stats = run_with(
        &spec,
        args.shots,
        args.seed,
        &RunOptions {
            workers: None,
            truth,
        },
    )?;
    let analytic = solve::<f64>(args.n)?.chi1;
    let z = if stats.stderr_chi1 > 0.0 {
        (stats.mean_chi1 - analytic) / stats.stderr_chi1
    } else {
        f64::NAN
    };

    let mut manifest = RunManifest::new("simulate")
        .param("n", args.n)
        .param("shots", args.shots)
        .param("seed", args.seed)
        .param("force", args.force)
        .param("format", args.format.name())
        .seed(args.seed);
    if let Some(g) = &args.fixed_g {
        manifest = manifest.param("fixed_g", g.as_str());
    }
    let fields: [(&str, f64); 7] = [
        ("mean_chi1", stats.mean_chi1),
        ("mean_fidelity", stats.mean_fidelity),
        ("mean_holevo", stats.mean_holevo),
        ("stderr_chi1", stats.stderr_chi1),
        ("acceptance_rate", stats.acceptance_rate),
        ("analytic_chi1", analytic),
        ("z_score", z),
    ];
    let out = args.out.as_deref();
    match args.format {
        Format::Json => {
            let mut r = Map::new();
            r.insert("N".into(), args.n.into());
            r.insert("shots".into(), stats.shots.into());
            r.insert("seed".into(), stats.seed.into());
            for (key, v) in fields {
                r.insert(key.into(), num(v));
            }
            emit_json(out, &manifest, r)?;
        }
        Format::Csv => {
            let mut header = vec!["N", "shots", "seed"];
            let mut row = vec![
                args.n.to_string(),
                stats.shots.to_string(),
                stats.seed.to_string(),
            ];
            for (key, v) in fields {
                header.push(key);
                row.push(sig12(v));
            }
            emit_with_side_manifest(out, &manifest, &csv_table(&header, &[row])?)?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let level = match args.level {
        VerifyLevel::Quick => verify::Level::Quick,
        VerifyLevel::Full => verify::Level::Full,
    };
    let checks = verify::run(level, args.sabotage == Some(Sabotage::TopWeight))?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut table = String::new();
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        table += &format!(
            "{verdict}  {:width$}  residual {:>12}  threshold {}\n",
            c.name,
            sig12(c.residual),
            sig12(c.threshold)
        );
    }
    let level_name = match args.level {
        VerifyLevel::Quick => "quick",
        VerifyLevel::Full => "full",
    };
    let mut manifest = RunManifest::new("verify").param("level", level_name);
    if args.sabotage.is_some() {
        manifest = manifest.param("sabotage", "b_J");
    }
    emit_with_side_manifest(args.out.as_deref(), &manifest, &table)?;

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} (residual {})", c.name, sig12(c.residual)))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} check(s) failed: {}",
            failed.len(),
            failed.join("; ")
        )))
    }
}

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Runtime(format!("cannot configure worker pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("su2align: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
