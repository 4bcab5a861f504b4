use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ihsig_core::complex::Ring;
use ihsig_core::filtered::Perversity;

use ihsig_cli::pipeline::{run_pipeline, PipelineConfig, Stage};
use ihsig_cli::{gen, scx};

/// Intersection homology, Witt checks, transfers and G-signatures of
/// simplicial group actions.
#[derive(Parser)]
#[command(name = "ihsig", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Q,
}

#[derive(Args, Clone)]
struct Shared {
    /// `m`, `n`, `0`, `t` or comma-separated values from codimension 2.
    #[arg(long, default_value = "m", global = true)]
    perversity: String,
    #[arg(long, value_enum, default_value = "z", global = true)]
    ring: RingArg,
    /// Absolute tolerance for numerical traces.
    #[arg(long, default_value_t = 1e-8, global = true)]
    tolerance: f64,
    /// Barycentric subdivisions allowed for regularization (0, 1 or 2).
    #[arg(long = "max-subdiv", default_value_t = 2, global = true)]
    max_subdiv: usize,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report or generated file here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time per stage (reports are then not reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Pseudomanifold conditions and orientability.
    CheckPm { file: PathBuf },
    Homology { file: PathBuf },
    /// Intersection homology of the skeletal filtration.
    Ih { file: PathBuf },
    Witt { file: PathBuf },
    /// Regularize the action and build the orbit complex.
    Orbit { file: PathBuf },
    /// Middle intersection form and its signature.
    Signature { file: PathBuf },
    GSignature { file: PathBuf },
    VerifyTransfer { file: PathBuf },
    VerifyAveraging { file: PathBuf },
    /// Every stage in order.
    Pipeline { file: PathBuf },
    /// Write a catalog example, or `suspend <file> <times>`.
    Gen { name: String, args: Vec<String> },
}

enum Failure {
    Input(String),
    Internal(String),
}

fn read_file(path: &Path) -> Result<scx::ScxFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    scx::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(shared: &Shared, stages: Vec<Stage>) -> Result<PipelineConfig, Failure> {
    let perversity = Perversity::parse(&shared.perversity).map_err(|e| Failure::Input(e.to_string()))?;
    let jobs = shared.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let c = PipelineConfig {
        stages,
        perversity,
        ring: match shared.ring {
            RingArg::Z => Ring::Integers,
            RingArg::Q => Ring::Rationals,
        },
        tolerance: shared.tolerance,
        max_subdivisions: shared.max_subdiv,
        jobs,
        timing: shared.timing,
    };
    c.validate().map_err(Failure::Input)?;
    Ok(c)
}

fn run(verb: Verb, shared: &Shared) -> Result<i32, Failure> {
    let (file, stages) = match verb {
        Verb::CheckPm { file } => (file, vec![Stage::Pm]),
        Verb::Homology { file } => (file, vec![Stage::Homology]),
        Verb::Ih { file } => (file, vec![Stage::Ih]),
        Verb::Witt { file } => (file, vec![Stage::Witt]),
        Verb::Orbit { file } => (file, vec![Stage::Orbit]),
        Verb::Signature { file } => (file, vec![Stage::Signature]),
        Verb::GSignature { file } => (file, vec![Stage::GSignature]),
        Verb::VerifyTransfer { file } => (file, vec![Stage::Transfer]),
        Verb::VerifyAveraging { file } => (file, vec![Stage::Averaging]),
        Verb::Pipeline { file } => (file, Stage::ALL.to_vec()),
        Verb::Gen { name, args } => return generate(&name, &args, shared),
    };
    let config = config(shared, stages)?;
    let input = read_file(&file)?;
    let report = run_pipeline(&file.display().to_string(), &input, &config);
    let mut text = serde_json::to_string_pretty(&report.value).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    emit(&text, shared.out.as_deref())?;
    Ok(report.exit_code())
}

fn generate(name: &str, args: &[String], shared: &Shared) -> Result<i32, Failure> {
    let text = if name == "suspend" {
        let [file, times] = args else {
            return Err(Failure::Input("usage: gen suspend <file> <times>".into()));
        };
        let times: usize = times.parse().map_err(|_| Failure::Input(format!("bad suspension count {times:?}")))?;
        let input = read_file(Path::new(file))?;
        gen::suspend(&input, times).map_err(|e| Failure::Internal(e.to_string()))?
    } else {
        let param = match args {
            [] => None,
            [p] => Some(p.parse().map_err(|_| Failure::Input(format!("bad parameter {p:?}")))?),
            _ => return Err(Failure::Input(format!("{name} takes at most one parameter"))),
        };
        gen::catalog_file(name, param).ok_or_else(|| {
            Failure::Input(format!("unknown example {name:?}; known: {}, suspend", ihsig_core::catalog::NAMES.join(", ")))
        })?
    };
    emit(&text, shared.out.as_deref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.verb, &cli.shared) {
        Ok(c) => c,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            3
        }
    };
    ExitCode::from(code as u8)
}
