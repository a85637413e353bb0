//! Command-line interface: generate curves from JSON specs, solve raw
//! natural equations, transform sampled apparatuses, verify solved curves,
//! and classify developments.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use curvekit::analysis::{run_checks, Check, CheckTolerances};
use curvekit::apparatus::CurveSamples;
use curvekit::io::{export_csv, import_csv, write_csv, CurveSpec, DevSpec};
use curvekit::solver::integrate_positions;
use curvekit::transforms::{
    bishop_transform, inverse_bishop, predecessor_transform, successor_transform,
};
use curvekit::{classify, Error};

#[derive(Parser)]
#[command(name = "curvekit", about = "Solve and analyze natural equations of space curves", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a curve from a family spec (JSON) and write CSV samples.
    Generate(GenerateArgs),
    /// Solve raw natural equations (kappa, tau) from a JSON spec.
    Solve(SolveArgs),
    /// Apply a frame transformation to CSV curve samples.
    Transform(TransformArgs),
    /// Run verification checks on CSV curve samples; report as JSON.
    Verify(VerifyArgs),
    /// Classify the development in a JSON spec.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Path to the curve spec (JSON).
    spec: PathBuf,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Path to the development spec (JSON).
    spec: PathBuf,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformOp {
    Successor,
    Predecessor,
    Bishop,
    InverseBishop,
}

#[derive(Args)]
struct TransformArgs {
    /// Input CSV (as produced by generate/solve).
    input: PathBuf,
    #[arg(long, value_enum)]
    op: TransformOp,
    /// Initial rotation angle; required for successor and bishop.
    #[arg(long)]
    phi0: Option<f64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Orthonormality,
    UnitSpeed,
    Consistency,
    Closure,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input CSV.
    input: PathBuf,
    /// Checks to run.
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [CheckName::Orthonormality, CheckName::UnitSpeed, CheckName::Consistency])]
    checks: Vec<CheckName>,
    #[arg(long, default_value_t = 1e-9)]
    tol_ortho: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_speed: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol_consistency: f64,
    #[arg(long, default_value_t = 1e-5)]
    tol_closure: f64,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Path to the development spec (JSON).
    spec: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit_csv(samples: &CurveSamples, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => export_csv(samples, path),
        None => {
            let stdout = std::io::stdout();
            write_csv(samples, stdout.lock()).map_err(|source| Error::Io {
                path: "<stdout>".to_string(),
                source,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Generate(args) => {
            let spec = CurveSpec::from_json(&read_to_string(&args.spec)?)?;
            let samples = spec.build()?;
            emit_csv(&samples, &args.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => {
            let spec = DevSpec::from_json(&read_to_string(&args.spec)?)?;
            let samples = spec.build()?;
            emit_csv(&samples, &args.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform(args) => {
            let samples = import_csv(&args.input)?;
            let app = samples.apparatus()?;
            let needs_phi0 = matches!(args.op, TransformOp::Successor | TransformOp::Bishop);
            if needs_phi0 && args.phi0.is_none() {
                return Err(Error::InvalidConfig(
                    "--phi0 is required for successor and bishop transforms".to_string(),
                ));
            }
            // Each transform keeps the arclength grid; positions are
            // re-integrated from the new tangent (unchanged for the
            // normal-plane rotations of the Bishop pair).
            let out = match args.op {
                TransformOp::Successor => {
                    let t = successor_transform(&app, args.phi0.unwrap())?;
                    frenet_to_samples(&samples, &t)?
                }
                TransformOp::Predecessor => {
                    let t = predecessor_transform(&app)?;
                    frenet_to_samples(&samples, &t)?
                }
                TransformOp::Bishop => {
                    let b = bishop_transform(&app, args.phi0.unwrap())?;
                    // CSV columns N,B / kappa,tau carry N1,N2 / k1,k2.
                    CurveSamples::new(
                        *b.grid(),
                        samples.positions.clone(),
                        b.frames().to_vec(),
                        b.k1().sample(b.grid())?,
                        b.k2().sample(b.grid())?,
                    )?
                }
                TransformOp::InverseBishop => {
                    let f = inverse_bishop(&curvekit::apparatus::BishopApparatus::new(
                        *app.grid(),
                        app.frames().to_vec(),
                        app.kappa().clone(),
                        app.tau().clone(),
                    )?)?;
                    CurveSamples::new(
                        *f.grid(),
                        samples.positions.clone(),
                        f.frames().to_vec(),
                        f.kappa().sample(f.grid())?,
                        f.tau().sample(f.grid())?,
                    )?
                }
            };
            emit_csv(&out, &args.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let samples = import_csv(&args.input)?;
            let checks: Vec<Check> = args
                .checks
                .iter()
                .map(|c| match c {
                    CheckName::Orthonormality => Check::Orthonormality,
                    CheckName::UnitSpeed => Check::UnitSpeed,
                    CheckName::Consistency => Check::FrenetConsistency,
                    CheckName::Closure => Check::Closure,
                })
                .collect();
            let tol = CheckTolerances {
                ortho: args.tol_ortho,
                unit_speed: args.tol_speed,
                consistency: args.tol_consistency,
                closure: args.tol_closure,
            };
            let report = run_checks(&samples, &checks, &tol)?;
            let mut stdout = std::io::stdout();
            serde_json::to_writer_pretty(&mut stdout, &report)
                .map_err(|e| Error::Malformed(format!("report serialization: {e}")))?;
            writeln!(stdout).ok();
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed");
                Ok(ExitCode::from(1))
            }
        }
        Command::Classify(args) => {
            let spec = DevSpec::from_json(&read_to_string(&args.spec)?)?;
            let verdict = classify(&spec.development()?, args.tol)?;
            let mut stdout = std::io::stdout();
            serde_json::to_writer_pretty(&mut stdout, &verdict)
                .map_err(|e| Error::Malformed(format!("verdict serialization: {e}")))?;
            writeln!(stdout).ok();
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Rebuild curve samples from a transformed Frenet apparatus: same grid,
/// positions re-integrated from the new tangent starting at the original
/// first position.
fn frenet_to_samples(
    original: &CurveSamples,
    app: &curvekit::FrenetApparatus,
) -> Result<CurveSamples, Error> {
    let positions = integrate_positions(app.grid(), app.frames(), original.positions[0]);
    CurveSamples::new(
        *app.grid(),
        positions,
        app.frames().to_vec(),
        app.kappa().sample(app.grid())?,
        app.tau().sample(app.grid())?,
    )
}
