//! `xzero`: verification pipeline, tangent space and `X0` sampling.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check, 2 on bad input.
//! Structured output goes to stdout, human text to stderr.

mod sample;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use xzero_core::{defvar, whitehead, DefPoint, DefVarError, GluingSystem, InstanceData, Stage};

#[derive(Parser)]
#[command(
    name = "xzero",
    version,
    about = "Exact checks for a component of the SL(3,C) character variety of the Whitehead link"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run stages of the verification pipeline and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        stage: Vec<StageArg>,
        /// Directory holding matrices.json, flags.json and instance.json.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
    /// Residuals and Jacobian kernel of a point on the deformation variety.
    Tangent {
        /// Instance JSON (defaults to the bundled Whitehead instance).
        instance: Option<PathBuf>,
        /// Point JSON (defaults to the bundled point).
        point: Option<PathBuf>,
        /// Also print the kernel basis.
        #[arg(long)]
        basis: bool,
    },
    /// Evaluate the parametrisation of X0 at sample trace coordinates.
    Sample(sample::SampleArgs),
    /// Convert a raw gluing matrix (CSV plus header JSON) to an instance JSON.
    Import { csv: PathBuf, header: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    All,
    RhoGeom,
    Rho0,
    Decoration,
    Defpoint,
    Tangent,
    X0,
}

/// Why a command stopped early.
pub enum Failure {
    Check(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

pub type Outcome = Result<(), Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn stages(args: &[StageArg]) -> Vec<Stage> {
    let mut out = Vec::new();
    for a in args {
        let add: &[Stage] = match a {
            StageArg::All => &Stage::ALL,
            StageArg::RhoGeom => &[Stage::RhoGeom],
            StageArg::Rho0 => &[Stage::Rho0],
            StageArg::Decoration => &[Stage::Decoration],
            StageArg::Defpoint => &[Stage::Defpoint],
            StageArg::Tangent => &[Stage::Tangent],
            StageArg::X0 => &[Stage::X0],
        };
        for s in add {
            if !out.contains(s) {
                out.push(*s);
            }
        }
    }
    out
}

fn verify(stage: &[StageArg], data_dir: Option<&Path>) -> Outcome {
    let data = match data_dir {
        Some(d) => InstanceData::from_dir(d),
        None => InstanceData::bundled(),
    }
    .map_err(input)?;
    let report = whitehead::verify_main_theorem(&data, &stages(stage)).map_err(input)?;
    println!("{}", report.to_json());
    let errata = report.errata().count();
    if errata > 0 {
        eprintln!("{errata} printed statement(s) recorded as errata; see the notes in the report");
    }
    if report.ok() {
        eprintln!("{} checks passed", report.checks.len());
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| format!("{}: {}", c.stage, c.check)).collect();
        Err(Failure::Check(format!("failed checks: {}", names.join("; "))))
    }
}

fn tangent(instance: Option<&Path>, point: Option<&Path>, basis: bool) -> Outcome {
    let sys = match instance {
        Some(p) => GluingSystem::from_json(&read(p)?).map_err(input)?,
        None => GluingSystem::from_json(whitehead::INSTANCE_JSON).map_err(input)?,
    };
    let p: DefPoint = match point {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => whitehead::bundled_point(),
    };
    let res = defvar::evaluate_residuals(&sys, &p).map_err(input)?;
    let summary = json!({
        "total": res.values.len(),
        "equal_to_one": res.count_one(),
        "first_failure": res.first_failure().map(|(l, v)| json!({"residual": l, "value": v.to_string()})),
    });
    if let Some((label, value)) = res.first_failure() {
        println!("{}", serde_json::to_string_pretty(&json!({ "residuals": summary })).unwrap());
        return Err(Failure::Check(format!("point is off the variety: residual {label} = {value}")));
    }
    let t = defvar::tangent_space(&sys, &p).map_err(|e: DefVarError| input(e))?;
    let mut out = json!({
        "residuals": summary,
        "columns": t.columns,
        "rank": t.rank,
        "kernel_dimension": t.dimension(),
    });
    if basis {
        let b: Vec<Vec<String>> = t.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        out["basis"] = json!(b);
    }
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    eprintln!("all {} residuals equal 1; kernel dimension {}", res.values.len(), t.dimension());
    if t.rank_nullity_holds() {
        Ok(())
    } else {
        Err(Failure::Check("rank + nullity differs from the column count".into()))
    }
}

fn import(csv: &Path, header: &Path) -> Outcome {
    let sys = defvar::import_raw(&read(csv)?, &read(header)?).map_err(input)?;
    println!("{}", sys.to_json());
    eprintln!("imported {} rows over {} columns", sys.rows.len(), sys.columns());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { stage, data_dir } => verify(stage, data_dir.as_deref()),
        Command::Tangent { instance, point, basis } => tangent(instance.as_deref(), point.as_deref(), *basis),
        Command::Sample(args) => sample::run(args),
        Command::Import { csv, header } => import(csv, header),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Check(m) | Failure::Input(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
