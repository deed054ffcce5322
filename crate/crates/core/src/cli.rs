//! The `gff` command-line interface.
//!
//! Exit codes: 0 on success or a passing verification, 1 when the input is
//! well formed but fails (not a frame, a check above threshold), 2 on any
//! malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::frame::{pair_frame_operator, GFusionSystem, DEFAULT_CLASS_TOL};
use crate::io::{
    family_to_value, load_family, load_system, load_vector, matrix_to_json, save_system,
    vector_to_value,
};
use crate::linalg::{operator_norm_2, Tolerance};
use crate::random::{random_system, RandomSystemParams};
use crate::report::{verify_system, Report};
use crate::tensor::{tensor_system, verify_tensor_identities, ElementBudget};

#[derive(Debug, Parser)]
#[command(
    name = "gff",
    version,
    about = "Generalized fusion frames and their tensor products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Residual threshold for every check
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Number of random vectors or coefficient families per check
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the machine-readable report here
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ApplyOp {
    Analysis,
    Synthesis,
    FrameOp,
    Reconstruct,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the optimal frame bounds and the classification
    Bounds { system: PathBuf },
    /// Emit the frame operator as a dense matrix
    FrameOp {
        system: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Write the canonical dual system
    Dual {
        system: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Emit the pair frame operator of two systems and its norm
    Pair {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Write the tensor product of two systems
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Check the single-system identities
    Verify {
        system: PathBuf,
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Check the tensor product identities
    VerifyTensor {
        left: PathBuf,
        right: PathBuf,
        /// Primed left system, enables the pair checks together with --rp
        #[arg(long, requires = "rp")]
        lp: Option<PathBuf>,
        #[arg(long, requires = "lp")]
        rp: Option<PathBuf>,
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Generate a reproducible random system
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        components: usize,
        /// Comma-separated, one per component or a single shared value
        #[arg(long, value_delimiter = ',', required = true)]
        local_dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weight range as lo,hi
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.5, 2.0])]
        weights: Vec<f64>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Apply an operator of a system to a vector
    Apply {
        system: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        #[arg(long, value_enum, default_value_t = ApplyOp::Analysis)]
        op: ApplyOp,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

/// Run the CLI with explicit arguments and output streams; returns the exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = writeln!(
                    err,
                    "{}",
                    text.lines().next().unwrap_or("invalid arguments")
                );
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e @ Error::NotAFrame { .. }) => {
            let _ = writeln!(err, "{e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            2
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn tolerance(args: &VerifyArgs) -> Result<Tolerance> {
    Tolerance::new(Tolerance::default().rank_tol, args.tol)
}

fn finish_report(report: &Report, args: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let b = report.bounds;
    writeln!(
        out,
        "bounds: lower={} upper={} kind={}",
        b.lower, b.upper, b.kind
    )?;
    for check in &report.checks {
        writeln!(
            out,
            "{} {} residual={:e} threshold={:e}",
            if check.passed() { "PASS" } else { "FAIL" },
            check.name,
            check.residual,
            check.threshold
        )?;
    }
    for (name, value) in &report.info {
        writeln!(out, "info {name}={value}")?;
    }
    writeln!(
        out,
        "overall: {}",
        if report.pass() { "pass" } else { "fail" }
    )?;

    if let Some(path) = &args.json {
        let file = report.to_file(Some(args.seed));
        let mut text = serde_json::to_string_pretty(&file).expect("report serializes");
        text.push('\n');
        std::fs::write(path, text)?;
    }
    Ok(if report.pass() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Bounds { system } => {
            let b = load_system(&system)?.optimal_bounds(DEFAULT_CLASS_TOL);
            writeln!(out, "lower={} upper={} kind={}", b.lower, b.upper, b.kind)?;
            Ok(if b.kind.is_frame() {
                Outcome::Ok
            } else {
                Outcome::Failed
            })
        }
        Command::FrameOp { system, o } => {
            let s = load_system(&system)?.frame_operator();
            write_output(o.as_deref(), &matrix_to_json(&s), out)?;
            Ok(Outcome::Ok)
        }
        Command::Dual { system, o } => {
            let dual = load_system(&system)?.canonical_dual()?;
            save_system(&dual, &o)?;
            Ok(Outcome::Ok)
        }
        Command::Pair { a, b, o } => {
            let s = pair_frame_operator(&load_system(&a)?, &load_system(&b)?)?;
            let matrix: serde_json::Value =
                serde_json::from_str(&matrix_to_json(&s)).expect("own output parses");
            let doc = json!({ "matrix": matrix, "operator_norm": operator_norm_2(&s) });
            write_output(o.as_deref(), &pretty(&doc), out)?;
            Ok(Outcome::Ok)
        }
        Command::Tensor { left, right, o } => {
            let ts = tensor_system(
                &load_system(&left)?,
                &load_system(&right)?,
                ElementBudget::from_env()?,
            )?;
            save_system(ts.product(), &o)?;
            Ok(Outcome::Ok)
        }
        Command::Verify { system, args } => {
            let sys = load_system(&system)?;
            let report = verify_system(&sys, args.trials, tolerance(&args)?, args.seed)?;
            finish_report(&report, &args, out)
        }
        Command::VerifyTensor {
            left,
            right,
            lp,
            rp,
            args,
        } => {
            let budget = ElementBudget::from_env()?;
            let ts = tensor_system(&load_system(&left)?, &load_system(&right)?, budget)?;
            let primed = match (lp, rp) {
                (Some(lp), Some(rp)) => Some(tensor_system(
                    &load_system(&lp)?,
                    &load_system(&rp)?,
                    budget,
                )?),
                _ => None,
            };
            let report = verify_tensor_identities(
                &ts,
                primed.as_ref(),
                args.trials,
                tolerance(&args)?,
                args.seed,
            )?;
            finish_report(&report, &args, out)
        }
        Command::Random {
            dim,
            components,
            local_dims,
            seed,
            weights,
            o,
        } => {
            let params = RandomSystemParams::new(dim, components, local_dims)
                .weights(weights[0], weights[1]);
            save_system(&random_system(seed, &params)?, &o)?;
            Ok(Outcome::Ok)
        }
        Command::Apply { system, vector, op } => {
            let sys = load_system(&system)?;
            let doc = apply(&sys, &vector, op)?;
            write_output(None, &pretty(&doc), out)?;
            Ok(Outcome::Ok)
        }
    }
}

fn apply(sys: &GFusionSystem, vector: &Path, op: ApplyOp) -> Result<serde_json::Value> {
    Ok(match op {
        ApplyOp::Analysis => {
            let f = load_vector(vector)?;
            json!({ "blocks": family_to_value(&sys.analysis(&f)?) })
        }
        ApplyOp::Synthesis => {
            let fam = load_family(vector, sys)?;
            json!({ "vector": vector_to_value(&sys.synthesis(&fam)?) })
        }
        ApplyOp::FrameOp => {
            let f = load_vector(vector)?;
            if f.len() != sys.ambient_dim() {
                return Err(Error::DimensionMismatch(format!(
                    "vector has length {}, system lives in dimension {}",
                    f.len(),
                    sys.ambient_dim()
                )));
            }
            json!({ "vector": vector_to_value(&(sys.frame_operator() * f)) })
        }
        ApplyOp::Reconstruct => {
            let f = load_vector(vector)?;
            let (rec, rel_err) = sys.reconstruct(&f, DEFAULT_CLASS_TOL)?;
            json!({ "vector": vector_to_value(&rec), "rel_err": rel_err })
        }
    })
}
