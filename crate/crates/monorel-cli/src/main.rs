//! `monorel`: inspect linear relations, evaluate Fitzpatrick functions, and
//! run the randomized verification suites.
//!
//! Exit codes: 0 success (all suites pass), 1 suite failures, 2 usage or
//! parse errors, 3 precondition violations (e.g. a Fitzpatrick evaluation on
//! a non-monotone relation).

mod file;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monorel_core::fitzpatrick::{
    fitz_star_transpose_eval, fitzpatrick_conj_eval, fitzpatrick_eval, partial_inf_conv,
};
use monorel_core::harness::{run_suite, SUITE_NAMES};
use monorel_core::monotone::{
    extend_to_maximal, is_maximal_monotone, is_monotone, is_skew,
};
use monorel_core::{Error as CoreError, LinearRelation, Tolerance};
use nalgebra::DVector;

use file::RelationFile;
use report::Report;

#[derive(Parser)]
#[command(
    name = "monorel",
    about = "A calculus for monotone linear relations on R^n",
    version
)]
struct Cli {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true)]
    rank_rtol: Option<f64>,
    /// Eigenvalue negativity slack for PSD verdicts.
    #[arg(long, global = true)]
    psd_tol: Option<f64>,
    /// Absolute floor for memberships and value comparisons.
    #[arg(long, global = true)]
    atol: Option<f64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpName {
    Adjoint,
    Inverse,
    Negate,
    Scale,
    Add,
    Extend,
}

#[derive(Subcommand)]
enum Command {
    /// Report dimensions, slices, and predicate verdicts of a relation.
    Info { file: PathBuf },
    /// Apply an operation and emit the resulting relation.
    Op {
        opname: OpName,
        file: PathBuf,
        /// Second operand (required for `add`).
        file2: Option<PathBuf>,
        /// Scalar for `scale`.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Write the resulting relation file here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Fitzpatrick function (or its conjugate forms) at a point.
    Fitz {
        file: PathBuf,
        /// Comma-separated coordinates of x.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Comma-separated coordinates of x*.
        #[arg(long, allow_hyphen_values = true)]
        xstar: String,
        /// Evaluate the conjugate F*(x*, x) instead.
        #[arg(long, conflicts_with_all = ["star_t", "inf_conv"])]
        conj: bool,
        /// Evaluate the transpose-conjugate F^{*T}(x, x*) instead.
        #[arg(long, conflicts_with = "inf_conv")]
        star_t: bool,
        /// Evaluate the partial inf-convolution with this second relation.
        #[arg(long, value_name = "FILE2")]
        inf_conv: Option<PathBuf>,
    },
    /// Run one verification suite (or all of them).
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        /// Inclusive ambient-dimension range, e.g. 1..5.
        #[arg(long, default_value = "1..5")]
        n_range: String,
        /// Trials per suite.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Master seed; falls back to MONOREL_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Failure that maps to a process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::NotMonotone
            | CoreError::NotMaximal
            | CoreError::NotSingleValued => Self::precondition(e.to_string()),
            other => Self::usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match build_tolerance(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    let command_echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let mut report = Report::new(command_echo, &tol);
    let outcome = match &cli.command {
        Command::Info { file } => cmd_info(file, &tol, &mut report),
        Command::Op {
            opname,
            file,
            file2,
            lambda,
            out,
        } => cmd_op(*opname, file, file2.as_deref(), *lambda, out.as_deref(), &tol, &mut report),
        Command::Fitz {
            file,
            x,
            xstar,
            conj,
            star_t,
            inf_conv,
        } => cmd_fitz(file, x, xstar, *conj, *star_t, inf_conv.as_deref(), &tol, &mut report),
        Command::Verify {
            suite,
            n_range,
            trials,
            seed,
        } => cmd_verify(suite, n_range, *trials, *seed, &tol, &mut report),
    };
    match outcome {
        Ok(code) => {
            match cli.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn build_tolerance(cli: &Cli) -> Result<Tolerance, CliError> {
    let d = Tolerance::default();
    Tolerance::new(
        cli.rank_rtol.unwrap_or(d.rank_rtol),
        cli.psd_tol.unwrap_or(d.psd_tol),
        cli.atol.unwrap_or(d.atol),
    )
    .map_err(|e| CliError::usage(e.to_string()))
}

fn load_relation(path: &Path, tol: &Tolerance) -> Result<LinearRelation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let file = RelationFile::parse(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    file.build(tol)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn parse_point(text: &str, n: usize, what: &str) -> Result<DVector<f64>, CliError> {
    let coords: Result<Vec<f64>, _> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let coords = coords.map_err(|e| CliError::usage(format!("{what}: {e}")))?;
    if coords.len() != n {
        return Err(CliError::usage(format!(
            "{what}: expected {n} coordinates, got {}",
            coords.len()
        )));
    }
    Ok(DVector::from_row_slice(&coords))
}

/// Appends the standard info block for a relation.
fn info_block(a: &LinearRelation, tol: &Tolerance, report: &mut Report) {
    report.number("n", a.n() as f64);
    report.number("graph_dim", a.graph().dim() as f64);
    report.subspace("dom", &a.dom(tol), tol);
    report.subspace("ran", &a.ran(tol), tol);
    report.subspace("ker", &a.ker(tol), tol);
    report.subspace("at_zero", &a.at_zero(tol), tol);
    report.check(&is_monotone(a, tol));
    report.check(&is_maximal_monotone(a, tol));
    report.check(&is_skew(a, tol));
}

fn cmd_info(path: &Path, tol: &Tolerance, report: &mut Report) -> Result<u8, CliError> {
    let a = load_relation(path, tol)?;
    info_block(&a, tol, report);
    Ok(0)
}

fn cmd_op(
    opname: OpName,
    path: &Path,
    path2: Option<&Path>,
    lambda: Option<f64>,
    out: Option<&Path>,
    tol: &Tolerance,
    report: &mut Report,
) -> Result<u8, CliError> {
    let a = load_relation(path, tol)?;
    let result = match opname {
        OpName::Adjoint => a.adjoint(tol),
        OpName::Inverse => a.inverse(),
        OpName::Negate => a.negate(tol),
        OpName::Scale => {
            let l = lambda.ok_or_else(|| CliError::usage("scale requires --lambda"))?;
            a.scale(l, tol)
        }
        OpName::Add => {
            let p2 = path2.ok_or_else(|| CliError::usage("add requires a second file"))?;
            let b = load_relation(p2, tol)?;
            a.add(&b, tol).map_err(CliError::from_core)?
        }
        OpName::Extend => extend_to_maximal(&a, tol).map_err(CliError::from_core)?,
    };
    let fragment = RelationFile::from_relation(&result, tol);
    if let Some(out_path) = out {
        let body = serde_json_fragment(&fragment);
        std::fs::write(out_path, body)
            .map_err(|e| CliError::usage(format!("{}: {e}", out_path.display())))?;
    }
    report.text(
        "form",
        if fragment.matrix.is_some() {
            "matrix"
        } else {
            "graph_basis"
        },
    );
    report.relation("result", fragment);
    info_block(&result, tol, report);
    Ok(0)
}

/// Standalone relation file body with the deterministic float format.
fn serde_json_fragment(fragment: &RelationFile) -> String {
    use serde::Serialize;
    struct SciFormatter;
    impl serde_json::ser::Formatter for SciFormatter {
        fn write_f64<W: std::io::Write + ?Sized>(
            &mut self,
            writer: &mut W,
            value: f64,
        ) -> std::io::Result<()> {
            write!(writer, "{value:.16e}")
        }
    }
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    fragment.serialize(&mut ser).expect("fragment serialization");
    let mut s = String::from_utf8(out).expect("json is utf-8");
    s.push('\n');
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_fitz(
    path: &Path,
    x_text: &str,
    xstar_text: &str,
    conj: bool,
    star_t: bool,
    inf_conv: Option<&Path>,
    tol: &Tolerance,
    report: &mut Report,
) -> Result<u8, CliError> {
    let a = load_relation(path, tol)?;
    let n = a.n();
    let x = parse_point(x_text, n, "--x")?;
    let xstar = parse_point(xstar_text, n, "--xstar")?;
    if let Some(p2) = inf_conv {
        let b = load_relation(p2, tol)?;
        let (value, argmin) =
            partial_inf_conv(&a, &b, &x, &xstar, tol).map_err(CliError::from_core)?;
        report.extended("value", value);
        if let Some(y) = argmin {
            report.vector("argmin", &y);
        }
        return Ok(0);
    }
    let value = if conj {
        fitzpatrick_conj_eval(&a, &xstar, &x, tol)
    } else if star_t {
        fitz_star_transpose_eval(&a, &x, &xstar, tol)
    } else {
        fitzpatrick_eval(&a, &x, &xstar, tol)
    }
    .map_err(CliError::from_core)?;
    report.extended("value", value);
    Ok(0)
}

fn parse_n_range(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split("..").collect();
    if parts.len() != 2 {
        return Err(CliError::usage(format!(
            "--n-range: expected A..B, got {text:?}"
        )));
    }
    let lo: usize = parts[0]
        .parse()
        .map_err(|e| CliError::usage(format!("--n-range: {e}")))?;
    let hi: usize = parts[1]
        .parse()
        .map_err(|e| CliError::usage(format!("--n-range: {e}")))?;
    if lo == 0 || hi < lo {
        return Err(CliError::usage(
            "--n-range: require 1 <= A <= B".to_string(),
        ));
    }
    Ok((lo, hi))
}

fn cmd_verify(
    suite: &str,
    n_range: &str,
    trials: usize,
    seed: Option<u64>,
    tol: &Tolerance,
    report: &mut Report,
) -> Result<u8, CliError> {
    let (lo, hi) = parse_n_range(n_range)?;
    let seed = seed
        .or_else(|| {
            std::env::var("MONOREL_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    report.number("seed", seed as f64);
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![suite]
    };
    let mut any_failures = false;
    for name in names {
        let result = run_suite(name, lo..=hi, trials, seed, tol).map_err(CliError::from_core)?;
        any_failures |= !result.passed();
        report.suite(&result);
    }
    Ok(if any_failures { 1 } else { 0 })
}
