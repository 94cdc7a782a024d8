use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tensor_woodbury::io::{read_tensor, sweep_csv, tensor_to_json, IoError};
use tensor_woodbury::sensitivity::{linspace, solve, sweep};
use tensor_woodbury::smw::smw_pinv_hermitian;
use tensor_woodbury::{
    apply_update, check_conditions, decompose_update, inverse, pinv, smw_invertible, smw_pinv,
    smw_pinv_orthogonal, verify_penrose, ConditionReport, EinsteinTensor, Error, LowRankUpdate,
    DEFAULT_APPLICABILITY_TOL, DEFAULT_PENROSE_TOL,
};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_FALLBACK: u8 = 4;
const EXIT_INCONSISTENT: u8 = 5;

/// Tensor inverses, Sherman-Morrison-Woodbury updates and sensitivity sweeps
/// over the Einstein product.
#[derive(Parser)]
#[command(name = "tsmw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moore-Penrose inverse of a tensor.
    Pinv {
        input: PathBuf,
        /// Singular values below tol * sigma_max * max(rows, cols) * eps are dropped.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Inverse or pseudoinverse of A + U * B * V from the base tensor A.
    Smw {
        base: PathBuf,
        u: PathBuf,
        b: PathBuf,
        v: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pinv)]
        mode: Mode,
        /// Applicability tolerance for the condition residuals.
        #[arg(long, default_value_t = DEFAULT_APPLICABILITY_TOL)]
        tol: f64,
        #[arg(long)]
        output: PathBuf,
        /// Where to write the condition report (pinv modes); printed to stdout otherwise.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Minimum-norm solution X = A^+ * D.
    Solve {
        a: PathBuf,
        d: PathBuf,
        /// Relative consistency tolerance.
        #[arg(long, default_value_t = DEFAULT_PENROSE_TOL)]
        tol: f64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Error-bound sweep over eps_A and the scaling alpha of A, as CSV.
    Sweep {
        a: PathBuf,
        d: PathBuf,
        /// Comma-separated relative perturbations of A.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        eps_a: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        eps_d: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha_max: f64,
        #[arg(long)]
        alpha_steps: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Checks the four Penrose equations for a candidate X.
    Verify {
        a: PathBuf,
        x: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PENROSE_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Invertible,
    Pinv,
    Orthogonal,
    Hermitian,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Invertible => "invertible",
            Mode::Pinv => "pinv",
            Mode::Orthogonal => "orthogonal",
            Mode::Hermitian => "hermitian",
        }
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_INPUT
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Tensor(inner) => inner.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("tsmw: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Pinv { input, tol, output } => cmd_pinv(&input, tol, &output),
        Command::Smw {
            base,
            u,
            b,
            v,
            mode,
            tol,
            output,
            report,
        } => cmd_smw([&base, &u, &b, &v], mode, tol, &output, report.as_deref()),
        Command::Solve { a, d, tol, output } => cmd_solve(&a, &d, tol, &output),
        Command::Sweep {
            a,
            d,
            eps_a,
            eps_d,
            alpha_min,
            alpha_max,
            alpha_steps,
            output,
        } => cmd_sweep(
            &a,
            &d,
            &eps_a,
            eps_d,
            (alpha_min, alpha_max, alpha_steps),
            output.as_deref(),
        ),
        Command::Verify { a, x, tol } => cmd_verify(&a, &x, tol),
    }
}

/// Refuses to write over one of the inputs.
fn check_output(output: &Path, inputs: &[&Path]) -> Result<(), Failure> {
    let Ok(out) = fs::canonicalize(output) else {
        return Ok(());
    };
    for input in inputs {
        if fs::canonicalize(input).is_ok_and(|p| p == out) {
            return Err(Failure::input(format!(
                "output {} would overwrite an input",
                output.display()
            )));
        }
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

fn cmd_pinv(input: &Path, tol: f64, output: &Path) -> Outcome {
    check_output(output, &[input])?;
    let a = read_tensor(input)?;
    let x = pinv(&a, tol)?;
    let rep = verify_penrose(&a, &x, DEFAULT_PENROSE_TOL)?;
    write_text(output, &tensor_to_json(&x))?;
    eprintln!(
        "penrose residuals: {:e} {:e} {:e} {:e}",
        rep.residuals[0], rep.residuals[1], rep.residuals[2], rep.residuals[3]
    );
    Ok(0)
}

fn report_json(mode: Mode, rep: &ConditionReport, fallback: bool) -> Value {
    let residuals: serde_json::Map<String, Value> = rep
        .iter()
        .map(|(c, r)| (c.label().to_string(), json!(r)))
        .collect();
    json!({
        "mode": mode.name(),
        "applicable": rep.applicable,
        "fallback": fallback,
        "tol": rep.tol,
        "residuals": residuals,
    })
}

fn cmd_smw(
    paths: [&Path; 4],
    mode: Mode,
    tol: f64,
    output: &Path,
    report: Option<&Path>,
) -> Outcome {
    check_output(output, &paths)?;
    if let Some(r) = report {
        check_output(r, &paths)?;
    }
    let [a, u, b, v] = paths.map(read_tensor);
    let (a, u, b, v) = (a?, u?, b?, v?);
    let upd = LowRankUpdate::new(u, b, v)?;

    if mode == Mode::Invertible {
        let s_inv = smw_invertible(&inverse(&a)?, &upd, &inverse(upd.b())?)?;
        write_text(output, &tensor_to_json(&s_inv))?;
        return Ok(0);
    }

    if mode == Mode::Hermitian {
        if !a.is_hermitian(tol)? {
            return Err(Failure::input("hermitian mode needs A = A^H"));
        }
        let uh = upd.u().conj_transpose();
        if upd.v().sub(&uh)?.fro_norm() > tol * uh.fro_norm().max(1.0) {
            return Err(Failure::input("hermitian mode needs V = U^H"));
        }
    }

    let a_pinv = pinv(&a, 1.0)?;
    let b_pinv = pinv(upd.b(), 1.0)?;
    let parts = decompose_update(&a, &a_pinv, &upd, tol)?;
    let mut rep = check_conditions(&parts, upd.b(), &b_pinv, tol)?;
    if mode == Mode::Orthogonal && (parts.x1.fro_norm() > 0.0 || parts.x2.fro_norm() > 0.0) {
        // the fast path also needs both factors outside the column spaces
        rep.applicable = false;
    }
    let s_pinv = if !rep.applicable {
        pinv(&apply_update(&a, &upd)?, 1.0)?
    } else {
        match mode {
            Mode::Orthogonal => smw_pinv_orthogonal(&a_pinv, &parts.e1, &parts.e2, &b_pinv)?,
            Mode::Hermitian => {
                smw_pinv_hermitian(&a_pinv, &parts.x1, &parts.y1, &parts.e1, &b_pinv)?
            }
            _ => smw_pinv(&a_pinv, &parts, &b_pinv)?,
        }
    };
    write_text(output, &tensor_to_json(&s_pinv))?;
    let json = report_json(mode, &rep, !rep.applicable);
    match report {
        Some(path) => write_json(path, &json)?,
        None => println!("{json}"),
    }
    Ok(if rep.applicable { 0 } else { EXIT_FALLBACK })
}

fn cmd_solve(a: &Path, d: &Path, tol: f64, output: &Path) -> Outcome {
    check_output(output, &[a, d])?;
    let (a, d) = (read_tensor(a)?, read_tensor(d)?);
    let sol = solve(&a, &d, tol)?;
    write_text(output, &tensor_to_json(&sol.x))?;
    println!(
        "{}",
        json!({ "consistent": sol.consistent, "residual": sol.consistency_residual })
    );
    Ok(if sol.consistent { 0 } else { EXIT_INCONSISTENT })
}

fn cmd_sweep(
    a: &Path,
    d: &Path,
    eps_a: &[f64],
    eps_d: f64,
    (alpha_min, alpha_max, alpha_steps): (f64, f64, usize),
    output: Option<&Path>,
) -> Outcome {
    if let Some(out) = output {
        check_output(out, &[a, d])?;
    }
    let (a, d) = (read_tensor(a)?, read_tensor(d)?);
    let grid = linspace(alpha_min, alpha_max, alpha_steps)?;
    let rows = sweep(&a, &d, eps_a, eps_d, &grid)?;
    let csv = sweep_csv(&rows);
    match output {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_verify(a: &Path, x: &Path, tol: f64) -> Outcome {
    let (a, x): (EinsteinTensor, EinsteinTensor) = (read_tensor(a)?, read_tensor(x)?);
    let rep = verify_penrose(&a, &x, tol)?;
    println!(
        "{}",
        json!({ "residuals": rep.residuals, "passed": rep.passed, "tol": rep.tol })
    );
    Ok(if rep.passed { 0 } else { EXIT_VERIFY_FAILED })
}
