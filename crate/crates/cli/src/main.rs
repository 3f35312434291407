use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qwmp::cramer::{solve_left, solve_right, LeftSystem, RightSystem};
use qwmp::io::{as_vector, matrix_to_json, read_matrix};
use qwmp::quat::ComponentFmt;
use qwmp::rcdet::{cdet, det_hermitian, rdet};
use qwmp::spectral::wsvd;
use qwmp::verify::PenroseResiduals;
use qwmp::weights::WeightPair;
use qwmp::wmp::{run_methods, wmp, Method, MethodOutcome, WmpReport};
use qwmp::{QError, QMatrix, Quaternion, Rational, Real};

/// Weighted Moore-Penrose inverses of quaternion matrices.
#[derive(Parser, Debug)]
#[command(name = "qwmp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the weighted Moore-Penrose inverse.
    Inverse(InverseArgs),
    /// Solve Ax = b (right) or xA = b (left) by the Cramer rules.
    Solve(SolveArgs),
    /// Weighted singular value decomposition.
    Wsvd(CommonArgs),
    /// Row, column or Hermitian determinant.
    Det(DetArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Matrix file, or `-` for standard input.
    #[arg(long)]
    matrix: PathBuf,
    /// Hermitian positive definite row weight M (default identity).
    #[arg(long)]
    weight_m: Option<PathBuf>,
    /// Column weight N (default identity).
    #[arg(long, conflicts_with = "weight_n_inv")]
    weight_n: Option<PathBuf>,
    /// Inverse column weight N^{-1}, as an alternative to --weight-n.
    #[arg(long)]
    weight_n_inv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Backend::Rational)]
    backend: Backend,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
}

#[derive(Args, Debug)]
struct InverseArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// auto, hermitian-col, hermitian-row, general-col, general-row, wsvd, limit, reduction or all.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Report the Penrose residuals.
    #[arg(long)]
    verify: bool,
    /// Residual bound for --verify on inexact routes, replacing the route's own bound.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    side: SideArg,
    /// Right-hand side as a one-row or one-column matrix file.
    #[arg(long)]
    rhs: PathBuf,
}

#[derive(Args, Debug)]
struct DetArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = Kind::Hermitian)]
    kind: Kind,
    /// 1-based row (rdet) or column (cdet).
    #[arg(long, default_value_t = 1)]
    index: usize,
    #[arg(long, value_enum, default_value_t = Backend::Rational)]
    backend: Backend,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Backend {
    Rational,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Rdet,
    Cdet,
    Hermitian,
}

enum Failure {
    Input(String),
    Violation(String),
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        match e {
            QError::AxiomViolation { .. } => Failure::Violation(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

trait Scalar: Real + ComponentFmt {}
impl<T: Real + ComponentFmt> Scalar for T {}

fn load<T: Real>(path: &Path, what: &str) -> Result<QMatrix<T>, Failure> {
    read_matrix(path).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn load_weights<T: Real>(c: &CommonArgs, m: usize, n: usize) -> Result<WeightPair<T>, Failure> {
    let mw = match &c.weight_m {
        Some(p) => load(p, "weight M")?,
        None => QMatrix::identity(m),
    };
    let pair = match (&c.weight_n, &c.weight_n_inv) {
        (Some(p), _) => WeightPair::new(mw, load(p, "weight N")?),
        (None, Some(p)) => WeightPair::from_n_inv(mw, load(p, "weight N^-1")?),
        (None, None) => WeightPair::new(mw, QMatrix::identity(n)),
    };
    let pair = pair.map_err(|e| Failure::Input(format!("weights: {e}")))?;
    pair.check_dims(&QMatrix::<T>::zeros(m, n))
        .map_err(|e| Failure::Input(format!("weights: {e}")))?;
    Ok(pair)
}

fn quat_json<T: Scalar>(q: &Quaternion<T>) -> Value {
    matrix_to_json(&QMatrix::row_vector(vec![q.clone()]))["entries"][0][0].clone()
}

fn residuals_json(r: &PenroseResiduals) -> Value {
    json!({"r1": r.r1, "r2": r.r2, "r3m": r.r3m, "r4n": r.r4n, "exact_zero": r.exact_zero})
}

fn residuals_text(r: &PenroseResiduals) -> String {
    let exact = if r.exact_zero { " (exactly zero)" } else { "" };
    format!("residuals: r1={:.3e} r2={:.3e} r3m={:.3e} r4n={:.3e}{exact}", r.r1, r.r2, r.r3m, r.r4n)
}

fn check_tol<T: Real>(o: &MethodOutcome<T>, tol: Option<f64>) -> Result<(), Failure> {
    match tol {
        Some(tol) if !o.exact && o.residuals.max() > tol => Err(Failure::Violation(format!(
            "{} violates the Penrose axioms (max residual {:e} > {tol:e})",
            o.method,
            o.residuals.max()
        ))),
        _ => Ok(()),
    }
}

fn cmd_inverse<T: Scalar>(args: &InverseArgs) -> Outcome {
    let c = &args.common;
    let a: QMatrix<T> = load(&c.matrix, "matrix")?;
    let w = load_weights(c, a.rows(), a.cols())?;
    let report: WmpReport<T> = if args.method == "all" {
        run_methods(&a, &w, &Method::CONCRETE)?
    } else {
        let method: Method = args.method.parse().map_err(|e: QError| Failure::Input(e.to_string()))?;
        wmp(&a, &w, method)?
    };
    if args.verify {
        for o in &report.outcomes {
            check_tol(o, args.tol)?;
        }
    }
    let all = args.method == "all";
    if c.out == Format::Json {
        let mut doc = json!({
            "method": report.method.name(),
            "rank": a.rank(),
            "inverse": matrix_to_json(&report.inverse),
        });
        if args.verify {
            doc["residuals"] = residuals_json(&report.residuals);
        }
        if all {
            doc["outcomes"] = report
                .outcomes
                .iter()
                .map(|o| json!({"method": o.method.name(), "exact": o.exact, "max_residual": o.residuals.max()}))
                .collect();
            doc["skipped"] = report
                .skipped
                .iter()
                .map(|(m, e)| json!({"method": m.name(), "reason": e.to_string()}))
                .collect();
            doc["max_discrepancy"] = json!(report.max_discrepancy);
        }
        return Ok(doc.to_string());
    }
    let mut out = format!("method: {}\nrank: {}\ninverse:\n{}", report.method, a.rank(), report.inverse);
    if args.verify {
        out.push_str(&residuals_text(&report.residuals));
        out.push('\n');
    }
    if all {
        for o in &report.outcomes {
            out.push_str(&format!("  {:<14} max residual {:.3e}{}\n", o.method.name(), o.residuals.max(), if o.exact { " exact" } else { "" }));
        }
        for (m, e) in &report.skipped {
            out.push_str(&format!("  {:<14} skipped: {e}\n", m.name()));
        }
        match report.max_discrepancy {
            Some(d) => out.push_str(&format!("max discrepancy: {d:.3e}\n")),
            None => out.push_str("max discrepancy: n/a\n"),
        }
    }
    Ok(out)
}

fn cmd_solve<T: Scalar>(args: &SolveArgs) -> Outcome {
    let c = &args.common;
    let a: QMatrix<T> = load(&c.matrix, "matrix")?;
    let w = load_weights(c, a.rows(), a.cols())?;
    let b = as_vector(load(&args.rhs, "rhs")?)?;
    let (sol, image) = match args.side {
        SideArg::Right => {
            let sol = solve_right(&RightSystem { a: a.clone(), b: b.clone(), weights: w })?;
            let image = a.mul_col(&sol.x)?;
            (sol, image)
        }
        SideArg::Left => {
            let sol = solve_left(&LeftSystem { a: a.clone(), b: b.clone(), weights: w })?;
            let image = QMatrix::row_mul(&sol.x, &a)?;
            (sol, image)
        }
    };
    let residual = image.iter().zip(&b).map(|(p, q)| p.dist(q)).fold(0.0, f64::max);
    let rule = format!("{:?}", sol.rule).to_lowercase();
    if c.out == Format::Json {
        let x: Vec<Value> = sol.x.iter().map(quat_json).collect();
        return Ok(json!({"x": x, "rule": rule, "residual": residual}).to_string());
    }
    let mut out = format!("rule: {rule}\nx:\n");
    for q in &sol.x {
        out.push_str(&format!("  {q}\n"));
    }
    out.push_str(&format!("residual: {residual:.3e}\n"));
    Ok(out)
}

fn cmd_wsvd<T: Scalar>(c: &CommonArgs) -> Outcome {
    let a: QMatrix<T> = load(&c.matrix, "matrix")?;
    let w = load_weights(c, a.rows(), a.cols())?;
    let ws = wsvd(&a, &w)?;
    let (m, n) = a.shape();
    let u_res = QMatrix::chain(&[ws.u.conj_transpose(), &w.m().to_f64(), &ws.u])?.max_dist(&QMatrix::identity(m))?;
    let v_res = QMatrix::chain(&[ws.v.conj_transpose(), &w.n_inv().to_f64(), &ws.v])?.max_dist(&QMatrix::identity(n))?;
    let recon = QMatrix::chain(&[&ws.u, &ws.d_matrix(), ws.v.conj_transpose()])?.max_dist(&a.to_f64())?;
    if c.out == Format::Json {
        return Ok(json!({
            "sigma": ws.sigma,
            "rank": ws.rank,
            "residuals": {"u": u_res, "v": v_res, "reconstruction": recon},
        })
        .to_string());
    }
    let sigma: Vec<String> = ws.sigma.iter().map(|s| format!("{s:.12}")).collect();
    Ok(format!(
        "rank: {}\nsigma: [{}]\n|U*MU - I| = {u_res:.3e}\n|V*N^-1V - I| = {v_res:.3e}\n|UDV* - A| = {recon:.3e}\n",
        ws.rank,
        sigma.join(", ")
    ))
}

fn cmd_det<T: Scalar>(args: &DetArgs) -> Outcome {
    let a: QMatrix<T> = load(&args.matrix, "matrix")?;
    if args.index == 0 {
        return Err(Failure::Input("--index is 1-based".into()));
    }
    let value = match args.kind {
        Kind::Rdet => rdet(args.index - 1, &a)?,
        Kind::Cdet => cdet(args.index - 1, &a)?,
        Kind::Hermitian => Quaternion::real(det_hermitian(&a)?),
    };
    if args.out == Format::Json {
        return Ok(json!({"value": quat_json(&value)}).to_string());
    }
    Ok(format!("{value}\n"))
}

fn dispatch<T: Scalar>(cmd: &Command) -> Outcome {
    match cmd {
        Command::Inverse(a) => cmd_inverse::<T>(a),
        Command::Solve(a) => cmd_solve::<T>(a),
        Command::Wsvd(a) => cmd_wsvd::<T>(a),
        Command::Det(a) => cmd_det::<T>(a),
    }
}

fn main() -> ExitCode {
    // usage errors are input errors; exit code 2 is kept for failed verification
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let backend = match &cli.command {
        Command::Inverse(a) => a.common.backend,
        Command::Solve(a) => a.common.backend,
        Command::Wsvd(a) => a.backend,
        Command::Det(a) => a.backend,
    };
    let result = match backend {
        Backend::Rational => dispatch::<Rational>(&cli.command),
        Backend::Float => dispatch::<f64>(&cli.command),
    };
    match result {
        Ok(text) => {
            // a closed pipe downstream is not an error of ours
            let mut stdout = std::io::stdout().lock();
            let _ = write!(stdout, "{text}{}", if text.ends_with('\n') { "" } else { "\n" });
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
