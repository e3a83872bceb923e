//! Subcommands, flag handling and exit statuses.

use std::path::PathBuf;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpdo_core::boxcert::{
    phi_sufficient_special, reduced_problem, root_report, sample_falsify, triangle_sufficient,
    CertRequest, Certificate, ReportParams, RootReport, Witness,
};
use lpdo_core::lpdo::{
    characteristic_roots, exactness_system_deg1, family_deg1, residual, CharRoot, ExactnessSystem,
    Lpdo2, PrincipalSymbol, ResidualTrace,
};
use lpdo_core::poly::{Poly2, Rational, Rect};
use lpdo_core::Error as CoreError;

use crate::expr::{parse_poly_with, parse_rational, ExprError, ParseOptions};
use crate::report::{self, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;

/// Collected output of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{flag}: {source}")]
    Expr { flag: &'static str, source: ExprError },
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{flag}: must be positive")]
    NotPositive { flag: &'static str },
    #[error("--input: {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("--input line {line}: {message}")]
    Batch { line: usize, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lpdo", version, about = "Exact and approximate factorization of second-order LPDOs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the residual R for each selected root.
    Residual(OpArgs),
    /// Print the coefficient-matching residuals and the exactness verdict.
    Exact(OpArgs),
    /// Certify |a00 - R| < eps on the open box (-m, m) x (-n, n).
    Certify(OpArgs),
    /// Print an exactly factorizable operator with affine coefficients.
    Family(FamilyArgs),
    /// Evaluate the sufficient conditions only.
    Sufficient(OpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Accept finite decimals and convert them exactly.
    #[arg(long)]
    decimal_as_rational: bool,
    /// Batch file with one flag set per line; other flags are taken from each line.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct OpArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    a20: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a11: String,
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    a02: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a10: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a01: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a00: String,
    /// Characteristic root, or "all".
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    root: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    eps: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    m: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    n: String,
    /// Bernstein subdivision depth.
    #[arg(long, default_value_t = 12)]
    depth: u32,
    /// Grid falsifier resolution k (points m i / k); 0 disables it.
    #[arg(long, default_value_t = 0)]
    grid: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c3: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c2: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    d1: String,
    /// 1, -1 or "all".
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    root: String,
    #[command(flatten)]
    common: Common,
}

/// Parsed operator plus the roots and box parameters to use.
struct Problem {
    op: Lpdo2,
    roots: Vec<CharRoot>,
    params: ReportParams,
    grid: u32,
}

fn opts(common: &Common) -> ParseOptions {
    ParseOptions { decimals: common.decimal_as_rational }
}

fn rational(flag: &'static str, text: &str, o: ParseOptions) -> Result<Rational, RunError> {
    parse_rational(text, o).map_err(|source| RunError::Expr { flag, source })
}

fn positive(flag: &'static str, text: &str, o: ParseOptions) -> Result<Rational, RunError> {
    let v = rational(flag, text, o)?;
    if v <= Rational::from_integer(0.into()) {
        return Err(RunError::NotPositive { flag });
    }
    Ok(v)
}

fn poly(flag: &'static str, text: &str, o: ParseOptions) -> Result<Poly2, RunError> {
    parse_poly_with(text, o).map_err(|source| RunError::Expr { flag, source })
}

fn select_roots(symbol: &PrincipalSymbol, root: &str, o: ParseOptions) -> Result<Vec<CharRoot>, RunError> {
    if root.trim() == "all" {
        return Ok(characteristic_roots(symbol)?.to_vec());
    }
    let w = rational("--root", root, o)?;
    let r = symbol.root(w)?;
    if !r.simple {
        return Err(CoreError::NotSimpleRoot.into());
    }
    Ok(vec![r])
}

impl Problem {
    fn from_args(a: &OpArgs) -> Result<Self, RunError> {
        let o = opts(&a.common);
        let symbol = PrincipalSymbol::new(
            rational("--a20", &a.a20, o)?,
            rational("--a11", &a.a11, o)?,
            rational("--a02", &a.a02, o)?,
        );
        let op = Lpdo2::new(
            symbol,
            poly("--a10", &a.a10, o)?,
            poly("--a01", &a.a01, o)?,
            poly("--a00", &a.a00, o)?,
        );
        let roots = select_roots(&op.symbol, &a.root, o)?;
        let rect = Rect::new(positive("--m", &a.m, o)?, positive("--n", &a.n, o)?)?;
        let params = ReportParams::new(rect, positive("--eps", &a.eps, o)?, a.depth)?;
        Ok(Self { op, roots, params, grid: a.grid })
    }
}

/// Runs the two root branches concurrently; results stay in root order.
fn per_root<T: Send>(
    roots: &[CharRoot],
    f: impl Fn(&CharRoot) -> Result<T, CoreError> + Sync,
) -> Result<Vec<T>, CoreError> {
    thread::scope(|s| {
        let handles: Vec<_> = roots.iter().map(|r| s.spawn(|| f(r))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("root worker panicked"))
            .collect()
    })
}

pub struct ResidualRow {
    pub omega: Rational,
    pub trace: ResidualTrace,
}

pub struct ExactRow {
    pub omega: Rational,
    pub residual: Poly2,
    pub exact: bool,
    pub system: Option<ExactnessSystem>,
}

pub struct CertifyRow {
    pub report: RootReport,
    pub falsifier: Option<Option<Witness>>,
}

pub struct SufficientRow {
    pub omega: Rational,
    pub theorem1: Option<bool>,
    pub triangle: bool,
}

pub struct FamilyRow {
    pub omega: Rational,
    pub op: Lpdo2,
}

fn cmd_residual(a: &OpArgs) -> Result<Outcome, RunError> {
    let p = Problem::from_args(a)?;
    let rows = per_root(&p.roots, |r| {
        Ok(ResidualRow { omega: r.omega.clone(), trace: residual(&p.op, r)? })
    })?;
    Ok(Outcome { code: EXIT_OK, stdout: report::residual(&rows, fmt(&a.common)), stderr: String::new() })
}

fn cmd_exact(a: &OpArgs) -> Result<Outcome, RunError> {
    let p = Problem::from_args(a)?;
    let rows = per_root(&p.roots, |r| {
        let trace = residual(&p.op, r)?;
        let system = if p.op.symbol.is_canonical() && p.op.coefficient_degree() <= 1 {
            Some(exactness_system_deg1(&p.op, r)?)
        } else {
            None
        };
        Ok(ExactRow { omega: r.omega.clone(), exact: trace.r == p.op.a00, residual: trace.r, system })
    })?;
    let code = if rows.iter().any(|r| r.exact) { EXIT_OK } else { EXIT_FALSE };
    Ok(Outcome { code, stdout: report::exact(&rows, fmt(&a.common)), stderr: String::new() })
}

fn cmd_certify(a: &OpArgs) -> Result<Outcome, RunError> {
    let p = Problem::from_args(a)?;
    let rows = per_root(&p.roots, |r| {
        let report = root_report(&p.op, r, &p.params)?;
        let falsifier = if p.grid == 0 {
            None
        } else {
            let req = CertRequest::new(
                report.difference.clone(),
                p.params.rect.clone(),
                p.params.eps.clone(),
                p.params.max_depth,
            )?;
            Some(sample_falsify(&req, p.grid)?)
        };
        Ok(CertifyRow { report, falsifier })
    })?;
    let code = certify_code(rows.iter().map(|r| &r.report.certificate));
    Ok(Outcome { code, stdout: report::certify(&p.params, &rows, fmt(&a.common)), stderr: String::new() })
}

/// 0 if some root certifies, else 2 if some root is undecided, else 1.
pub fn certify_code<'a>(certs: impl IntoIterator<Item = &'a Certificate>) -> i32 {
    let mut code = EXIT_FALSE;
    for c in certs {
        match c {
            Certificate::Inside { .. } => return EXIT_OK,
            Certificate::Unknown { .. } => code = EXIT_UNKNOWN,
            Certificate::Violated { .. } => {}
        }
    }
    code
}

fn cmd_sufficient(a: &OpArgs) -> Result<Outcome, RunError> {
    let p = Problem::from_args(a)?;
    let rows = per_root(&p.roots, |r| {
        let difference = &p.op.a00 - &residual(&p.op, r)?.r;
        let theorem1 = if p.params.is_unit() {
            reduced_problem(&p.op, r).map(|rp| phi_sufficient_special(&rp))
        } else {
            None
        };
        let triangle = triangle_sufficient(&difference, &p.params.rect, &p.params.eps);
        Ok(SufficientRow { omega: r.omega.clone(), theorem1, triangle })
    })?;
    let holds = rows.iter().any(|r| r.triangle || r.theorem1 == Some(true));
    let code = if holds { EXIT_OK } else { EXIT_FALSE };
    Ok(Outcome { code, stdout: report::sufficient(&p.params, &rows, fmt(&a.common)), stderr: String::new() })
}

fn cmd_family(a: &FamilyArgs) -> Result<Outcome, RunError> {
    let o = opts(&a.common);
    let (c3, c2, c1, d1) = (
        rational("--c3", &a.c3, o)?,
        rational("--c2", &a.c2, o)?,
        rational("--c1", &a.c1, o)?,
        rational("--d1", &a.d1, o)?,
    );
    let roots = select_roots(&PrincipalSymbol::canonical(), &a.root, o)?;
    let rows = roots
        .iter()
        .map(|r| Ok(FamilyRow { omega: r.omega.clone(), op: family_deg1(&c3, &c2, &c1, &d1, r)? }))
        .collect::<Result<Vec<_>, CoreError>>()?;
    Ok(Outcome { code: EXIT_OK, stdout: report::family(&rows, fmt(&a.common)), stderr: String::new() })
}

fn fmt(c: &Common) -> Format {
    match c.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, RunError> {
    match &cli.command {
        Command::Residual(a) => cmd_residual(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Sufficient(a) => cmd_sufficient(a),
        Command::Family(a) => cmd_family(a),
    }
}

fn input_of(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Residual(a) | Command::Exact(a) | Command::Certify(a) | Command::Sufficient(a) => {
            a.common.input.as_ref()
        }
        Command::Family(a) => a.common.input.as_ref(),
    }
}

fn subcommand_name(cli: &Cli) -> &'static str {
    match &cli.command {
        Command::Residual(_) => "residual",
        Command::Exact(_) => "exact",
        Command::Certify(_) => "certify",
        Command::Sufficient(_) => "sufficient",
        Command::Family(_) => "family",
    }
}

/// Batch mode: each nonblank, non-`#` line is a flag set for the same
/// subcommand. Outputs are concatenated; the status is the largest seen.
fn run_batch(name: &str, path: &PathBuf) -> Result<Outcome, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| RunError::Io { path: path.display().to_string(), source })?;
    let mut total = Outcome::default();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let batch = |message: String| RunError::Batch { line: idx + 1, message };
        let words = shlex::split(line).ok_or_else(|| batch("unbalanced quotes".into()))?;
        if words.iter().any(|w| w == "--input") {
            return Err(batch("--input cannot be nested".into()));
        }
        let argv = ["lpdo".to_string(), name.to_string()].into_iter().chain(words);
        let cli = Cli::try_parse_from(argv).map_err(|e| batch(e.to_string().trim_end().to_string()))?;
        let out = dispatch(&cli).map_err(|e| batch(e.to_string()))?;
        total.stdout.push_str(&out.stdout);
        total.code = total.code.max(out.code);
    }
    Ok(total)
}

/// Runs one command line (including the program name) to completion.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = match input_of(&cli) {
        Some(path) => run_batch(subcommand_name(&cli), path),
        None => dispatch(&cli),
    };
    result.unwrap_or_else(|e| Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("lpdo: {e}\n"),
    })
}
