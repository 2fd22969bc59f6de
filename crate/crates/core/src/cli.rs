//! The `qwalk` command-line front end.
//!
//! Every subcommand runs pure library operations and writes a CSV or JSON
//! table to `--out` (or stdout). Failures print a one-line JSON error record
//! on stderr and map to exit codes: 2 parse error, 3 domain error,
//! 4 verification failure, 1 I/O error.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::asymptotics::{asymptotic_char_function, ks_distance, LimitLaw};
use crate::coin::{Basis, Coin, Qubit};
use crate::error::WalkError;
use crate::evolve::{distribution, evolve, exact_char_function, Distribution};
use crate::moments::{empirical_moment, mean_and_sd, moment_closed_form, MomentRequest};
use crate::pathsum::{max_enum_from_env, path_distribution, xi_bruteforce, xi_closed_form};
use crate::sample;
use crate::symmetry::{sample_phi_perp, verify_symmetric_states, SymmetryReport};

pub const DEFAULT_SEED: u64 = 20_021_031;

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "One-dimensional coined quantum walk toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact distribution of X_n.
    Dist {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        n: usize,
        /// `evolve` (any coin) or `path` (closed-form word sums, abcd != 0).
        #[arg(long, value_enum, default_value_t = Method::Evolve)]
        method: Method,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form moments next to the simulated ones.
    Moments {
        #[command(flatten)]
        walk: WalkArgs,
        #[command(flatten)]
        times: TimeArgs,
        /// Moment orders, comma separated.
        #[arg(long, default_value = "1,2,3,4")]
        m: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact and Jacobi-form characteristic function of X_n / n.
    Charfn {
        #[command(flatten)]
        walk: WalkArgs,
        #[command(flatten)]
        times: TimeArgs,
        #[arg(long, default_value = "0.5,1,2", allow_hyphen_values = true)]
        xi_list: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulated limit density of X_n / n.
    Limit {
        #[command(flatten)]
        walk: WalkArgs,
        /// Number of grid points.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Symmetry / zero-mean / membership report for one initial state.
    Symmetry {
        #[command(flatten)]
        walk: WalkArgs,
        /// Largest time checked.
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check closed forms against the brute-force oracles.
    Verify {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distributions and summary statistics over several states and times.
    Sweep {
        #[command(flatten)]
        coin: CoinArgs,
        /// Initial state; repeat the flag for several.
        #[arg(long, default_values_t = vec!["symmetric".to_string()], allow_hyphen_values = true)]
        phi: Vec<String>,
        #[arg(long)]
        n_list: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CoinArgs {
    /// `hadamard`, or four complex entries `a,b,c,d`.
    #[arg(long, default_value = "hadamard", allow_hyphen_values = true)]
    pub coin: String,
    /// Symmetric-family coin from `eta,phi,psi` (radians); overrides --coin.
    #[arg(long, allow_hyphen_values = true)]
    pub sym: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    /// `left`, `right`, `symmetric`, or two complex entries `alpha,beta`.
    #[arg(long, default_value = "left", allow_hyphen_values = true)]
    pub phi: String,
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated times; combined with --n.
    #[arg(long)]
    pub n_list: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Evolve,
    Path,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Parse { field: String, message: String },
    #[error(transparent)]
    Domain(#[from] WalkError),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn parse(field: &str, message: impl Into<String>) -> Self {
        CliError::Parse {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Domain(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse_error",
            CliError::Domain(WalkError::DegenerateCoin { .. }) => "degenerate_coin",
            CliError::Domain(WalkError::TooLarge { .. }) => "too_large",
            CliError::Domain(_) => "domain_error",
            CliError::Verification(_) => "verification_failure",
            CliError::Io(_) => "io_error",
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        let mut rec = json!({ "error": self.kind(), "message": self.to_string() });
        if let CliError::Parse { field, .. } = self {
            rec["field"] = json!(field);
        }
        rec.to_string()
    }
}

/// Parses the arguments, runs the command and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command, &mut io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}

/// Runs one command; output without `--out` goes to `stdout`.
pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Dist {
            walk,
            n,
            method,
            output,
        } => {
            let (coin, phi) = walk.resolve()?;
            let dist = match method {
                Method::Evolve => distribution(&evolve(&phi, &coin, *n)),
                Method::Path => path_distribution(&phi, &coin, *n)?,
            };
            let text = match output.format {
                Format::Csv => distribution_csv(&dist),
                Format::Json => distribution_json(&dist, &coin, &phi),
            };
            emit(output, &text, stdout)
        }
        Command::Moments {
            walk,
            times,
            m,
            output,
        } => {
            let (coin, phi) = walk.resolve()?;
            let orders = parse_list::<u32>("--m", m)?;
            let rows = moments_rows(&coin, &phi, &times.resolve()?, &orders)?;
            emit(output, &render(output.format, &rows), stdout)
        }
        Command::Charfn {
            walk,
            times,
            xi_list,
            output,
        } => {
            let (coin, phi) = walk.resolve()?;
            let xis = parse_list::<f64>("--xi-list", xi_list)?;
            let rows = charfn_rows(&coin, &phi, &times.resolve()?, &xis)?;
            emit(output, &render(output.format, &rows), stdout)
        }
        Command::Limit { walk, grid, output } => {
            let (coin, phi) = walk.resolve()?;
            if *grid == 0 {
                return Err(CliError::parse("--grid", "must be positive"));
            }
            let law = LimitLaw::new(&coin, &phi)?;
            let rows = limit_rows(&law, *grid)?;
            let text = match output.format {
                Format::Csv => render(Format::Csv, &rows),
                Format::Json => pretty(&json!({
                    "coin": coin_json(&coin),
                    "phi": phi_json(&phi),
                    "support": [-law.half_width(), law.half_width()],
                    "skew": law.skew(),
                    "mean": law.moment(1)?,
                    "second_moment": law.moment(2)?,
                    "rows": rows,
                })),
            };
            emit(output, &text, stdout)
        }
        Command::Symmetry {
            walk,
            n,
            tol,
            output,
        } => {
            let (coin, phi) = walk.resolve()?;
            let report = verify_symmetric_states(&coin, &phi, *n, *tol)?;
            let row = SymmetryRow::from(&report);
            emit(
                output,
                &render(output.format, std::slice::from_ref(&row)),
                stdout,
            )?;
            if report.consistent() {
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "membership, symmetry and zero mean disagree up to n = {n}"
                )))
            }
        }
        Command::Verify {
            max_n,
            seed,
            output,
        } => {
            let checks = verify_suite(*max_n, *seed)?;
            emit(output, &render(output.format, &checks), stdout)?;
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.check.as_str())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed.join(", ")))
            }
        }
        Command::Sweep {
            coin,
            phi,
            n_list,
            format,
            out,
        } => {
            let coin = coin.resolve()?;
            let phis = phi
                .iter()
                .map(|p| Ok((label_for(p), parse_qubit(p)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let ns = parse_list::<usize>("--n-list", n_list)?;
            let rows = sweep(&coin, &phis, &ns, *format, out)?;
            let summary = out.join(format!("summary.{}", format.extension()));
            write_atomic(&summary, &render(*format, &rows))?;
            writeln!(stdout, "{}", summary.display())?;
            Ok(())
        }
    }
}

impl CoinArgs {
    pub fn resolve(&self) -> Result<Coin, CliError> {
        if let Some(sym) = &self.sym {
            let v = parse_list::<f64>("--sym", sym)?;
            if v.len() != 3 {
                return Err(CliError::parse("--sym", "expected eta,phi,psi"));
            }
            return Ok(Coin::symmetric(v[0], v[1], v[2]));
        }
        parse_coin(&self.coin)
    }
}

impl WalkArgs {
    pub fn resolve(&self) -> Result<(Coin, Qubit), CliError> {
        Ok((self.coin.resolve()?, parse_qubit(&self.phi)?))
    }
}

impl TimeArgs {
    pub fn resolve(&self) -> Result<Vec<usize>, CliError> {
        let mut ns: Vec<usize> = self.n.into_iter().collect();
        if let Some(list) = &self.n_list {
            ns.extend(parse_list::<usize>("--n-list", list)?);
        }
        if ns.is_empty() {
            return Err(CliError::parse("--n", "give --n or --n-list"));
        }
        Ok(ns)
    }
}

pub fn parse_coin(spec: &str) -> Result<Coin, CliError> {
    match spec.trim().to_ascii_lowercase().as_str() {
        "hadamard" | "h" => Ok(Coin::hadamard()),
        _ => {
            let e = parse_complex_list("--coin", spec, 4)?;
            Coin::new(e[0], e[1], e[2], e[3])
                .map_err(|err| CliError::parse("--coin", err.to_string()))
        }
    }
}

pub fn parse_qubit(spec: &str) -> Result<Qubit, CliError> {
    match spec.trim().to_ascii_lowercase().as_str() {
        "left" => Ok(Qubit::left()),
        "right" => Ok(Qubit::right()),
        "symmetric" => Ok(Qubit::symmetric()),
        _ => {
            let e = parse_complex_list("--phi", spec, 2)?;
            Qubit::new(e[0], e[1]).map_err(|err| CliError::parse("--phi", err.to_string()))
        }
    }
}

/// `expected` complex scalars written either as that many tokens
/// (`0.5`, `-1.2+0.3i`) or as twice that many `re,im` reals.
pub fn parse_complex_list(
    field: &str,
    spec: &str,
    expected: usize,
) -> Result<Vec<Complex64>, CliError> {
    let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
    if tokens.len() == 2 * expected {
        let reals = tokens
            .iter()
            .map(|t| t.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::parse(field, format!("{spec:?}: {e}")))?;
        Ok(reals
            .chunks(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect())
    } else if tokens.len() == expected {
        tokens
            .iter()
            .map(|t| {
                t.replace('j', "i")
                    .parse::<Complex64>()
                    .map_err(|e| CliError::parse(field, format!("{t:?}: {e}")))
            })
            .collect()
    } else {
        Err(CliError::parse(
            field,
            format!(
                "expected {expected} complex entries (or {} re,im reals), got {}",
                2 * expected,
                tokens.len()
            ),
        ))
    }
}

fn parse_list<T: std::str::FromStr>(field: &str, spec: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|e| CliError::parse(field, format!("{t:?}: {e}")))
        })
        .collect()
}

fn label_for(spec: &str) -> String {
    let clean: String = spec
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    clean.trim_matches('_').to_string()
}

fn emit(output: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_atomic(path, text),
        None => {
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| CliError::parse("--out", "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn coin_json(coin: &Coin) -> serde_json::Value {
    serde_json::Value::Array(coin.entries().into_iter().map(complex_json).collect())
}

fn phi_json(phi: &Qubit) -> serde_json::Value {
    json!([complex_json(phi.alpha()), complex_json(phi.beta())])
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Atom {
    k: i64,
    p: f64,
}

/// CSV with header `k,p`, ascending `k`, parity-empty rows omitted.
pub fn distribution_csv(dist: &Distribution) -> String {
    let mut s = String::from("k,p\n");
    for (k, p) in dist.support() {
        writeln!(s, "{k},{p:?}").expect("write to string");
    }
    s
}

/// JSON object with `n`, `coin`, `phi` and `distribution` as `[{k, p}]`.
pub fn distribution_json(dist: &Distribution, coin: &Coin, phi: &Qubit) -> String {
    let atoms: Vec<Atom> = dist.support().map(|(k, p)| Atom { k, p }).collect();
    pretty(&json!({
        "n": dist.time(),
        "coin": coin_json(coin),
        "phi": phi_json(phi),
        "distribution": atoms,
    }))
}

/// Reads back a distribution written by [`distribution_json`].
pub fn read_distribution_json(text: &str) -> Result<Distribution, CliError> {
    #[derive(Deserialize)]
    struct Doc {
        n: usize,
        distribution: Vec<Atom>,
    }
    let doc: Doc =
        serde_json::from_str(text).map_err(|e| CliError::parse("json", e.to_string()))?;
    Ok(Distribution::from_pairs(
        doc.n,
        doc.distribution.into_iter().map(|a| (a.k, a.p)),
    )?)
}

/// Reads back a distribution written by [`distribution_csv`].
pub fn read_distribution_csv(n: usize, text: &str) -> Result<Distribution, CliError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("k,p") {
        return Err(CliError::parse("csv", "missing k,p header"));
    }
    let pairs = lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (k, p) = line
                .split_once(',')
                .ok_or_else(|| CliError::parse("csv", format!("bad row {line:?}")))?;
            let k = k
                .trim()
                .parse::<i64>()
                .map_err(|e| CliError::parse("csv", e.to_string()))?;
            let p = p
                .trim()
                .parse::<f64>()
                .map_err(|e| CliError::parse("csv", e.to_string()))?;
            Ok((k, p))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Distribution::from_pairs(n, pairs)?)
}

/// Row types render to CSV through their JSON field order.
trait TableRow: Serialize {
    const HEADER: &'static [&'static str];
}

fn render<R: TableRow>(format: Format, rows: &[R]) -> String {
    match format {
        Format::Json => pretty(&serde_json::to_value(rows).expect("rows serialize")),
        Format::Csv => {
            let mut s = R::HEADER.join(",");
            s.push('\n');
            for row in rows {
                let value = serde_json::to_value(row).expect("row serializes");
                let cells: Vec<String> = R::HEADER
                    .iter()
                    .map(|h| match &value[*h] {
                        serde_json::Value::Null => String::new(),
                        serde_json::Value::String(t) => t.clone(),
                        serde_json::Value::Number(x) => match x.as_f64() {
                            Some(f) if x.is_f64() => format!("{f:?}"),
                            _ => x.to_string(),
                        },
                        other => other.to_string(),
                    })
                    .collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct MomentRow {
    n: usize,
    m: u32,
    closed_form: f64,
    empirical: f64,
    abs_diff: f64,
}

impl TableRow for MomentRow {
    const HEADER: &'static [&'static str] = &["n", "m", "closed_form", "empirical", "abs_diff"];
}

fn moments_rows(
    coin: &Coin,
    phi: &Qubit,
    ns: &[usize],
    orders: &[u32],
) -> Result<Vec<MomentRow>, CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        let dist = distribution(&evolve(phi, coin, n));
        for &m in orders {
            let closed_form = moment_closed_form(&MomentRequest::new(n, m, *coin, *phi))?;
            let empirical = empirical_moment(&dist, m);
            rows.push(MomentRow {
                n,
                m,
                closed_form,
                empirical,
                abs_diff: (closed_form - empirical).abs(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
struct CharfnRow {
    n: usize,
    xi: f64,
    exact_re: f64,
    exact_im: f64,
    asymptotic_re: f64,
    asymptotic_im: f64,
    abs_error: f64,
}

impl TableRow for CharfnRow {
    const HEADER: &'static [&'static str] = &[
        "n",
        "xi",
        "exact_re",
        "exact_im",
        "asymptotic_re",
        "asymptotic_im",
        "abs_error",
    ];
}

fn charfn_rows(
    coin: &Coin,
    phi: &Qubit,
    ns: &[usize],
    xis: &[f64],
) -> Result<Vec<CharfnRow>, CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        let dist = distribution(&evolve(phi, coin, n));
        for &xi in xis {
            let exact = exact_char_function(&dist, xi)?;
            let approx = asymptotic_char_function(coin, phi, n, xi)?;
            rows.push(CharfnRow {
                n,
                xi,
                exact_re: exact.re,
                exact_im: exact.im,
                asymptotic_re: approx.re,
                asymptotic_im: approx.im,
                abs_error: (exact - approx).norm(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub x: f64,
    pub density: f64,
    /// Quadrature weight: `Σ density · weight` integrates over the support.
    pub weight: f64,
    pub cdf: f64,
}

impl TableRow for LimitRow {
    const HEADER: &'static [&'static str] = &["x", "density", "weight", "cdf"];
}

/// Density on the nodes `x_i = |a| sin(t_i)` with `t_i` the midpoints of
/// `grid` equal cells of `(-π/2, π/2)`. The weights `|a| cos(t_i) Δt` turn
/// the column sum into the periodic trapezoid rule in `t`, which converges
/// geometrically because the substituted density is smooth.
fn limit_rows(law: &LimitLaw, grid: usize) -> Result<Vec<LimitRow>, CliError> {
    let step = PI / grid as f64;
    let h = law.half_width();
    let ts: Vec<f64> = (0..grid)
        .map(|i| -FRAC_PI_2 + (i as f64 + 0.5) * step)
        .collect();
    let xs: Vec<f64> = ts.iter().map(|t| h * t.sin()).collect();
    let cdf = law.cdf_at_sorted(&xs);
    ts.iter()
        .zip(&xs)
        .zip(cdf)
        .map(|((t, &x), cdf)| {
            Ok(LimitRow {
                x,
                density: law.density(x)?,
                weight: h * t.cos() * step,
                cdf,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
struct SymmetryRow {
    in_phi_perp: bool,
    symmetric_up_to: usize,
    mean_zero_up_to: usize,
    max_n: usize,
    violation_n: Option<usize>,
    violation_kind: Option<String>,
    violation_magnitude: Option<f64>,
    consistent: bool,
}

impl TableRow for SymmetryRow {
    const HEADER: &'static [&'static str] = &[
        "in_phi_perp",
        "symmetric_up_to",
        "mean_zero_up_to",
        "max_n",
        "violation_n",
        "violation_kind",
        "violation_magnitude",
        "consistent",
    ];
}

impl From<&SymmetryReport> for SymmetryRow {
    fn from(r: &SymmetryReport) -> Self {
        let v = r.first_violation;
        SymmetryRow {
            in_phi_perp: r.in_phi_perp,
            symmetric_up_to: r.symmetric_up_to,
            mean_zero_up_to: r.mean_zero_up_to,
            max_n: r.max_n,
            violation_n: v.map(|v| v.n),
            violation_kind: v.map(|v| {
                serde_json::to_value(v.kind)
                    .ok()
                    .and_then(|k| k.as_str().map(String::from))
                    .unwrap_or_default()
            }),
            violation_magnitude: v.map(|v| v.magnitude),
            consistent: r.consistent(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl TableRow for CheckRow {
    const HEADER: &'static [&'static str] = &["check", "passed", "max_error", "tolerance"];
}

impl CheckRow {
    fn new(check: &str, max_error: f64, tolerance: f64) -> Self {
        CheckRow {
            check: check.to_string(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }
}

/// The oracle-equivalence checks behind `qwalk verify`.
pub fn verify_suite(max_n: usize, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    if max_n == 0 {
        return Err(CliError::parse("--max-n", "must be positive"));
    }
    let mut rng = sample::rng(seed);
    let mut coins = vec![Coin::hadamard()];
    coins.extend((0..5).map(|_| sample::random_non_degenerate_coin(&mut rng)));
    let mut phis = vec![Qubit::left(), Qubit::right(), Qubit::symmetric()];
    phis.extend((0..3).map(|_| sample::random_qubit(&mut rng)));
    let cap = max_enum_from_env();
    let mut checks = Vec::new();

    let mut table = 0.0f64;
    let mut gram = 0.0f64;
    for coin in &coins {
        for x in Basis::ALL {
            for y in Basis::ALL {
                let (s, z) = coin.product(x, y);
                let raw = coin.basis(x) * coin.basis(y);
                table = table.max(raw.max_abs_diff(&coin.basis(z).scale(s)));
            }
        }
        for (i, row) in coin.gram().iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                gram = gram.max((g - id).norm());
            }
        }
    }
    checks.push(CheckRow::new("basis_multiplication_table", table, 1e-12));
    checks.push(CheckRow::new("basis_gram_identity", gram, 1e-12));

    let mut xi_err = 0.0f64;
    for coin in &coins {
        for n in 1..=max_n {
            for l in 0..=n {
                let brute = xi_bruteforce(l, n - l, coin, cap)?;
                let closed = xi_closed_form(l, n - l, coin)?;
                xi_err = xi_err.max(brute.matrix.max_abs_diff(&closed.matrix));
            }
        }
    }
    checks.push(CheckRow::new("xi_closed_form_vs_bruteforce", xi_err, 1e-10));

    let mut path = 0.0f64;
    let mut moments = 0.0f64;
    for coin in &coins {
        for phi in &phis {
            for n in 1..=max_n {
                let direct = distribution(&evolve(phi, coin, n));
                let closed = path_distribution(phi, coin, n)?;
                for (k, p) in direct.iter() {
                    path = path.max((p - closed.prob(k)).abs());
                }
                for m in 1..=4 {
                    let c = moment_closed_form(&MomentRequest::new(n, m, *coin, *phi))?;
                    let e = empirical_moment(&direct, m);
                    let scale = (n as f64).powi(m as i32).max(1.0);
                    moments = moments.max((c - e).abs() / scale);
                }
            }
        }
    }
    checks.push(CheckRow::new("path_distribution_vs_evolve", path, 1e-10));
    checks.push(CheckRow::new(
        "moment_closed_form_vs_empirical",
        moments,
        1e-8,
    ));

    let mut mass = 0.0f64;
    for coin in &coins {
        for phi in &phis {
            let law = LimitLaw::new(coin, phi)?;
            mass = mass.max((law.total_mass()? - 1.0).abs());
        }
    }
    checks.push(CheckRow::new("limit_density_normalization", mass, 1e-8));

    let mut sym = 0.0f64;
    for coin in &coins {
        for _ in 0..3 {
            let phi = sample_phi_perp(coin, &mut rng);
            let report = verify_symmetric_states(coin, &phi, max_n, 1e-9)?;
            if !(report.in_phi_perp && report.first_violation.is_none()) {
                sym = sym.max(report.first_violation.map_or(1.0, |v| v.magnitude.abs()));
            }
        }
    }
    checks.push(CheckRow::new("phi_perp_symmetric_and_mean_zero", sym, 1e-9));
    Ok(checks)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub phi: String,
    pub n: usize,
    pub mean_over_n: f64,
    pub sd_over_n: f64,
    pub ks_distance: Option<f64>,
    pub file: String,
}

impl TableRow for SweepRow {
    const HEADER: &'static [&'static str] = &[
        "phi",
        "n",
        "mean_over_n",
        "sd_over_n",
        "ks_distance",
        "file",
    ];
}

fn sweep(
    coin: &Coin,
    phis: &[(String, Qubit)],
    ns: &[usize],
    format: Format,
    out: &Path,
) -> Result<Vec<SweepRow>, CliError> {
    fs::create_dir_all(out)?;
    let jobs: Vec<(&String, &Qubit, usize)> = phis
        .iter()
        .flat_map(|(label, phi)| ns.iter().map(move |&n| (label, phi, n)))
        .collect();
    jobs.par_iter()
        .map(|&(label, phi, n)| {
            let dist = distribution(&evolve(phi, coin, n));
            let file = format!("dist_{label}_n{n}.{}", format.extension());
            let text = match format {
                Format::Csv => distribution_csv(&dist),
                Format::Json => distribution_json(&dist, coin, phi),
            };
            write_atomic(&out.join(&file), &text)?;
            let (mean, sd) = mean_and_sd(&dist);
            let scale = n.max(1) as f64;
            let ks = if coin.is_degenerate() || n == 0 {
                None
            } else {
                Some(ks_distance(&dist, coin, phi)?)
            };
            Ok(SweepRow {
                phi: label.clone(),
                n,
                mean_over_n: mean / scale,
                sd_over_n: sd / scale,
                ks_distance: ks,
                file,
            })
        })
        .collect()
}
