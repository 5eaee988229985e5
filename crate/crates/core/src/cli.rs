//! Command layer behind the `gaborpou` binary.
//!
//! Every command yields a [`CommandOutcome`]: a JSON report for standard
//! output and an exit code, 0 when all checks pass, 2 when a mathematical
//! check fails and 1 for usage or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::discrete::{self, DiscreteError, DiscreteWindow};
use crate::gabor::{self, DualPair, DualPairJson, GaborError, Window, WindowFactor};
use crate::lattice::{self, LatticeError, LatticeMatrix};
use crate::partition::{self, PartitionError, PouEvaluator, PouProblem};
use crate::rng::{self, DEFAULT_SEED};
use crate::trigpoly::{MultiIndex, TrigPoly};

#[derive(Debug, Parser)]
#[command(
    name = "gaborpou",
    version,
    about = "Partitions of unity and dual Gabor window pairs"
)]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition-of-unity polynomials.
    #[command(subcommand)]
    Pou(PouCommand),
    /// Window construction.
    #[command(subcommand)]
    Window(WindowCommand),
    /// Modulation matrix conditions.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Duality of window pairs on R^d.
    #[command(subcommand)]
    Gabor(GaborCommand),
    /// Sampled windows on Z^d.
    #[command(subcommand)]
    Discrete(DiscreteCommand),
}

#[derive(Debug, Subcommand)]
pub enum PouCommand {
    /// Coefficient and sampled partition-of-unity checks of a polynomial file.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Solve for smooth partitions with a given frequency budget.
    Solve {
        #[arg(long = "K")]
        k: u32,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "d")]
        d: usize,
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WindowCommand {
    Build(BuildArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowKind {
    /// Maximally smooth partition sin^(2N-2), any N.
    Maxsmooth,
    /// Partition on [0,2]^d of smoothness order 2L.
    Fixedsupport,
    /// Tight window sin^(N-1).
    Tight,
    /// Pair built from the fixed-support partition.
    #[value(alias = "cor43")]
    Fixedpair,
    /// Pair from the phase factorization G = e^(2 pi i M x/N), H = A_2M.
    Phase,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub kind: WindowKind,
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long = "L")]
    pub l: Option<u32>,
    #[arg(long = "M")]
    pub m: Option<u32>,
    #[arg(long = "K")]
    pub k: Option<u32>,
    #[arg(long = "d")]
    pub d: usize,
    /// Inline "r11,r12;r21,r22", JSON text or a JSON file path.
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Output file for the polynomial or pair.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// CSV path prefix; pairs write `<prefix>_g.csv` and `<prefix>_h.csv`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = gabor::DEFAULT_PROBES)]
    pub probes: usize,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    Check {
        #[arg(long = "B", allow_hyphen_values = true, required_unless_present = "counterexample")]
        b: Option<String>,
        /// Use the small-determinant diagonal counterexample for this epsilon.
        #[arg(long, conflicts_with = "b")]
        counterexample: Option<f64>,
        #[arg(long = "N")]
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GaborCommand {
    Verify {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, default_value_t = gabor::DEFAULT_PROBES)]
        probes: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum DiscreteCommand {
    /// Sample a pair file at the integer points.
    Sample {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Discrete duality of a sampled pair file.
    Verify {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Analysis followed by synthesis of a signal.
    Reconstruct {
        #[arg(long)]
        pair: PathBuf,
        /// Signal file in the sequence JSON layout.
        #[arg(long, conflicts_with = "random")]
        signal: Option<PathBuf>,
        /// Draw a random signal on [0, LEN)^d instead.
        #[arg(long, required_unless_present = "signal")]
        random: Option<i64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Sampled pair on `ℤᵈ` as written by `discrete sample`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePairJson {
    pub n: u64,
    pub analysis: DiscreteWindow,
    pub synthesis: DiscreteWindow,
    pub lattice: LatticeMatrix,
}

/// Solution family as written by `pou solve`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PouSolutionJson {
    pub k: u32,
    pub n: u64,
    pub l: u32,
    pub d: usize,
    pub symmetric: bool,
    pub index_order: Vec<MultiIndex>,
    /// `[re, im]` per unknown.
    pub particular: Vec<[f64; 2]>,
    pub basis: Vec<Vec<[f64; 2]>>,
    pub residual_poly: TrigPoly,
    pub window_poly: TrigPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: Value,
    /// Extra diagnostics for standard error.
    pub stderr: Option<String>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{message}")]
    Math { message: String, detail: Value },
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::Inconsistent { residual } => CliError::Math {
                message: format!("system is inconsistent (residual {residual:e})"),
                detail: json!({ "kind": "inconsistent", "residual": residual }),
            },
            PartitionError::Linalg(crate::linalg::LinalgError::Inconsistent { residual }) => {
                CliError::Math {
                    message: format!("system is inconsistent (residual {residual:e})"),
                    detail: json!({ "kind": "inconsistent", "residual": residual }),
                }
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<GaborError> for CliError {
    fn from(e: GaborError) -> Self {
        match &e {
            GaborError::LatticeConditionFailed { witness, image } => CliError::Math {
                message: e.to_string(),
                detail: json!({ "kind": "LatticeConditionFailed", "witness": witness, "image": image }),
            },
            GaborError::NotPartitionOfUnity { max_residual } => CliError::Math {
                message: e.to_string(),
                detail: json!({ "kind": "NotPartitionOfUnity", "max_residual": max_residual }),
            },
            GaborError::NegativeProduct { x, value } => CliError::Math {
                message: e.to_string(),
                detail: json!({ "kind": "NegativeProduct", "x": x, "value": [value.re, value.im] }),
            },
            GaborError::Partition(p) => CliError::from(p.clone()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DiscreteError> for CliError {
    fn from(e: DiscreteError) -> Self {
        match e {
            DiscreteError::DualityFailed { residual } => CliError::Math {
                message: format!("discrete duality fails (max residual {residual:e})"),
                detail: json!({ "kind": "DualityFailed", "max_residual": residual }),
            },
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Inline `a,b;c,d`, a JSON array of rows, or a path to a JSON file.
pub fn parse_matrix_arg(s: &str) -> Result<LatticeMatrix, LatticeError> {
    let t = s.trim();
    if t.starts_with('[') {
        return LatticeMatrix::from_json_str(t);
    }
    let path = Path::new(t);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| LatticeError::Parse(e.to_string()))?;
        return LatticeMatrix::from_json_str(&text);
    }
    t.parse()
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{kind} requires --{flag}")))
}

fn lattice_arg(b: Option<&str>, kind: &str) -> Result<LatticeMatrix, CliError> {
    Ok(parse_matrix_arg(require(b, "B", kind)?)?)
}

fn csv_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_csv(path: &Path, w: &Window, step: f64) -> Result<usize, CliError> {
    let rows = gabor::sample_window_grid(w, step)?;
    let file = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    gabor::write_grid_csv(&rows, w.dim(), std::io::BufWriter::new(file))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(rows.len())
}

fn c_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

type Verdict = Result<(bool, Value), CliError>;

fn pou_check(input: &Path, n: u64, samples: usize, seed: u64) -> Verdict {
    let p: TrigPoly = read_json(input)?;
    let coeff = partition::check_pou_coeff(&p, n)?;
    let numeric = partition::check_pou_numeric_seeded(&PouEvaluator::from(p), n, samples, seed);
    let pass = coeff.pass && numeric <= 1e-10;
    Ok((
        pass,
        json!({ "coeff": coeff, "numeric_residual": numeric, "samples": samples }),
    ))
}

fn pou_solve(k: u32, n: u64, l: u32, d: usize, symmetry: bool, out: Option<&Path>) -> Verdict {
    let prob = PouProblem::new(k, n, l, d)?;
    let sol = partition::solve_pou(&prob, symmetry)?;
    let particular = &sol.solution.particular;
    let residual = sol.system.residual(particular)?;
    let direction_residual = sol
        .solution
        .nullspace_basis
        .iter()
        .map(|v| sol.system.homogeneous_residual(v))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let doc = PouSolutionJson {
        k,
        n,
        l,
        d,
        symmetric: symmetry,
        index_order: sol.index_box.clone(),
        particular: particular.iter().copied().map(c_pair).collect(),
        basis: sol
            .solution
            .nullspace_basis
            .iter()
            .map(|v| v.iter().copied().map(c_pair).collect())
            .collect(),
        residual_poly: sol.residual_poly(&[]),
        window_poly: sol.window_poly(&[])?,
    };
    if let Some(path) = out {
        write_json(path, &doc)?;
    }
    Ok((
        true,
        json!({
            "dimension": sol.dimension(),
            "rank": sol.solution.rank,
            "unknowns": sol.index_box.len(),
            "equations": sol.system.equations.len(),
            "particular_residual": residual,
            "direction_residual": direction_residual,
            "solution": doc,
        }),
    ))
}

fn window_build(args: &BuildArgs, seed: u64) -> Verdict {
    let d = args.d;
    match args.kind {
        WindowKind::Maxsmooth | WindowKind::Fixedsupport => {
            let (p, n) = if args.kind == WindowKind::Maxsmooth {
                let n = require(args.n, "N", "maxsmooth")?;
                if n == 0 {
                    return Err(CliError::Usage("N must be positive".into()));
                }
                (partition::max_smooth_poly(n, d), n)
            } else {
                let l = require(args.l, "L", "fixedsupport")?;
                if l == 0 {
                    return Err(CliError::Usage("L must be positive".into()));
                }
                (partition::fixed_support_poly(l, d), 2)
            };
            let coeff = partition::check_pou_coeff(&p, n)?;
            let order = partition::smoothness_order(&p, n)?;
            let numeric = partition::check_pou_numeric_seeded(&PouEvaluator::from(p.clone()), n, 1000, seed);
            if let Some(path) = &args.json {
                write_json(path, &p)?;
            }
            let mut csv_rows = None;
            if let Some(prefix) = &args.csv {
                let w = Window::new(n, d, 0, WindowFactor::Poly(p.clone()), 1.0)?;
                csv_rows = Some(write_csv(&csv_path(prefix, ".csv"), &w, args.step)?);
            }
            Ok((
                coeff.pass && numeric <= 1e-10,
                json!({
                    "n": n,
                    "coeff": coeff,
                    "numeric_residual": numeric,
                    "smoothness_order": order,
                    "csv_rows": csv_rows,
                }),
            ))
        }
        WindowKind::Tight | WindowKind::Fixedpair | WindowKind::Phase => {
            let b = lattice_arg(args.b.as_deref(), "pair construction")?;
            let pair = match args.kind {
                WindowKind::Tight => {
                    let w = gabor::tight_window(require(args.n, "N", "tight")?, d, &b)?;
                    DualPair::new(w.clone(), w, b.clone())?
                }
                WindowKind::Fixedpair => gabor::fixed_support_pair(require(args.l, "L", "fixedpair")?, d, &b)?,
                _ => {
                    let n = require(args.n, "N", "phase")?;
                    let m = require(args.m, "M", "phase")?;
                    let k = args.k.unwrap_or(m.max(1) * 2);
                    let (g, h) = gabor::phase_factorization(k, n, m, d, false)?;
                    gabor::build_pair(&g, &h, m, n, &b)?
                }
            };
            let report = gabor::verify_duality_seeded(&pair, args.probes, seed);
            if let Some(path) = &args.json {
                write_json(path, &pair.to_json()?)?;
            }
            let mut csv_rows = None;
            if let Some(prefix) = &args.csv {
                let g = write_csv(&csv_path(prefix, "_g.csv"), pair.analysis(), args.step)?;
                let h = write_csv(&csv_path(prefix, "_h.csv"), pair.synthesis(), args.step)?;
                csv_rows = Some([g, h]);
            }
            Ok((
                report.pass,
                json!({
                    "n": pair.analysis().n(),
                    "lattice": b,
                    "analysis_scale": pair.analysis().scale(),
                    "synthesis_scale": pair.synthesis().scale(),
                    "duality": report,
                    "csv_rows": csv_rows,
                }),
            ))
        }
    }
}

fn lattice_check(b: Option<&str>, counterexample: Option<f64>, n: u64) -> Verdict {
    let b = match counterexample {
        Some(eps) => lattice::scaling_counterexample(eps)?,
        None => lattice_arg(b, "lattice check")?,
    };
    let report = lattice::support_condition(&b, n);
    Ok((
        report.pass,
        json!({
            "lattice": b,
            "det": b.det(),
            "sharp": b.sharp_rows(),
            "condition": report,
            "norm_sufficient": lattice::norm_sufficient(&b, n),
            "boundary": "open cube; images on the boundary are not violations",
        }),
    ))
}

fn gabor_verify(path: &Path, probes: usize, seed: u64) -> Verdict {
    let pair = DualPair::from_json(read_json::<DualPairJson>(path)?)?;
    let report = gabor::verify_duality_seeded(&pair, probes, seed);
    Ok((report.pass, json!({ "duality": report })))
}

fn discrete_cmd(cmd: &DiscreteCommand, seed: u64) -> Verdict {
    match cmd {
        DiscreteCommand::Sample { pair, json: out } => {
            let pair = DualPair::from_json(read_json::<DualPairJson>(pair)?)?;
            let doc = DiscretePairJson {
                n: pair.analysis().n(),
                analysis: discrete::sample_window(pair.analysis()),
                synthesis: discrete::sample_window(pair.synthesis()),
                lattice: pair.lattice().clone(),
            };
            if let Some(path) = out {
                write_json(path, &doc)?;
            }
            Ok((true, json!({ "sampled": doc })))
        }
        DiscreteCommand::Verify { pair } => {
            let p: DiscretePairJson = read_json(pair)?;
            let report = discrete::verify_discrete_duality(&p.analysis, &p.synthesis, &p.lattice, p.n)?;
            Ok((
                report.pass,
                json!({
                    "duality": report,
                    "non_integer_reading": "shifts with non-integer B#n meet the integer supports nowhere and are compared against 0",
                }),
            ))
        }
        DiscreteCommand::Reconstruct {
            pair,
            signal,
            random,
            json: out,
        } => {
            let p: DiscretePairJson = read_json(pair)?;
            let d = p.lattice.dim();
            let f = match (signal, random) {
                (Some(path), _) => read_json::<DiscreteWindow>(path)?,
                (None, Some(len)) if *len > 0 => random_signal(d, *len, seed),
                _ => return Err(CliError::Usage("--random needs a positive length".into())),
            };
            let r = discrete::reconstruct(&f, &p.analysis, &p.synthesis, &p.lattice, p.n)?;
            if let Some(path) = out {
                write_json(path, &r.signal)?;
            }
            Ok((
                r.max_error <= 1e-10,
                json!({
                    "max_error": r.max_error,
                    "characters": r.characters,
                    "translations": r.translations,
                    "signal_points": f.len(),
                }),
            ))
        }
    }
}

/// Complex values with parts uniform in `[−1,1)` on `[0,len)^d`.
pub fn random_signal(d: usize, len: i64, seed: u64) -> DiscreteWindow {
    let mut rng = rng::seeded(seed);
    let pts: Vec<_> = crate::trigpoly::index_box(d, 0, len - 1)
        .map(|j| {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (j, v)
        })
        .collect();
    DiscreteWindow::from_points(d, pts).expect("indices have dimension d")
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Pou(PouCommand::Check { .. }) => "pou check",
        Command::Pou(PouCommand::Solve { .. }) => "pou solve",
        Command::Window(_) => "window build",
        Command::Lattice(_) => "lattice check",
        Command::Gabor(_) => "gabor verify",
        Command::Discrete(DiscreteCommand::Sample { .. }) => "discrete sample",
        Command::Discrete(DiscreteCommand::Verify { .. }) => "discrete verify",
        Command::Discrete(DiscreteCommand::Reconstruct { .. }) => "discrete reconstruct",
    }
}

fn execute(cli: &Cli) -> Verdict {
    let seed = cli.seed;
    match &cli.command {
        Command::Pou(PouCommand::Check { input, n, samples }) => pou_check(input, *n, *samples, seed),
        Command::Pou(PouCommand::Solve {
            k,
            n,
            l,
            d,
            symmetry,
            json: out,
        }) => pou_solve(*k, *n, *l, *d, *symmetry, out.as_deref()),
        Command::Window(WindowCommand::Build(args)) => window_build(args, seed),
        Command::Lattice(LatticeCommand::Check {
            b,
            counterexample,
            n,
        }) => lattice_check(b.as_deref(), *counterexample, *n),
        Command::Gabor(GaborCommand::Verify { pair, probes }) => gabor_verify(pair, *probes, seed),
        Command::Discrete(cmd) => discrete_cmd(cmd, seed),
    }
}

fn merge(base: Value, extra: Value) -> Value {
    let mut base = base;
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

pub fn run(cli: &Cli) -> CommandOutcome {
    let head = json!({ "command": command_name(&cli.command), "seed": cli.seed });
    match execute(cli) {
        Ok((pass, body)) => {
            let stderr = (!pass).then(|| failure_summary(&body));
            CommandOutcome {
                exit_code: if pass { 0 } else { 2 },
                report: merge(merge(head, json!({ "pass": pass })), body),
                stderr,
            }
        }
        Err(CliError::Math { message, detail }) => CommandOutcome {
            exit_code: 2,
            report: merge(head, json!({ "pass": false, "error": { "message": message, "detail": detail } })),
            stderr: Some(message),
        },
        Err(e) => CommandOutcome {
            exit_code: 1,
            report: merge(head, json!({ "pass": false, "error": { "message": e.to_string() } })),
            stderr: Some(e.to_string()),
        },
    }
}

fn failure_summary(body: &Value) -> String {
    let residual = body
        .pointer("/duality/max_residual")
        .or_else(|| body.pointer("/max_error"))
        .or_else(|| body.pointer("/numeric_residual"));
    match residual {
        Some(r) => format!("check failed: max residual {r}"),
        None => "check failed".to_string(),
    }
}

/// Parses `args` (program name first) and runs the command. Help and version
/// requests exit 0; other parse errors exit 1.
pub fn run_from_args<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            CommandOutcome {
                exit_code: code,
                report: Value::Null,
                stderr: Some(e.to_string()),
            }
        }
    }
}
