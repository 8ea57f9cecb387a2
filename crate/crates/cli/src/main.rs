//! `brauer`: generate, export and verify spanning sets of equivariant maps.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 invalid parameters,
//! 3 verification failure.

use std::env;
use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use brauer_core::export::ExportFile;
use brauer_core::layers::{bias_set, local_spanning_set, spanning_set, with_features, Activation, LayerSpec};
use brauer_core::verify::{
    basis_regime, check_set, oracle_dimension_exact, oracle_dimension_with_limit, span_rank, RankTolerance,
    DEFAULT_ORACLE_LIMIT, DEFAULT_SEED, DEFAULT_TRIALS,
};
use brauer_core::{Error, Factor, GroupKind, SpanningSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

/// Directory used for generated files when `--out` is not given.
const OUT_DIR_VAR: &str = "BRAUER_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "brauer", version, about = "Equivariant spanning sets from Brauer diagrams")]
struct Cli {
    /// Output style on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for sampled group elements, probes and random weights.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the spanning set for one group and write it as JSON.
    Gen {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        features: Features,
        #[command(flatten)]
        out: Out,
    },
    /// Compare element count, span rank and the oracle dimension.
    Dims {
        #[arg(long)]
        group: GroupKind,
        #[arg(long)]
        n: usize,
        /// Input order; omit together with --l to sweep with --max-order.
        #[arg(long, requires = "l")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        l: Option<usize>,
        /// Sweep all k, l with l+k up to this order.
        #[arg(long, conflicts_with_all = ["k", "l"])]
        max_order: Option<usize>,
        /// Largest n^(l+k) handed to the oracle.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
    },
    /// Check every element of an exported file for equivariance.
    Verify {
        /// Export file to check.
        input: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        /// Relative residual tolerance (default: 1e-9 for O/SO, 1e-7 for Sp).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Dimension of the equivariant space from the brute-force oracle.
    Oracle {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: usize,
        /// Use exact modular ranks instead of floating point.
        #[arg(long)]
        exact: bool,
    },
    /// Spanning set for a product of groups acting on separate tensor factors.
    Local {
        /// Factor as GROUP,n,k,l; repeat for each factor (at least two).
        #[arg(long = "factor", required = true, value_parser = parse_factor)]
        factors: Vec<Factor>,
        #[command(flatten)]
        features: Features,
        #[command(flatten)]
        out: Out,
    },
    /// Spanning set for equivariant bias vectors (k = 0).
    Bias {
        #[arg(long)]
        group: GroupKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        d_l: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Write reference forward passes on random weights and inputs.
    Forward {
        /// Export file for the weight matrix.
        input: PathBuf,
        /// Optional bias export file (one column, same row count).
        #[arg(long)]
        bias: Option<PathBuf>,
        #[arg(long, default_value_t = Activation::Identity)]
        activation: Activation,
        /// Number of (weights, input) cases.
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args, Debug)]
struct Point {
    #[arg(long)]
    group: GroupKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
}

#[derive(Args, Debug)]
struct Features {
    #[arg(long, default_value_t = 1)]
    d_k: usize,
    #[arg(long, default_value_t = 1)]
    d_l: usize,
}

#[derive(Args, Debug)]
struct Out {
    /// Output path (default: a generated name in $BRAUER_OUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Sampled group elements per element checked.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
}

fn parse_factor(s: &str) -> Result<Factor, String> {
    s.parse::<Factor>().map_err(|e| e.to_string())
}

enum Failure {
    Io(String),
    Params(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Params(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Params(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_)
            | Error::Json(_)
            | Error::DiagramParse { .. }
            | Error::UnsupportedFormat(_)
            | Error::InvalidExport(_) => Failure::Io(e.to_string()),
            _ => Failure::Params(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable output") + "\n",
        Format::Text => text(),
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = io::stdout().write_all(body.as_bytes());
}

fn output_path(out: &Out, default_name: &str) -> PathBuf {
    out.out.clone().unwrap_or_else(|| {
        env::var_os(OUT_DIR_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(default_name)
    })
}

fn write_set(format: Format, set: &SpanningSet, path: &Path) -> CmdResult {
    if set.is_empty() {
        warn("the spanning set is empty; writing a file with 0 elements");
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    ExportFile::from(set).write(path)?;
    emit(
        format,
        &json!({ "elements": set.len(), "rows": set.rows(), "cols": set.cols(), "path": path }),
        || {
            format!(
                "wrote {} elements ({}x{}) to {}\n",
                set.len(),
                set.rows(),
                set.cols(),
                path.display()
            )
        },
    );
    Ok(())
}

fn attach_features(set: SpanningSet, features: &Features) -> Result<SpanningSet, Failure> {
    if (features.d_k, features.d_l) == (1, 1) {
        Ok(set)
    } else {
        Ok(with_features(&set, features.d_k, features.d_l)?)
    }
}

fn feature_suffix(features: &Features) -> String {
    if (features.d_k, features.d_l) == (1, 1) {
        String::new()
    } else {
        format!("_dk{}_dl{}", features.d_k, features.d_l)
    }
}

fn run_gen(format: Format, p: &Point, features: &Features, out: &Out) -> CmdResult {
    let set = attach_features(spanning_set(p.group, p.n, p.k, p.l)?, features)?;
    let name = format!(
        "{}_n{}_k{}_l{}{}.json",
        p.group,
        p.n,
        p.k,
        p.l,
        feature_suffix(features)
    );
    write_set(format, &set, &output_path(out, &name))
}

fn run_local(format: Format, factors: &[Factor], features: &Features, out: &Out) -> CmdResult {
    if factors.len() < 2 {
        return Err(Failure::Params(format!(
            "local needs at least two --factor arguments, got {}",
            factors.len()
        )));
    }
    let set = attach_features(local_spanning_set(factors)?, features)?;
    let name = factors
        .iter()
        .map(|f| format!("{}-{}-{}-{}", f.group, f.n, f.k, f.l))
        .collect::<Vec<_>>()
        .join("_");
    write_set(
        format,
        &set,
        &output_path(out, &format!("local_{name}{}.json", feature_suffix(features))),
    )
}

fn run_bias(format: Format, group: GroupKind, n: usize, l: usize, d_l: usize, out: &Out) -> CmdResult {
    let set = bias_set(group, n, l)?;
    let set = if d_l == 1 { set } else { with_features(&set, 1, d_l)? };
    let suffix = if d_l == 1 { String::new() } else { format!("_dl{d_l}") };
    write_set(
        format,
        &set,
        &output_path(out, &format!("bias_{group}_n{n}_l{l}{suffix}.json")),
    )
}

#[derive(Serialize)]
struct DimsRow {
    group: GroupKind,
    n: usize,
    k: usize,
    l: usize,
    count: usize,
    rank: usize,
    /// `None` when the oracle system exceeds the size limit.
    oracle: Option<usize>,
    basis_regime: bool,
    consistent: bool,
}

fn run_dims(
    format: Format,
    group: GroupKind,
    n: usize,
    order: Option<(usize, usize)>,
    max_order: Option<usize>,
    limit: usize,
) -> CmdResult {
    group.check_dimension(n)?;
    let points: Vec<(usize, usize)> = match (order, max_order) {
        (Some(kl), _) => vec![kl],
        (None, Some(m)) => (0..=m).flat_map(|s| (0..=s).map(move |k| (k, s - k))).collect(),
        (None, None) => return Err(Failure::Params("dims needs --k and --l, or --max-order".into())),
    };
    let mut rows = Vec::with_capacity(points.len());
    for (k, l) in points {
        let set = spanning_set(group, n, k, l)?;
        let rank = span_rank(&set, RankTolerance::Standard);
        let oracle = match oracle_dimension_with_limit(group, n, k, l, limit) {
            Ok(d) => Some(d),
            Err(Error::OracleTooLarge { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let regime = basis_regime(group, n, k, l);
        let consistent = oracle.is_none_or(|d| d == rank) && (!regime || rank == set.len());
        rows.push(DimsRow {
            group,
            n,
            k,
            l,
            count: set.len(),
            rank,
            oracle,
            basis_regime: regime,
            consistent,
        });
    }
    emit(format, &rows, || {
        let mut s = String::new();
        for r in &rows {
            let oracle = r.oracle.map_or_else(|| "skipped".to_string(), |d| d.to_string());
            let _ = writeln!(
                s,
                "{}({}) k={} l={}: count={} rank={} oracle={}{}{}",
                r.group,
                r.n,
                r.k,
                r.l,
                r.count,
                r.rank,
                oracle,
                if r.basis_regime { " basis" } else { "" },
                if r.consistent { "" } else { "  MISMATCH" },
            );
        }
        s
    });
    let bad = rows.iter().filter(|r| !r.consistent).count();
    if bad > 0 {
        return Err(Failure::Verification(format!("{bad} dimension check(s) failed")));
    }
    Ok(())
}

fn run_oracle(format: Format, p: &Point, limit: usize, exact: bool) -> CmdResult {
    let dim = if exact {
        oracle_dimension_exact(p.group, p.n, p.k, p.l, limit)?
    } else {
        oracle_dimension_with_limit(p.group, p.n, p.k, p.l, limit)?
    };
    emit(
        format,
        &json!({ "group": p.group, "n": p.n, "k": p.k, "l": p.l, "dimension": dim, "exact": exact }),
        || format!("{}({}) k={} l={}: oracle={dim}\n", p.group, p.n, p.k, p.l),
    );
    Ok(())
}

fn load_set(path: &Path) -> Result<SpanningSet, Failure> {
    let file = ExportFile::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    file.to_spanning_set()
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run_verify(format: Format, input: &Path, sampling: &Sampling, tol: Option<f64>, seed: u64) -> CmdResult {
    let set = load_set(input)?;
    if set.is_empty() {
        warn("file has no elements; nothing to verify");
    }
    let reports = check_set(&set, sampling.trials, tol, seed)?;
    let max_residual = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let failed = reports.iter().filter(|r| !r.passed).count();
    let tolerance = reports.first().map(|r| r.tolerance);
    emit(
        format,
        &json!({
            "file": input,
            "elements": reports.len(),
            "failed": failed,
            "max_residual": max_residual,
            "tolerance": tolerance,
            "reports": reports,
        }),
        || {
            let mut s = String::new();
            for (i, r) in reports.iter().enumerate().filter(|(_, r)| !r.passed) {
                let _ = writeln!(
                    s,
                    "FAIL element {}: {} residual={:.3e}",
                    i + 1,
                    r.subject,
                    r.max_residual
                );
            }
            let _ = writeln!(
                s,
                "{}: {} elements, {} failed, max residual {:.3e}",
                if failed == 0 { "PASS" } else { "FAIL" },
                reports.len(),
                failed,
                max_residual
            );
            s
        },
    );
    if failed > 0 {
        return Err(Failure::Verification(format!(
            "{failed} of {} elements are not equivariant",
            reports.len()
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ForwardCase {
    weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bias_weights: Option<Vec<f64>>,
    input: Vec<f64>,
    output: Vec<f64>,
}

fn run_forward(
    format: Format,
    input: &Path,
    bias: Option<&Path>,
    activation: Activation,
    cases: usize,
    seed: u64,
    out: &Out,
) -> CmdResult {
    let set = Arc::new(load_set(input)?);
    let bias_set = bias.map(load_set).transpose()?.map(Arc::new);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.random_range(-1.0..1.0)).collect() };
    let mut records = Vec::with_capacity(cases);
    for _ in 0..cases {
        let weights = uniform(set.len());
        let bias_weights = bias_set.as_ref().map(|b| uniform(b.len()));
        let x = uniform(set.cols());
        let mut layer = LayerSpec::new(set.clone(), weights.clone())?.with_activation(activation);
        if let (Some(b), Some(w)) = (&bias_set, &bias_weights) {
            layer = layer.with_bias(b.clone(), w.clone())?;
        }
        let output = brauer_core::layers::forward(&[layer], &x)?;
        records.push(ForwardCase {
            weights,
            bias_weights,
            input: x,
            output,
        });
    }
    let file_name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned());
    let fixture = json!({
        "set_file": file_name(input),
        "bias_file": bias.and_then(file_name),
        "activation": activation,
        "seed": seed,
        "cases": records,
    });
    let stem = input
        .file_stem()
        .map_or_else(|| "set".into(), |s| s.to_string_lossy().into_owned());
    let path = output_path(out, &format!("{stem}.forward.json"));
    let text = serde_json::to_string_pretty(&fixture).map_err(|e| Failure::Io(e.to_string()))? + "\n";
    std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    emit(format, &json!({ "cases": cases, "path": path }), || {
        format!("wrote {cases} forward cases to {}\n", path.display())
    });
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    let format = cli.format;
    match cli.command {
        Command::Gen { point, features, out } => run_gen(format, &point, &features, &out),
        Command::Dims {
            group,
            n,
            k,
            l,
            max_order,
            oracle_limit,
        } => run_dims(format, group, n, k.zip(l), max_order, oracle_limit),
        Command::Verify { input, sampling, tol } => run_verify(format, &input, &sampling, tol, cli.seed),
        Command::Oracle { point, limit, exact } => run_oracle(format, &point, limit, exact),
        Command::Local { factors, features, out } => run_local(format, &factors, &features, &out),
        Command::Bias { group, n, l, d_l, out } => run_bias(format, group, n, l, d_l, &out),
        Command::Forward {
            input,
            bias,
            activation,
            cases,
            out,
        } => run_forward(format, &input, bias.as_deref(), activation, cases, cli.seed, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
