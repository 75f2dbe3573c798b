//! `pseudoherm` command-line front end. Every command prints one JSON report
//! on stdout.
//!
//! Exit codes: 0 success, 1 property failure, 2 input error, 3 numerical
//! failure.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudoherm::io::{read_matrix, ReadError};
use pseudoherm::kleingordon::make_grid;
use pseudoherm::models::EnsembleKind;
use pseudoherm::pseudospec::{antilinear_residual, intertwining_residual, DEFAULT_REALITY_TOL};
use pseudoherm::suite::{ensemble_specs, kg_pipeline, run_ensemble};
use pseudoherm::{
    antilinear_symmetry, build_general_metric, build_positive_metric, classify_with, hermitize, pair_spectrum,
    verify_intertwining, Classification, ComplexMatrix, EigOptions, Error, MetricOperator,
};

use report::Report;

const DEFAULT_SEED: u64 = 20_250_117;

#[derive(Parser)]
#[command(name = "pseudoherm", version, about = "Pseudo-Hermitian matrix analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a matrix.
    Classify(MatrixArgs),
    /// Construct a metric operator for a matrix.
    Metric {
        #[command(flatten)]
        args: MatrixArgs,
        /// Signs (+1/-1) for the real eigenvalues, in ascending order.
        /// Without this a positive metric is built whenever one exists.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        signs: Option<Vec<i8>>,
    },
    /// Map a quasi-Hermitian matrix to a Hermitian one.
    Hermitize(MatrixArgs),
    /// Construct an antilinear symmetry.
    Symmetry(MatrixArgs),
    /// Run the Klein-Gordon checks.
    Kg(KgArgs),
    /// Run the equivalence suites over a generated ensemble.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct MatrixArgs {
    path: PathBuf,
    /// Reality and Hermiticity tolerance.
    #[arg(long, default_value_t = DEFAULT_REALITY_TOL)]
    tol: f64,
    /// Largest eigenvector condition number treated as diagonalizable.
    #[arg(long, default_value_t = pseudoherm::linalg::DEFAULT_KAPPA_MAX)]
    kappa_max: f64,
    /// Attach a metric operator to the report.
    #[arg(long)]
    emit_metric: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct KgArgs {
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 20.0 * std::f64::consts::PI)]
    length: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Scale of the positive-definite product. Defaults to the mass.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    t_final: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ensemble {
    Quasi,
    PseudoNonquasi,
    Hermitian,
    Defective,
    /// quasi, pseudo_nonquasi and hermitian in rotation.
    Mixed,
    /// every kind in rotation.
    All,
}

impl Ensemble {
    fn kinds(self) -> Vec<EnsembleKind> {
        match self {
            Ensemble::Quasi => vec![EnsembleKind::Quasi],
            Ensemble::PseudoNonquasi => vec![EnsembleKind::PseudoNonQuasi],
            Ensemble::Hermitian => vec![EnsembleKind::Hermitian],
            Ensemble::Defective => vec![EnsembleKind::Defective],
            Ensemble::Mixed => vec![
                EnsembleKind::Quasi,
                EnsembleKind::PseudoNonQuasi,
                EnsembleKind::Hermitian,
            ],
            Ensemble::All => EnsembleKind::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "mixed")]
    ensemble: Ensemble,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Comma-separated dimensions or ranges, e.g. `2-8` or `2,4,6`.
    #[arg(long, default_value = "2-8", value_parser = parse_dims)]
    dims: Dims,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Debug)]
struct Dims(Vec<usize>);

fn parse_dims(s: &str) -> Result<Dims, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let bad = || format!("invalid dimension list {s:?}");
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.iter().any(|&d| d < 2) {
        return Err("dimensions must be at least 2".into());
    }
    Ok(Dims(out))
}

/// A failed command: exit code plus message for stderr.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(error_code(&e), e.to_string())
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Invalid(e) => e.into(),
            parse => Failure(2, parse.to_string()),
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NotSquare { .. }
        | Error::EmptyMatrix
        | Error::NonFinite
        | Error::DimensionMismatch { .. }
        | Error::SignCountMismatch { .. }
        | Error::InvalidGrid(_)
        | Error::GridMismatch
        | Error::TimeMismatch(..)
        | Error::InvalidState(_) => 2,
        Error::NonDiagonalizable { .. }
        | Error::UnpairedEigenvalue(_)
        | Error::NoPositiveMetric
        | Error::EmptyPhysicalSpace => 1,
        _ => 3,
    }
}

/// Report plus the exit code it should be emitted with.
type Outcome = Result<(Report, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(&a),
        Command::Metric { args, signs } => cmd_metric(&args, signs.as_deref()),
        Command::Hermitize(a) => cmd_hermitize(&a),
        Command::Symmetry(a) => cmd_symmetry(&a),
        Command::Kg(a) => cmd_kg(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok((report, code)) => {
            println!("{}", report.to_json());
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

struct Loaded {
    h: ComplexMatrix,
    class: Classification,
    report: Report,
}

fn load(command: &'static str, a: &MatrixArgs) -> Result<Loaded, Failure> {
    let bytes = read_file(&a.path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Failure(2, format!("{}: {e}", a.path.display())))?;
    let h = read_matrix(&text)?;
    let opts = EigOptions {
        kappa_max: a.kappa_max,
        ..EigOptions::default()
    };
    let class = classify_with(&h, a.tol, &opts)?;
    let report = Report::new(command, &bytes).with_classification(&class);
    Ok(Loaded { h, class, report })
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

/// Positive metric when one exists, otherwise the general metric with all
/// real-eigenvalue signs positive.
fn default_metric(l: &Loaded, tol: f64) -> Result<MetricOperator, Error> {
    let s = &l.class.spectrum;
    if l.class.kind.is_quasi_hermitian() {
        return build_positive_metric(s);
    }
    let pairing = pair_spectrum(s, tol)?;
    build_general_metric(s, &pairing, &vec![1; pairing.real_indices.len()])
}

fn not_applicable(mut l: Loaded, what: &str) -> Outcome {
    l.report
        .note(&format!("{what} unavailable: matrix is {}", l.class.kind));
    Ok((l.report, 1))
}

fn attach_metric(report: &mut Report, h: &ComplexMatrix, eta: &MetricOperator) {
    report.set_metric(eta);
    report.residual("intertwining", verify_intertwining(h, eta));
    report.residual("metric_selfadjoint", eta.selfadjoint_residual());
}

fn cmd_classify(a: &MatrixArgs) -> Outcome {
    let mut l = load("classify", a)?;
    if a.emit_metric {
        if l.class.kind.is_pseudo_hermitian() {
            let eta = default_metric(&l, a.tol)?;
            attach_metric(&mut l.report, &l.h, &eta);
        } else {
            l.report.note("no metric: matrix is not pseudo-Hermitian");
        }
    }
    Ok((l.report, 0))
}

fn cmd_metric(a: &MatrixArgs, signs: Option<&[i8]>) -> Outcome {
    let mut l = load("metric", a)?;
    if !l.class.kind.is_pseudo_hermitian() {
        return not_applicable(l, "metric");
    }
    let eta = match signs {
        None => default_metric(&l, a.tol)?,
        Some(signs) => {
            if signs.iter().any(|&s| s != 1 && s != -1) {
                return Err(Failure(2, "signs must be +1 or -1".into()));
            }
            let pairing = pair_spectrum(&l.class.spectrum, a.tol)?;
            build_general_metric(&l.class.spectrum, &pairing, signs)?
        }
    };
    attach_metric(&mut l.report, &l.h, &eta);
    Ok((l.report, 0))
}

fn cmd_hermitize(a: &MatrixArgs) -> Outcome {
    let mut l = load("hermitize", a)?;
    if !l.class.kind.is_quasi_hermitian() {
        return not_applicable(l, "hermitization");
    }
    let eta = build_positive_metric(&l.class.spectrum)?;
    let out = hermitize(&l.h, &eta)?;
    let rho_residual = intertwining_residual(&l.h, &(&out.rho * &out.rho));
    if a.emit_metric {
        attach_metric(&mut l.report, &l.h, &eta);
    }
    l.report
        .residual("hermitized_hermiticity", out.h.hermiticity_residual());
    l.report.residual("rho_squared_intertwining", rho_residual);
    l.report.output_matrix("h", &out.h);
    l.report.output_matrix("rho", &out.rho);
    Ok((l.report, 0))
}

fn cmd_symmetry(a: &MatrixArgs) -> Outcome {
    let mut l = load("symmetry", a)?;
    if !l.class.kind.is_pseudo_hermitian() {
        return not_applicable(l, "antilinear symmetry");
    }
    let pairing = pair_spectrum(&l.class.spectrum, a.tol)?;
    let tau = antilinear_symmetry(&l.class.spectrum, &pairing)?;
    if a.emit_metric {
        let eta = default_metric(&l, a.tol)?;
        attach_metric(&mut l.report, &l.h, &eta);
    }
    l.report.residual("antilinear", antilinear_residual(&l.h, &tau));
    l.report.note("tau acts as psi -> tau * conj(psi)");
    l.report.output_matrix("tau", &tau);
    Ok((l.report, 0))
}

fn cmd_kg(a: &KgArgs) -> Outcome {
    let grid = make_grid(a.n, a.length, a.mass)?;
    let mu = a.mu.unwrap_or(a.mass);
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Failure(2, format!("mu must be positive, got {mu}")));
    }
    if !(a.t_final >= 0.0 && a.t_final.is_finite()) || a.samples == 0 {
        return Err(Failure(
            2,
            "t-final must be finite and non-negative, samples positive".into(),
        ));
    }
    let r = kg_pipeline(&grid, mu, a.t_final, a.samples, a.seed)?;
    let input = format!(
        "kg n={} length={:e} mass={:e} mu={:e} t_final={:e} samples={} seed={}",
        a.n, a.length, a.mass, mu, a.t_final, a.samples, a.seed
    );
    let mut report = Report::new("kg", input.as_bytes());
    report.residual("sigma3_intertwining", r.sigma3_intertwining);
    report.residual("pd_drift", r.pd_drift);
    report.residual("kg_drift", r.kg_drift);
    report.residual("mode_sum_error", r.mode_sum_error);
    report.residual("positive_energy_projector_gap", r.positive_energy_projector_gap);
    report.note(&format!(
        "indefinite-metric physical dim {}, pseudo-Hermitian physical dim {}",
        r.indefinite_physical_dim, r.pseudo_physical_dim
    ));
    let code = if r.passed() { 0 } else { 1 };
    report.output("kg", &r);
    Ok((report, code))
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let specs = ensemble_specs(&a.ensemble.kinds(), a.count, &a.dims.0, a.seed);
    let r = run_ensemble(&specs)?;
    let dims: Vec<String> = a.dims.0.iter().map(|d| d.to_string()).collect();
    let input = format!(
        "verify ensemble={} count={} dims={} seed={}",
        a.ensemble.to_possible_value().expect("named").get_name(),
        a.count,
        dims.join(","),
        a.seed
    );
    let mut report = Report::new("verify", input.as_bytes());
    report.residual("worst_metric", r.worst_metric_residual);
    report.residual("worst_symmetry", r.worst_symmetry_residual);
    report.residual("worst_hermitized_hermiticity", r.worst_hermiticity_residual);
    report.residual("worst_spectrum", r.worst_spectrum_residual);
    report.residual("worst_eta_hermiticity", r.worst_eta_hermiticity_residual);
    if r.skipped > 0 {
        report.note(&format!("{} non-diagonalizable instances skipped", r.skipped));
    }
    let failures = r.failures();
    let code = if r.passed() { 0 } else { 1 };
    report.output("failures", &failures);
    report.output("suite", &r);
    Ok((report, code))
}
