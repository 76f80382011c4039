//! `unpol` — build two-mode states, test them for unpolarization, and
//! compute Stokes moments, commutant dimensions and lossless transforms.
//!
//! Exit codes: 0 = unpolarized / success, 1 = polarized, 2 = usage or
//! input error. Diagnostics go to stderr, documents to stdout or `--out`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use unpol_cli::report::{moments_to_canonical_json, ReportFile};
use unpol_cli::statefile::StateFile;
use unpol_core::analysis::{commutant_dimension, stokes_moment_tensor};
use unpol_core::fock::{total_dimension, ModeOccupation};
use unpol_core::states::{
    pure_density, thermal_state, unpolarized_state, DensityOperator, ManifoldWeights,
    PureStateVector,
};
use unpol_core::transforms::{evolution, haar_random_su2, random_lossless, Su2Angles};

#[derive(Parser)]
#[command(name = "unpol", version, about = "Two-mode polarization analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state file for one of the built-in constructions.
    Make(MakeArgs),
    /// Test a state for unpolarization and write a report.
    Check(CheckArgs),
    /// Print the Stokes moment tensor of a state.
    Moments(MomentsArgs),
    /// Tabulate commutant dimensions over a manifold range.
    Commutant(CommutantArgs),
    /// Apply a lossless unitary to a state file.
    Transform(TransformArgs),
}

#[derive(Args)]
struct MakeArgs {
    /// Which construction to build.
    kind: MakeKind,
    /// Truncation (vacuum defaults to 0; required for thermal).
    #[arg(long)]
    n_max: Option<usize>,
    /// Mean photon number per mode (thermal).
    #[arg(long)]
    mean_photons: Option<f64>,
    /// Manifold weights r_0,r_1,... with Σ (n+1) r_n = 1 (unpolarized).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,
    /// Flat amplitude list re,im,re,im,... over the cross-manifold basis
    /// |0,0⟩, |0,1⟩, |1,0⟩, |0,2⟩, ... (pure).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    amplitudes: Option<Vec<f64>>,
    /// Shortcut for the basis state |NA,NB⟩ (pure).
    #[arg(long, value_name = "NA,NB")]
    ket: Option<String>,
    /// Optional label stored in the file metadata.
    #[arg(long)]
    label: Option<String>,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MakeKind {
    Vacuum,
    Thermal,
    Unpolarized,
    Pure,
}

#[derive(Args)]
struct CheckArgs {
    /// State file to analyze.
    state: PathBuf,
    /// Base tolerance; manifold n is allowed tol·(n+1).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Monte-Carlo trials per unitary family.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Seed for the sampled unitaries (required; no wall-clock default).
    #[arg(long)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentsArgs {
    /// State file to analyze.
    state: PathBuf,
    /// Moment order (1..=6).
    #[arg(long)]
    order: usize,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CommutantArgs {
    /// Inclusive manifold range, e.g. 0..10 (bounds at most 12).
    range: String,
}

#[derive(Args)]
struct TransformArgs {
    /// State file to transform.
    state: PathBuf,
    /// Evolution angles φ1,φ2,φ3 (radians).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    /// Haar-random linear (SU(2)) unitary with this seed.
    #[arg(long)]
    random: Option<u64>,
    /// Independent Haar-random unitary per manifold with this seed.
    #[arg(long)]
    random_lossless: Option<u64>,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
}

/// Anything that should terminate with exit code 2.
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for UsageError {
    fn from(err: E) -> Self {
        UsageError(err.to_string())
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, UsageError> {
    match command {
        Command::Make(args) => cmd_make(args),
        Command::Check(args) => cmd_check(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Commutant(args) => cmd_commutant(args),
        Command::Transform(args) => cmd_transform(args),
    }
}

fn cmd_make(args: MakeArgs) -> Result<u8, UsageError> {
    let rho = match args.kind {
        MakeKind::Vacuum => {
            let n_max = args.n_max.unwrap_or(0);
            let psi = PureStateVector::basis_state(ModeOccupation::new(0, 0), n_max)?;
            pure_density(&psi).rho
        }
        MakeKind::Thermal => {
            let nbar = args
                .mean_photons
                .ok_or_else(|| usage("thermal requires --mean-photons"))?;
            let n_max = args.n_max.ok_or_else(|| usage("thermal requires --n-max"))?;
            thermal_state(nbar, n_max)?
        }
        MakeKind::Unpolarized => {
            let weights = args
                .weights
                .ok_or_else(|| usage("unpolarized requires --weights"))?;
            unpolarized_state(&ManifoldWeights::new(weights)?)
        }
        MakeKind::Pure => {
            let psi = parse_pure_state(&args)?;
            let dephased = pure_density(&psi);
            if dephased.coherence_discarded {
                eprintln!(
                    "note: state spans several manifolds; cross-manifold coherences were discarded"
                );
            }
            dephased.rho
        }
    };
    let file = StateFile::from_density(&rho, args.label);
    write_output(Some(&args.out), &file.to_canonical_json())?;
    Ok(0)
}

fn parse_pure_state(args: &MakeArgs) -> Result<PureStateVector, UsageError> {
    match (&args.ket, &args.amplitudes) {
        (Some(_), Some(_)) => Err(usage("give either --ket or --amplitudes, not both")),
        (Some(ket), None) => {
            let parts: Vec<&str> = ket.split(',').collect();
            if parts.len() != 2 {
                return Err(usage(format!("--ket expects NA,NB, got {ket:?}")));
            }
            let n_a: usize = parts[0].trim().parse().map_err(UsageError::from)?;
            let n_b: usize = parts[1].trim().parse().map_err(UsageError::from)?;
            let occ = ModeOccupation::new(n_a, n_b);
            let n_max = args.n_max.unwrap_or(occ.total());
            Ok(PureStateVector::basis_state(occ, n_max)?)
        }
        (None, Some(flat)) => {
            if flat.len() % 2 != 0 {
                return Err(usage("--amplitudes expects re,im pairs"));
            }
            let amplitudes: Vec<Complex64> = flat
                .chunks(2)
                .map(|pair| Complex64::new(pair[0], pair[1]))
                .collect();
            let n_max = match args.n_max {
                Some(n_max) => n_max,
                None => infer_n_max(amplitudes.len())
                    .ok_or_else(|| usage(format!(
                        "{} amplitudes do not fill manifolds 0..=n_max for any n_max; \
                         pass --n-max or a triangular-number count",
                        amplitudes.len()
                    )))?,
            };
            Ok(PureStateVector::new(n_max, amplitudes)?)
        }
        (None, None) => Err(usage("pure requires --ket or --amplitudes")),
    }
}

/// The n_max whose truncated basis has exactly `len` states, if any.
fn infer_n_max(len: usize) -> Option<usize> {
    let mut n_max = 0;
    loop {
        let dim = total_dimension(n_max);
        if dim == len {
            return Some(n_max);
        }
        if dim > len {
            return None;
        }
        n_max += 1;
    }
}

fn cmd_check(args: CheckArgs) -> Result<u8, UsageError> {
    if args.tol <= 0.0 || !args.tol.is_finite() {
        return Err(usage("--tol must be positive"));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let rho = load_density(&args.state)?;
    let report = ReportFile::build(&rho, args.tol, args.trials, args.seed);
    write_output(args.out.as_deref(), &report.to_canonical_json())?;
    Ok(if report.verdict { 0 } else { 1 })
}

fn cmd_moments(args: MomentsArgs) -> Result<u8, UsageError> {
    let rho = load_density(&args.state)?;
    let tensor = stokes_moment_tensor(&rho, args.order)?;
    write_output(args.out.as_deref(), &moments_to_canonical_json(&tensor))?;
    Ok(0)
}

fn cmd_commutant(args: CommutantArgs) -> Result<u8, UsageError> {
    let (lo, hi) = parse_range(&args.range)?;
    if hi > 12 {
        return Err(usage(format!(
            "range bound {hi} too large; the oracle is capped at 12"
        )));
    }
    let mut anomalies = 0usize;
    for n in lo..=hi {
        let dim = commutant_dimension(n);
        if dim == 1 {
            println!("n={n} dim={dim}");
        } else {
            println!("n={n} dim={dim} ANOMALY");
            anomalies += 1;
        }
    }
    println!("anomalies: {anomalies}");
    Ok(0)
}

fn parse_range(text: &str) -> Result<(usize, usize), UsageError> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| usage(format!("range must look like A..B, got {text:?}")))?;
    let lo: usize = lo.trim().parse().map_err(UsageError::from)?;
    let hi: usize = hi.trim().parse().map_err(UsageError::from)?;
    if lo > hi {
        return Err(usage(format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn cmd_transform(args: TransformArgs) -> Result<u8, UsageError> {
    let rho = load_density(&args.state)?;
    let n_max = rho.n_max();
    let picked = [
        args.angles.is_some(),
        args.random.is_some(),
        args.random_lossless.is_some(),
    ]
    .iter()
    .filter(|&&x| x)
    .count();
    if picked != 1 {
        return Err(usage(
            "give exactly one of --angles, --random, --random-lossless",
        ));
    }
    let unitary = if let Some(angles) = args.angles {
        if angles.len() != 3 {
            return Err(usage("--angles expects three values φ1,φ2,φ3"));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(usage("--angles must be finite"));
        }
        evolution(Su2Angles::new(angles[0], angles[1], angles[2]), n_max)
    } else if let Some(seed) = args.random {
        haar_random_su2(seed, n_max)
    } else {
        random_lossless(args.random_lossless.expect("one option is set"), n_max)
    };
    let moved = rho.transformed(&unitary)?;
    let file = StateFile::from_density(&moved, None);
    write_output(Some(&args.out), &file.to_canonical_json())?;
    Ok(0)
}

fn load_density(path: &Path) -> Result<DensityOperator, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let file = StateFile::parse(&text)?;
    Ok(file.to_density()?)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), UsageError> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
