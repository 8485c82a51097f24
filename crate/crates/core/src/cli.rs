//! The `nonortho` command line.
//!
//! Every subcommand prints one JSON document on stdout (the sweep also writes a
//! CSV file). Numbers carry 12 significant digits. Exit codes: 0 success,
//! 2 usage error, 3 domain error, 4 internal invariant violation, 1 I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::crypto::{simulate, DetectionRecord, EveStrategy, Protocol};
use crate::fmt::{format_sig12, sig12};
use crate::hidden::{
    canonicalize, decompose, ensemble_nonortho, hidden_overlap, max_ensemble, max_pair_z,
    pair_nonortho, DecompositionParams,
};
use crate::measures::{n0, n1, n2, N2SearchConfig};
use crate::qstate::{overlap2, PureState2};
use crate::unlock::{conjecture_sweep, unlock_report, GridPoint, SweepGrid, UnlockReport};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "nonortho",
    version,
    about = "Nonorthogonality measures, hidden decompositions and QKD detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    N0,
    N1,
    N2,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Bb84,
    B92,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EveArg {
    None,
    Basis,
    Projector,
}

impl From<EveArg> for EveStrategy {
    fn from(e: EveArg) -> Self {
        match e {
            EveArg::None => EveStrategy::None,
            EveArg::Basis => EveStrategy::BasisIntercept,
            EveArg::Projector => EveStrategy::ProjectorIntercept,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonorthogonality measures of two pure states ("re,im;re,im" literals).
    Measure {
        #[arg(long, allow_hyphen_values = true)]
        psi1: String,
        #[arg(long, allow_hyphen_values = true)]
        psi2: String,
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        /// Grid points per Bloch angle for the n2 search.
        #[arg(long, default_value_t = 256)]
        n2_grid: usize,
        /// Step halvings in the n2 refinement.
        #[arg(long, default_value_t = 40)]
        n2_iters: usize,
    },
    /// Two-state decomposition of diag(p, 1-p) selected by |alpha|^2 and phases.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha_sq: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_phase: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_phase: f64,
        /// Relabel p < 1/2 and |alpha|^2 < 1/2 into the canonical ranges.
        #[arg(long)]
        canonicalize: bool,
    },
    /// Maximal pair and ensemble nonorthogonality for diag(p, 1-p).
    Maxima {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long)]
        canonicalize: bool,
    },
    /// Unlocking-cost sweep over the (p, z) grid; writes CSV and prints a summary.
    Sweep {
        #[arg(long, default_value_t = 5e-4, allow_hyphen_values = true)]
        p_step: f64,
        #[arg(long, default_value_t = 5e-4, allow_hyphen_values = true)]
        z_step: f64,
        #[arg(long, default_value_t = crate::unlock::DEFAULT_EPS, allow_hyphen_values = true)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Intercept-resend detection probability for generalized BB84 or B92.
    Crypto {
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
        /// Signal overlap s (BB84) or t (B92), strictly between 0 and 1.
        #[arg(long, allow_hyphen_values = true)]
        overlap: f64,
        #[arg(long, value_enum)]
        eve: EveArg,
        #[arg(long, conflicts_with = "exact")]
        trials: Option<u64>,
        #[arg(long, conflicts_with = "exact")]
        seed: Option<u64>,
        /// Exact branch enumeration instead of Monte Carlo.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Lib(e) => match e {
                Error::Parse { .. } | Error::Unsupported(_) => EXIT_USAGE,
                Error::Invariant(_) => EXIT_INVARIANT,
                _ => EXIT_DOMAIN,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{line}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn emit(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Lib(Error::Invariant(format!("json encoding: {e}"))))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn state_arg(flag: &'static str, literal: &str) -> Result<PureState2, Failure> {
    literal.parse::<PureState2>().map_err(|e| match e {
        Error::Parse { reason, .. } => Failure::Usage(format!("--{flag}: {reason}")),
        other => Failure::Lib(Error::Config(format!("--{flag}: {other}"))),
    })
}

fn state_literal(s: &PureState2) -> String {
    format!(
        "{},{};{},{}",
        format_sig12(s.a_up().re),
        format_sig12(s.a_up().im),
        format_sig12(s.a_down().re),
        format_sig12(s.a_down().im)
    )
}

#[derive(Serialize)]
struct N2Out {
    sum: f64,
    average: f64,
    grid_value: f64,
    theta: f64,
    phi: f64,
    converged: bool,
    minus_n1: f64,
}

#[derive(Serialize)]
struct MeasureOut {
    overlap2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n2: Option<N2Out>,
}

#[derive(Serialize)]
struct DecomposeOut {
    p: f64,
    alpha_sq: f64,
    canonicalized: bool,
    z: f64,
    phi1: String,
    phi2: String,
    overlap2: f64,
    n_pair: f64,
    n_ens: f64,
    branch: &'static str,
    #[serde(rename = "U")]
    u: f64,
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "E")]
    e: f64,
}

#[derive(Serialize)]
struct MaximaOut {
    p: f64,
    max_pair_feasible: bool,
    max_pair_z: Option<f64>,
    max_ensemble: f64,
    max_ensemble_z: f64,
    branch: &'static str,
}

#[derive(Serialize)]
struct PointOut {
    value: f64,
    p: f64,
    z: f64,
}

impl From<GridPoint> for PointOut {
    fn from(g: GridPoint) -> Self {
        Self {
            value: sig12(g.value),
            p: sig12(g.p),
            z: sig12(g.z),
        }
    }
}

#[derive(Serialize)]
struct WitnessOut {
    p: f64,
    z: f64,
    ratio_e: f64,
}

impl WitnessOut {
    fn from_report(r: &UnlockReport) -> Self {
        Self {
            p: sig12(r.p),
            z: sig12(r.z),
            ratio_e: sig12(r.ratio_e.unwrap_or(f64::NAN)),
        }
    }
}

#[derive(Serialize)]
struct SweepOut {
    p_step: f64,
    z_step: f64,
    eps: f64,
    rows: usize,
    excluded: usize,
    min_ratio_u: PointOut,
    min_excess: PointOut,
    e_below_one: usize,
    e_at_least_one: usize,
    witness_e_below: Option<WitnessOut>,
    witness_e_at_least: Option<WitnessOut>,
}

fn canonical_or_reject(p: f64, alpha_sq: f64, canon: bool) -> Result<(f64, f64, bool), Failure> {
    if canon {
        let (cp, ca) = canonicalize(p, alpha_sq);
        return Ok((cp, ca, cp != p || ca != alpha_sq));
    }
    if p < 0.5 {
        return Err(Failure::Lib(Error::Domain {
            param: "p",
            value: p,
            range: "[1/2, 1] (pass --canonicalize to relabel)",
        }));
    }
    if alpha_sq < 0.5 {
        return Err(Failure::Lib(Error::Domain {
            param: "alpha-sq",
            value: alpha_sq,
            range: "[1/2, 1] (pass --canonicalize to relabel)",
        }));
    }
    Ok((p, alpha_sq, false))
}

fn execute(cmd: Command, out: &mut impl Write) -> Result<(), Failure> {
    match cmd {
        Command::Measure {
            psi1,
            psi2,
            which,
            n2_grid,
            n2_iters,
        } => {
            let a = state_arg("psi1", &psi1)?;
            let b = state_arg("psi2", &psi2)?;
            let want = |w: Which| which == w || which == Which::All;
            let n2_out = if want(Which::N2) {
                let cfg = N2SearchConfig {
                    theta_steps: n2_grid,
                    phi_steps: n2_grid,
                    refine_iters: n2_iters,
                    ..Default::default()
                };
                let r = n2(&a, &b, &cfg)?;
                Some(N2Out {
                    sum: sig12(r.value),
                    average: sig12(r.average()),
                    grid_value: sig12(r.grid_value),
                    theta: sig12(r.theta),
                    phi: sig12(r.phi),
                    converged: r.converged,
                    minus_n1: sig12(r.value - n1(&a, &b)),
                })
            } else {
                None
            };
            emit(
                out,
                &MeasureOut {
                    overlap2: sig12(overlap2(&a, &b)),
                    n0: want(Which::N0).then(|| sig12(n0(&a, &b))),
                    n1: want(Which::N1).then(|| sig12(n1(&a, &b))),
                    n2: n2_out,
                },
            )
        }
        Command::Decompose {
            p,
            alpha_sq,
            alpha_phase,
            beta_phase,
            canonicalize,
        } => {
            let (p, alpha_sq, canonicalized) = canonical_or_reject(p, alpha_sq, canonicalize)?;
            let params = DecompositionParams::from_alpha_sq(alpha_sq, alpha_phase, beta_phase)?;
            let d = decompose(p, &params)?;
            let ens = ensemble_nonortho(p, d.z)?;
            let rep = unlock_report(p, d.z, crate::unlock::DEFAULT_EPS)?;
            emit(
                out,
                &DecomposeOut {
                    p: sig12(p),
                    alpha_sq: sig12(alpha_sq),
                    canonicalized,
                    z: sig12(d.z),
                    phi1: state_literal(&d.phi1),
                    phi2: state_literal(&d.phi2),
                    overlap2: sig12(hidden_overlap(p, d.z)?),
                    n_pair: sig12(pair_nonortho(p, d.z)?),
                    n_ens: sig12(ens.value),
                    branch: ens.branch.label(),
                    u: sig12(rep.u),
                    i: sig12(rep.i),
                    e: sig12(rep.e),
                },
            )
        }
        Command::Maxima { p, canonicalize } => {
            let (p, _, _) = canonical_or_reject(p, 1.0, canonicalize)?;
            let pair = max_pair_z(p)?;
            let ens = max_ensemble(p)?;
            emit(
                out,
                &MaximaOut {
                    p: sig12(p),
                    max_pair_feasible: pair.z().is_some(),
                    max_pair_z: pair.z().map(sig12),
                    max_ensemble: sig12(ens.value),
                    max_ensemble_z: ens.z,
                    branch: ens.branch.label(),
                },
            )
        }
        Command::Sweep {
            p_step,
            z_step,
            eps,
            out: path,
            jobs,
        } => {
            let grid = SweepGrid {
                p_step,
                z_step,
                eps,
                ..Default::default()
            };
            let res = with_jobs(jobs, || conjecture_sweep(&grid))??;
            let file = File::create(&path)?;
            res.write_csv(BufWriter::new(file))?;
            emit(
                out,
                &SweepOut {
                    p_step: sig12(p_step),
                    z_step: sig12(z_step),
                    eps: sig12(eps),
                    rows: res.rows.len(),
                    excluded: res.excluded,
                    min_ratio_u: res.min_ratio_u.into(),
                    min_excess: res.min_excess.into(),
                    e_below_one: res.e_below_one,
                    e_at_least_one: res.e_at_least_one,
                    witness_e_below: res.witness_e_below.as_ref().map(WitnessOut::from_report),
                    witness_e_at_least: res
                        .witness_e_at_least
                        .as_ref()
                        .map(WitnessOut::from_report),
                },
            )
        }
        Command::Crypto {
            protocol,
            overlap,
            eve,
            trials,
            seed,
            exact,
            jobs,
        } => {
            let name = match protocol {
                ProtocolArg::Bb84 => "bb84",
                ProtocolArg::B92 => "b92",
            };
            let proto = Protocol::parse(name, overlap)?;
            let eve = EveStrategy::from(eve);
            let record = if exact {
                DetectionRecord::from_exact(&proto, eve)?
            } else {
                let trials = trials.unwrap_or(DEFAULT_TRIALS);
                let seed = seed.unwrap_or(DEFAULT_SEED);
                let stats = with_jobs(jobs, || simulate(&proto, eve, trials, seed))??;
                DetectionRecord::from_simulation(&proto, eve, seed, &stats)
            };
            emit(out, &record)
        }
    }
}
