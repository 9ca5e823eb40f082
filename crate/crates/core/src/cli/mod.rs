//! `ticoh` command line.
//!
//! Every subcommand reads JSON state and Hamiltonian files and writes either a
//! JSON report or a CSV table to stdout or `--output`. Reports embed the
//! library version and the parsed configuration.

pub mod format;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::{adell_bound, bc_bound, poisson_pmf, tp_distance, tv_distance, BcBound};
use crate::convert::{self, monotonicity_gap, ConversionReport};
use crate::cost::{self, ConverseVerdict, ProtocolReport};
use crate::error::Error;
use crate::numkit::{ComplexMatrix, Tolerances};
use crate::purify::{aux_qfi, conjugate_aux_hamiltonian, optimal_purification, purification_variance};
use crate::qfi::{qfi_with_cutoff, variance, wigner_yanase, CUTOFF_RANK};
use crate::roof::{ensemble_avg_qfi, yu_ensemble, Ensemble};
use crate::selftest;
use crate::spectral::{energy_distribution, minimal_adjacent_l, period_of_dist, AdjacentL, PeriodicHamiltonian, StatePeriod};
use format::{read_dist, read_json, read_state, vector_to_json, Envelope, HamiltonianFile, State};

/// Environment variable naming the default tolerance profile.
pub const TOLERANCE_ENV: &str = "TICOH_TOLERANCE";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{}: {}", .0.kind(), .0)]
    Numeric(#[from] Error),
    #[error("{failed} of {total} selftest criteria failed")]
    Selftest { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Invalid(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Selftest { .. } => 4,
        }
    }
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "ticoh", version, about = "Coherence under time-translation-invariant operations")]
pub struct Cli {
    /// Tolerance profile for validating input states: default, strict or loose.
    #[arg(long, global = true, env = TOLERANCE_ENV, default_value = "default")]
    pub tolerance: String,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Quantum Fisher information with respect to the Hamiltonian.
    Qfi(QfiArgs),
    /// Standard, optimal and conjugate purifications.
    Purify(StateArgs),
    /// Pure-state ensemble attaining the convex roof of the variance.
    Ensemble(EnsembleArgs),
    /// Integer energy distribution of a pure state.
    Dist(DistArgs),
    /// Simulated iid conversion between pure states.
    Convert(ConvertArgs),
    /// Coherence cost in c-bits per copy.
    Cost(CostArgs),
    /// Approximation bounds and the converse error floor.
    Bound(BoundArgs),
    /// Typical-string preparation protocol over a grid of copies and deltas.
    Sweep(SweepArgs),
    /// Runs the built-in acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub ham: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct QfiArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: StateArgs,
    /// Pairs with `p_j + p_k` below this are dropped.
    #[arg(long, default_value_t = CUTOFF_RANK)]
    pub cutoff: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EnsembleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: StateArgs,
    /// Split members across coherence-closed level partitions.
    #[arg(long)]
    pub partitioned: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: StateArgs,
    /// Report the distribution of this many iid copies.
    #[arg(long, default_value_t = 1)]
    pub power: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvertArgs {
    /// Input pure state; defaults to the c-bit.
    #[arg(long, requires = "from_ham")]
    pub from: Option<PathBuf>,
    #[arg(long, requires = "from")]
    pub from_ham: Option<PathBuf>,
    /// Target pure state; defaults to the uniform qutrit on levels 0, 1, 2.
    #[arg(long, requires = "to_ham")]
    pub to: Option<PathBuf>,
    #[arg(long, requires = "to")]
    pub to_ham: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.375, 0.5])]
    pub rates: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800])]
    pub copies: Vec<u64>,
    /// Emit a CSV table instead of a JSON report.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CostArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: StateArgs,
    /// Claimed c-bits per copy, checked against the converse bound.
    #[arg(long, requires = "observed_error")]
    pub claimed_rate: Option<f64>,
    /// Trace-distance error observed for the claimed rate.
    #[arg(long, requires = "claimed_rate")]
    pub observed_error: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[command(subcommand)]
    pub kind: BoundKind,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// TV distance between Poisson(sigma2) and Poisson(sigma2 + x).
    Adell {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        x: f64,
    },
    /// TV distance between an m-fold convolution and its translated Poisson.
    Bc {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        copies: u64,
    },
    /// Minimum conversion error above the QFI rate.
    Floor {
        #[arg(long)]
        f_in: f64,
        #[arg(long)]
        f_out: f64,
        #[arg(long)]
        rate: f64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: StateArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [50, 100, 200])]
    pub copies: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05])]
    pub deltas: Vec<f64>,
    /// Monte-Carlo draws when the tail cannot be summed exactly.
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SelftestArgs {
    /// Run only this criterion (1 to 12).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
    pub criterion: Option<u8>,
}

/// Parses arguments, runs, and maps failures to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ticoh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (text, outcome) = execute(cli)?;
    match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{text}"),
    }
    outcome
}

/// Produces the report text. A selftest failure still yields its report,
/// with the error returned alongside.
pub fn execute(cli: &Cli) -> Result<(String, Result<(), CliError>), CliError> {
    let tol = Tolerances::profile(&cli.tolerance)
        .ok_or_else(|| CliError::Invalid(format!("unknown tolerance profile `{}`", cli.tolerance)))?;
    let config = serde_json::to_value(cli).expect("arguments serialize");
    let ctx = Ctx { tol, seed: cli.seed };
    let json = |name: &str, result: Value| Ok((Envelope::new(name, config.clone(), result).to_json(), Ok(())));
    match &cli.command {
        Command::Qfi(a) => json("qfi", ctx.qfi(a)?),
        Command::Purify(a) => json("purify", ctx.purify(a)?),
        Command::Ensemble(a) => json("ensemble", ctx.ensemble(a)?),
        Command::Dist(a) => json("dist", ctx.dist(a)?),
        Command::Convert(a) => {
            let reports = ctx.convert(a)?;
            if a.sweep {
                let rows = reports.iter().map(ConversionReport::csv_row);
                Ok((format::csv_document(&config, ConversionReport::CSV_HEADER, rows), Ok(())))
            } else {
                json("convert", json!({ "reports": reports }))
            }
        }
        Command::Cost(a) => json("cost", ctx.cost(a)?),
        Command::Bound(a) => json("bound", bound(&a.kind)?),
        Command::Sweep(a) => {
            let reports = ctx.sweep(a)?;
            let rows = reports.iter().map(ProtocolReport::csv_row);
            Ok((format::csv_document(&config, ProtocolReport::CSV_HEADER, rows), Ok(())))
        }
        Command::Selftest(a) => {
            let outcomes = match a.criterion {
                Some(id) => selftest::run(id).into_iter().collect(),
                None => selftest::run_all(),
            };
            let text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let status = if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Selftest {
                    failed,
                    total: outcomes.len(),
                })
            };
            Ok((text, status))
        }
    }
}

struct Ctx {
    tol: Tolerances,
    seed: u64,
}

fn with_path<T>(path: &Path, r: crate::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Invalid(format!("{}: {}: {e}", path.display(), e.kind())))
}

fn invalid_at(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Numeric(e) => CliError::Invalid(format!("{}: {}: {e}", path.display(), e.kind())),
        CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn load_state(path: &Path, tol: &Tolerances) -> Result<State, CliError> {
    read_state(path, tol).map_err(|e| invalid_at(path, e))
}

fn load_hamiltonian(path: &Path) -> Result<PeriodicHamiltonian, CliError> {
    read_json::<HamiltonianFile>(path)?
        .into_hamiltonian()
        .map_err(|e| invalid_at(path, e))
}

fn load_pure(path: &Path, tol: &Tolerances) -> Result<crate::numkit::PureState, CliError> {
    match load_state(path, tol)? {
        State::Pure(p) => Ok(p),
        State::Mixed(_) => Err(CliError::Invalid(format!("{}: a pure state is required", path.display()))),
    }
}

fn check_dims(state: &State, h: &ComplexMatrix, path: &Path) -> Result<(), CliError> {
    let d = state.density().dim();
    if d != h.rows() {
        return with_path(path, Err(Error::DimensionMismatch(d, h.rows())));
    }
    Ok(())
}

fn period_json(p: StatePeriod) -> Value {
    match p {
        StatePeriod::Stationary => json!("stationary"),
        StatePeriod::Period { tau, divisor } => json!({ "tau": tau, "divisor": divisor }),
    }
}

fn ensemble_json(e: &Ensemble, h: &ComplexMatrix) -> Result<Value, CliError> {
    let v = e.variances(h)?;
    let members: Vec<Value> = e
        .members()
        .iter()
        .zip(v)
        .map(|((w, psi), v)| json!({ "weight": w, "amplitudes": vector_to_json(psi.amplitudes()), "variance": v }))
        .collect();
    Ok(json!({ "members": members, "average_qfi": ensemble_avg_qfi(e, h)? }))
}

impl Ctx {
    fn load(&self, a: &StateArgs) -> Result<(State, PeriodicHamiltonian), CliError> {
        let state = load_state(&a.state, &self.tol)?;
        let h = load_hamiltonian(&a.ham)?;
        check_dims(&state, &h.matrix(), &a.ham)?;
        Ok((state, h))
    }

    fn qfi(&self, a: &QfiArgs) -> Result<Value, CliError> {
        let (state, h) = self.load(&a.input)?;
        let r = qfi_with_cutoff(&state.density(), &h.matrix(), a.cutoff)?;
        Ok(json!({ "value": r.value, "dropped_pairs": r.dropped_pairs }))
    }

    fn purify(&self, a: &StateArgs) -> Result<Value, CliError> {
        let (state, h) = self.load(a)?;
        let (rho, hm) = (state.density(), h.matrix());
        let d = rho.dim();
        let opt = optimal_purification(&rho, &hm)?;
        let conj = conjugate_aux_hamiltonian(&rho, &hm)?;
        Ok(json!({
            "qfi": qfi_with_cutoff(&rho, &hm, CUTOFF_RANK)?.value,
            "variance": variance(&rho, &hm)?,
            "standard_variance": purification_variance(&rho, &hm, &ComplexMatrix::zeros(d, d))?,
            "optimal_variance": opt.variance(),
            "conjugate_variance": purification_variance(&rho, &hm, &conj)?,
            "skew_information": wigner_yanase(&rho, &hm)?,
            "aux_qfi": aux_qfi(&rho, &hm)?,
            "aux_hamiltonian": format::matrix_to_json(&opt.h_a),
            "joint_state": vector_to_json(opt.joint.amplitudes()),
        }))
    }

    fn ensemble(&self, a: &EnsembleArgs) -> Result<Value, CliError> {
        let (state, h) = self.load(&a.input)?;
        let (rho, hm) = (state.density(), h.matrix());
        let e = if a.partitioned {
            cost::preparation_ensemble(&rho, &h)?
        } else {
            yu_ensemble(&rho, &hm)?.ensemble
        };
        let mut out = ensemble_json(&e, &hm)?;
        out["qfi"] = json!(qfi_with_cutoff(&rho, &hm, CUTOFF_RANK)?.value);
        Ok(out)
    }

    fn dist(&self, a: &DistArgs) -> Result<Value, CliError> {
        let psi = load_pure(&a.input.state, &self.tol)?;
        let h = load_hamiltonian(&a.input.ham)?;
        check_dims(&State::Pure(psi.clone()), &h.matrix(), &a.input.ham)?;
        let p = energy_distribution(&psi, &h)?;
        let adjacent = match minimal_adjacent_l(&p) {
            AdjacentL::Finite(l) => json!(l),
            AdjacentL::NoFiniteL => Value::Null,
        };
        let pm = p.convolve_power(a.power)?;
        Ok(json!({
            "min": pm.min_support(),
            "weights": pm.weights(),
            "mean": pm.mean(),
            "variance": pm.variance(),
            "period": period_json(period_of_dist(&p, h.tau())),
            "adjacent_l": adjacent,
        }))
    }

    fn convert(&self, a: &ConvertArgs) -> Result<Vec<ConversionReport>, CliError> {
        if a.rates.is_empty() || a.copies.is_empty() {
            return Err(CliError::Invalid("rate and copy grids must be non-empty".into()));
        }
        let cbit = cost::CBit::new(TAU);
        let (p1, h1) = match (&a.from, &a.from_ham) {
            (Some(s), Some(h)) => (load_pure(s, &self.tol)?, load_hamiltonian(h)?),
            _ => (cbit.state.clone(), cbit.hamiltonian.clone()),
        };
        let (p2, h2) = match (&a.to, &a.to_ham) {
            (Some(s), Some(h)) => (load_pure(s, &self.tol)?, load_hamiltonian(h)?),
            _ => (
                crate::numkit::PureState::from_real(&[1.0, 1.0, 1.0])?,
                PeriodicHamiltonian::from_levels(h1.tau(), vec![0, 1, 2])?,
            ),
        };
        Ok(convert::sweep(&p1, &h1, &p2, &h2, &a.rates, &a.copies)?)
    }

    fn cost(&self, a: &CostArgs) -> Result<Value, CliError> {
        let (state, h) = self.load(&a.input)?;
        let value = match &state {
            State::Pure(p) => cost::pure_coherence_cost(p, &h)?,
            State::Mixed(rho) => cost::coherence_cost(rho, &h)?,
        };
        let mut out = json!({ "cost": value, "qfi": qfi_with_cutoff(&state.density(), &h.matrix(), CUTOFF_RANK)?.value });
        if let (Some(r), Some(d)) = (a.claimed_rate, a.observed_error) {
            let verdict = match cost::cost_converse(&state.density(), &h, r, d)? {
                ConverseVerdict::Consistent => "consistent",
                ConverseVerdict::Violation => "violation",
            };
            out["converse"] = json!(verdict);
        }
        Ok(out)
    }

    fn sweep(&self, a: &SweepArgs) -> Result<Vec<ProtocolReport>, CliError> {
        if a.copies.is_empty() || a.deltas.is_empty() {
            return Err(CliError::Invalid("copy and delta grids must be non-empty".into()));
        }
        let (state, h) = self.load(&a.input)?;
        Ok(cost::protocol_sweep(&state.density(), &h, &a.copies, &a.deltas, a.trials, self.seed)?)
    }
}

fn bound(kind: &BoundKind) -> Result<Value, CliError> {
    match kind {
        BoundKind::Adell { sigma2, x } => {
            let b = adell_bound(*sigma2, *x)?;
            let exact = tv_distance(&poisson_pmf(*sigma2)?, &poisson_pmf(sigma2 + x)?);
            Ok(json!({ "bound": b, "exact_tv": exact }))
        }
        BoundKind::Bc { dist, copies } => {
            let p = read_dist(dist).map_err(|e| invalid_at(dist, e))?;
            let exact = tp_distance(&p, *copies)?;
            Ok(match bc_bound(&p, *copies)? {
                BcBound::Bound { value, a, b, c } => {
                    json!({ "bound": value, "a": a, "b": b, "c": c, "exact_tv": exact })
                }
                BcBound::Inapplicable(reason) => json!({ "bound": Value::Null, "reason": reason, "exact_tv": exact }),
            })
        }
        BoundKind::Floor { f_in, f_out, rate } => {
            let t = f_in / (rate * f_out);
            Ok(json!({
                "t": t,
                "gap": monotonicity_gap(t),
                "floor": convert::min_error_floor(*f_in, *f_out, *rate),
            }))
        }
    }
}
