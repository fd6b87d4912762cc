use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wehrl_core::coherent::coherent_state;
use wehrl_core::sampling::{haar_pure_state, seeded_rng};
use wehrl_core::{PureState, SphereDirection, SpinLabel};
use wehrl_cli::commands::{self, Quantity, SunInput, SunMode};
use wehrl_cli::report::OutputFormat;
use wehrl_cli::state::{read_state, write_state, StateFormat};
use wehrl_cli::{default_tolerance, CliError};

/// Coherent-state entropies and covariant quantum channels.
///
/// Exit codes: 0 success, 1 usage or parse error, 2 counterexample found by a scan,
/// 3 resource guard exceeded. The default tolerance can be set with WEHRL_TOL.
#[derive(Parser)]
#[command(name = "wehrl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Numerical tolerance [default: WEHRL_TOL or 1e-9].
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Entropies of the state in a JSON or CSV state file.
    Entropy(EntropyArgs),
    /// Scatter data: Wehrl entropy against shifted projection entropies of random states.
    FigureProjection(FigureArgs),
    /// Search for states below the coherent-state value of an entropy.
    ScanConjecture(ScanArgs),
    /// Cloning, measure-and-prepare and majorization checks on symmetric Fock sectors.
    Sun(SunArgs),
    /// Write a coherent, Haar-random or basis state file.
    MakeState(MakeStateArgs),
}

#[derive(Args)]
struct EntropyArgs {
    /// State file (.json or .csv).
    file: PathBuf,
    /// wehrl, vonneumann, projection:J, angular or renyi:N; repeatable.
    #[arg(long = "which", default_value = "wehrl")]
    which: Vec<String>,
    /// Rescale the state to unit norm instead of rejecting it.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct FigureArgs {
    /// Spin l, e.g. 2 or 3/2.
    #[arg(long = "l")]
    l: String,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Comma-separated j values.
    #[arg(long = "j", default_value = "1,10,100")]
    j: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ScanArgs {
    /// wehrl, projection:J or angular.
    #[arg(long, default_value = "wehrl")]
    objective: String,
    #[arg(long = "l")]
    l: String,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SunArgs {
    /// Number of modes N.
    #[arg(long = "n")]
    n: usize,
    /// Number of input bosons M.
    #[arg(long = "m")]
    m: usize,
    /// Number of added (cloned or prepared) bosons.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    mode: SunMode,
    /// Input state for clone and prepare.
    #[arg(long, value_enum, default_value = "coherent")]
    input: SunInput,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Coherent,
    Haar,
    Basis,
}

#[derive(Args)]
struct MakeStateArgs {
    #[arg(value_enum)]
    kind: StateKind,
    #[arg(long = "l")]
    l: String,
    /// Polar angle of a coherent state.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    /// Azimuth of a coherent state.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    /// Magnetic number of a basis state.
    #[arg(long = "mz", allow_hyphen_values = true)]
    mz: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "state-format", default_value = "json")]
    state_format: String,
}

fn spin(s: &str) -> Result<SpinLabel, CliError> {
    s.parse().map_err(|e: wehrl_core::Error| CliError::Usage(e.to_string()))
}

fn make_state(a: &MakeStateArgs) -> Result<String, CliError> {
    let l = spin(&a.l)?;
    let psi = match a.kind {
        StateKind::Coherent => {
            let dir = SphereDirection::new(a.theta, a.phi).map_err(|e| CliError::Usage(e.to_string()))?;
            coherent_state(l, &dir)
        }
        StateKind::Haar => haar_pure_state(&mut seeded_rng(a.seed), l),
        StateKind::Basis => {
            let m = a.mz.as_deref().ok_or_else(|| CliError::Usage("basis state needs --mz".into()))?;
            let tm = wehrl_cli::state::parse_twice(m).ok_or_else(|| CliError::Usage(format!("bad --mz {m:?}")))?;
            PureState::basis(l, tm as i32).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let format = match a.state_format.as_str() {
        "json" => StateFormat::Json,
        "csv" => StateFormat::Csv,
        other => return Err(CliError::Usage(format!("unknown state format {other:?}"))),
    };
    Ok(write_state(&psi, format))
}

fn run(cli: &Cli, echo: Vec<String>) -> Result<(String, u8), CliError> {
    let tol = match cli.tol {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => return Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
        None => default_tolerance()?,
    };
    let start = Instant::now();
    let (mut report, code) = match &cli.command {
        Command::Entropy(a) => {
            let which = a.which.iter().map(|w| w.parse::<Quantity>()).collect::<Result<Vec<_>, _>>()?;
            let psi = read_state(&a.file, a.normalize)?;
            (commands::entropy(echo, &psi, &which, tol)?, 0)
        }
        Command::FigureProjection(a) => {
            let js = a.j.split(',').map(spin).collect::<Result<Vec<_>, _>>()?;
            return Ok((commands::figure_projection(spin(&a.l)?, a.samples, &js, a.seed, tol)?, 0));
        }
        Command::ScanConjecture(a) => {
            let objective = commands::parse_objective(&a.objective)?;
            let (r, below) =
                commands::scan_conjecture(echo, objective, spin(&a.l)?, a.samples, a.restarts, a.seed, tol)?;
            (r, if below { 2 } else { 0 })
        }
        Command::Sun(a) => {
            let (r, flagged) = commands::sun(echo, a.n, a.m, a.k, a.mode, a.input, a.samples, a.seed)?;
            (r, if flagged { 2 } else { 0 })
        }
        Command::MakeState(a) => return Ok((make_state(a)?, 0)),
    };
    if cli.timing {
        report.timing_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok((report.render(cli.format)?, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let result = run(&cli, echo).and_then(|(text, code)| {
        match &cli.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("wehrl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
