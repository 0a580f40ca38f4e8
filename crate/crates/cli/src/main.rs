use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod dist;
mod report;
mod space;
mod verify;

use report::CliError;

#[derive(Parser)]
#[command(name = "specwass", version, about = "Wasserstein-1 distances on finite metric spaces")]
struct Cli {
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or validate space files.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Compute a distance.
    Dist(Box<DistArgs>),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
pub enum SpaceCmd {
    /// Equispaced grid on an interval.
    GenLine {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Equispaced grid on the unit-length circle.
    GenCircle {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Product of a base space with a discretized fiber.
    GenTwosheet {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        norm_di: f64,
        #[arg(long)]
        fiber: usize,
        /// CSV `point_id,value` replacing the constant fiber norm.
        #[arg(long)]
        higgs: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the metric axioms of a space file.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Primal,
    Dual,
    Both,
    Closed1d,
    Expect,
    Bounds,
    Wavepacket,
    Moyal,
    Equator,
    Jump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shift {
    None,
    Linear,
    Quadratic,
}

#[derive(Args)]
pub struct DistArgs {
    pub method: Method,
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<PathBuf>,
    #[arg(long)]
    pub nu: Option<PathBuf>,
    /// Point id of the point mass (expect).
    #[arg(long)]
    pub point: Option<String>,
    /// Packet shape: gauss, uniform, triangle or table:<path>.
    #[arg(long, default_value = "gauss")]
    pub shape: String,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub sigma_p: Option<f64>,
    /// Packet centers as comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub y: Vec<f64>,
    /// Quadrature nodes per axis.
    #[arg(long, default_value_t = specwass::shape::DEFAULT_QUADRATURE_NODES)]
    pub nodes: usize,
    /// Bloch state as `[x,y,z]` or a path to a JSON file holding one.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Noncommutativity parameter of the Moyal plane.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// `|D1 - D2|`.
    #[arg(long, default_value_t = 1.0)]
    pub dd: f64,
    #[arg(long)]
    pub norm_di: Option<f64>,
    #[arg(long, value_enum, default_value_t = Shift::None)]
    pub shift: Shift,
    /// Duality-gap tolerance; defaults to SPECWASS_TOL or 1e-9.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Include wall time in the report (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Duality,
    Oracle,
    Sandwich,
    Interp,
    Twosheet,
    Moyal,
    Midpoint,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases; each suite has its own default.
    #[arg(long)]
    pub cases: Option<usize>,
    /// Property tolerance; defaults to SPECWASS_TOL or the suite default.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Refinement levels of the two-sheet convergence table.
    #[arg(long, default_value_t = 3)]
    pub refine: usize,
}

/// `--tol`, else SPECWASS_TOL, else `default`.
pub fn tolerance(flag: Option<f64>, default: f64) -> Result<f64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("SPECWASS_TOL") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("SPECWASS_TOL is not a number: {s:?}"))),
        Err(_) => Ok(default),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Space(cmd) => space::run(cmd, cli.csv),
        Command::Dist(args) => dist::run(&args, cli.csv),
        Command::Verify(args) => verify::run(&args, cli.csv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
