use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_angle, Command, ConfigLayer, EngineChoice, RunConfig};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "fiberlink", version, about = "Entanglement dynamics of two atoms in fiber-coupled cavities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Amplitude trajectories N1..N5 for a single r
    Evolve(RunArgs),
    /// Concurrence table over r and tau
    Sweep(RunArgs),
    /// Zero-set report (dead intervals, isolated zeros) per r
    Esd(RunArgs),
    /// Cross-check closed forms against the propagation oracle
    Verify(RunArgs),
    /// Normal-mode detunings of the field sector (g = 1, v = r)
    Modes(RunArgs),
    /// Short-fiber criterion 2 l nu / (2 pi c) <= 1
    FiberCheck(RunArgs),
}

impl Sub {
    pub fn split(self) -> (Command, RunArgs) {
        match self {
            Sub::Evolve(a) => (Command::Evolve, a),
            Sub::Sweep(a) => (Command::Sweep, a),
            Sub::Esd(a) => (Command::Esd, a),
            Sub::Verify(a) => (Command::Verify, a),
            Sub::Modes(a) => (Command::Modes, a),
            Sub::FiberCheck(a) => (Command::FiberCheck, a),
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Initial-state angle in radians; accepts forms like `pi/12`
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Coupling ratio v/g; repeat or comma-separate for several
    #[arg(long = "r", value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_end: Option<f64>,
    #[arg(long)]
    pub n_tau: Option<usize>,
    /// analytic, numeric or both
    #[arg(long)]
    pub engine: Option<EngineChoice>,
    /// Zero threshold for esd
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random samples for verify
    #[arg(long)]
    pub samples: Option<usize>,
    /// Fiber length in meters (fiber-check)
    #[arg(long)]
    pub length: Option<f64>,
    /// Decay rate into the fiber continuum (fiber-check)
    #[arg(long)]
    pub nu_bar: Option<f64>,
    /// Output file; `-` for stdout
    #[arg(long)]
    pub output: Option<String>,
    /// `key = value` config file; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            theta: self.theta,
            r_values: (!self.r.is_empty()).then(|| self.r.clone()),
            tau_start: self.tau_start,
            tau_end: self.tau_end,
            n_tau: self.n_tau,
            engine: self.engine,
            tol: self.tol,
            output_path: self.output.clone(),
            seed: self.seed,
            samples: self.samples,
            fiber_length: self.length,
            nu_bar: self.nu_bar,
        }
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self, command: Command) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        RunConfig::resolve(command, file.merge(self.layer()))
    }
}
