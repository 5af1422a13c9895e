//! Run configuration: built-in defaults, then an optional `key = value` file,
//! then command-line flags. Later layers win.
//!
//! File syntax: one `key = value` per line, `#` starts a comment, blank lines
//! are ignored. Keys are the [`RunConfig`] field names. `r_values` takes a
//! comma-separated list. `theta` also accepts multiples of pi such as `pi/12`,
//! `-pi/4` or `3*pi/4`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use fiberlink_core::analysis::{Engine, DEFAULT_ESD_TOLERANCE};
use fiberlink_core::analytic::MAX_TAU;
use fiberlink_core::{CouplingParams, InitialAngle, TimeGrid};

use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_f1be;
pub const DEFAULT_SAMPLES: usize = 1000;

/// Coupling ratios resolving the features of the `theta = pi/4` surface.
pub const DEFAULT_R_VALUES: [f64; 8] = [0.0, 0.25, 0.5, FRAC_1_SQRT_2, 1.0, 1.5, 2.0, 3.0];
pub const DEFAULT_TAU_END: f64 = 4.0 * PI;
pub const DEFAULT_N_TAU: usize = 801;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Sweep,
    Esd,
    Verify,
    Modes,
    FiberCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Sweep => "sweep",
            Command::Esd => "esd",
            Command::Verify => "verify",
            Command::Modes => "modes",
            Command::FiberCheck => "fiber-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Analytic,
    Numeric,
    Both,
}

impl EngineChoice {
    /// The single engine to run, if this is not `Both`.
    pub fn single(self) -> Option<Engine> {
        match self {
            EngineChoice::Analytic => Some(Engine::Analytic),
            EngineChoice::Numeric => Some(Engine::Numeric),
            EngineChoice::Both => None,
        }
    }
}

impl FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "analytic" => Ok(EngineChoice::Analytic),
            "numeric" => Ok(EngineChoice::Numeric),
            "both" => Ok(EngineChoice::Both),
            other => Err(format!("unknown engine `{other}` (expected analytic, numeric or both)")),
        }
    }
}

impl fmt::Display for EngineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineChoice::Analytic => "analytic",
            EngineChoice::Numeric => "numeric",
            EngineChoice::Both => "both",
        })
    }
}

/// Parses a real number or a rational multiple of pi.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let err = || format!("cannot parse `{s}` as an angle");
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| err())?),
        None => (body, 1.0),
    };
    let coeff = match numer.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c.trim().trim_end_matches('*').trim().parse::<f64>().map_err(|_| err())?,
        None => return Err(err()),
    };
    if denom == 0.0 {
        return Err(err());
    }
    Ok(sign * coeff * PI / denom)
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("cannot parse `{}` as a number", s.trim()))
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(parse_real).collect()
}

fn parse_int<T: FromStr>(s: &str) -> std::result::Result<T, String> {
    s.trim().parse::<T>().map_err(|_| format!("cannot parse `{}` as a non-negative integer", s.trim()))
}

/// A partial configuration layer. `None` leaves the lower layer in place.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub theta: Option<f64>,
    pub r_values: Option<Vec<f64>>,
    pub tau_start: Option<f64>,
    pub tau_end: Option<f64>,
    pub n_tau: Option<usize>,
    pub engine: Option<EngineChoice>,
    pub tol: Option<f64>,
    pub output_path: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub fiber_length: Option<f64>,
    pub nu_bar: Option<f64>,
}

impl ConfigLayer {
    /// Sets one field from its textual form; `key` must be a [`RunConfig`] field name.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "theta" => self.theta = Some(parse_angle(value)?),
            "r_values" => self.r_values = Some(parse_list(value)?),
            "tau_start" => self.tau_start = Some(parse_real(value)?),
            "tau_end" => self.tau_end = Some(parse_real(value)?),
            "n_tau" => self.n_tau = Some(parse_int(value)?),
            "engine" => self.engine = Some(value.parse()?),
            "tol" => self.tol = Some(parse_real(value)?),
            "output_path" => self.output_path = Some(value.trim().to_string()),
            "seed" => self.seed = Some(parse_int(value)?),
            "samples" => self.samples = Some(parse_int(value)?),
            "fiber_length" => self.fiber_length = Some(parse_real(value)?),
            "nu_bar" => self.nu_bar = Some(parse_real(value)?),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    pub fn parse_file_contents(name: &str, text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let location = format!("{name}:{}", idx + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(&location, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            layer
                .set(key, value)
                .map_err(|m| CliError::config(format!("{location} ({key})"), m))?;
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(path.display().to_string(), format!("cannot read config: {e}")))?;
        Self::parse_file_contents(&path.display().to_string(), &text)
    }

    /// Overlays `other` on top of `self`.
    pub fn merge(mut self, other: ConfigLayer) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(theta, r_values, tau_start, tau_end, n_tau, engine, tol, output_path, seed, samples, fiber_length, nu_bar);
        self
    }
}

/// Fully resolved configuration of one CLI run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub theta: f64,
    pub r_values: Vec<f64>,
    pub tau_start: f64,
    pub tau_end: f64,
    pub n_tau: usize,
    pub engine: EngineChoice,
    pub tol: f64,
    /// `-` writes to stdout.
    pub output_path: String,
    pub seed: u64,
    pub samples: usize,
    pub fiber_length: f64,
    pub nu_bar: f64,
}

impl RunConfig {
    /// Built-in defaults for `command`.
    ///
    /// `verify` samples `r` from `[min, max]` of `r_values` and `tau` from
    /// `[tau_start, tau_end]`, hence its different defaults.
    pub fn defaults(command: Command) -> Self {
        let mut cfg = RunConfig {
            theta: std::f64::consts::FRAC_PI_4,
            r_values: DEFAULT_R_VALUES.to_vec(),
            tau_start: 0.0,
            tau_end: DEFAULT_TAU_END,
            n_tau: DEFAULT_N_TAU,
            engine: EngineChoice::Analytic,
            tol: DEFAULT_ESD_TOLERANCE,
            output_path: "-".to_string(),
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            fiber_length: 1.0,
            nu_bar: 0.0,
        };
        match command {
            Command::Evolve => cfg.r_values = vec![1.0],
            Command::Verify => {
                cfg.engine = EngineChoice::Both;
                cfg.r_values = vec![0.0, 10.0];
                cfg.tau_end = 50.0;
            }
            _ => {}
        }
        cfg
    }

    pub fn resolve(command: Command, layer: ConfigLayer) -> Result<Self> {
        let mut cfg = Self::defaults(command);
        macro_rules! apply {
            ($($f:ident),*) => { $( if let Some(v) = layer.$f { cfg.$f = v; } )* };
        }
        apply!(theta, r_values, tau_start, tau_end, n_tau, engine, tol, output_path, seed, samples, fiber_length, nu_bar);
        cfg.validate(command)?;
        Ok(cfg)
    }

    fn validate(&self, command: Command) -> Result<()> {
        let bad = |field: &str, message: String| Err(CliError::config(field, message));
        InitialAngle::new(self.theta).map_err(|e| CliError::config("theta", e.to_string()))?;
        if self.r_values.is_empty() {
            return bad("r_values", "at least one r value is required".into());
        }
        for &r in &self.r_values {
            CouplingParams::from_ratio(r).map_err(|e| CliError::config("r_values", e.to_string()))?;
        }
        for (field, tau) in [("tau_start", self.tau_start), ("tau_end", self.tau_end)] {
            if tau.is_finite() && tau.abs() > MAX_TAU {
                return bad(field, format!("range exceeded: |{tau}| > {MAX_TAU}"));
            }
        }
        self.grid()?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol", format!("tolerance must be positive, got {}", self.tol));
        }
        match command {
            Command::Evolve if self.r_values.len() != 1 => {
                return bad("r_values", "evolve takes exactly one r value".into());
            }
            Command::Verify if self.engine != EngineChoice::Both => {
                return bad("engine", "verify requires engine = both".into());
            }
            Command::Verify if self.samples == 0 => {
                return bad("samples", "need at least one sample".into());
            }
            Command::Evolve | Command::Sweep | Command::Esd if self.engine == EngineChoice::Both => {
                return bad("engine", format!("{} needs a single engine (analytic or numeric)", command.name()));
            }
            Command::FiberCheck => {
                fiberlink_core::analysis::check_short_fiber_limit(self.fiber_length, self.nu_bar)
                    .map_err(|e| CliError::config("fiber_length/nu_bar", e.to_string()))?;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn angle(&self) -> InitialAngle {
        InitialAngle::new(self.theta).expect("validated")
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.tau_start, self.tau_end, self.n_tau)
            .map_err(|e| CliError::config("tau_start/tau_end/n_tau", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi/12").unwrap(), PI / 12.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert!(parse_angle("tau/2").is_err());
        assert!(parse_angle("pi/0").is_err());
    }

    #[test]
    fn file_layer() {
        let text = "# comment\ntheta = pi/12\n\nr_values = 0.5, 1 # trailing\nengine = numeric\n";
        let layer = ConfigLayer::parse_file_contents("run.cfg", text).unwrap();
        assert_eq!(layer.theta, Some(PI / 12.0));
        assert_eq!(layer.r_values, Some(vec![0.5, 1.0]));
        assert_eq!(layer.engine, Some(EngineChoice::Numeric));
        assert_eq!(layer.n_tau, None);
    }

    #[test]
    fn file_errors_carry_line_and_field() {
        let err = ConfigLayer::parse_file_contents("run.cfg", "theta = 1\nn_tau = many\n").unwrap_err();
        assert_eq!(err.to_string(), "config error at run.cfg:2 (n_tau): cannot parse `many` as a non-negative integer");
        let err = ConfigLayer::parse_file_contents("run.cfg", "colour = red\n").unwrap_err();
        assert!(err.to_string().contains("run.cfg:1"));
        let err = ConfigLayer::parse_file_contents("run.cfg", "justtext\n").unwrap_err();
        assert!(err.to_string().contains("expected `key = value`"));
    }

    #[test]
    fn later_layers_win() {
        let file = ConfigLayer { theta: Some(1.0), n_tau: Some(5), ..Default::default() };
        let flags = ConfigLayer { theta: Some(2.0), ..Default::default() };
        let cfg = RunConfig::resolve(Command::Sweep, file.merge(flags)).unwrap();
        assert_eq!((cfg.theta, cfg.n_tau), (2.0, 5));
    }

    #[test]
    fn validation() {
        let with = |layer: ConfigLayer, cmd| RunConfig::resolve(cmd, layer).map(|_| ()).map_err(|e| e.exit_code());
        assert_eq!(with(ConfigLayer::default(), Command::Evolve), Ok(()));
        assert_eq!(with(ConfigLayer { r_values: Some(vec![1.0, 2.0]), ..Default::default() }, Command::Evolve), Err(1));
        assert_eq!(with(ConfigLayer { engine: Some(EngineChoice::Analytic), ..Default::default() }, Command::Verify), Err(1));
        assert_eq!(with(ConfigLayer { tau_end: Some(2e4), ..Default::default() }, Command::Verify), Err(1));
        assert_eq!(with(ConfigLayer { r_values: Some(vec![-1.0]), ..Default::default() }, Command::Sweep), Err(1));
        assert_eq!(with(ConfigLayer { n_tau: Some(1), ..Default::default() }, Command::Sweep), Err(1));
        assert_eq!(with(ConfigLayer { tol: Some(0.0), ..Default::default() }, Command::Esd), Err(1));
        // a single instant is a valid grid
        let single = ConfigLayer { tau_end: Some(0.0), n_tau: Some(1), ..Default::default() };
        assert_eq!(with(single, Command::Evolve), Ok(()));
    }
}
