use std::f64::consts::PI;

use fiberlink_core::analysis::{
    check_short_fiber_limit, concurrence_series, detect_esd, normal_modes, sweep_block, Engine, EsdReport,
    SweepRow,
};
use fiberlink_core::analytic;
use fiberlink_core::numeric::{self, Propagator};
use fiberlink_core::{Amplitudes, CouplingParams, InitialAngle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result, EXIT_FAILURE, EXIT_OK};
use crate::format::{fmt_f64, Document};

/// Both deviations must stay at or below this for `verify` to pass.
pub const VERIFY_THRESHOLD: f64 = 1e-9;

pub const THREADS_ENV: &str = "FIBERLINK_THREADS";

/// Result of one command: the document for the output path, an optional
/// human-readable summary for stderr, and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub document: String,
    pub summary: Option<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Self { document: document.into_string(), summary: None, exit_code: EXIT_OK }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Evolve => cmd_evolve(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Esd => cmd_esd(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Modes => cmd_modes(cfg),
        Command::FiberCheck => cmd_fiber_check(cfg),
    }
}

/// Thread pool sized by `FIBERLINK_THREADS` (unset or 0: one per core).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::config(THREADS_ENV, format!("expected a thread count, got `{s}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(THREADS_ENV, e.to_string()))
}

/// Evaluates `f` for every `r` in parallel, keeping input order.
fn per_r<T, F>(r_values: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    let pool = thread_pool()?;
    pool.install(|| r_values.par_iter().map(|&r| f(r)).collect())
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Outcome> {
    let params = CouplingParams::from_ratio(cfg.r_values[0])?;
    let theta = cfg.angle();
    let grid = cfg.grid()?;
    let engine = cfg.engine.single().expect("validated");
    let propagator = match engine {
        Engine::Numeric => Some(Propagator::new(&params)?),
        Engine::Analytic => None,
    };

    let mut doc = Document::new();
    doc.config_header(Command::Evolve, cfg);
    doc.line("tau,N1_re,N1_im,N2_re,N2_im,N3_re,N3_im,N4_re,N4_im,N5_re,N5_im,norm");
    for tau in grid.points() {
        let amps = match &propagator {
            Some(p) => p.evolve(&Amplitudes::initial(theta).into(), tau)?.to_amplitudes(),
            None => analytic::amplitudes(&params, theta, tau)?,
        };
        let mut row = Vec::with_capacity(12);
        row.push(tau);
        for z in amps.as_array() {
            row.push(z.re);
            row.push(z.im);
        }
        row.push(amps.norm_sqr());
        doc.row(&row);
    }
    Ok(Outcome::ok(doc))
}

fn sweep_rows(cfg: &RunConfig) -> Result<Vec<Vec<SweepRow>>> {
    let theta = cfg.angle();
    let grid = cfg.grid()?;
    let engine = cfg.engine.single().expect("validated");
    per_r(&cfg.r_values, |r| match engine {
        Engine::Analytic => Ok(sweep_block(r, theta, &grid)?),
        Engine::Numeric => {
            let series = concurrence_series(&CouplingParams::from_ratio(r)?, theta, &grid, Engine::Numeric)?;
            Ok(series.iter().map(|(tau, concurrence)| SweepRow { r, tau, concurrence }).collect())
        }
    })
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let blocks = sweep_rows(cfg)?;
    let mut doc = Document::new();
    doc.config_header(Command::Sweep, cfg);
    doc.line("r,tau,concurrence");
    for row in blocks.iter().flatten() {
        doc.row(&[row.r, row.tau, row.concurrence]);
    }
    Ok(Outcome::ok(doc))
}

pub fn esd_reports(cfg: &RunConfig) -> Result<Vec<(f64, EsdReport)>> {
    let theta = cfg.angle();
    let grid = cfg.grid()?;
    let engine = cfg.engine.single().expect("validated");
    per_r(&cfg.r_values, |r| {
        let series = concurrence_series(&CouplingParams::from_ratio(r)?, theta, &grid, engine)?;
        Ok((r, detect_esd(&series, cfg.tol)?))
    })
}

pub fn cmd_esd(cfg: &RunConfig) -> Result<Outcome> {
    let reports = esd_reports(cfg)?;
    let mut doc = Document::new();
    let mut summary = String::new();
    doc.config_header(Command::Esd, cfg);
    doc.line("r,kind,tau_start,tau_end");
    for (r, report) in &reports {
        for &(a, b) in &report.dead_intervals {
            doc.line(&format!("{},interval,{},{}", fmt_f64(*r), fmt_f64(a), fmt_f64(b)));
        }
        for &z in &report.isolated_zeros {
            doc.line(&format!("{},zero,{},{}", fmt_f64(*r), fmt_f64(z), fmt_f64(z)));
        }
        summary.push_str(&format!(
            "r = {}: {} dead interval(s), {} isolated zero(s) at tol {:e}\n",
            fmt_f64(*r),
            report.dead_intervals.len(),
            report.isolated_zeros.len(),
            report.tolerance
        ));
    }
    Ok(Outcome { document: doc.into_string(), summary: Some(summary), exit_code: EXIT_OK })
}

pub type AmplitudeFn = fn(&CouplingParams, InitialAngle, f64) -> fiberlink_core::Result<Amplitudes>;
pub type ConcurrenceFn = fn(&CouplingParams, InitialAngle, f64) -> fiberlink_core::Result<f64>;

/// The closed-form routines under test in `verify`.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub amplitudes: AmplitudeFn,
    pub concurrence: ConcurrenceFn,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self { amplitudes: analytic::amplitudes, concurrence: analytic::concurrence_closed_form }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub samples: usize,
    pub max_amplitude_deviation: f64,
    pub max_concurrence_deviation: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.max_amplitude_deviation <= VERIFY_THRESHOLD && self.max_concurrence_deviation <= VERIFY_THRESHOLD
    }
}

/// Seeded samples `(r, theta, tau)`: `r` uniform over `[min, max]` of
/// `r_values`, `theta` over `[-pi, pi]`, `tau` over `[tau_start, tau_end]`.
pub fn verify_samples(cfg: &RunConfig) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r_lo = cfg.r_values.iter().copied().fold(f64::INFINITY, f64::min);
    let r_hi = cfg.r_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let draw = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| if hi > lo { rng.gen_range(lo..=hi) } else { lo };
    (0..cfg.samples)
        .map(|_| {
            let r = draw(&mut rng, r_lo, r_hi);
            let theta = draw(&mut rng, -PI, PI);
            let tau = draw(&mut rng, cfg.tau_start, cfg.tau_end);
            (r, theta, tau)
        })
        .collect()
}

/// Compares `forms` against the propagation oracle on the seeded samples.
pub fn verify_with(cfg: &RunConfig, forms: ClosedForms) -> Result<VerifyReport> {
    let samples = verify_samples(cfg);
    let pool = thread_pool()?;
    let deviations: Vec<(f64, f64)> = pool.install(|| {
        samples
            .par_iter()
            .map(|&(r, theta, tau)| -> Result<(f64, f64)> {
                let params = CouplingParams::from_ratio(r)?;
                let theta = InitialAngle::new(theta)?;
                let psi = Propagator::new(&params)?.evolve(&Amplitudes::initial(theta).into(), tau)?;
                let c_oracle = numeric::wootters_concurrence(&numeric::partial_trace(&psi)?)?;
                let closed = (forms.amplitudes)(&params, theta, tau)?;
                let c_closed = (forms.concurrence)(&params, theta, tau)?;
                Ok((closed.max_abs_diff(&psi.to_amplitudes()), (c_closed - c_oracle).abs()))
            })
            .collect::<Result<_>>()
    })?;
    // NaN deviations must fail, so fold with a NaN-propagating max
    let worst = |f: fn(&(f64, f64)) -> f64| {
        deviations.iter().map(f).fold(0.0, |m: f64, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
    };
    Ok(VerifyReport {
        samples: samples.len(),
        max_amplitude_deviation: worst(|d| d.0),
        max_concurrence_deviation: worst(|d| d.1),
    })
}

pub fn verify_outcome(cfg: &RunConfig, report: &VerifyReport) -> Outcome {
    let verdict = if report.passed() { "pass" } else { "fail" };
    let mut doc = Document::new();
    doc.config_header(Command::Verify, cfg);
    doc.line("samples,max_amplitude_deviation,max_concurrence_deviation,threshold,result");
    doc.line(&format!(
        "{},{:e},{:e},{:e},{}",
        report.samples, report.max_amplitude_deviation, report.max_concurrence_deviation, VERIFY_THRESHOLD, verdict
    ));
    let summary = format!(
        "verify: {} samples, max amplitude deviation {:e}, max concurrence deviation {:e} (threshold {:e}): {}\n",
        report.samples,
        report.max_amplitude_deviation,
        report.max_concurrence_deviation,
        VERIFY_THRESHOLD,
        verdict.to_uppercase()
    );
    Outcome {
        document: doc.into_string(),
        summary: Some(summary),
        exit_code: if report.passed() { EXIT_OK } else { EXIT_FAILURE },
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let report = verify_with(cfg, ClosedForms::default())?;
    Ok(verify_outcome(cfg, &report))
}

/// Normal-mode detunings with `g = 1`, `v = r`.
pub fn cmd_modes(cfg: &RunConfig) -> Result<Outcome> {
    let mut doc = Document::new();
    doc.config_header(Command::Modes, cfg);
    doc.line("r,c_minus,c,c_plus");
    for &r in &cfg.r_values {
        let modes = normal_modes(&CouplingParams::from_ratio(r)?);
        let [minus, center, plus] = modes.detunings;
        doc.row(&[r, minus, center, plus]);
    }
    Ok(Outcome::ok(doc))
}

pub fn cmd_fiber_check(cfg: &RunConfig) -> Result<Outcome> {
    let check = check_short_fiber_limit(cfg.fiber_length, cfg.nu_bar)?;
    let mut doc = Document::new();
    doc.config_header(Command::FiberCheck, cfg);
    doc.line("fiber_length,nu_bar,value,ok");
    doc.line(&format!(
        "{},{},{},{}",
        fmt_f64(cfg.fiber_length),
        fmt_f64(cfg.nu_bar),
        fmt_f64(check.value),
        check.ok
    ));
    let summary = format!(
        "short-fiber criterion 2 l nu / (2 pi c) = {} ({})\n",
        fmt_f64(check.value),
        if check.ok { "single fiber mode" } else { "violated" }
    );
    Ok(Outcome { document: doc.into_string(), summary: Some(summary), exit_code: EXIT_OK })
}
