//! Analyses built on the dynamics: concurrence time series, zero-set (ESD)
//! detection, the `r <= sqrt(2)/2` threshold, parameter sweeps, normal modes of
//! the field sector, the short-fiber criterion and the Raman effective coupling.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::Matrix3;

use crate::analytic::{self, check_tau};
use crate::error::{finite, Error, Result};
use crate::model::{Amplitudes, CouplingParams, InitialAngle, TimeGrid};
use crate::numeric::{self, Propagator, StateVector5};

/// For `theta = pi/4` the concurrence reaches zero iff `r <= sqrt(2)/2`.
pub const ESD_THRESHOLD: f64 = FRAC_1_SQRT_2;

pub const DEFAULT_ESD_TOLERANCE: f64 = 1e-9;

/// Minimum bisection-confirmed width for a run to count as a dead interval.
pub const MIN_DEAD_WIDTH: f64 = 1e-8;

/// Endpoint accuracy of the bisection refinement.
pub const REFINE_TOLERANCE: f64 = 1e-10;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const DEFAULT_ADIABATIC_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Analytic,
    Numeric,
}

/// Where a series came from; lets [`detect_esd`] re-evaluate between grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSource {
    pub params: CouplingParams,
    pub theta: InitialAngle,
    pub engine: Engine,
}

/// Concurrence sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceSeries {
    grid: TimeGrid,
    values: Vec<f64>,
    source: Option<SeriesSource>,
}

impl ConcurrenceSeries {
    /// Wraps externally produced samples. No refinement source is attached.
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { values: values.len(), points: grid.len() });
        }
        for &c in &values {
            finite("concurrence", c)?;
        }
        Ok(Self { grid, values, source: None })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> Option<&SeriesSource> {
        self.source.as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    pub fn min(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }
}

/// Concurrence through the oracle route: propagate, trace out, Wootters.
pub fn numeric_concurrence(propagator: &Propagator, theta: InitialAngle, tau: f64) -> Result<f64> {
    let psi0: StateVector5 = Amplitudes::initial(theta).into();
    let psi = propagator.evolve(&psi0, tau)?;
    numeric::wootters_concurrence(&numeric::partial_trace(&psi)?)
}

pub fn concurrence_series(
    params: &CouplingParams,
    theta: InitialAngle,
    grid: &TimeGrid,
    engine: Engine,
) -> Result<ConcurrenceSeries> {
    let values = match engine {
        Engine::Analytic => grid
            .points()
            .map(|tau| analytic::concurrence_closed_form(params, theta, tau))
            .collect::<Result<Vec<_>>>()?,
        Engine::Numeric => {
            let propagator = Propagator::new(params)?;
            grid.points()
                .map(|tau| numeric_concurrence(&propagator, theta, tau))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(ConcurrenceSeries {
        grid: *grid,
        values,
        source: Some(SeriesSource { params: *params, theta, engine }),
    })
}

/// Zero set of a concurrence trajectory at a given tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct EsdReport {
    /// Disjoint, sorted `(tau_start, tau_end)` with `tau_end > tau_start`.
    pub dead_intervals: Vec<(f64, f64)>,
    pub isolated_zeros: Vec<f64>,
    pub tolerance: f64,
}

impl EsdReport {
    pub fn is_empty(&self) -> bool {
        self.dead_intervals.is_empty() && self.isolated_zeros.is_empty()
    }
}

/// Finds where the series drops to `tol` or below.
///
/// Maximal runs of consecutive grid points with `C <= tol` are candidates. A
/// run of one point is an isolated zero. A longer run becomes a dead interval
/// once its width, with endpoints refined by bisection on the closed form for
/// analytic series, is at least [`MIN_DEAD_WIDTH`]; otherwise it is reported as
/// an isolated zero at its smallest sample.
pub fn detect_esd(series: &ConcurrenceSeries, tol: f64) -> Result<EsdReport> {
    if series.values.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let refine = series
        .source
        .filter(|s| s.engine == Engine::Analytic)
        .map(|s| move |tau: f64| analytic::concurrence_closed_form(&s.params, s.theta, tau));

    let grid = &series.grid;
    let values = &series.values;
    let mut report = EsdReport { dead_intervals: Vec::new(), isolated_zeros: Vec::new(), tolerance: tol };

    let mut i = 0;
    while i < values.len() {
        if values[i] > tol {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < values.len() && values[i + 1] <= tol {
            i += 1;
        }
        let last = i;
        i += 1;

        let argmin = (first..=last)
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .unwrap_or(first);
        if first == last {
            report.isolated_zeros.push(grid.point(first));
            continue;
        }

        let (mut start, mut end) = (grid.point(first), grid.point(last));
        if let Some(f) = &refine {
            if first > 0 {
                start = bisect_level(f, grid.point(first - 1), start, tol)?;
            }
            if last + 1 < values.len() {
                end = bisect_level(f, end, grid.point(last + 1), tol)?;
            }
        }
        if end - start >= MIN_DEAD_WIDTH {
            report.dead_intervals.push((start, end));
        } else {
            report.isolated_zeros.push(grid.point(argmin));
        }
    }
    Ok(report)
}

/// Locates the crossing of `f = level` in `[a, b]`, where exactly one end is
/// above `level`. Returns the endpoint of the bracket on the `<= level` side.
fn bisect_level<F>(f: &F, mut a: f64, mut b: f64, level: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let a_dead = f(a)? <= level;
    while (b - a) > REFINE_TOLERANCE {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (f(mid)? <= level) == a_dead {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(if a_dead { a } else { b })
}

/// Exact minimum over time of the `theta = pi/4` concurrence,
/// `((2 r^2 - 1) / (2 r^2 + 1))^2` above the threshold and zero at or below it.
pub fn min_concurrence_pi4(r: f64) -> Result<f64> {
    finite("r", r)?;
    if r < 0.0 {
        return Err(Error::NegativeCoupling(r));
    }
    if r <= ESD_THRESHOLD {
        return Ok(0.0);
    }
    let two_r2 = 2.0 * r * r;
    let x = (two_r2 - 1.0) / (two_r2 + 1.0);
    Ok(x * x)
}

/// Whether the `theta = pi/4` concurrence ever vanishes.
pub fn reaches_zero_pi4(r: f64) -> bool {
    r <= ESD_THRESHOLD
}

/// Period in `tau` of the `theta = pi/4` concurrence.
pub fn period_pi4(r: f64) -> f64 {
    2.0 * PI / analytic::symmetric_frequency(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub tau: f64,
    pub concurrence: f64,
}

/// Analytic concurrence for one `r` over the grid.
pub fn sweep_block(r: f64, theta: InitialAngle, grid: &TimeGrid) -> Result<Vec<SweepRow>> {
    let params = CouplingParams::from_ratio(r)?;
    grid.points()
        .map(|tau| {
            let concurrence = analytic::concurrence_closed_form(&params, theta, tau)?;
            Ok(SweepRow { r, tau, concurrence })
        })
        .collect()
}

/// Table ordered by `r` (outer, input order) then `tau` (inner).
pub fn sweep(r_values: &[f64], theta: InitialAngle, grid: &TimeGrid) -> Result<Vec<SweepRow>> {
    if r_values.is_empty() {
        return Err(Error::EmptySweep);
    }
    let mut rows = Vec::with_capacity(r_values.len() * grid.len());
    for &r in r_values {
        rows.extend(sweep_block(r, theta, grid)?);
    }
    Ok(rows)
}

/// Normal modes of the three coupled field modes (cavity 1, cavity 2, fiber).
///
/// `transform` maps `(a1, a2, b)` to `(c+, c-, c)`; its rows are the mode
/// vectors. `c+` and `c-` sit at `+sqrt(2) v` and `-sqrt(2) v` from the carrier,
/// `c` at zero and has no fiber component.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    /// `[-sqrt(2) v, 0, +sqrt(2) v]`.
    pub detunings: [f64; 3],
    pub transform: Matrix3<f64>,
    /// Detunings of `(c+, c-, c)`, matching the rows of `transform`.
    pub mode_detunings: [f64; 3],
}

/// Field-field block of the Hamiltonian in `(a1, a2, b)`.
pub fn field_coupling_matrix(params: &CouplingParams) -> Matrix3<f64> {
    let v = params.v();
    Matrix3::new(
        0.0, 0.0, v, //
        0.0, 0.0, v, //
        v, v, 0.0,
    )
}

pub fn normal_modes(params: &CouplingParams) -> NormalModes {
    let shift = SQRT_2 * params.v();
    let h = 0.5;
    let s = FRAC_1_SQRT_2;
    // a1 = (c+ + c- + sqrt2 c)/2, a2 = (c+ + c- - sqrt2 c)/2, b = (c+ - c-)/sqrt2
    let to_fields = Matrix3::new(
        h, h, s, //
        h, h, -s, //
        s, -s, 0.0,
    );
    NormalModes {
        detunings: [-shift, 0.0, shift],
        transform: to_fields.transpose(),
        mode_detunings: [shift, -shift, 0.0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortFiberCheck {
    pub value: f64,
    pub ok: bool,
}

/// `2 l nu_bar / (2 pi c)`; only one fiber mode matters when this is `<= 1`.
pub fn check_short_fiber_limit(fiber_length: f64, nu_bar: f64) -> Result<ShortFiberCheck> {
    finite("fiber_length", fiber_length)?;
    finite("nu_bar", nu_bar)?;
    if fiber_length <= 0.0 {
        return Err(Error::NonPositiveLength(fiber_length));
    }
    if nu_bar < 0.0 {
        return Err(Error::NegativeDecayRate(nu_bar));
    }
    let value = 2.0 * fiber_length * nu_bar / (2.0 * PI * SPEED_OF_LIGHT);
    Ok(ShortFiberCheck { value, ok: value <= 1.0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoupling {
    pub g_eff: f64,
    /// Detuning dominates both the cavity coupling and the Rabi frequency.
    pub valid: bool,
}

/// Raman coupling `g1 Omega / delta` of an adiabatically eliminated three-level atom.
pub fn effective_coupling(g1: f64, omega_rabi: f64, delta: f64) -> Result<EffectiveCoupling> {
    effective_coupling_with_factor(g1, omega_rabi, delta, DEFAULT_ADIABATIC_FACTOR)
}

/// As [`effective_coupling`], flagging validity when `|delta| >= factor * max(|g1|, |Omega|)`.
pub fn effective_coupling_with_factor(
    g1: f64,
    omega_rabi: f64,
    delta: f64,
    factor: f64,
) -> Result<EffectiveCoupling> {
    finite("g1", g1)?;
    finite("omega_rabi", omega_rabi)?;
    finite("delta", delta)?;
    finite("factor", factor)?;
    if delta == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    Ok(EffectiveCoupling {
        g_eff: g1 * omega_rabi / delta,
        valid: delta.abs() >= factor * g1.abs().max(omega_rabi.abs()),
    })
}

/// Largest componentwise amplitude deviation and concurrence deviation between
/// the closed form and the oracle at one point.
pub fn oracle_deviation(params: &CouplingParams, theta: InitialAngle, tau: f64) -> Result<(f64, f64)> {
    check_tau(tau)?;
    let closed = analytic::amplitudes(params, theta, tau)?;
    let propagator = Propagator::new(params)?;
    let psi = propagator.evolve(&Amplitudes::initial(theta).into(), tau)?;
    let amp_dev = closed.max_abs_diff(&psi.to_amplitudes());
    let c_closed = analytic::concurrence_closed_form(params, theta, tau)?;
    let c_numeric = numeric::wootters_concurrence(&numeric::partial_trace(&psi)?)?;
    Ok((amp_dev, (c_closed - c_numeric).abs()))
}
