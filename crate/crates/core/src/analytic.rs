//! Closed-form evolution in the single-excitation subspace.
//!
//! With `r = v/g` and `w = sqrt(2 r^2 + 1)`, the initial state splits into a
//! part symmetric under exchange of the two sites, weight `cos(theta) + sin(theta)`,
//! which oscillates at `w`, and an antisymmetric part, weight `cos(theta) - sin(theta)`,
//! which never couples to the fiber and oscillates at the bare Rabi frequency.
//!
//! `N5` mirrors `N1` with the antisymmetric part sign-flipped; both carry
//! `cos(w tau)` with a linear time argument. Any other argument breaks
//! conservation of `sum |N_i|^2`, which the oracle tests in `numeric` check.

use core::f64::consts::{FRAC_PI_4, PI};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::model::{Amplitudes, AtomDensityMatrix, CouplingParams, InitialAngle};

/// Largest `|tau|` accepted. Plain double-precision argument reduction keeps
/// the error far below 1e-9 up to here.
pub const MAX_TAU: f64 = 1e4;

pub(crate) fn check_tau(tau: f64) -> Result<f64> {
    finite("tau", tau)?;
    if tau.abs() > MAX_TAU {
        return Err(Error::RangeExceeded { tau, max: MAX_TAU });
    }
    Ok(tau)
}

/// Normal-mode frequency of the symmetric sector in units of `g`.
pub fn symmetric_frequency(r: f64) -> f64 {
    (2.0 * r * r + 1.0).sqrt()
}

/// Real coefficients `(a, b)` with `N1 = a + b` and `N5 = a - b`.
fn atomic_parts(r: f64, theta: InitialAngle, tau: f64) -> (f64, f64) {
    let (c, s) = theta.cos_sin();
    let two_r2 = 2.0 * r * r;
    let w = symmetric_frequency(r);
    let a = (two_r2 + (w * tau).cos()) / (2.0 * (two_r2 + 1.0)) * (c + s);
    let b = 0.5 * tau.cos() * (c - s);
    (a, b)
}

/// Amplitudes `N1..N5` at scaled time `tau = g t`.
pub fn amplitudes(params: &CouplingParams, theta: InitialAngle, tau: f64) -> Result<Amplitudes> {
    check_tau(tau)?;
    let r = params.r();
    let (c, s) = theta.cos_sin();
    let (sym, anti) = (c + s, c - s);
    let w = symmetric_frequency(r);
    let k = 2.0 * r * r + 1.0;

    let (a, b) = atomic_parts(r, theta, tau);
    let p = (w * tau).sin() / (2.0 * w) * sym;
    let q = 0.5 * tau.sin() * anti;
    // 1 - cos(w tau), written to avoid cancellation near tau = 0
    let half = (0.5 * w * tau).sin();
    let n3 = -r / k * (2.0 * half * half) * sym;

    Ok(Amplitudes([
        Complex64::new(a + b, 0.0),
        Complex64::new(0.0, -(p + q)),
        Complex64::new(n3, 0.0),
        Complex64::new(0.0, -(p - q)),
        Complex64::new(a - b, 0.0),
    ]))
}

/// Amplitudes at absolute time `t` for absolute couplings.
pub fn amplitudes_at_time(params: &CouplingParams, theta: InitialAngle, t: f64) -> Result<Amplitudes> {
    finite("t", t)?;
    amplitudes(params, theta, params.scaled_time(t))
}

/// Reduced two-atom state after tracing out both cavities and the fiber.
///
/// The result is an X-state with `rho_ee,ee = 0`; it is divided by the squared
/// norm so the trace is exactly one for inputs within the norm tolerance.
pub fn reduced_density(amps: &Amplitudes) -> Result<AtomDensityMatrix> {
    let norm_sqr = amps.ensure_normalized()?;
    let (n1, n5) = (amps.n1(), amps.n5());
    let field = amps.n2().norm_sqr() + amps.n3().norm_sqr() + amps.n4().norm_sqr();

    let mut rho = Matrix4::<Complex64>::zeros();
    rho[(1, 1)] = Complex64::new(n1.norm_sqr(), 0.0);
    rho[(1, 2)] = n1 * n5.conj();
    rho[(2, 1)] = n5 * n1.conj();
    rho[(2, 2)] = Complex64::new(n5.norm_sqr(), 0.0);
    rho[(3, 3)] = Complex64::new(field, 0.0);
    AtomDensityMatrix::new(rho.unscale(norm_sqr))
}

/// Concurrence `2 |N1 N5|`, written through the real parts `a`, `b`:
/// `C = 2 |a^2 - b^2|`.
pub fn concurrence_closed_form(params: &CouplingParams, theta: InitialAngle, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let (a, b) = atomic_parts(params.r(), theta, tau);
    Ok(2.0 * (a * a - b * b).abs())
}

/// Initial angles with dedicated closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseLabel {
    /// `theta = -pi/4`: the antisymmetric Bell state.
    MinusQuarterPi,
    /// `theta = pi/4`: the symmetric Bell state.
    PlusQuarterPi,
    /// `theta = pi/12`: a non-maximally entangled start.
    TwelfthPi,
    General(InitialAngle),
}

impl CaseLabel {
    pub fn angle(&self) -> InitialAngle {
        match *self {
            CaseLabel::MinusQuarterPi => InitialAngle::new(-FRAC_PI_4).unwrap(),
            CaseLabel::PlusQuarterPi => InitialAngle::new(FRAC_PI_4).unwrap(),
            CaseLabel::TwelfthPi => InitialAngle::new(PI / 12.0).unwrap(),
            CaseLabel::General(theta) => theta,
        }
    }
}

/// Evaluates the dedicated formula for `case`.
///
/// * `-pi/4`: `cos^2(tau)`, independent of `r`.
/// * `pi/4`: `((2 r^2 + cos(w tau)) / (2 r^2 + 1))^2`.
/// * `pi/12`: the general expression with the angle constants written out.
pub fn concurrence_case(case: CaseLabel, params: &CouplingParams, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let r = params.r();
    let two_r2 = 2.0 * r * r;
    let wt = symmetric_frequency(r) * tau;
    match case {
        CaseLabel::MinusQuarterPi => {
            let c = tau.cos();
            Ok(c * c)
        }
        CaseLabel::PlusQuarterPi => {
            let x = (two_r2 + wt.cos()) / (two_r2 + 1.0);
            Ok(x * x)
        }
        CaseLabel::TwelfthPi => {
            let (s, c) = (PI / 12.0).sin_cos();
            let a = (two_r2 + wt.cos()) / (2.0 * two_r2 + 2.0) * (c + s);
            let b = 0.5 * tau.cos() * (c - s);
            Ok(2.0 * (a * a - b * b).abs())
        }
        CaseLabel::General(theta) => concurrence_closed_form(params, theta, tau),
    }
}
