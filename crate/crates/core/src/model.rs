//! Domain types shared by every other module.
//!
//! Everything internal is dimensionless: the coupling ratio `r = v/g`, the
//! scaled time `tau = g t` and the initial-state angle `theta`. Absolute
//! couplings and times are converted at the boundary.

use core::f64::consts::{PI, TAU};
use core::ops::Index;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{finite, Error, Result};

/// Tolerance on `sum |N_i|^2 - 1` accepted by operations that take a state.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Elementwise tolerance for Hermiticity and for the unit trace.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Eigenvalues of a density matrix down to `-PSD_TOLERANCE` count as zero.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Atom-cavity coupling `g` and cavity-fiber coupling `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    g: f64,
    v: f64,
}

impl CouplingParams {
    pub fn new(g: f64, v: f64) -> Result<Self> {
        finite("g", g)?;
        finite("v", v)?;
        if g <= 0.0 {
            return Err(Error::NonPositiveCoupling(g));
        }
        if v < 0.0 {
            return Err(Error::NegativeCoupling(v));
        }
        Ok(Self { g, v })
    }

    /// Canonical dimensionless parameters `g = 1`, `v = r`.
    pub fn from_ratio(r: f64) -> Result<Self> {
        finite("r", r)?;
        if r < 0.0 {
            return Err(Error::NegativeCoupling(r));
        }
        Ok(Self { g: 1.0, v: r })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// The coupling ratio `v/g`.
    pub fn r(&self) -> f64 {
        self.v / self.g
    }

    /// Converts an absolute time to the scaled time `g t`.
    pub fn scaled_time(&self, t: f64) -> f64 {
        self.g * t
    }
}

/// Free-function form of [`CouplingParams::new`].
pub fn make_params(g: f64, v: f64) -> Result<CouplingParams> {
    CouplingParams::new(g, v)
}

/// Free-function form of [`CouplingParams::from_ratio`].
pub fn params_from_ratio(r: f64) -> Result<CouplingParams> {
    CouplingParams::from_ratio(r)
}

/// Mixing angle of the initial atomic state `cos(theta)|eg> + sin(theta)|ge>`,
/// normalized into `[-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialAngle(f64);

impl InitialAngle {
    pub fn new(theta: f64) -> Result<Self> {
        finite("theta", theta)?;
        if theta.abs() <= PI {
            return Ok(Self(theta));
        }
        Ok(Self(theta - TAU * (theta / TAU).round()))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `(cos(theta), sin(theta))`.
    pub fn cos_sin(self) -> (f64, f64) {
        let (s, c) = self.0.sin_cos();
        (c, s)
    }
}

/// Amplitudes `N1..N5` of the single-excitation state over the basis
/// `|eg000>, |gg100>, |gg010>, |gg001>, |ge000>`.
///
/// Field kets are ordered (cavity 1, fiber, cavity 2) and atoms (atom 1, atom 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes(pub [Complex64; 5]);

impl Amplitudes {
    pub const EG000: usize = 0;
    pub const GG100: usize = 1;
    pub const GG010: usize = 2;
    pub const GG001: usize = 3;
    pub const GE000: usize = 4;

    /// Initial state: atoms in `cos(theta)|eg> + sin(theta)|ge>`, all fields in vacuum.
    pub fn initial(theta: InitialAngle) -> Self {
        let (c, s) = theta.cos_sin();
        let zero = Complex64::new(0.0, 0.0);
        Self([Complex64::new(c, 0.0), zero, zero, zero, Complex64::new(s, 0.0)])
    }

    pub fn n1(&self) -> Complex64 {
        self.0[0]
    }
    pub fn n2(&self) -> Complex64 {
        self.0[1]
    }
    pub fn n3(&self) -> Complex64 {
        self.0[2]
    }
    pub fn n4(&self) -> Complex64 {
        self.0[3]
    }
    pub fn n5(&self) -> Complex64 {
        self.0[4]
    }

    pub fn as_array(&self) -> &[Complex64; 5] {
        &self.0
    }

    /// `sum |N_i|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest componentwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn ensure_normalized(&self) -> Result<f64> {
        let norm_sqr = self.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(norm_sqr)
    }
}

impl Index<usize> for Amplitudes {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Free-function form of [`Amplitudes::initial`].
pub fn initial_amplitudes(theta: InitialAngle) -> Amplitudes {
    Amplitudes::initial(theta)
}

/// Two-atom density matrix in the basis `|ee>, |eg>, |ge>, |gg>`.
///
/// Construction checks Hermiticity, unit trace and positive semidefiniteness.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDensityMatrix(Matrix4<Complex64>);

impl AtomDensityMatrix {
    pub const EE: usize = 0;
    pub const EG: usize = 1;
    pub const GE: usize = 2;
    pub const GG: usize = 3;

    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        check_density_matrix(&rho)?;
        Ok(Self(rho))
    }

    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }
}

fn check_density_matrix(rho: &Matrix4<Complex64>) -> Result<()> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidDensityMatrix("non-finite entry"));
    }
    for i in 0..4 {
        for j in i..4 {
            if (rho[(i, j)] - rho[(j, i)].conj()).norm() > HERMITIAN_TOLERANCE {
                return Err(Error::InvalidDensityMatrix("not Hermitian"));
            }
        }
    }
    if (rho.trace() - Complex64::new(1.0, 0.0)).norm() > HERMITIAN_TOLERANCE {
        return Err(Error::InvalidDensityMatrix("trace is not 1"));
    }
    if hermitian_eigenvalues(rho)[0] < -PSD_TOLERANCE {
        return Err(Error::InvalidDensityMatrix("not positive semidefinite"));
    }
    Ok(())
}

pub(crate) fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let eig = SymmetricEigen::new(*m);
    let mut values = [0.0; 4];
    values.copy_from_slice(eig.eigenvalues.as_slice());
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Uniform grid of scaled times, inclusive of both endpoints.
///
/// A single-point grid (`n_points == 1`, `start == end`) is allowed so that a
/// state can be evaluated at one instant through the same code paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    start: f64,
    end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, n_points: usize) -> Result<Self> {
        finite("tau_start", start)?;
        finite("tau_end", end)?;
        if n_points == 1 && start == end {
            return Ok(Self { start, end, n_points });
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid("a grid needs at least two points"));
        }
        if end <= start {
            return Err(Error::InvalidGrid("tau_end must exceed tau_start"));
        }
        Ok(Self { start, end, n_points })
    }

    pub fn single(tau: f64) -> Result<Self> {
        Self::new(tau, tau, 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn spacing(&self) -> f64 {
        if self.n_points < 2 {
            0.0
        } else {
            (self.end - self.start) / (self.n_points - 1) as f64
        }
    }

    /// The `i`-th point; exact at both endpoints.
    pub fn point(&self, i: usize) -> f64 {
        if self.n_points < 2 {
            return self.start;
        }
        let last = (self.n_points - 1) as f64;
        let i = i as f64;
        (self.start * (last - i) + self.end * i) / last
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}
