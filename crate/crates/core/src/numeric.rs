//! Independent numerical route through the same physics: explicit Hamiltonian,
//! exact propagation by eigendecomposition, partial trace by index contraction
//! and concurrence from its spectral definition.
//!
//! Nothing here calls into [`crate::analytic`].

use nalgebra::{Matrix4, Matrix5, SymmetricEigen, Vector5, SVD};
use num_complex::Complex64;

use crate::analytic::check_tau;
use crate::error::{Error, Result};
use crate::model::{Amplitudes, AtomDensityMatrix, CouplingParams};

/// Real symmetric Hamiltonian restricted to the single-excitation subspace,
/// basis `|eg000>, |gg100>, |gg010>, |gg001>, |ge000>`.
///
/// Tridiagonal with zero diagonal and band `(g, v, v, g)`: atom 1 to cavity 1,
/// cavity 1 to fiber, fiber to cavity 2, cavity 2 to atom 2.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix(Matrix5<f64>);

impl HamiltonianMatrix {
    pub fn new(params: &CouplingParams) -> Self {
        let (g, v) = (params.g(), params.v());
        let band = [g, v, v, g];
        let mut h = Matrix5::zeros();
        for (i, &x) in band.iter().enumerate() {
            h[(i, i + 1)] = x;
            h[(i + 1, i)] = x;
        }
        Self(h)
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.0
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> Result<[f64; 5]> {
        let eig = symmetric_eigen(self.0)?;
        let mut out = [0.0; 5];
        out.copy_from_slice(eig.eigenvalues.as_slice());
        out.sort_by(|a, b| a.total_cmp(b));
        Ok(out)
    }
}

/// Free-function form of [`HamiltonianMatrix::new`].
pub fn hamiltonian_matrix(params: &CouplingParams) -> HamiltonianMatrix {
    HamiltonianMatrix::new(params)
}

fn symmetric_eigen(h: Matrix5<f64>) -> Result<SymmetricEigen<f64, nalgebra::U5>> {
    SymmetricEigen::try_new(h, f64::EPSILON, 10_000).ok_or(Error::EigensolverFailure)
}

/// A state of the single-excitation subspace, same basis as [`HamiltonianMatrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector5(pub Vector5<Complex64>);

impl StateVector5 {
    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn to_amplitudes(&self) -> Amplitudes {
        Amplitudes(core::array::from_fn(|i| self.0[i]))
    }
}

impl From<Amplitudes> for StateVector5 {
    fn from(a: Amplitudes) -> Self {
        Self(Vector5::from_column_slice(a.as_array()))
    }
}

impl From<StateVector5> for Amplitudes {
    fn from(s: StateVector5) -> Self {
        s.to_amplitudes()
    }
}

/// Cached eigendecomposition of `H`, reused across many evolution times.
#[derive(Debug, Clone)]
pub struct Propagator {
    g: f64,
    energies: [f64; 5],
    modes: Matrix5<f64>,
}

impl Propagator {
    pub fn new(params: &CouplingParams) -> Result<Self> {
        let eig = symmetric_eigen(*HamiltonianMatrix::new(params).matrix())?;
        let mut energies = [0.0; 5];
        energies.copy_from_slice(eig.eigenvalues.as_slice());
        Ok(Self { g: params.g(), energies, modes: eig.eigenvectors })
    }

    /// `exp(-i H tau / g) psi0`.
    pub fn evolve(&self, psi0: &StateVector5, tau: f64) -> Result<StateVector5> {
        check_tau(tau)?;
        let norm_sqr = psi0.norm_sqr();
        if (norm_sqr - 1.0).abs() > crate::model::NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let t = tau / self.g;
        let modes = self.modes.map(|x| Complex64::new(x, 0.0));
        let mut coeffs = modes.transpose() * psi0.0;
        for (c, &e) in coeffs.iter_mut().zip(self.energies.iter()) {
            let (s, co) = (e * t).sin_cos();
            *c *= Complex64::new(co, -s);
        }
        Ok(StateVector5(modes * coeffs))
    }
}

/// One-shot `exp(-i H tau / g) psi0`.
pub fn evolve(params: &CouplingParams, psi0: &StateVector5, tau: f64) -> Result<StateVector5> {
    Propagator::new(params)?.evolve(psi0, tau)
}

/// `(atom basis index, field configuration index)` of each subspace ket.
/// Atom indices follow `|ee>, |eg>, |ge>, |gg>`; field configurations are
/// `000, 100, 010, 001`.
const KET_LABELS: [(usize, usize); 5] = [(1, 0), (3, 1), (3, 2), (3, 3), (2, 0)];

/// Reduced atomic state of `|psi><psi|` with all three field modes traced out.
pub fn partial_trace(psi: &StateVector5) -> Result<AtomDensityMatrix> {
    let norm_sqr = psi.norm_sqr();
    if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > crate::model::NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let mut rho = Matrix4::<Complex64>::zeros();
    for (k, &(atom_k, field_k)) in KET_LABELS.iter().enumerate() {
        for (l, &(atom_l, field_l)) in KET_LABELS.iter().enumerate() {
            if field_k == field_l {
                rho[(atom_k, atom_l)] += psi.0[k] * psi.0[l].conj();
            }
        }
    }
    AtomDensityMatrix::new(rho.unscale(norm_sqr))
}

/// `sigma_y (x) sigma_y` in the `|ee>, |eg>, |ge>, |gg>` basis.
pub fn sigma_yy() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m
}

/// `zeta = rho (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`.
pub fn zeta_matrix(rho: &AtomDensityMatrix) -> Matrix4<Complex64> {
    let yy = sigma_yy();
    let m = rho.matrix();
    m * yy * m.map(|z| z.conj()) * yy
}

/// Relative threshold below which eigenvalues of a density matrix are zero.
const RANK_CUTOFF: f64 = 4.0 * f64::EPSILON;

/// Square roots of the eigenvalues of `zeta`, in decreasing order.
///
/// With `rho = W W^dagger`, `W = U sqrt(P)`, these are the singular values of
/// the complex symmetric matrix `W^T (sigma_y (x) sigma_y) W`. The singular
/// values are real and non-negative by construction and are resolved to
/// absolute machine precision, so near-degenerate small eigenvalues of `zeta`
/// do not get amplified by a square root.
pub fn zeta_root_spectrum(rho: &AtomDensityMatrix) -> Result<[f64; 4]> {
    let eig = SymmetricEigen::try_new(*rho.matrix(), f64::EPSILON, 10_000)
        .ok_or(Error::EigensolverFailure)?;
    // Eigenvalues below the numerical rank cutoff are rounding noise; their
    // square roots would otherwise leak O(sqrt(eps)) into the spectrum.
    let cutoff = RANK_CUTOFF * eig.eigenvalues.max().max(0.0);
    let mut w = eig.eigenvectors;
    for (j, &p) in eig.eigenvalues.iter().enumerate() {
        let s = if p > cutoff { p.sqrt() } else { 0.0 };
        for i in 0..4 {
            w[(i, j)] *= s;
        }
    }
    let tau = w.transpose() * sigma_yy() * w;
    let svd = SVD::try_new(tau, false, false, f64::EPSILON, 10_000).ok_or(Error::EigensolverFailure)?;
    let mut roots = [0.0; 4];
    roots.copy_from_slice(svd.singular_values.as_slice());
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Wootters concurrence `max(0, s1 - s2 - s3 - s4)`.
pub fn wootters_concurrence(rho: &AtomDensityMatrix) -> Result<f64> {
    let s = zeta_root_spectrum(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}
