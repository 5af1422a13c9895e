//! Closed forms against the numerical oracle, and the oracle against
//! definitions evaluated by independent means.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use fiberlink_core::analysis::oracle_deviation;
use fiberlink_core::analytic::{self, symmetric_frequency};
use fiberlink_core::model::{params_from_ratio, Amplitudes, AtomDensityMatrix, CouplingParams, InitialAngle};
use fiberlink_core::numeric::{self, hamiltonian_matrix, partial_trace, wootters_concurrence, zeta_matrix, StateVector5};
use nalgebra::{Matrix2, Matrix4, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn angle(theta: f64) -> InitialAngle {
    InitialAngle::new(theta).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng) -> StateVector5 {
    let mut a = Amplitudes(std::array::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    let n = a.norm_sqr().sqrt();
    a.0.iter_mut().for_each(|z| *z /= n);
    a.into()
}

#[test]
fn closed_form_matches_propagation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut amp_max, mut c_max) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p = params_from_ratio(rng.gen_range(0.0..10.0)).unwrap();
        let theta = angle(rng.gen_range(-PI..PI));
        let tau = rng.gen_range(0.0..50.0);
        let (a, cc) = oracle_deviation(&p, theta, tau).unwrap();
        amp_max = amp_max.max(a);
        c_max = c_max.max(cc);
    }
    assert!(amp_max <= 1e-9, "amplitude deviation {amp_max:e}");
    assert!(c_max <= 1e-9, "concurrence deviation {c_max:e}");
}

#[test]
fn absolute_units_match_propagation() {
    let p = CouplingParams::new(2.5, 1.75).unwrap();
    let theta = angle(0.6);
    let t = 3.3;
    let closed = analytic::amplitudes_at_time(&p, theta, t).unwrap();
    let prop = numeric::evolve(&p, &Amplitudes::initial(theta).into(), p.scaled_time(t)).unwrap();
    assert!(closed.max_abs_diff(&prop.to_amplitudes()) < 1e-12);
}

#[test]
fn antisymmetric_uncoupled_point_matches_oracle() {
    let p = params_from_ratio(0.0).unwrap();
    let theta = angle(-FRAC_PI_4);
    let closed = analytic::amplitudes(&p, theta, PI).unwrap();
    let prop = numeric::evolve(&p, &Amplitudes::initial(theta).into(), PI).unwrap();
    assert!(closed.max_abs_diff(&prop.to_amplitudes()) < 1e-12);
}

#[test]
fn r1_quarter_pi_componentwise() {
    let p = params_from_ratio(1.0).unwrap();
    let theta = angle(FRAC_PI_4);
    let closed = analytic::amplitudes(&p, theta, 1.3).unwrap();
    let prop = numeric::evolve(&p, &Amplitudes::initial(theta).into(), 1.3).unwrap();
    assert!(closed.max_abs_diff(&prop.to_amplitudes()) <= 1e-9);
}

/// N5 with the time argument squared: a plausible transcription slip that
/// must not survive the oracle.
fn n5_squared_argument(r: f64, theta: f64, tau: f64) -> f64 {
    let (s, co) = theta.sin_cos();
    let w = symmetric_frequency(r);
    (2.0 * r * r + (w * tau * tau).cos()) / (4.0 * r * r + 2.0) * (co + s) - 0.5 * tau.cos() * (co - s)
}

#[test]
fn squared_time_argument_is_rejected_by_the_oracle() {
    let (r, theta, tau) = (1.0, 0.4, 2.0);
    let p = params_from_ratio(r).unwrap();
    let mut amps = analytic::amplitudes(&p, angle(theta), tau).unwrap();
    amps.0[4] = c(n5_squared_argument(r, theta, tau), 0.0);
    assert!((amps.norm_sqr() - 1.0).abs() > 1e-3);

    let prop = numeric::evolve(&p, &Amplitudes::initial(angle(theta)).into(), tau).unwrap();
    assert!((amps.n5() - prop.0[4]).norm() > 1e-3);
}

#[test]
fn hamiltonian_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let g = rng.gen_range(0.01..5.0);
        let v = rng.gen_range(0.0..5.0);
        let ev = hamiltonian_matrix(&CouplingParams::new(g, v).unwrap()).eigenvalues().unwrap();
        let big = (2.0 * v * v + g * g).sqrt();
        let mut expected = [-big, -g, 0.0, g, big];
        expected.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "g={g} v={v}: {ev:?}");
        }
    }
}

#[test]
fn unitarity_of_propagation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let p = params_from_ratio(rng.gen_range(0.0..10.0)).unwrap();
        let psi = random_state(&mut rng);
        let out = numeric::evolve(&p, &psi, rng.gen_range(0.0..100.0)).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn partial_trace_matches_closed_reduced_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let psi = random_state(&mut rng);
        let traced = partial_trace(&psi).unwrap();
        let closed = analytic::reduced_density(&psi.to_amplitudes()).unwrap();

        // direct |psi><psi| on the 4 x 4 (atoms) x 4 (field configurations) space
        let embed = [(1, 0), (3, 1), (3, 2), (3, 3), (2, 0)];
        let mut full = [[c(0.0, 0.0); 16]; 16];
        for (k, &(ak, fk)) in embed.iter().enumerate() {
            for (l, &(al, fl)) in embed.iter().enumerate() {
                full[ak * 4 + fk][al * 4 + fl] = psi.0[k] * psi.0[l].conj();
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                let contracted: Complex64 = (0..4).map(|f| full[a * 4 + f][b * 4 + f]).sum();
                assert!((contracted - traced.get(a, b)).norm() < 1e-12);
                assert!((closed.get(a, b) - traced.get(a, b)).norm() < 1e-12);
            }
        }
    }
}

/// `sqrt` of the eigenvalues of the non-Hermitian `zeta` through a complex Schur form.
fn zeta_eigenvalues(rho: &AtomDensityMatrix) -> Vec<f64> {
    let ev = Schur::new(zeta_matrix(rho)).eigenvalues().unwrap();
    let mut v: Vec<f64> = ev.iter().map(|z| z.re).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn random_mixed(rng: &mut ChaCha8Rng) -> AtomDensityMatrix {
    let a = Matrix4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = a * a.adjoint();
    let tr = m.trace();
    AtomDensityMatrix::new(m.map(|z| z / tr)).unwrap()
}

#[test]
fn concurrence_agrees_with_zeta_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let rho = random_mixed(&mut rng);
        let roots = numeric::zeta_root_spectrum(&rho).unwrap();
        let lambdas = zeta_eigenvalues(&rho);
        for (s, l) in roots.iter().zip(&lambdas) {
            assert!((s * s - l).abs() < 1e-12, "{roots:?} vs {lambdas:?}");
        }
    }
}

fn random_unitary2(rng: &mut ChaCha8Rng) -> Matrix2<Complex64> {
    let (a, b, cc) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
    let e = |x: f64| Complex64::from_polar(1.0, x);
    Matrix2::new(e(b) * a.cos(), e(cc) * a.sin(), -e(-cc) * a.sin(), e(-b) * a.cos())
}

#[test]
fn concurrence_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let rho = random_mixed(&mut rng);
        let u = random_unitary2(&mut rng).kronecker(&random_unitary2(&mut rng));
        let rotated = AtomDensityMatrix::new(u * rho.matrix() * u.adjoint()).unwrap();
        let (x, y) = (wootters_concurrence(&rho).unwrap(), wootters_concurrence(&rotated).unwrap());
        assert!((x - y).abs() < 1e-10);
    }
    // rank-deficient entangled inputs too
    for _ in 0..300 {
        let psi = random_state(&mut rng);
        let rho = partial_trace(&psi).unwrap();
        let u = random_unitary2(&mut rng).kronecker(&random_unitary2(&mut rng));
        let rotated = AtomDensityMatrix::new(u * rho.matrix() * u.adjoint()).unwrap();
        let (x, y) = (wootters_concurrence(&rho).unwrap(), wootters_concurrence(&rotated).unwrap());
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn pure_product_states_have_zero_concurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..500 {
        let q = |rng: &mut ChaCha8Rng| {
            let v = nalgebra::Vector2::new(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            v / c(v.norm(), 0.0)
        };
        let psi = q(&mut rng).kronecker(&q(&mut rng));
        let rho = AtomDensityMatrix::new(psi * psi.adjoint()).unwrap();
        assert!(wootters_concurrence(&rho).unwrap() <= 1e-10);
    }
}

#[test]
fn x_states_have_concurrence_twice_the_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        // rho_22, rho_33, rho_44 from a random point of the simplex; |rho_23| <= sqrt(rho_22 rho_33)
        let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
        let (lo, hi) = (x.min(y), x.max(y));
        let (p2, p3, p4) = (lo, hi - lo, 1.0 - hi);
        let coh = Complex64::from_polar(rng.gen::<f64>() * (p2 * p3).sqrt(), rng.gen_range(-PI..PI));
        let mut m = Matrix4::zeros();
        m[(1, 1)] = c(p2, 0.0);
        m[(2, 2)] = c(p3, 0.0);
        m[(3, 3)] = c(p4, 0.0);
        m[(1, 2)] = coh;
        m[(2, 1)] = coh.conj();
        let rho = AtomDensityMatrix::new(m).unwrap();
        assert!((wootters_concurrence(&rho).unwrap() - 2.0 * coh.norm()).abs() < 1e-10);
    }
}

#[test]
fn bell_state_is_maximally_entangled() {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let z = c(0.0, 0.0);
    let psi = nalgebra::Vector4::new(z, h, h, z);
    let rho = AtomDensityMatrix::new(psi * psi.adjoint()).unwrap();
    assert!((wootters_concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
}
