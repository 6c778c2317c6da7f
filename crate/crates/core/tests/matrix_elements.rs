use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use twisted_atoms::constants::ALPHA;
use twisted_atoms::hydrogenic::{dipole_radial_integral, BoundOrbital};
use twisted_atoms::matrixel::{MatrixElementCalculator, TransitionChannel};
use twisted_atoms::photon::{polarization_vector, Helicity};
use twisted_atoms::specfun::{wigner_small_d, SphericalProductRule, WignerIndex};
use twisted_atoms::Complex64;

fn orbital(n: u32, l: u32, m: i32) -> BoundOrbital {
    BoundOrbital::new(1, n, l, m).unwrap()
}

/// (2πi/√(2ω)) ∫ φ_b* e^{ik·r} ε·(−i∇) φ_a d³r by brute-force 3D quadrature.
fn direct_plane_wave_element(
    a: BoundOrbital,
    b: BoundOrbital,
    omega: f64,
    helicity: Helicity,
    theta: f64,
    phi: f64,
) -> Complex64 {
    let k = omega * ALPHA;
    let khat = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let eps = polarization_vector(theta, phi, helicity).unwrap();
    let rule = SphericalProductRule::new(a.decay() + b.decay(), 64, 48, 48).unwrap();
    let integral = rule.integrate(|p| {
        let va = a.evaluate(p);
        let vb = b.evaluate(p);
        let phase = Complex64::from_polar(1.0, k * (khat[0] * p[0] + khat[1] * p[1] + khat[2] * p[2]));
        let p_eps: Complex64 =
            eps.iter().zip(va.gradient).map(|(e, g)| e * g * Complex64::new(0.0, -1.0)).sum();
        vb.value.conj() * phase * p_eps
    });
    Complex64::new(0.0, 2.0 * PI / (2.0 * omega).sqrt()) * integral
}

fn channel(a: BoundOrbital, b: BoundOrbital, helicity: Helicity, omega: f64) -> TransitionChannel {
    TransitionChannel::new(a, b, helicity, omega).unwrap()
}

#[test]
fn long_wavelength_limit_matches_length_form_dipole() {
    let omega = 1e-6 / ALPHA;
    let (a, b) = (orbital(1, 0, 0), orbital(2, 1, 1));
    let calc = MatrixElementCalculator::new(channel(a, b, Helicity::Positive, omega)).unwrap();
    let got = calc.collinear(1, 0).unwrap().norm();
    // ⟨b|p|a⟩ = iω_ba⟨b|r|a⟩; ∫ Y*_{11} r̂_{+1} Y_00 dΩ = √(4π/3)/√(4π) = 1/√3.
    let omega_ba = b.energy() - a.energy();
    let want = 2.0 * PI / (2.0 * omega).sqrt() * omega_ba * dipole_radial_integral(&a, &b).unwrap()
        / 3f64.sqrt();
    assert!((got - want).abs() < 1e-5 * want, "{got} vs {want}");
}

#[test]
fn wigner_factorization_matches_direct_quadrature() {
    let mut rng = StdRng::seed_from_u64(11);
    // A hard photon exercises several partial waves; the resonant one checks the physical case.
    for (na, la, nb, lb, omega) in [(1u32, 0u32, 2u32, 1u32, 0.375), (1, 0, 2, 1, 60.0), (2, 1, 3, 2, 40.0)] {
        for helicity in [Helicity::Positive, Helicity::Negative] {
            let a0 = orbital(na, la, 0);
            let b0 = orbital(nb, lb, 0);
            let calc = MatrixElementCalculator::new(channel(a0, b0, helicity, omega)).unwrap();
            for _ in 0..5 {
                let theta = rng.random_range(0.0..PI);
                let phi = rng.random_range(-PI..PI);
                let ma = rng.random_range(-(la as i32)..=la as i32);
                let mb = rng.random_range(-(lb as i32)..=lb as i32);
                let got = calc.plane_wave_matrix_element(mb, ma, theta, phi).unwrap();
                let want = direct_plane_wave_element(
                    a0.with_m(ma).unwrap(),
                    b0.with_m(mb).unwrap(),
                    omega,
                    helicity,
                    theta,
                    phi,
                );
                assert!(
                    (got - want).norm() < 1e-7 * want.norm().max(1.0),
                    "{na}{la}->{nb}{lb} w={omega} ({mb},{ma}) at ({theta},{phi}): {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn rotated_amplitude_matches_rotated_quadrature_at_fig2_angle() {
    let theta = 0.2;
    let (a, b) = (orbital(1, 0, 0), orbital(2, 1, 0));
    let calc = MatrixElementCalculator::new(channel(a, b, Helicity::Positive, 0.375)).unwrap();
    for mb in -1..=1 {
        // M̃ = i^{m_a−m_b} × (plane-wave element in the x-z plane).
        let direct = direct_plane_wave_element(a, b.with_m(mb).unwrap(), 0.375, Helicity::Positive, theta, 0.0)
            * Complex64::new(0.0, 1.0).powi(-mb);
        let got = calc.rotated_amplitude(mb, 0, theta).unwrap();
        assert!((got - direct).norm() < 1e-7 * direct.norm().max(1.0), "m_b={mb}");
    }
}

#[test]
fn fig2_curves_are_wigner_functions() {
    // The s-state is rotation invariant, so |M^N_{m_b 0}(θ)| = |d¹_{m_b 1}(θ)|.
    let (a, b) = (orbital(1, 0, 0), orbital(2, 1, 0));
    let calc = MatrixElementCalculator::new(channel(a, b, Helicity::Positive, 0.375)).unwrap();
    let thetas: Vec<f64> = (0..40).map(|j| j as f64 * 0.039).collect();
    let sweep = calc.normalized_amplitude_sweep(0, &[1, 0, -1], &thetas).unwrap();
    assert_eq!(sweep.magnitudes[0], vec![1.0, 0.0, 0.0]);
    for (theta, row) in thetas.iter().zip(&sweep.magnitudes) {
        for (col, mb) in [1, 0, -1].into_iter().enumerate() {
            let d = wigner_small_d(WignerIndex::new(1, mb, 1).unwrap(), *theta).unwrap();
            assert!((row[col] - d.abs()).abs() < 1e-12);
        }
    }
}

#[test]
fn helicity_flip_mirrors_the_triple() {
    let (a, b) = (orbital(1, 0, 0), orbital(2, 1, 0));
    let plus = MatrixElementCalculator::new(channel(a, b, Helicity::Positive, 0.375)).unwrap();
    let minus = MatrixElementCalculator::new(channel(a, b, Helicity::Negative, 0.375)).unwrap();
    for theta in [0.0, 0.1, 0.6, 1.3] {
        for mb in -1..=1 {
            let p = plus.rotated_amplitude(mb, 0, theta).unwrap().norm();
            let m = minus.rotated_amplitude(-mb, 0, theta).unwrap().norm();
            assert!((p - m).abs() < 1e-10 * p.max(1e-300).max(1.0));
        }
    }
}

#[test]
fn partial_wave_sum_is_stable_in_l_max() {
    for (na, la, nb, lb) in [(1, 0, 2, 1), (2, 1, 3, 2), (1, 0, 3, 2)] {
        let ch = channel(orbital(na, la, 0), orbital(nb, lb, 0), Helicity::Positive, 25.0);
        let base = MatrixElementCalculator::with_l_max(ch, 8).unwrap();
        let more = MatrixElementCalculator::with_l_max(ch, 12).unwrap();
        for ma in -(la as i32)..=la as i32 {
            for mb in -(lb as i32)..=lb as i32 {
                let (x, y) = (base.collinear(mb, ma).unwrap(), more.collinear(mb, ma).unwrap());
                assert!((x - y).norm() < 1e-10 * x.norm().max(1.0));
            }
        }
    }
}

#[test]
fn azimuthal_dependence_is_a_pure_phase() {
    let ch = channel(orbital(2, 1, 0), orbital(3, 2, 0), Helicity::Negative, 0.1);
    let calc = MatrixElementCalculator::new(ch).unwrap();
    let theta = 0.45;
    for ma in -1..=1 {
        for mb in -2..=2 {
            let at0 = calc.plane_wave_matrix_element(mb, ma, theta, 0.0).unwrap();
            let tilde = calc.rotated_amplitude(mb, ma, theta).unwrap();
            // φ_k = 0 equals the rotated form up to i^{m_b−m_a}.
            assert!((at0 - tilde * Complex64::new(0.0, 1.0).powi(mb - ma)).norm() < 1e-15);
            for phi in [0.4, 2.0, -1.0] {
                let v = calc.plane_wave_matrix_element(mb, ma, theta, phi).unwrap();
                assert!((v.norm() - at0.norm()).abs() < 1e-14);
            }
            if ma - mb == 1 {
                let v = calc.plane_wave_matrix_element(mb, ma, theta, PI).unwrap();
                assert!((v + at0).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn small_angle_ordering_of_minor_channels() {
    let (a, b) = (orbital(1, 0, 0), orbital(2, 1, 0));
    let calc = MatrixElementCalculator::new(channel(a, b, Helicity::Positive, 0.375)).unwrap();
    let sweep = calc.normalized_amplitude_sweep(0, &[1, 0, -1], &[0.05]).unwrap();
    let row = &sweep.magnitudes[0];
    assert!(row[0] > row[1] && row[1] > row[2]);
}
