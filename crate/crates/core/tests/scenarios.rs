use std::f64::consts::PI;

use twisted_atoms::cmstate::{Geometry, KinematicConfig, PhotonSpec};
use twisted_atoms::constants::PROTON_MASS;
use twisted_atoms::hydrogenic::BoundOrbital;
use twisted_atoms::matrixel::{MatrixElementCalculator, TransitionChannel};
use twisted_atoms::photon::Helicity;
use twisted_atoms::scenarios::{
    baseline_plane_wave, figure2_run, tune_to_sublevel, zeeman_select, ZeemanSetting,
};

fn twisted_config(m_gamma: i32) -> KinematicConfig {
    KinematicConfig {
        mass: PROTON_MASS,
        initial_momentum: [0.0, 0.0, 3.0],
        orbital_a: BoundOrbital::new(1, 1, 0, 0).unwrap(),
        orbital_b: BoundOrbital::new(1, 2, 1, 0).unwrap(),
        photon: PhotonSpec::Twisted {
            opening_angle: 0.3,
            m_gamma,
            helicity: Helicity::Positive,
            impact_parameter: [0.0; 2],
        },
        geometry: Geometry::CounterPropagating,
        final_level_shift: 0.0,
    }
}

#[test]
fn zeeman_selection_transfers_photon_tam_minus_one() {
    for m_gamma in [-2, 1, 4] {
        let setting = ZeemanSetting::with_field(2e-7).unwrap();
        let config = twisted_config(m_gamma);
        let omega = tune_to_sublevel(&setting, &config, 1).unwrap();
        let report = zeeman_select(&setting, &config, omega).unwrap();
        assert_eq!(report.selected_m_b, 1);
        assert_eq!(report.cm_tam, m_gamma - 1);
    }
}

#[test]
fn suppressed_detunings_grow_linearly_with_field() {
    let config = twisted_config(2);
    let fields: Vec<f64> = (1..=12).map(|j| j as f64 * 1e-5).collect();
    for m_b in [0, -1] {
        let detunings: Vec<f64> = fields
            .iter()
            .map(|&b| {
                let s = ZeemanSetting::with_field(b).unwrap();
                let omega = tune_to_sublevel(&s, &config, 1).unwrap();
                let report = zeeman_select(&s, &config, omega).unwrap();
                report.channels.iter().find(|c| c.m_b == m_b).unwrap().detuning
            })
            .collect();
        // Least-squares line through (B, detuning).
        let n = fields.len() as f64;
        let (mx, my) = (fields.iter().sum::<f64>() / n, detunings.iter().sum::<f64>() / n);
        let sxy: f64 = fields.iter().zip(&detunings).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = fields.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let residual = fields
            .iter()
            .zip(&detunings)
            .map(|(x, y)| (y - slope * x - intercept).abs())
            .fold(0.0, f64::max);
        assert!(residual < 1e-10, "residual {residual}");
        // Slope g·Δm_b, reduced by the Doppler factor 1/(1 + P_za α cos θ_k / M).
        assert!((slope - (m_b - 1) as f64).abs() < 1e-4, "slope {slope}");
    }
}

#[test]
fn figure2_dominance_and_boundary() {
    let table = figure2_run(101, PI / 10.0).unwrap();
    assert!(table.dominance_boundary.is_none());
    let wide = figure2_run(1401, 1.4).unwrap();
    for row in &wide.sweep.magnitudes {
        assert!(row.iter().all(|v| v.is_finite() && *v <= 1.0 + 1e-12));
    }
    // (1 + cos θ)/2 = sin θ/√2 at the crossing.
    let boundary = wide.dominance_boundary.unwrap();
    let crossing = bisect(|t| 0.5 * (1.0 + t.cos()) - t.sin() / 2f64.sqrt(), 1.0, 1.4);
    assert!(boundary >= crossing && boundary - crossing <= 1.4 / 1400.0 + 1e-12);
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn baseline_amplitude_matches_rotated_channel() {
    for (theta, phi) in [(0.0, 0.0), (0.4, 1.0), (1.1, -2.5)] {
        let mut config = twisted_config(0);
        config.orbital_b = config.orbital_b.with_m(1).unwrap();
        config.photon = PhotonSpec::PlaneWave { theta, phi, helicity: Helicity::Positive };
        let report = baseline_plane_wave(&config).unwrap();
        let channel = TransitionChannel::new(
            BoundOrbital::new(1, 1, 0, 0).unwrap(),
            BoundOrbital::new(1, 2, 1, 0).unwrap(),
            Helicity::Positive,
            report.photon_energy,
        )
        .unwrap();
        let tilde = MatrixElementCalculator::new(channel).unwrap().rotated_amplitude(1, 0, theta).unwrap();
        assert!((report.amplitude.norm() - tilde.norm()).abs() < 1e-14 * tilde.norm());
        let p2: f64 = report.momentum.iter().map(|p| p * p).sum();
        assert!((report.energy - p2 / (2.0 * PROTON_MASS)).abs() < 1e-18);
    }
}
