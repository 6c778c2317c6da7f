//! Kinematics of the absorption and the final center-of-mass state.
//!
//! Energy conservation E_a + ε_a + ω = E_b + ε_b fixes the photon energy
//! including recoil. A twisted photon leaves the atom in a Bessel state
//! √(κ/2π) J_ν(κR_⊥) e^{iνφ_R} e^{iP_zb Z} with ν = m_a + m_γ − m_b; a plane
//! wave leaves it in a plane wave of momentum P_a + k.

mod winding;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::ALPHA;
use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, GridWindow};
use crate::hydrogenic::BoundOrbital;
use crate::matrixel::{MatrixElementCalculator, TransitionChannel};
use crate::photon::{Helicity, ParaxialProfile, TwistedPhoton};
use crate::specfun::bessel_j;

pub use winding::{
    azimuthal_eigenvalue, measure_winding, transverse_laplacian_eigenvalue, winding_number,
    WindingMeasurement, MIN_CIRCLE_SAMPLES,
};

const RESONANCE_TOLERANCE: f64 = 1e-12;
const MAX_RESONANCE_ITERATIONS: usize = 200;
pub const DEFAULT_GRID_POINTS: usize = 257;
/// Default window width in units of 1/κ.
pub const DEFAULT_WINDOW_WIDTH: f64 = 12.0;

/// Direction of the photon relative to the atomic beam (+z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    /// Photon along −z: P_zb = P_za − k_z.
    CounterPropagating,
    /// Photon along +z: P_zb = P_za + k_z.
    CoPropagating,
}

impl Geometry {
    fn sign(self) -> f64 {
        match self {
            Geometry::CounterPropagating => -1.0,
            Geometry::CoPropagating => 1.0,
        }
    }
}

/// Photon parameters that do not depend on the (yet unknown) energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhotonSpec {
    Twisted { opening_angle: f64, m_gamma: i32, helicity: Helicity, impact_parameter: [f64; 2] },
    PlaneWave { theta: f64, phi: f64, helicity: Helicity },
}

impl PhotonSpec {
    pub fn helicity(&self) -> Helicity {
        match *self {
            PhotonSpec::Twisted { helicity, .. } | PhotonSpec::PlaneWave { helicity, .. } => helicity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicConfig {
    pub mass: f64,
    pub initial_momentum: [f64; 3],
    pub orbital_a: BoundOrbital,
    pub orbital_b: BoundOrbital,
    pub photon: PhotonSpec,
    pub geometry: Geometry,
    /// Extra energy added to ε_b, e.g. a Zeeman shift of the final sublevel.
    pub final_level_shift: f64,
}

impl KinematicConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return Err(Error::Configuration(format!("mass must be positive, got {}", self.mass)));
        }
        if self.initial_momentum.iter().any(|p| !p.is_finite()) || !self.final_level_shift.is_finite() {
            return Err(Error::Configuration("non-finite kinematic input".into()));
        }
        if self.orbital_a.z() != self.orbital_b.z() {
            return Err(Error::Configuration("orbitals belong to different nuclear charges".into()));
        }
        match self.photon {
            PhotonSpec::Twisted { opening_angle, impact_parameter, .. } => {
                if !(opening_angle > 0.0 && opening_angle < 0.5 * PI) {
                    return Err(Error::Configuration(format!(
                        "opening angle {opening_angle} outside (0, pi/2)"
                    )));
                }
                if impact_parameter.iter().any(|b| !b.is_finite()) {
                    return Err(Error::Configuration("non-finite impact parameter".into()));
                }
            }
            PhotonSpec::PlaneWave { theta, phi, .. } => {
                if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
                    return Err(Error::Configuration("plane-wave direction out of range".into()));
                }
            }
        }
        Ok(())
    }

    pub fn tilt(&self) -> [f64; 2] {
        [self.initial_momentum[0], self.initial_momentum[1]]
    }

    pub fn initial_energy(&self) -> f64 {
        self.initial_momentum.iter().map(|p| p * p).sum::<f64>() / (2.0 * self.mass)
    }

    /// Final CM energy for photon energy ω. For a twisted photon with a
    /// tilted atom, the cross term P_⊥a·k_⊥ averages out over the cone.
    pub fn final_energy(&self, omega: f64) -> f64 {
        let k = omega * ALPHA;
        let p2 = match self.photon {
            PhotonSpec::Twisted { opening_angle, .. } => {
                let p_zb = self.initial_momentum[2] + self.geometry.sign() * k * opening_angle.cos();
                let kappa = k * opening_angle.sin();
                let tilt = self.tilt();
                p_zb * p_zb + kappa * kappa + tilt[0] * tilt[0] + tilt[1] * tilt[1]
            }
            PhotonSpec::PlaneWave { theta, phi, .. } => {
                let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                (0..3).map(|i| (self.initial_momentum[i] + k * n[i]).powi(2)).sum()
            }
        };
        p2 / (2.0 * self.mass)
    }
}

/// Photon energy satisfying E_a + ε_a + ω = E_b(ω) + ε_b, by fixed-point
/// iteration from ε_b − ε_a.
pub fn solve_resonance(config: &KinematicConfig) -> Result<f64> {
    config.validate()?;
    let gap = config.orbital_b.energy() + config.final_level_shift - config.orbital_a.energy();
    let e_a = config.initial_energy();
    let mut omega = gap;
    for _ in 0..MAX_RESONANCE_ITERATIONS {
        let next = gap + config.final_energy(omega.max(0.0)) - e_a;
        if !next.is_finite() {
            break;
        }
        if (next - omega).abs() <= RESONANCE_TOLERANCE {
            if !(next > 0.0) {
                return Err(Error::Kinematics(format!(
                    "resonance requires a non-positive photon energy ({next:e} Hartree)"
                )));
            }
            return Ok(next);
        }
        omega = next;
    }
    Err(Error::Kinematics("resonance iteration did not converge".into()))
}

/// Twisted center-of-mass state after absorbing a Bessel photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmTwistedState {
    pub energy: f64,
    pub p_zb: f64,
    pub kappa: f64,
    pub tam_projection: i32,
    pub tilt: [f64; 2],
    pub impact_parameter: [f64; 2],
    /// M̃_{m_b m_a}(θ_k).
    pub amplitude_scale: Complex64,
    pub photon_energy: f64,
    pub photon_opening_angle: f64,
    pub m_gamma: i32,
    pub m_a: i32,
    pub m_b: i32,
}

impl CmTwistedState {
    /// θ_Pb = arctan(κ/P_zb), in (0, π) so that a backward beam is explicit.
    pub fn opening_angle(&self) -> f64 {
        self.kappa.atan2(self.p_zb)
    }

    /// Φ(R) without the overall amplitude: √(κ/2π) J_ν(κ|R_⊥−b|) e^{iν arg(R_⊥−b)} e^{iP_⊥a·R_⊥} e^{iP_zb Z}.
    pub fn value_at(&self, point: [f64; 3]) -> Complex64 {
        let dx = point[0] - self.impact_parameter[0];
        let dy = point[1] - self.impact_parameter[1];
        let nu = self.tam_projection;
        let radial = bessel_j(nu, self.kappa * dx.hypot(dy)).expect("finite argument");
        let phase = nu as f64 * dy.atan2(dx)
            + self.tilt[0] * point[0]
            + self.tilt[1] * point[1]
            + self.p_zb * point[2];
        Complex64::from_polar((self.kappa / (2.0 * PI)).sqrt() * radial, phase)
    }

    /// Square window DEFAULT_WINDOW_WIDTH/κ across, centered on the vortex.
    pub fn default_window(&self) -> GridWindow {
        GridWindow::square(self.impact_parameter, 0.5 * DEFAULT_WINDOW_WIDTH / self.kappa, DEFAULT_GRID_POINTS)
            .expect("positive kappa")
    }
}

/// Plane-wave center-of-mass state after absorbing a plane-wave photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmPlaneWaveState {
    pub energy: f64,
    pub momentum: [f64; 3],
    /// Transverse momentum magnitude |P_⊥b|.
    pub kappa: f64,
    pub amplitude: Complex64,
    pub photon_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CmState {
    Twisted(CmTwistedState),
    PlaneWave(CmPlaneWaveState),
}

fn channel_for(config: &KinematicConfig, omega: f64) -> Result<TransitionChannel> {
    let a = config.orbital_a.with_m(0).expect("m = 0 always valid");
    let b = config.orbital_b.with_m(0).expect("m = 0 always valid");
    TransitionChannel::new(a, b, config.photon.helicity(), omega)
}

/// Solves the resonance and builds the final CM state. Amplitudes are
/// evaluated in the photon frame (quantization along the photon axis).
pub fn synthesize_cm_state(config: &KinematicConfig) -> Result<CmState> {
    let omega = solve_resonance(config)?;
    let calc = MatrixElementCalculator::new(channel_for(config, omega)?)?;
    let (m_a, m_b) = (config.orbital_a.m(), config.orbital_b.m());
    let k = omega * ALPHA;
    match config.photon {
        PhotonSpec::Twisted { opening_angle, m_gamma, impact_parameter, .. } => {
            let p_zb = config.initial_momentum[2] + config.geometry.sign() * k * opening_angle.cos();
            Ok(CmState::Twisted(CmTwistedState {
                energy: config.final_energy(omega),
                p_zb,
                kappa: k * opening_angle.sin(),
                tam_projection: m_a + m_gamma - m_b,
                tilt: config.tilt(),
                impact_parameter,
                amplitude_scale: calc.rotated_amplitude(m_b, m_a, opening_angle)?,
                photon_energy: omega,
                photon_opening_angle: opening_angle,
                m_gamma,
                m_a,
                m_b,
            }))
        }
        PhotonSpec::PlaneWave { theta, phi, .. } => {
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            let momentum = [0, 1, 2].map(|i| config.initial_momentum[i] + k * n[i]);
            Ok(CmState::PlaneWave(CmPlaneWaveState {
                energy: config.final_energy(omega),
                momentum,
                kappa: momentum[0].hypot(momentum[1]),
                amplitude: calc.plane_wave_matrix_element(m_b, m_a, theta, phi)?,
                photon_energy: omega,
            }))
        }
    }
}

/// Samples the twisted CM state on a transverse window at Z = 0.
pub fn evaluate_cm_grid(state: &CmTwistedState, window: GridWindow) -> ComplexGrid {
    ComplexGrid::from_fn(window, 0.0, |x, y| state.value_at([x, y, 0.0]))
}

/// Outcome of the infinite-mass channel test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelOutcome {
    pub allowed: bool,
    pub amplitude: Complex64,
}

/// Infinitely heavy atom: the CM cannot take angular momentum, so only
/// Δm = m_b − m_a = m_γ is absorbed, with amplitude M̃_{m_b m_a}(θ_k).
pub fn infinite_mass_channel(
    channel: &TransitionChannel,
    m_gamma: i32,
    m_a: i32,
    m_b: i32,
    theta_k: f64,
) -> Result<ChannelOutcome> {
    if m_gamma != m_b - m_a {
        return Ok(ChannelOutcome { allowed: false, amplitude: Complex64::new(0.0, 0.0) });
    }
    let amplitude = MatrixElementCalculator::new(*channel)?.rotated_amplitude(m_b, m_a, theta_k)?;
    Ok(ChannelOutcome { allowed: true, amplitude })
}

/// CM grid produced by a general paraxial photon in collinear kinematics:
/// M̃_{m_b m_a}(θ_k) e^{iP_zb Z} T(R_⊥ − b), with T the photon's transverse integral.
pub fn paraxial_transfer(profile: &ParaxialProfile, config: &KinematicConfig, window: GridWindow) -> Result<ComplexGrid> {
    let PhotonSpec::Twisted { impact_parameter, .. } = config.photon else {
        return Err(Error::Configuration("paraxial transfer needs a twisted photon".into()));
    };
    if config.tilt() != [0.0, 0.0] {
        return Err(Error::Configuration("paraxial transfer needs collinear kinematics".into()));
    }
    let CmState::Twisted(state) = synthesize_cm_state(config)? else {
        unreachable!("twisted photon yields twisted state");
    };
    let scale = state.amplitude_scale;
    ComplexGrid::try_from_fn(window, 0.0, |x, y| {
        Ok(scale * profile.transverse_integral([x - impact_parameter[0], y - impact_parameter[1]])?)
    })
}

/// The twisted photon matching a solved configuration.
pub fn resonant_photon(config: &KinematicConfig) -> Result<TwistedPhoton> {
    let PhotonSpec::Twisted { opening_angle, m_gamma, helicity, impact_parameter } = config.photon else {
        return Err(Error::Configuration("configuration has a plane-wave photon".into()));
    };
    let omega = solve_resonance(config)?;
    Ok(TwistedPhoton::from_energy(omega, opening_angle, m_gamma, helicity)?.with_impact_parameter(impact_parameter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PROTON_MASS;

    fn config(mass: f64, p: [f64; 3], photon: PhotonSpec, geometry: Geometry) -> KinematicConfig {
        KinematicConfig {
            mass,
            initial_momentum: p,
            orbital_a: BoundOrbital::new(1, 1, 0, 0).unwrap(),
            orbital_b: BoundOrbital::new(1, 2, 1, 1).unwrap(),
            photon,
            geometry,
            final_level_shift: 0.0,
        }
    }

    fn twisted(m_gamma: i32) -> PhotonSpec {
        PhotonSpec::Twisted {
            opening_angle: 0.2,
            m_gamma,
            helicity: Helicity::Positive,
            impact_parameter: [0.0, 0.0],
        }
    }

    #[test]
    fn heavy_atom_has_no_recoil() {
        let c = config(1e12, [0.0; 3], twisted(1), Geometry::CounterPropagating);
        assert!((solve_resonance(&c).unwrap() - 0.375).abs() < 1e-12);
    }

    #[test]
    fn recoil_shift_matches_one_newton_step() {
        let plane = PhotonSpec::PlaneWave { theta: 0.0, phi: 0.0, helicity: Helicity::Positive };
        let c = config(1836.0, [0.0; 3], plane, Geometry::CounterPropagating);
        let omega = solve_resonance(&c).unwrap();
        let shift = omega - 0.375;
        assert!(shift > 0.0 && shift < 1e-8);
        // f(ω) = ω − 3/8 − (ωα)²/2M; one Newton step from 3/8.
        let m = 1836.0;
        let f = |w: f64| w - 0.375 - (w * ALPHA).powi(2) / (2.0 * m);
        let df = |w: f64| 1.0 - w * ALPHA * ALPHA / m;
        let newton = 0.375 - f(0.375) / df(0.375);
        assert!((omega - newton).abs() < 1e-15);
    }

    #[test]
    fn tam_bookkeeping() {
        for (m_gamma, m_b, nu) in [(4, 1, 3), (1, 1, 0), (-2, -1, -1)] {
            let mut c = config(PROTON_MASS, [0.0, 0.0, 1.0], twisted(m_gamma), Geometry::CounterPropagating);
            c.orbital_b = c.orbital_b.with_m(m_b).unwrap();
            let CmState::Twisted(s) = synthesize_cm_state(&c).unwrap() else { panic!() };
            assert_eq!(s.tam_projection, nu);
            assert_eq!((s.m_b - s.m_a) + s.tam_projection, m_gamma);
            let e = (s.p_zb * s.p_zb + s.kappa * s.kappa) / (2.0 * PROTON_MASS);
            assert!((s.energy - e).abs() < 1e-15 * e.max(1.0));
        }
    }

    #[test]
    fn plane_wave_momentum_is_additive() {
        let plane = PhotonSpec::PlaneWave { theta: 0.7, phi: -1.2, helicity: Helicity::Negative };
        let p = [0.3, -2.0, 5.0];
        let c = config(PROTON_MASS, p, plane, Geometry::CounterPropagating);
        let omega = solve_resonance(&c).unwrap();
        let CmState::PlaneWave(s) = synthesize_cm_state(&c).unwrap() else { panic!() };
        let k = omega * ALPHA;
        let n = [0.7f64.sin() * (-1.2f64).cos(), 0.7f64.sin() * (-1.2f64).sin(), 0.7f64.cos()];
        for i in 0..3 {
            assert_eq!(s.momentum[i], p[i] + k * n[i]);
        }
    }

    #[test]
    fn cm_grid_values() {
        let c = config(PROTON_MASS, [0.0; 3], twisted(1), Geometry::CounterPropagating);
        let CmState::Twisted(s) = synthesize_cm_state(&c).unwrap() else { panic!() };
        assert_eq!(s.tam_projection, 0);
        let v = s.value_at([0.0, 0.0, 0.0]);
        assert!((v - Complex64::new((s.kappa / (2.0 * PI)).sqrt(), 0.0)).norm() < 1e-15);
        let mut s3 = s;
        s3.tam_projection = 3;
        assert_eq!(s3.value_at([0.0, 0.0, 0.0]).norm(), 0.0);
    }

    #[test]
    fn infinite_mass_rule() {
        let a = BoundOrbital::new(1, 1, 0, 0).unwrap();
        let b = BoundOrbital::new(1, 2, 1, 0).unwrap();
        let ch = TransitionChannel::new(a, b, Helicity::Positive, 0.375).unwrap();
        assert!(infinite_mass_channel(&ch, 1, 0, 1, 0.2).unwrap().allowed);
        assert!(!infinite_mass_channel(&ch, 2, 0, 1, 0.2).unwrap().allowed);
        let zero = infinite_mass_channel(&ch, 0, 0, 0, 0.2).unwrap();
        assert!(zero.allowed && zero.amplitude.norm() > 0.0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = config(0.0, [0.0; 3], twisted(1), Geometry::CounterPropagating);
        assert!(matches!(solve_resonance(&c), Err(Error::Configuration(_))));
        c.mass = PROTON_MASS;
        c.photon = PhotonSpec::Twisted {
            opening_angle: 1.7,
            m_gamma: 1,
            helicity: Helicity::Positive,
            impact_parameter: [0.0; 2],
        };
        assert!(solve_resonance(&c).is_err());
    }

    #[test]
    fn downward_transition_without_photon_is_kinematics_error() {
        let mut c = config(PROTON_MASS, [0.0; 3], twisted(1), Geometry::CounterPropagating);
        std::mem::swap(&mut c.orbital_a, &mut c.orbital_b);
        assert!(matches!(solve_resonance(&c), Err(Error::Kinematics(_))));
    }
}
