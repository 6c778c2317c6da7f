//! Experiment-level runs: Zeeman selection of a single excitation channel,
//! the normalized-amplitude sweep for 1s→2p, and the plane-wave baseline.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmstate::{solve_resonance, synthesize_cm_state, CmState, KinematicConfig, PhotonSpec};
use crate::error::{Error, Result};
use crate::hydrogenic::BoundOrbital;
use crate::matrixel::{MatrixElementCalculator, NormalizedSweep, TransitionChannel};
use crate::photon::Helicity;

pub const DEFAULT_LINEWIDTH: f64 = 1e-9;

/// Uniform magnetic field along the beam with a linear Zeeman shift
/// g·B·m of each final sublevel (B in units where μ_B B is an energy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeemanSetting {
    pub field_strength: f64,
    pub g_factor: f64,
    /// Half-width of the resonance acceptance window, Hartree.
    pub linewidth: f64,
}

impl ZeemanSetting {
    pub fn new(field_strength: f64, g_factor: f64, linewidth: f64) -> Result<Self> {
        if !(field_strength >= 0.0) || !field_strength.is_finite() {
            return Err(Error::Configuration(format!("field strength must be >= 0, got {field_strength}")));
        }
        if !(linewidth > 0.0) || !linewidth.is_finite() || !g_factor.is_finite() {
            return Err(Error::Configuration(format!("linewidth must be > 0, got {linewidth}")));
        }
        Ok(Self { field_strength, g_factor, linewidth })
    }

    pub fn with_field(field_strength: f64) -> Result<Self> {
        Self::new(field_strength, 1.0, DEFAULT_LINEWIDTH)
    }

    pub fn splitting(&self) -> f64 {
        self.g_factor * self.field_strength
    }

    pub fn shift(&self, m: i32) -> f64 {
        self.splitting() * m as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeemanChannel {
    pub m_b: i32,
    pub resonance: f64,
    /// Resonance energy minus photon energy.
    pub detuning: f64,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeemanReport {
    pub selected_m_b: i32,
    pub m_a: i32,
    pub m_gamma: i32,
    pub cm_tam: i32,
    pub photon_energy: f64,
    pub channels: Vec<ZeemanChannel>,
}

fn m_gamma_of(config: &KinematicConfig) -> Result<i32> {
    match config.photon {
        PhotonSpec::Twisted { m_gamma, .. } => Ok(m_gamma),
        PhotonSpec::PlaneWave { .. } => Err(Error::Configuration("Zeeman selection needs a twisted photon".into())),
    }
}

/// Resonant photon energy for the final sublevel m_b in the field.
pub fn tune_to_sublevel(setting: &ZeemanSetting, config: &KinematicConfig, m_b: i32) -> Result<f64> {
    let orbital_b = config.orbital_b.with_m(m_b).map_err(|e| Error::Configuration(e.to_string()))?;
    let shifted = KinematicConfig { orbital_b, final_level_shift: setting.shift(m_b), ..*config };
    solve_resonance(&shifted)
}

/// Finds the unique final sublevel resonant with the photon energy. The
/// final magnetic number of `config.orbital_b` is ignored.
pub fn zeeman_select(setting: &ZeemanSetting, config: &KinematicConfig, photon_energy: f64) -> Result<ZeemanReport> {
    let m_gamma = m_gamma_of(config)?;
    if setting.splitting() == 0.0 {
        return Err(Error::Unresolvable("sublevels are degenerate without a Zeeman splitting".into()));
    }
    let l_b = config.orbital_b.l() as i32;
    let channels = (-l_b..=l_b)
        .map(|m_b| {
            let resonance = tune_to_sublevel(setting, config, m_b)?;
            let detuning = resonance - photon_energy;
            Ok(ZeemanChannel { m_b, resonance, detuning, selected: detuning.abs() <= setting.linewidth })
        })
        .collect::<Result<Vec<_>>>()?;
    let hits: Vec<i32> = channels.iter().filter(|c| c.selected).map(|c| c.m_b).collect();
    let selected_m_b = match hits.as_slice() {
        [m] => *m,
        [] => {
            return Err(Error::SelectionAmbiguity(format!(
                "no sublevel within {:e} Hartree of the photon energy",
                setting.linewidth
            )))
        }
        many => {
            return Err(Error::SelectionAmbiguity(format!(
                "sublevels {many:?} all lie within the linewidth"
            )))
        }
    };
    let m_a = config.orbital_a.m();
    Ok(ZeemanReport {
        selected_m_b,
        m_a,
        m_gamma,
        cm_tam: m_gamma + m_a - selected_m_b,
        photon_energy,
        channels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure2Table {
    pub sweep: NormalizedSweep,
    /// First grid angle at which m_b = 1 is no longer strictly dominant.
    pub dominance_boundary: Option<f64>,
}

pub const FIGURE2_M_B: [i32; 3] = [1, 0, -1];

/// Normalized amplitudes |M̃_{m_b 0}(θ_k)/M̃_{10}(0)| for 1s→2p with Λ = +1,
/// on `points` equally spaced angles from 0 to `theta_max`.
pub fn figure2_run(points: usize, theta_max: f64) -> Result<Figure2Table> {
    if points == 0 {
        return Err(Error::Configuration("need at least one angle".into()));
    }
    if !(0.0..0.5 * PI).contains(&theta_max) {
        return Err(Error::Configuration(format!("theta_max {theta_max} outside [0, pi/2)")));
    }
    if points == 1 && theta_max != 0.0 {
        return Err(Error::Configuration("a single point requires theta_max = 0".into()));
    }
    let thetas: Vec<f64> = (0..points)
        .map(|j| if points == 1 { 0.0 } else { theta_max * j as f64 / (points - 1) as f64 })
        .collect();
    let a = BoundOrbital::new(1, 1, 0, 0)?;
    let b = BoundOrbital::new(1, 2, 1, 0)?;
    let channel = TransitionChannel::new(a, b, Helicity::Positive, b.energy() - a.energy())?;
    let sweep = MatrixElementCalculator::new(channel)?.normalized_amplitude_sweep(0, &FIGURE2_M_B, &thetas)?;
    let dominance_boundary = sweep
        .theta
        .iter()
        .zip(&sweep.magnitudes)
        .find(|(_, row)| !(row[0] > row[1] && row[0] > row[2]))
        .map(|(t, _)| *t);
    Ok(Figure2Table { sweep, dominance_boundary })
}

/// Plane-wave control: no twist, momentum P_a + k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub photon_energy: f64,
    pub momentum: [f64; 3],
    pub energy: f64,
    pub amplitude: Complex64,
}

pub fn baseline_plane_wave(config: &KinematicConfig) -> Result<BaselineReport> {
    if !matches!(config.photon, PhotonSpec::PlaneWave { .. }) {
        return Err(Error::Configuration("baseline needs a plane-wave photon".into()));
    }
    match synthesize_cm_state(config)? {
        CmState::PlaneWave(s) => Ok(BaselineReport {
            photon_energy: s.photon_energy,
            momentum: s.momentum,
            energy: s.energy,
            amplitude: s.amplitude,
        }),
        CmState::Twisted(_) => unreachable!("plane-wave photon yields plane-wave state"),
    }
}
