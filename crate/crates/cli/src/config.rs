//! Run configuration: a flat TOML key-value file, overridden by flags.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use twisted_atoms::cmstate::{Geometry, KinematicConfig, PhotonSpec};
use twisted_atoms::constants::PROTON_MASS;
use twisted_atoms::hydrogenic::BoundOrbital;
use twisted_atoms::photon::Helicity;
use twisted_atoms::scenarios::{ZeemanSetting, DEFAULT_LINEWIDTH};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub z: u32,
    pub n_a: u32,
    pub l_a: u32,
    pub m_a: i32,
    pub n_b: u32,
    pub l_b: u32,
    pub m_b: i32,
    pub helicity: i32,
    pub m_gamma: i32,
    pub theta_k: f64,
    pub geometry: Geometry,
    pub impact_b: [f64; 2],
    pub tilt: [f64; 2],
    pub mass: f64,
    pub p_za: f64,
    /// Plane-wave direction for the baseline.
    pub plane_theta: f64,
    pub plane_phi: f64,
    pub points: usize,
    pub theta_max: f64,
    pub grid_points: usize,
    /// CM window width in units of 1/κ.
    pub window: f64,
    /// Photon-field window width in units of 1/κ.
    pub photon_window: f64,
    pub field_strength: f64,
    pub g_factor: f64,
    pub linewidth: f64,
    /// Sublevel the photon is tuned to when no photon energy is given.
    pub tune_m_b: i32,
    pub photon_energy: Option<f64>,
    pub infinite_mass: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            z: 1,
            n_a: 1,
            l_a: 0,
            m_a: 0,
            n_b: 2,
            l_b: 1,
            m_b: 1,
            helicity: 1,
            m_gamma: 4,
            theta_k: 0.2,
            geometry: Geometry::CounterPropagating,
            impact_b: [0.0, 0.0],
            tilt: [0.0, 0.0],
            mass: PROTON_MASS,
            p_za: 0.0,
            plane_theta: 0.0,
            plane_phi: 0.0,
            points: 141,
            theta_max: 1.4,
            grid_points: 257,
            window: 12.0,
            photon_window: 20.0,
            field_strength: 1e-6,
            g_factor: 1.0,
            linewidth: DEFAULT_LINEWIDTH,
            tune_m_b: 1,
            photon_energy: None,
            infinite_mass: false,
            seed: 0,
        }
    }
}

fn field_error(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field `{field}`: {msg}"))
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Checks every field so errors name the offending key.
    pub fn validate(&self) -> CliResult<()> {
        self.orbital_a()?;
        self.orbital_b()?;
        self.helicity()?;
        if !(self.theta_k > 0.0 && self.theta_k < 0.5 * PI) {
            return Err(field_error("theta_k", "must lie in (0, pi/2)"));
        }
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return Err(field_error("mass", "must be positive"));
        }
        for (name, v) in [("impact_b", self.impact_b), ("tilt", self.tilt)] {
            if v.iter().any(|c| !c.is_finite()) {
                return Err(field_error(name, "must be finite"));
            }
        }
        if !self.p_za.is_finite() {
            return Err(field_error("p_za", "must be finite"));
        }
        if !(0.0..=PI).contains(&self.plane_theta) {
            return Err(field_error("plane_theta", "must lie in [0, pi]"));
        }
        if !self.plane_phi.is_finite() {
            return Err(field_error("plane_phi", "must be finite"));
        }
        if self.points == 0 {
            return Err(field_error("points", "must be at least 1"));
        }
        if !(0.0..0.5 * PI).contains(&self.theta_max) {
            return Err(field_error("theta_max", "must lie in [0, pi/2)"));
        }
        if self.points == 1 && self.theta_max != 0.0 {
            return Err(field_error("points", "a single point needs theta_max = 0"));
        }
        if self.grid_points < 5 {
            return Err(field_error("grid_points", "must be at least 5"));
        }
        for (name, v) in [("window", self.window), ("photon_window", self.photon_window)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(field_error(name, "must be positive"));
            }
        }
        self.zeeman()?;
        if let Some(w) = self.photon_energy {
            if !(w > 0.0) || !w.is_finite() {
                return Err(field_error("photon_energy", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn orbital_a(&self) -> CliResult<BoundOrbital> {
        BoundOrbital::new(self.z, self.n_a, self.l_a, self.m_a).map_err(|e| field_error("n_a/l_a/m_a", e))
    }

    pub fn orbital_b(&self) -> CliResult<BoundOrbital> {
        BoundOrbital::new(self.z, self.n_b, self.l_b, self.m_b).map_err(|e| field_error("n_b/l_b/m_b", e))
    }

    pub fn helicity(&self) -> CliResult<Helicity> {
        Helicity::try_from(self.helicity).map_err(|e| field_error("helicity", e))
    }

    pub fn zeeman(&self) -> CliResult<ZeemanSetting> {
        ZeemanSetting::new(self.field_strength, self.g_factor, self.linewidth)
            .map_err(|e| field_error("field_strength/g_factor/linewidth", e))
    }

    pub fn twisted_kinematics(&self) -> CliResult<KinematicConfig> {
        Ok(KinematicConfig {
            mass: self.mass,
            initial_momentum: [self.tilt[0], self.tilt[1], self.p_za],
            orbital_a: self.orbital_a()?,
            orbital_b: self.orbital_b()?,
            photon: PhotonSpec::Twisted {
                opening_angle: self.theta_k,
                m_gamma: self.m_gamma,
                helicity: self.helicity()?,
                impact_parameter: self.impact_b,
            },
            geometry: self.geometry,
            final_level_shift: 0.0,
        })
    }

    pub fn plane_wave_kinematics(&self) -> CliResult<KinematicConfig> {
        Ok(KinematicConfig {
            photon: PhotonSpec::PlaneWave {
                theta: self.plane_theta,
                phi: self.plane_phi,
                helicity: self.helicity()?,
            },
            ..self.twisted_kinematics()?
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = toml::from_str::<RunConfig>("m_gamma = 2\nbogus = 1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c: RunConfig = toml::from_str("m_gamma = 2\ngeometry = \"co-propagating\"\n").unwrap();
        assert_eq!(c.m_gamma, 2);
        assert_eq!(c.geometry, Geometry::CoPropagating);
        assert_eq!(c.theta_k, 0.2);
    }

    #[test]
    fn invalid_fields_are_named() {
        let c = RunConfig { helicity: 0, ..RunConfig::default() };
        assert!(c.validate().unwrap_err().to_string().contains("`helicity`"));
        let c = RunConfig { l_b: 2, n_b: 2, ..RunConfig::default() };
        assert!(c.validate().unwrap_err().to_string().contains("n_b/l_b/m_b"));
    }
}
