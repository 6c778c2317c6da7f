//! Physical constants. Only the fine-structure constant enters the physics;
//! the SI factors are used for human-readable reports.

/// Fine-structure constant (CODATA 2018).
pub const ALPHA: f64 = 7.297_352_5693e-3;

/// Speed of light in atomic units.
pub const SPEED_OF_LIGHT: f64 = 1.0 / ALPHA;

/// Proton mass in units of the electron mass (CODATA 2018).
pub const PROTON_MASS: f64 = 1836.152_673_43;

pub const HARTREE_IN_EV: f64 = 27.211_386_245_988;
pub const BOHR_IN_METERS: f64 = 5.291_772_109_03e-11;
pub const MOMENTUM_AU_IN_SI: f64 = 1.992_851_914_10e-24;
