//! Absorption of twisted (Bessel) photons by hydrogen-like atoms.
//!
//! The crate computes electronic transition amplitudes as a function of the
//! photon opening angle, synthesizes the twisted center-of-mass state of the
//! excited atom, and provides the numerical machinery (special functions,
//! quadrature, winding-number extraction) needed to check how the photon's
//! transverse structure and angular momentum end up in the atom.
//!
//! Everything is expressed in Hartree atomic units: ħ = mₑ = e = 1, lengths in
//! Bohr, energies in Hartree, c = 1/α.

pub mod cmstate;
pub mod constants;
pub mod error;
pub mod grid;
pub mod hydrogenic;
pub mod matrixel;
pub mod photon;
pub mod scenarios;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
