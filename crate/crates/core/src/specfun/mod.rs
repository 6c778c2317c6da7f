//! Special functions: Wigner small-d matrices, Bessel functions, spherical
//! harmonics and coupling coefficients, and Gaussian quadrature rules.
//!
//! Spherical harmonics use the Condon-Shortley phase throughout.

mod bessel;
mod factorial;
mod harmonics;
pub mod quadrature;
pub(crate) mod wigner;

pub use bessel::{bessel_j, spherical_bessel_j};
pub use factorial::{factorial, ln_factorial};
pub use harmonics::{
    associated_legendre, clebsch_gordan, gaunt_coefficient, spherical_harmonic, wigner_3j,
};
pub use quadrature::{build_quadrature, QuadratureKind, QuadratureRule, SphericalProductRule};
pub use wigner::{wigner_d_matrix, wigner_small_d, WignerIndex, MAX_WIGNER_L};
