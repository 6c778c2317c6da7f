//! Photon wavefunctions: plane waves, twisted Bessel modes (closed Bessel
//! form and plane-wave superposition) and general paraxial profiles.
//!
//! Both twisted-mode representations carry the same normalization
//! √(κ/2π) and phase convention, so they agree pointwise.

mod paraxial;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::ALPHA;
use crate::error::{Error, Result};
use crate::specfun::{bessel_j, wigner::small_d_unchecked};

pub use paraxial::{paraxial_field, ParaxialProfile, ProfileLabel, Support};

/// Complex 3-vector in Cartesian components.
pub type VectorField = [Complex64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Helicity {
    Positive,
    Negative,
}

impl Helicity {
    pub fn value(self) -> i32 {
        match self {
            Helicity::Positive => 1,
            Helicity::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Positive => Helicity::Negative,
            Helicity::Negative => Helicity::Positive,
        }
    }
}

impl TryFrom<i32> for Helicity {
    type Error = Error;

    fn try_from(value: i32) -> Result<Self> {
        match value {
            1 => Ok(Helicity::Positive),
            -1 => Ok(Helicity::Negative),
            other => Err(Error::domain(format!("helicity must be +1 or -1, got {other}"))),
        }
    }
}

/// i^n for integer n.
pub(crate) fn i_pow(n: i32) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Eigenvector χ_σ of the spin projection s_z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinVector {
    pub sigma: i32,
    pub components: VectorField,
}

pub fn spin_vector(sigma: i32) -> Result<SpinVector> {
    let s = FRAC_1_SQRT_2;
    let components = match sigma {
        1 => [Complex64::new(-s, 0.0), Complex64::new(0.0, -s), Complex64::new(0.0, 0.0)],
        -1 => [Complex64::new(s, 0.0), Complex64::new(0.0, -s), Complex64::new(0.0, 0.0)],
        0 => [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        other => return Err(Error::domain(format!("spin projection must be -1, 0 or 1, got {other}"))),
    };
    Ok(SpinVector { sigma, components })
}

fn chi(sigma: i32) -> VectorField {
    spin_vector(sigma).expect("sigma in {-1, 0, 1}").components
}

/// Helicity-Λ polarization vector for a wave vector at polar angle θ and
/// azimuth φ: the spin vector χ_Λ rotated by R_z(φ)R_y(θ),
/// ε = Σ_σ e^{-iσφ} d¹_{σΛ}(θ) χ_σ.
pub fn polarization_vector(theta_k: f64, phi_k: f64, helicity: Helicity) -> Result<VectorField> {
    if !theta_k.is_finite() || !(0.0..=PI).contains(&theta_k) || !phi_k.is_finite() {
        return Err(Error::domain(format!("polarization angles ({theta_k}, {phi_k}) out of range")));
    }
    let lambda = helicity.value();
    let mut eps = [Complex64::new(0.0, 0.0); 3];
    for sigma in -1..=1 {
        let coeff = Complex64::from_polar(small_d_unchecked(1, sigma, lambda, theta_k), -sigma as f64 * phi_k);
        for (e, c) in eps.iter_mut().zip(chi(sigma)) {
            *e += c * coeff;
        }
    }
    Ok(eps)
}

fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Monochromatic plane-wave photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWavePhoton {
    pub wave_vector: [f64; 3],
    pub helicity: Helicity,
    pub energy: f64,
    pub theta: f64,
    pub phi: f64,
}

impl PlaneWavePhoton {
    /// |k| = ω/c along the direction (θ, φ).
    pub fn new(energy: f64, theta: f64, phi: f64, helicity: Helicity) -> Result<Self> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::domain(format!("photon energy must be positive, got {energy}")));
        }
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::domain("plane-wave direction out of range"));
        }
        let k = energy * ALPHA;
        let wave_vector = unit_vector(theta, phi).map(|c| c * k);
        Ok(Self { wave_vector, helicity, energy, theta, phi })
    }

    pub fn polarization(&self) -> VectorField {
        polarization_vector(self.theta, self.phi, self.helicity).expect("validated angles")
    }

    /// ε e^{ik·r}/√(2ω).
    pub fn field(&self, point: [f64; 3]) -> VectorField {
        let phase: f64 = self.wave_vector.iter().zip(point).map(|(k, r)| k * r).sum();
        let factor = Complex64::from_polar(1.0 / (2.0 * self.energy).sqrt(), phase);
        self.polarization().map(|e| e * factor)
    }
}

/// Twisted (Bessel) photon with definite k_z, |k_⊥| = κ, TAM projection
/// m_γ and helicity Λ, optionally displaced by an impact parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistedPhoton {
    pub k_z: f64,
    pub kappa: f64,
    pub m_gamma: i32,
    pub helicity: Helicity,
    pub impact_parameter: [f64; 2],
}

impl TwistedPhoton {
    pub fn new(k_z: f64, kappa: f64, m_gamma: i32, helicity: Helicity) -> Result<Self> {
        if !(kappa > 0.0) || !(k_z > 0.0) || !kappa.is_finite() || !k_z.is_finite() {
            return Err(Error::domain(format!(
                "twisted photon needs k_z > 0 and kappa > 0, got ({k_z}, {kappa})"
            )));
        }
        Ok(Self { k_z, kappa, m_gamma, helicity, impact_parameter: [0.0, 0.0] })
    }

    /// Photon of energy ω with opening angle θ_k ∈ (0, π/2).
    pub fn from_energy(energy: f64, opening_angle: f64, m_gamma: i32, helicity: Helicity) -> Result<Self> {
        if !(opening_angle > 0.0 && opening_angle < 0.5 * PI) {
            return Err(Error::domain(format!("opening angle {opening_angle} outside (0, pi/2)")));
        }
        if !(energy > 0.0) {
            return Err(Error::domain(format!("photon energy must be positive, got {energy}")));
        }
        let k = energy * ALPHA;
        Self::new(k * opening_angle.cos(), k * opening_angle.sin(), m_gamma, helicity)
    }

    pub fn with_impact_parameter(mut self, b: [f64; 2]) -> Self {
        self.impact_parameter = b;
        self
    }

    /// θ_k = arctan(κ/k_z).
    pub fn opening_angle(&self) -> f64 {
        self.kappa.atan2(self.k_z)
    }

    pub fn momentum(&self) -> f64 {
        self.k_z.hypot(self.kappa)
    }

    pub fn energy(&self) -> f64 {
        self.momentum() / ALPHA
    }

    /// Common amplitude √(κ/2π) of both mode representations.
    pub fn normalization(&self) -> f64 {
        (self.kappa / (2.0 * PI)).sqrt()
    }

    fn local(&self, point: [f64; 3]) -> [f64; 3] {
        [point[0] - self.impact_parameter[0], point[1] - self.impact_parameter[1], point[2]]
    }
}

/// Closed Bessel form of the twisted mode,
/// A = √(κ/2π) e^{ik_z z} Σ_σ i^{-σ} d¹_{σΛ}(θ_k) J_{m_γ−σ}(κρ) e^{i(m_γ−σ)φ} χ_σ,
/// with (ρ, φ) measured from the beam axis at the impact parameter.
pub fn bessel_mode_field(photon: &TwistedPhoton, point: [f64; 3]) -> VectorField {
    let [x, y, z] = photon.local(point);
    let rho = x.hypot(y);
    let phi = y.atan2(x);
    let theta = photon.opening_angle();
    let lambda = photon.helicity.value();
    let overall = Complex64::from_polar(photon.normalization(), photon.k_z * z);
    let mut field = [Complex64::new(0.0, 0.0); 3];
    for sigma in -1..=1 {
        let order = photon.m_gamma - sigma;
        let radial = bessel_j(order, photon.kappa * rho).expect("finite argument");
        let coeff = i_pow(-sigma)
            * small_d_unchecked(1, sigma, lambda, theta)
            * radial
            * Complex64::from_polar(1.0, order as f64 * phi)
            * overall;
        for (f, c) in field.iter_mut().zip(chi(sigma)) {
            *f += c * coeff;
        }
    }
    field
}

const MAX_AZIMUTHAL_NODES: usize = 1 << 14;

/// Twisted mode as the plane-wave superposition
/// ∫ ε_{kΛ} e^{ik·r} a_{κ,m_γ}(k_⊥) d²k_⊥/(2π)², whose radial δ leaves an
/// azimuthal integral evaluated by the trapezoid rule with doubling.
pub fn plane_wave_superposition_field(photon: &TwistedPhoton, point: [f64; 3]) -> Result<VectorField> {
    let [x, y, z] = photon.local(point);
    let theta = photon.opening_angle();
    let m = photon.m_gamma;
    let prefactor = i_pow(-m) * photon.normalization() * Complex64::from_polar(1.0, photon.k_z * z);
    let average = |n: usize| -> VectorField {
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for j in 0..n {
            let phi_k = 2.0 * PI * j as f64 / n as f64;
            let eps = polarization_vector(theta, phi_k, photon.helicity).expect("valid angles");
            let phase = m as f64 * phi_k + photon.kappa * (phi_k.cos() * x + phi_k.sin() * y);
            let w = Complex64::from_polar(1.0, phase);
            for (a, e) in acc.iter_mut().zip(eps) {
                *a += e * w;
            }
        }
        acc.map(|a| a * prefactor / n as f64)
    };
    let mut n = 8 * (m.unsigned_abs() as usize + 2);
    let mut previous = average(n);
    let tolerance = 1e-8 * photon.normalization();
    while n < MAX_AZIMUTHAL_NODES {
        n *= 2;
        let current = average(n);
        let diff = current.iter().zip(&previous).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if diff <= tolerance {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NonConvergence(format!(
        "azimuthal superposition did not converge with {MAX_AZIMUTHAL_NODES} nodes"
    )))
}
