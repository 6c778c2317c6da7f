//! General paraxial profiles: the transverse structure is an arbitrary
//! momentum amplitude a(k_⊥), and the field is χ_Λ e^{ik_z z} T(r_⊥) with
//! T(r_⊥) = ∫ e^{ik_⊥·r_⊥} a(k_⊥) d²k_⊥/(2π)².

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{chi, i_pow, Helicity, TwistedPhoton, VectorField};
use crate::error::{Error, Result};
use crate::specfun::quadrature::cached_rule;
use crate::specfun::QuadratureKind;

/// Family a profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileLabel {
    Bessel,
    HermiteGauss,
    Airy,
    Custom,
}

/// Region of the k_⊥ plane carrying the amplitude, with its quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Monochromatic ring |k_⊥| = κ: a(k_⊥) = f(k_⊥) δ(|k_⊥| − κ).
    Ring { kappa: f64 },
    /// Disk |k_⊥| ≤ radius with Gauss-Legendre radial and trapezoid azimuthal nodes.
    Disk { radius: f64, radial_nodes: usize, angular_nodes: usize },
    /// Square |k_x|, |k_y| ≤ half_width with a Gauss-Legendre product rule.
    Square { half_width: f64, nodes: usize },
}

type AmplitudeFn = Arc<dyn Fn([f64; 2]) -> Complex64 + Send + Sync>;

/// A node of a 2D rule, with the amplitude and measure folded into `weight`.
#[derive(Debug, Clone, Copy)]
struct Node {
    k: [f64; 2],
    weight: Complex64,
}

#[derive(Clone)]
pub struct ParaxialProfile {
    label: ProfileLabel,
    support: Support,
    amplitude: AmplitudeFn,
    fine: Arc<[Node]>,
    coarse: Arc<[Node]>,
}

impl fmt::Debug for ParaxialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParaxialProfile")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

const RING_MAX_NODES: usize = 1 << 14;
const RING_TOLERANCE: f64 = 1e-12;
const DENSITY_TOLERANCE: f64 = 1e-7;
const EDGE_SAMPLES: usize = 64;

fn physicists_hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for j in 1..n {
        let next = 2.0 * x * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn density_nodes(support: Support, amplitude: &AmplitudeFn, coarse: bool) -> Result<Vec<Node>> {
    let halve = |n: usize| if coarse { (n / 2).max(2) } else { n };
    let norm = 1.0 / (4.0 * PI * PI);
    let mut nodes = Vec::new();
    match support {
        Support::Ring { .. } => {}
        Support::Disk { radius, radial_nodes, angular_nodes } => {
            let rule = cached_rule(QuadratureKind::Finite, halve(radial_nodes))?;
            let n_phi = halve(angular_nodes);
            let dphi = 2.0 * PI / n_phi as f64;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let k = 0.5 * radius * (t + 1.0);
                let wk = 0.5 * radius * w * k * dphi * norm;
                for j in 0..n_phi {
                    let (s, c) = (j as f64 * dphi).sin_cos();
                    let kv = [k * c, k * s];
                    nodes.push(Node { k: kv, weight: amplitude(kv) * wk });
                }
            }
        }
        Support::Square { half_width, nodes: n } => {
            let rule = cached_rule(QuadratureKind::Finite, halve(n))?;
            for (&tx, &wx) in rule.nodes.iter().zip(&rule.weights) {
                for (&ty, &wy) in rule.nodes.iter().zip(&rule.weights) {
                    let kv = [half_width * tx, half_width * ty];
                    let w = half_width * half_width * wx * wy * norm;
                    nodes.push(Node { k: kv, weight: amplitude(kv) * w });
                }
            }
        }
    }
    Ok(nodes)
}

fn validate_support(support: Support) -> Result<()> {
    let ok = match support {
        Support::Ring { kappa } => kappa > 0.0 && kappa.is_finite(),
        Support::Disk { radius, radial_nodes, angular_nodes } => {
            radius > 0.0 && radius.is_finite() && radial_nodes >= 2 && angular_nodes >= 2
        }
        Support::Square { half_width, nodes } => half_width > 0.0 && half_width.is_finite() && nodes >= 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("invalid profile support {support:?}")))
    }
}

/// Samples along the boundary of the support, used for the decay check.
fn edge_points(support: Support) -> Vec<[f64; 2]> {
    match support {
        Support::Ring { .. } => Vec::new(),
        Support::Disk { radius, .. } => (0..EDGE_SAMPLES)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / EDGE_SAMPLES as f64;
                [radius * phi.cos(), radius * phi.sin()]
            })
            .collect(),
        Support::Square { half_width: h, .. } => (0..EDGE_SAMPLES)
            .flat_map(|j| {
                let t = -h + 2.0 * h * j as f64 / EDGE_SAMPLES as f64;
                [[t, -h], [t, h], [-h, t], [h, t]]
            })
            .collect(),
    }
}

impl ParaxialProfile {
    /// Builds a profile and checks that the amplitude is square-integrable
    /// on its support and negligible at the support boundary.
    pub fn new<F>(label: ProfileLabel, support: Support, amplitude: F) -> Result<Self>
    where
        F: Fn([f64; 2]) -> Complex64 + Send + Sync + 'static,
    {
        validate_support(support)?;
        let amplitude: AmplitudeFn = Arc::new(amplitude);
        let fine = density_nodes(support, &amplitude, false)?;
        let coarse = density_nodes(support, &amplitude, true)?;
        let profile = Self { label, support, amplitude, fine: fine.into(), coarse: coarse.into() };
        profile.check_square_integrable()?;
        Ok(profile)
    }

    fn check_square_integrable(&self) -> Result<()> {
        if let Support::Ring { kappa } = self.support {
            let n = 256;
            let total: f64 = (0..n)
                .map(|j| {
                    let phi = 2.0 * PI * j as f64 / n as f64;
                    (self.amplitude)([kappa * phi.cos(), kappa * phi.sin()]).norm_sqr()
                })
                .sum();
            if !total.is_finite() {
                return Err(Error::domain("ring amplitude is not finite"));
            }
            return Ok(());
        }
        // |a|² integrated with both rules; node weights carry a·dμ, so recover dμ.
        let norm2 = |nodes: &[Node]| -> f64 {
            nodes
                .iter()
                .map(|n| {
                    let a = (self.amplitude)(n.k);
                    if a.norm() == 0.0 {
                        0.0
                    } else {
                        (n.weight / a).re * a.norm_sqr()
                    }
                })
                .sum()
        };
        let fine = norm2(&self.fine);
        let coarse = norm2(&self.coarse);
        if !fine.is_finite() || !coarse.is_finite() {
            return Err(Error::domain("profile amplitude is not square-integrable"));
        }
        if (fine - coarse).abs() > 1e-6 * fine.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NonConvergence(format!(
                "norm of profile amplitude unresolved on its support ({fine} vs {coarse})"
            )));
        }
        let peak = self.fine.iter().map(|n| (self.amplitude)(n.k).norm_sqr()).fold(0.0, f64::max);
        let edge = edge_points(self.support)
            .into_iter()
            .map(|k| (self.amplitude)(k).norm_sqr())
            .fold(0.0, f64::max);
        if edge > 1e-12 * peak {
            return Err(Error::domain(
                "profile amplitude does not decay at the boundary of its support",
            ));
        }
        Ok(())
    }

    /// Twisted Bessel profile of order ℓ on the ring |k_⊥| = κ:
    /// a = (−i)^ℓ e^{iℓφ_k} √(2π/κ) δ(k_⊥ − κ), so T = √(κ/2π) J_ℓ(κr) e^{iℓφ}.
    pub fn bessel(kappa: f64, order: i32) -> Result<Self> {
        let scale = i_pow(-order) * (2.0 * PI / kappa).sqrt();
        Self::new(ProfileLabel::Bessel, Support::Ring { kappa }, move |k| {
            scale * Complex64::from_polar(1.0, order as f64 * k[1].atan2(k[0]))
        })
    }

    /// Transverse part of the σ = Λ component of a twisted photon: the scalar
    /// multiplying χ_Λ in the closed Bessel form as θ_k → 0.
    pub fn from_twisted_photon(photon: &TwistedPhoton) -> Result<Self> {
        let order = photon.m_gamma - photon.helicity.value();
        let kappa = photon.kappa;
        let scale = i_pow(-photon.m_gamma) * (2.0 * PI / kappa).sqrt();
        Self::new(ProfileLabel::Bessel, Support::Ring { kappa }, move |k| {
            scale * Complex64::from_polar(1.0, order as f64 * k[1].atan2(k[0]))
        })
    }

    /// Hermite-Gauss mode HG_{nx,ny} of waist w, whose transverse field is
    /// proportional to H_nx(√2x/w) H_ny(√2y/w) e^{−r²/w²}.
    pub fn hermite_gauss(nx: u32, ny: u32, waist: f64) -> Result<Self> {
        if !(waist > 0.0) || !waist.is_finite() {
            return Err(Error::domain(format!("waist must be positive, got {waist}")));
        }
        let phase = i_pow(-((nx + ny) as i32));
        let order = (nx + ny) as usize;
        let support = Support::Disk {
            radius: (12.0 + 2.0 * order as f64) / waist,
            radial_nodes: 64 + 8 * order,
            angular_nodes: 64 + 8 * order,
        };
        let s = waist / 2f64.sqrt();
        Self::new(ProfileLabel::HermiteGauss, support, move |k| {
            let g = (-(k[0] * k[0] + k[1] * k[1]) * waist * waist / 4.0).exp();
            phase * physicists_hermite(nx, k[0] * s) * physicists_hermite(ny, k[1] * s) * g
        })
    }

    /// Gaussian a = e^{−k²w²/4}, giving T = e^{−r²/w²}/(πw²).
    pub fn gaussian(waist: f64) -> Result<Self> {
        Self::hermite_gauss(0, 0, waist)
    }

    /// Finite-energy Airy beam: a = e^{−k²w²} e^{i(k_x³ + k_y³)w³/3}.
    pub fn airy(waist: f64) -> Result<Self> {
        if !(waist > 0.0) || !waist.is_finite() {
            return Err(Error::domain(format!("waist must be positive, got {waist}")));
        }
        let support = Support::Square { half_width: 6.0 / waist, nodes: 96 };
        Self::new(ProfileLabel::Airy, support, move |k| {
            let (x, y) = (k[0] * waist, k[1] * waist);
            Complex64::from_polar((-(x * x + y * y)).exp(), (x * x * x + y * y * y) / 3.0)
        })
    }

    pub fn custom<F>(support: Support, amplitude: F) -> Result<Self>
    where
        F: Fn([f64; 2]) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(ProfileLabel::Custom, support, amplitude)
    }

    /// Identically vanishing profile.
    pub fn zero() -> Self {
        let support = Support::Square { half_width: 1.0, nodes: 2 };
        Self::custom(support, |_| Complex64::new(0.0, 0.0)).expect("zero profile is valid")
    }

    pub fn label(&self) -> ProfileLabel {
        self.label
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn amplitude(&self, k: [f64; 2]) -> Complex64 {
        (self.amplitude)(k)
    }

    /// T(r_⊥) = ∫ e^{ik_⊥·r_⊥} a(k_⊥) d²k_⊥/(2π)². Density supports compare
    /// the full rule with a half-resolution rule; a ring refines its
    /// azimuthal trapezoid rule until successive values agree.
    pub fn transverse_integral(&self, r: [f64; 2]) -> Result<Complex64> {
        match self.support {
            Support::Ring { kappa } => self.ring_integral(kappa, r),
            _ => {
                let sum = |nodes: &[Node]| -> (Complex64, f64) {
                    nodes.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(acc, l1), n| {
                        let phase = n.k[0] * r[0] + n.k[1] * r[1];
                        (acc + n.weight * Complex64::from_polar(1.0, phase), l1 + n.weight.norm())
                    })
                };
                let (fine, scale) = sum(&self.fine);
                let (coarse, _) = sum(&self.coarse);
                if (fine - coarse).norm() > DENSITY_TOLERANCE * scale {
                    return Err(Error::NonConvergence(format!(
                        "transverse integral unresolved at ({}, {})",
                        r[0], r[1]
                    )));
                }
                Ok(fine)
            }
        }
    }

    fn ring_integral(&self, kappa: f64, r: [f64; 2]) -> Result<Complex64> {
        let average = |n: usize| -> (Complex64, f64) {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut l1 = 0.0;
            for j in 0..n {
                let phi = 2.0 * PI * j as f64 / n as f64;
                let (s, c) = phi.sin_cos();
                let a = (self.amplitude)([kappa * c, kappa * s]);
                acc += a * Complex64::from_polar(1.0, kappa * (c * r[0] + s * r[1]));
                l1 += a.norm();
            }
            (acc / n as f64, l1 / n as f64)
        };
        // δ(k − κ) leaves κ dφ_k/(2π)².
        let measure = kappa / (2.0 * PI);
        let rho = r[0].hypot(r[1]);
        let mut n = 32usize;
        while (n as f64) < kappa * rho + 32.0 {
            n *= 2;
        }
        let (mut previous, scale) = average(n);
        while n < RING_MAX_NODES {
            n *= 2;
            let (current, _) = average(n);
            if (current - previous).norm() <= RING_TOLERANCE * scale {
                return Ok(current * measure);
            }
            previous = current;
        }
        Err(Error::NonConvergence(format!(
            "ring integral did not converge with {RING_MAX_NODES} nodes"
        )))
    }
}

/// Paraxial vector potential χ_Λ e^{ik_z z} T(r_⊥).
pub fn paraxial_field(
    profile: &ParaxialProfile,
    helicity: Helicity,
    k_z: f64,
    point: [f64; 3],
) -> Result<VectorField> {
    let t = profile.transverse_integral([point[0], point[1]])?;
    let factor = t * Complex64::from_polar(1.0, k_z * point[2]);
    Ok(chi(helicity.value()).map(|c| c * factor))
}
