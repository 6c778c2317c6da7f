//! Electronic transition matrix elements for photo-absorption.
//!
//! The collinear element M_{m_b' m_a'}(0,0) (photon along z) is computed by
//! partial waves: e^{ikz} is expanded in j_L(kr) Y_{L0}, the cyclic gradient
//! ∇_Λ φ_a is expanded in orbitals of angular momentum l_a ± 1, and the
//! angular integrals reduce to Gaunt coefficients. Oblique photons follow by
//! Wigner rotation of the two orbitals.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::ALPHA;
use crate::error::{Error, Result};
use crate::hydrogenic::{converged_radial_integral, BoundOrbital};
use crate::photon::{i_pow, Helicity};
use crate::specfun::wigner::small_d_unchecked;
use crate::specfun::{clebsch_gordan, gaunt_coefficient, spherical_bessel_j};

pub const DEFAULT_L_MAX: u32 = 8;
pub const MAX_L_MAX: u32 = 40;
const TAIL_TOLERANCE: f64 = 1e-12;

/// Initial and final orbitals, photon helicity and photon energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionChannel {
    pub orbital_a: BoundOrbital,
    pub orbital_b: BoundOrbital,
    pub helicity: Helicity,
    pub photon_energy: f64,
}

impl TransitionChannel {
    pub fn new(
        orbital_a: BoundOrbital,
        orbital_b: BoundOrbital,
        helicity: Helicity,
        photon_energy: f64,
    ) -> Result<Self> {
        if orbital_a.z() != orbital_b.z() {
            return Err(Error::domain("initial and final orbitals have different Z"));
        }
        if !(photon_energy > 0.0) || !photon_energy.is_finite() {
            return Err(Error::domain(format!("photon energy must be positive, got {photon_energy}")));
        }
        Ok(Self { orbital_a, orbital_b, helicity, photon_energy })
    }

    /// Photon momentum k = ω/c.
    pub fn photon_momentum(&self) -> f64 {
        self.photon_energy * ALPHA
    }

    /// 2πi/√(2ω) in atomic units (e = m = 1).
    pub fn prefactor(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * PI / (2.0 * self.photon_energy).sqrt())
    }

    pub fn with_helicity(&self, helicity: Helicity) -> Self {
        Self { helicity, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmplitudeForm {
    Collinear,
    Rotated,
    PlaneWave,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionAmplitude {
    pub value: Complex64,
    pub m_b: i32,
    pub m_a: i32,
    pub theta_k: f64,
    pub form: AmplitudeForm,
}

/// Coefficients of ∇_μ[R Y_{lm}] on the l+1 and l−1 partial waves.
fn gradient_coefficient(l: i32, l_prime: i32) -> f64 {
    if l_prime == l + 1 {
        ((l + 1) as f64 / (2 * l + 3) as f64).sqrt()
    } else if l > 0 {
        -(l as f64 / (2 * l - 1) as f64).sqrt()
    } else {
        0.0
    }
}

/// Radial integral ∫ r² R_b j_L(kr) D R_a dr, where D R_a is the radial
/// function of the l' = l_a ± 1 part of ∇R_a Y.
fn radial_integral(a: &BoundOrbital, b: &BoundOrbital, big_l: u32, l_prime: i32, k: f64) -> Result<f64> {
    let la = a.l() as f64;
    let (da, db) = (a.decay(), b.decay());
    converged_radial_integral(da + db, |r| {
        let (ua, dua) = a.radial_reduced(r);
        let (ub, _) = b.radial_reduced(r);
        let derivative = dua - da * ua;
        let d_ra = if l_prime as f64 == la + 1.0 {
            derivative - la * ua / r
        } else {
            derivative + (la + 1.0) * ua / r
        };
        let j = spherical_bessel_j(big_l, k * r).expect("finite argument");
        r * r * ub * j * d_ra
    })
}

/// Collinear matrix elements of one channel, computed once and kept
/// read-only. Cheap to clone.
#[derive(Debug, Clone)]
pub struct MatrixElementCalculator {
    channel: TransitionChannel,
    l_max: u32,
    /// M_{m_b' m_a'}(0,0) at [(m_b'+l_b)*(2l_a+1) + m_a'+l_a].
    collinear: Arc<[Complex64]>,
}

impl MatrixElementCalculator {
    pub fn new(channel: TransitionChannel) -> Result<Self> {
        Self::with_l_max(channel, DEFAULT_L_MAX)
    }

    /// Partial-wave sum truncated at L_max ≤ 40.
    pub fn with_l_max(channel: TransitionChannel, l_max: u32) -> Result<Self> {
        if l_max > MAX_L_MAX {
            return Err(Error::domain(format!("L_max = {l_max} exceeds {MAX_L_MAX}")));
        }
        let (a, b) = (channel.orbital_a, channel.orbital_b);
        let (la, lb) = (a.l() as i32, b.l() as i32);
        let lambda = channel.helicity.value();
        let k = channel.photon_momentum();

        // Radial integrals per (L, l'); the Gaunt triangle ends the L sum at l_b + l_a + 1.
        let l_top = (la + lb + 1) as u32;
        let l_stop = l_top.min(l_max);
        let mut radial = Vec::new();
        for big_l in 0..=l_stop {
            for l_prime in [la - 1, la + 1] {
                if l_prime < 0 || gradient_coefficient(la, l_prime) == 0.0 {
                    continue;
                }
                let lo = (lb - l_prime).unsigned_abs();
                if big_l < lo || big_l > (lb + l_prime) as u32 || (big_l as i32 + lb + l_prime) % 2 == 1 {
                    continue;
                }
                radial.push((big_l, l_prime, radial_integral(&a, &b, big_l, l_prime, k)?));
            }
        }

        let prefactor = channel.prefactor() * Complex64::new(0.0, -1.0);
        let width_a = (2 * la + 1) as usize;
        let mut collinear = vec![Complex64::new(0.0, 0.0); width_a * (2 * lb + 1) as usize];
        let mut worst_tail = 0.0f64;
        for ma in -la..=la {
            let mb = ma + lambda;
            if mb.abs() > lb {
                continue;
            }
            let mut total = Complex64::new(0.0, 0.0);
            let mut last = Complex64::new(0.0, 0.0);
            for big_l in 0..=l_stop {
                let mut term = Complex64::new(0.0, 0.0);
                for &(_, l_prime, integral) in radial.iter().filter(|(l, _, _)| *l == big_l) {
                    if mb.abs() > l_prime {
                        continue;
                    }
                    let angular = gradient_coefficient(la, l_prime)
                        * clebsch_gordan(la, ma, 1, lambda, l_prime, mb)
                        * if mb % 2 == 0 { 1.0 } else { -1.0 }
                        * gaunt_coefficient(lb, -mb, big_l as i32, 0, l_prime, mb)?;
                    term += i_pow(big_l as i32)
                        * (4.0 * PI * (2 * big_l + 1) as f64).sqrt()
                        * angular
                        * integral;
                }
                total += term;
                last = term;
            }
            if l_top > l_stop && total.norm() > 0.0 {
                worst_tail = worst_tail.max(last.norm() / total.norm());
            }
            let idx = ((mb + lb) as usize) * width_a + (ma + la) as usize;
            collinear[idx] = prefactor * total;
        }
        if worst_tail > TAIL_TOLERANCE {
            return Err(Error::NonConvergence(format!(
                "partial-wave sum not converged at L_max = {l_max} (last term ratio {worst_tail:e})"
            )));
        }
        Ok(Self { channel, l_max, collinear: collinear.into() })
    }

    pub fn channel(&self) -> &TransitionChannel {
        &self.channel
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    fn check_m(&self, m_b: i32, m_a: i32) -> Result<()> {
        let (la, lb) = (self.channel.orbital_a.l() as i32, self.channel.orbital_b.l() as i32);
        if m_a.abs() > la || m_b.abs() > lb {
            return Err(Error::domain(format!(
                "magnetic numbers (m_b, m_a) = ({m_b}, {m_a}) outside (l_b, l_a) = ({lb}, {la})"
            )));
        }
        Ok(())
    }

    fn collinear_unchecked(&self, m_b: i32, m_a: i32) -> Complex64 {
        let (la, lb) = (self.channel.orbital_a.l() as i32, self.channel.orbital_b.l() as i32);
        self.collinear[((m_b + lb) as usize) * (2 * la + 1) as usize + (m_a + la) as usize]
    }

    /// M_{m_b' m_a'}(0,0).
    pub fn collinear(&self, m_b: i32, m_a: i32) -> Result<Complex64> {
        self.check_m(m_b, m_a)?;
        Ok(self.collinear_unchecked(m_b, m_a))
    }

    /// Σ d^{l_b}_{m_b m_b'}(θ) d^{l_a}_{m_a m_a'}(θ) M_{m_b' m_a'}(0,0).
    fn rotated_sum(&self, m_b: i32, m_a: i32, theta: f64) -> Complex64 {
        let (la, lb) = (self.channel.orbital_a.l() as i32, self.channel.orbital_b.l() as i32);
        let lambda = self.channel.helicity.value();
        // Only m_b' = m_a' + Λ contributes.
        (-la..=la)
            .filter(|ma| (ma + lambda).abs() <= lb)
            .map(|ma_p| {
                let mb_p = ma_p + lambda;
                small_d_unchecked(lb, m_b, mb_p, theta)
                    * small_d_unchecked(la, m_a, ma_p, theta)
                    * self.collinear_unchecked(mb_p, ma_p)
            })
            .sum()
    }

    /// M̃_{m_b m_a}(θ_k) = i^{m_a−m_b} Σ d^{l_b}_{m_b m_b'} d^{l_a}_{m_a m_a'} M_{m_b' m_a'}(0,0),
    /// for θ_k ∈ [0, π/2).
    pub fn rotated_amplitude(&self, m_b: i32, m_a: i32, theta_k: f64) -> Result<Complex64> {
        self.check_m(m_b, m_a)?;
        if !(0.0..0.5 * PI).contains(&theta_k) {
            return Err(Error::domain(format!("opening angle {theta_k} outside [0, pi/2)")));
        }
        Ok(i_pow(m_a - m_b) * self.rotated_sum(m_b, m_a, theta_k))
    }

    /// M_{m_b m_a}(θ_k, φ_k) for a plane wave along (θ_k, φ_k):
    /// e^{i(m_a−m_b)φ_k} Σ d d M(0,0), which is i^{m_b−m_a} e^{i(m_a−m_b)φ_k} M̃.
    pub fn plane_wave_matrix_element(&self, m_b: i32, m_a: i32, theta_k: f64, phi_k: f64) -> Result<Complex64> {
        self.check_m(m_b, m_a)?;
        if !(0.0..=PI).contains(&theta_k) || !phi_k.is_finite() {
            return Err(Error::domain(format!("plane-wave direction ({theta_k}, {phi_k}) out of range")));
        }
        let phase = Complex64::from_polar(1.0, (m_a - m_b) as f64 * phi_k);
        Ok(phase * self.rotated_sum(m_b, m_a, theta_k))
    }

    pub fn amplitude(&self, form: AmplitudeForm, m_b: i32, m_a: i32, theta_k: f64) -> Result<TransitionAmplitude> {
        let value = match form {
            AmplitudeForm::Collinear => self.collinear(m_b, m_a)?,
            AmplitudeForm::Rotated => self.rotated_amplitude(m_b, m_a, theta_k)?,
            AmplitudeForm::PlaneWave => self.plane_wave_matrix_element(m_b, m_a, theta_k, 0.0)?,
        };
        Ok(TransitionAmplitude { value, m_b, m_a, theta_k, form })
    }

    /// |M̃_{m_b m_a}(θ)| / |M̃_{m_a+Λ, m_a}(0)| over a θ grid. The complex
    /// ratios are kept alongside the magnitudes.
    pub fn normalized_amplitude_sweep(
        &self,
        m_a: i32,
        m_b_list: &[i32],
        theta_grid: &[f64],
    ) -> Result<NormalizedSweep> {
        let m_ref = m_a + self.channel.helicity.value();
        let reference = self.rotated_amplitude(m_ref, m_a, 0.0).map_err(|e| {
            Error::Configuration(format!("normalization amplitude (m_b = {m_ref}) unavailable: {e}"))
        })?;
        let scale = self.collinear.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if reference.norm() <= 1e-14 * scale || reference.norm() == 0.0 {
            return Err(Error::Configuration("normalization amplitude vanishes".into()));
        }
        let rows: Vec<Vec<Complex64>> = theta_grid
            .par_iter()
            .map(|&theta| {
                m_b_list
                    .iter()
                    .map(|&m_b| self.rotated_amplitude(m_b, m_a, theta).map(|v| v / reference))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(NormalizedSweep {
            m_a,
            m_b: m_b_list.to_vec(),
            theta: theta_grid.to_vec(),
            magnitudes: rows.iter().map(|r| r.iter().map(|c| c.norm()).collect()).collect(),
            values: rows,
        })
    }
}

/// Normalized amplitudes M^N, one row per opening angle and one column per m_b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSweep {
    pub m_a: i32,
    pub m_b: Vec<i32>,
    pub theta: Vec<f64>,
    pub magnitudes: Vec<Vec<f64>>,
    pub values: Vec<Vec<Complex64>>,
}

pub fn collinear_matrix_element(channel: &TransitionChannel, m_a_prime: i32, m_b_prime: i32) -> Result<Complex64> {
    MatrixElementCalculator::new(*channel)?.collinear(m_b_prime, m_a_prime)
}

pub fn rotated_amplitude(channel: &TransitionChannel, m_b: i32, m_a: i32, theta_k: f64) -> Result<Complex64> {
    MatrixElementCalculator::new(*channel)?.rotated_amplitude(m_b, m_a, theta_k)
}

pub fn plane_wave_matrix_element(
    channel: &TransitionChannel,
    m_b: i32,
    m_a: i32,
    theta_k: f64,
    phi_k: f64,
) -> Result<Complex64> {
    MatrixElementCalculator::new(*channel)?.plane_wave_matrix_element(m_b, m_a, theta_k, phi_k)
}

pub fn normalized_amplitude_sweep(
    channel: &TransitionChannel,
    m_a: i32,
    m_b_list: &[i32],
    theta_grid: &[f64],
) -> Result<NormalizedSweep> {
    MatrixElementCalculator::new(*channel)?.normalized_amplitude_sweep(m_a, m_b_list, theta_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn channel(n_a: u32, l_a: u32, n_b: u32, l_b: u32, lambda: Helicity, omega: f64) -> TransitionChannel {
        let a = BoundOrbital::new(1, n_a, l_a, 0).unwrap();
        let b = BoundOrbital::new(1, n_b, l_b, 0).unwrap();
        TransitionChannel::new(a, b, lambda, omega).unwrap()
    }

    #[test]
    fn channel_validation() {
        let a = BoundOrbital::new(1, 1, 0, 0).unwrap();
        let b = BoundOrbital::new(2, 2, 1, 0).unwrap();
        assert!(TransitionChannel::new(a, b, Helicity::Positive, 0.375).is_err());
        assert!(TransitionChannel::new(a, a, Helicity::Positive, 0.0).is_err());
    }

    #[test]
    fn collinear_selection_rule() {
        for (na, la, nb, lb) in [(1, 0, 2, 1), (1, 0, 3, 2), (2, 1, 3, 2)] {
            for lambda in [Helicity::Positive, Helicity::Negative] {
                let calc = MatrixElementCalculator::new(channel(na, la, nb, lb, lambda, 0.4)).unwrap();
                let (la, lb) = (la as i32, lb as i32);
                let mut any = false;
                for ma in -la..=la {
                    for mb in -lb..=lb {
                        let v = calc.collinear(mb, ma).unwrap();
                        if mb != ma + lambda.value() {
                            assert!(v.norm() < 1e-12);
                        } else {
                            any |= v.norm() > 1e-6;
                        }
                    }
                }
                assert!(any);
            }
        }
    }

    #[test]
    fn monopole_transition_vanishes() {
        for lambda in [Helicity::Positive, Helicity::Negative] {
            let calc = MatrixElementCalculator::new(channel(1, 0, 2, 0, lambda, 0.375)).unwrap();
            assert!(calc.collinear(0, 0).unwrap().norm() < 1e-12);
            for theta in [0.0, 0.3, 1.2] {
                assert!(calc.rotated_amplitude(0, 0, theta).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_angle_reduces_to_collinear() {
        let calc = MatrixElementCalculator::new(channel(2, 1, 3, 2, Helicity::Negative, 0.07)).unwrap();
        for ma in -1..=1 {
            for mb in -2..=2 {
                let want = i_pow(ma - mb) * calc.collinear(mb, ma).unwrap();
                assert_eq!(calc.rotated_amplitude(mb, ma, 0.0).unwrap(), want);
            }
        }
    }

    #[test]
    fn rejects_bad_angles_and_l_max() {
        let ch = channel(1, 0, 2, 1, Helicity::Positive, 0.375);
        let calc = MatrixElementCalculator::new(ch).unwrap();
        assert!(calc.rotated_amplitude(1, 0, 0.5 * PI).is_err());
        assert!(calc.rotated_amplitude(2, 0, 0.1).is_err());
        assert!(MatrixElementCalculator::with_l_max(ch, 41).is_err());
    }

    #[test]
    fn truncation_below_exact_end_is_detected_only_when_visible() {
        // 1s→2p terminates at L = 2; truncating at L = 0 drops terms of
        // relative size (ka)², far above the tail tolerance.
        let ch = channel(1, 0, 2, 1, Helicity::Positive, 0.375);
        assert!(matches!(MatrixElementCalculator::with_l_max(ch, 0), Err(Error::NonConvergence(_))));
    }
}
