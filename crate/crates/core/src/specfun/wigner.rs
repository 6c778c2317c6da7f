use std::f64::consts::PI;

use super::factorial::ln_factorial;
use crate::error::{Error, Result};

/// Largest angular momentum accepted by the Wigner-d routines.
pub const MAX_WIGNER_L: u32 = 10;

/// Index triple (l, m, m') of a Wigner small-d element d^l_{m m'}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WignerIndex {
    pub l: u32,
    pub m: i32,
    pub m_prime: i32,
}

impl WignerIndex {
    pub fn new(l: u32, m: i32, m_prime: i32) -> Result<Self> {
        if l > MAX_WIGNER_L {
            return Err(Error::domain(format!("wigner d: l = {l} exceeds {MAX_WIGNER_L}")));
        }
        let li = l as i32;
        if m.abs() > li || m_prime.abs() > li {
            return Err(Error::domain(format!(
                "wigner d: |m| or |m'| exceeds l in ({l}, {m}, {m_prime})"
            )));
        }
        Ok(Self { l, m, m_prime })
    }
}

/// Wigner small-d function d^l_{m m'}(θ) for rotations about y, so that
/// D^l_{m m'}(α, β, γ) = e^{-imα} d^l_{m m'}(β) e^{-im'γ}.
///
/// Evaluated with the explicit factorial sum; the factorial ratio of each
/// term is formed in log space.
pub fn wigner_small_d(idx: WignerIndex, theta: f64) -> Result<f64> {
    if !theta.is_finite() || !(-1e-12..=PI + 1e-12).contains(&theta) {
        return Err(Error::domain(format!("wigner d: theta = {theta} outside [0, pi]")));
    }
    Ok(small_d_unchecked(idx.l as i32, idx.m, idx.m_prime, theta))
}

pub(crate) fn small_d_unchecked(l: i32, m: i32, mp: i32, theta: f64) -> f64 {
    if theta == 0.0 {
        return if m == mp { 1.0 } else { 0.0 };
    }
    let (s_half, c_half) = (0.5 * theta).sin_cos();
    let ln_norm = 0.5
        * (ln_factorial((l + m) as u32)
            + ln_factorial((l - m) as u32)
            + ln_factorial((l + mp) as u32)
            + ln_factorial((l - mp) as u32));
    let s_min = 0.max(mp - m);
    let s_max = (l + mp).min(l - m);
    let mut sum = 0.0;
    for s in s_min..=s_max {
        let ln_den = ln_factorial((l + mp - s) as u32)
            + ln_factorial(s as u32)
            + ln_factorial((m - mp + s) as u32)
            + ln_factorial((l - m - s) as u32);
        let sign = if (m - mp + s).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let cos_pow = 2 * l + mp - m - 2 * s;
        let sin_pow = m - mp + 2 * s;
        sum += sign * (ln_norm - ln_den).exp() * c_half.powi(cos_pow) * s_half.powi(sin_pow);
    }
    sum
}

/// Full (2l+1)×(2l+1) matrix, row index m + l, column index m' + l.
pub fn wigner_d_matrix(l: u32, theta: f64) -> Result<Vec<Vec<f64>>> {
    WignerIndex::new(l, 0, 0)?;
    let li = l as i32;
    (-li..=li)
        .map(|m| {
            (-li..=li)
                .map(|mp| wigner_small_d(WignerIndex { l, m, m_prime: mp }, theta))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(l: u32, m: i32, mp: i32, theta: f64) -> f64 {
        wigner_small_d(WignerIndex::new(l, m, mp).unwrap(), theta).unwrap()
    }

    #[test]
    fn closed_forms_l1() {
        for &t in &[0.0, 0.3, 1.1, PI / 2.0, 2.9] {
            let (s, c) = f64::sin_cos(t);
            assert!((d(1, 1, 1, t) - (1.0 + c) / 2.0).abs() < 1e-15);
            assert!((d(1, 1, 0, t) + s / 2f64.sqrt()).abs() < 1e-15);
            assert!((d(1, 0, 1, t) - s / 2f64.sqrt()).abs() < 1e-15);
            assert!((d(1, 1, -1, t) - (1.0 - c) / 2.0).abs() < 1e-15);
            assert!((d(1, 0, 0, t) - c).abs() < 1e-15);
        }
        assert_eq!(d(1, 1, 1, 0.0), 1.0);
        assert!((d(1, 1, 1, PI / 2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_at_zero() {
        for l in 0..=MAX_WIGNER_L {
            let li = l as i32;
            for m in -li..=li {
                for mp in -li..=li {
                    let expected = if m == mp { 1.0 } else { 0.0 };
                    assert!((d(l, m, mp, 0.0) - expected).abs() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(WignerIndex::new(1, 2, 0).is_err());
        assert!(WignerIndex::new(11, 0, 0).is_err());
        let idx = WignerIndex::new(1, 0, 0).unwrap();
        assert!(wigner_small_d(idx, 4.0).is_err());
        assert!(wigner_small_d(idx, f64::NAN).is_err());
    }
}
