use std::f64::consts::PI;

use num_complex::Complex64;

use super::factorial::ln_factorial;
use crate::error::{Error, Result};

fn check_lm(l: i32, m: i32, what: &str) -> Result<()> {
    if l < 0 || m.abs() > l {
        return Err(Error::domain(format!("{what}: invalid (l, m) = ({l}, {m})")));
    }
    Ok(())
}

/// Associated Legendre function P_l^m(x) with the Condon-Shortley phase,
/// for |x| ≤ 1 and |m| ≤ l.
pub fn associated_legendre(l: u32, m: i32, x: f64) -> Result<f64> {
    check_lm(l as i32, m, "associated_legendre")?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("associated_legendre: x = {x} outside [-1, 1]")));
    }
    let ma = m.unsigned_abs();
    let mut p_mm = 1.0;
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut odd = 1.0;
    for _ in 0..ma {
        p_mm *= -odd * somx2;
        odd += 2.0;
    }
    let value = if l == ma {
        p_mm
    } else {
        let mut p_prev = p_mm;
        let mut p_cur = x * (2 * ma + 1) as f64 * p_mm;
        for ll in (ma + 2)..=l {
            let next = (x * (2 * ll - 1) as f64 * p_cur - (ll + ma - 1) as f64 * p_prev)
                / (ll - ma) as f64;
            p_prev = p_cur;
            p_cur = next;
        }
        p_cur
    };
    if m < 0 {
        // P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m
        let ratio = (ln_factorial(l - ma) - ln_factorial(l + ma)).exp();
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * ratio * value)
    } else {
        Ok(value)
    }
}

/// Y_lm(θ, φ) with the Condon-Shortley phase; evaluated through the
/// normalized Legendre recurrence so that large l do not overflow.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    check_lm(l as i32, m, "spherical_harmonic")?;
    let ma = m.unsigned_abs();
    let x = theta.cos();
    let omx2 = (1.0 - x) * (1.0 + x);
    let mut p_mm = 1.0;
    let mut fact = 1.0;
    for _ in 0..ma {
        p_mm *= omx2 * fact / (fact + 1.0);
        fact += 2.0;
    }
    p_mm = ((2 * ma + 1) as f64 * p_mm / (4.0 * PI)).sqrt();
    if ma % 2 == 1 {
        p_mm = -p_mm;
    }
    let theta_part = if l == ma {
        p_mm
    } else {
        let mut p_prev = p_mm;
        let mut old_fact = ((2 * ma + 3) as f64).sqrt();
        let mut p_cur = x * old_fact * p_mm;
        for ll in (ma + 2)..=l {
            let llf = ll as f64;
            let f = ((4.0 * llf * llf - 1.0) / (llf * llf - (ma * ma) as f64)).sqrt();
            let next = (x * p_cur - p_prev / old_fact) * f;
            old_fact = f;
            p_prev = p_cur;
            p_cur = next;
        }
        p_cur
    };
    let positive = Complex64::from_polar(theta_part, ma as f64 * phi);
    if m < 0 {
        // Y_{l,-m} = (-1)^m Y*_{lm}
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(positive.conj() * sign)
    } else {
        Ok(positive)
    }
}

/// Wigner 3j symbol for integer angular momenta (Racah formula).
pub fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if j1 < 0 || j2 < 0 || j3 < 0 {
        return 0.0;
    }
    if m1 + m2 + m3 != 0 || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if j3 > j1 + j2 || j3 < (j1 - j2).abs() {
        return 0.0;
    }
    let lf = |n: i32| ln_factorial(n as u32);
    let ln_triangle = lf(j1 + j2 - j3) + lf(j1 - j2 + j3) + lf(-j1 + j2 + j3) - lf(j1 + j2 + j3 + 1);
    let ln_m = lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3);
    let ln_pre = 0.5 * (ln_triangle + ln_m);

    let t_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let t_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for t in t_min..=t_max {
        let ln_den = lf(t)
            + lf(j3 - j2 + t + m1)
            + lf(j3 - j1 + t - m2)
            + lf(j1 + j2 - j3 - t)
            + lf(j1 - t - m1)
            + lf(j2 - t + m2);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_pre - ln_den).exp();
    }
    let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * sum
}

/// Clebsch-Gordan coefficient ⟨j1 m1 j2 m2 | J M⟩.
pub fn clebsch_gordan(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    let phase = if (j1 - j2 + m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * ((2 * j + 1) as f64).sqrt() * wigner_3j(j1, j2, j, m1, m2, -m)
}

/// ∫ Y_{l1 m1} Y_{l2 m2} Y_{l3 m3} dΩ (no complex conjugation).
pub fn gaunt_coefficient(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> Result<f64> {
    check_lm(l1, m1, "gaunt")?;
    check_lm(l2, m2, "gaunt")?;
    check_lm(l3, m3, "gaunt")?;
    if m1 + m2 + m3 != 0 || (l1 + l2 + l3) % 2 == 1 {
        return Ok(0.0);
    }
    let pre = (((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)) as f64 / (4.0 * PI)).sqrt();
    Ok(pre * wigner_3j(l1, l2, l3, 0, 0, 0) * wigner_3j(l1, l2, l3, m1, m2, m3))
}
