use crate::error::{Error, Result};

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

fn parity_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Integer-order Bessel function of the first kind J_n(x).
///
/// Uses Miller's backward recurrence normalized with
/// J_0 + 2 Σ J_{2k} = 1, which is accurate for every order and argument.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j: non-finite argument {x}")));
    }
    let n = order as i64;
    let mut sign = 1.0;
    if n < 0 {
        sign *= parity_sign(n);
    }
    let n = n.abs();
    if x < 0.0 {
        sign *= parity_sign(n);
    }
    Ok(sign * bessel_j_nonneg(n as usize, x.abs()))
}

fn bessel_j_nonneg(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let top = n.max(x.ceil() as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;

    let two_over_x = 2.0 / x;
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut norm = 0.0;
    let mut result = 0.0;
    // j_cur holds J_k (unnormalized) as k runs from `start` down to 0
    for k in (0..=start).rev() {
        if k == n {
            result = j_cur;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j_cur } else { 2.0 * j_cur };
        }
        if k == 0 {
            break;
        }
        let j_prev = k as f64 * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > RESCALE_ABOVE {
            j_cur *= RESCALE_BY;
            j_next *= RESCALE_BY;
            norm *= RESCALE_BY;
            result *= RESCALE_BY;
        }
    }
    result / norm
}

/// Spherical Bessel function j_L(x) for x ≥ 0.
///
/// Downward recurrence for x < L (normalized against j_0 or j_1, whichever
/// is larger), upward recurrence from the closed forms otherwise.
pub fn spherical_bessel_j(order: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!(
            "spherical_bessel_j: argument {x} must be finite and non-negative"
        )));
    }
    let l = order as usize;
    if x == 0.0 {
        return Ok(if l == 0 { 1.0 } else { 0.0 });
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return Ok(j0);
    }
    let j1 = s / (x * x) - c / x;
    if x > l as f64 {
        let (mut prev, mut cur) = (j0, j1);
        for k in 1..l {
            let next = (2 * k + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return Ok(cur);
    }

    let start = l + 20 + (10.0 * (l as f64 + x)).sqrt() as usize;
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut at_order = 0.0;
    let mut at_one = 0.0;
    for k in (0..=start).rev() {
        if k == l {
            at_order = j_cur;
        }
        if k == 1 {
            at_one = j_cur;
        }
        if k == 0 {
            break;
        }
        let j_prev = (2 * k + 1) as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > RESCALE_ABOVE {
            j_cur *= RESCALE_BY;
            j_next *= RESCALE_BY;
            at_order *= RESCALE_BY;
            at_one *= RESCALE_BY;
        }
    }
    let at_zero = j_cur;
    let scale = if j0.abs() >= j1.abs() { j0 / at_zero } else { j1 / at_one };
    Ok(at_order * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// J_n(x) = (1/2π) ∫₀^{2π} cos(nτ − x sin τ) dτ, trapezoid on the full period.
    fn integral_oracle(n: i32, x: f64) -> f64 {
        let steps = 400;
        let h = 2.0 * PI / steps as f64;
        (0..steps)
            .map(|i| {
                let t = i as f64 * h;
                (n as f64 * t - x * t.sin()).cos()
            })
            .sum::<f64>()
            / steps as f64
    }

    fn spherical_series(l: u32, x: f64) -> f64 {
        let mut double_fact = 1.0;
        for k in (1..=2 * l + 1).step_by(2) {
            double_fact *= k as f64;
        }
        let lead = x.powi(l as i32) / double_fact;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= -0.5 * x * x / (k as f64 * (2 * l + 2 * k + 1) as f64);
            sum += term;
        }
        lead * sum
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert_eq!(spherical_bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(spherical_bessel_j(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_integral_representation() {
        for n in -8..=8 {
            for i in 0..=40 {
                let x = -20.0 + i as f64;
                let got = bessel_j(n, x).unwrap();
                let want = integral_oracle(n, x);
                assert!((got - want).abs() < 1e-13, "J_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn first_zero_of_j4() {
        const TABULATED: f64 = 7.588_342_434_503_804;
        // bisection on the implementation itself
        let (mut lo, mut hi) = (7.0, 8.0);
        let f = |x: f64| bessel_j(4, x).unwrap();
        assert!(f(lo) * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((0.5 * (lo + hi) - TABULATED).abs() < 1e-10);
        assert!(f(TABULATED).abs() < 1e-10);
        assert!(integral_oracle(4, TABULATED).abs() < 1e-10);
    }

    #[test]
    fn recurrence_residual() {
        for m in 1..=8 {
            for i in 0..=199 {
                let x = 0.1 + i as f64 * 0.1;
                let r = bessel_j(m - 1, x).unwrap() + bessel_j(m + 1, x).unwrap()
                    - 2.0 * m as f64 / x * bessel_j(m, x).unwrap();
                assert!(r.abs() < 1e-10, "m={m} x={x} residual {r}");
            }
        }
    }

    #[test]
    fn spherical_matches_series() {
        let got = spherical_bessel_j(2, 1.0).unwrap();
        assert!((got - spherical_series(2, 1.0)).abs() < 1e-12);
        for l in 0..12 {
            for &x in &[1e-8, 1e-4, 0.003, 0.1, 0.5, 1.0, 2.0, 3.0] {
                let got = spherical_bessel_j(l, x).unwrap();
                let want = spherical_series(l, x);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1e-300) + 1e-300,
                    "j_{l}({x}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn spherical_large_argument_closed_form() {
        for &x in &[PI, 5.0, 12.5, 40.0] {
            let j2 = (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x);
            assert!((spherical_bessel_j(2, x).unwrap() - j2).abs() < 1e-13);
        }
        assert!((spherical_bessel_j(5, PI).unwrap() - spherical_series(5, PI)).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(2, f64::INFINITY).is_err());
        assert!(spherical_bessel_j(1, -1.0).is_err());
    }
}
