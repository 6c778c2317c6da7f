//! Hydrogen-like bound orbitals φ_{nlm} = R_{nl}(r) Y_{lm}(θ, φ) and the
//! action of the momentum operator on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::quadrature::cached_rule;
use crate::specfun::{ln_factorial, QuadratureKind, MAX_WIGNER_L};

/// Quantum numbers of a bound state in a Coulomb potential of charge Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundOrbital {
    z: u32,
    n: u32,
    l: u32,
    m: i32,
}

/// Orbital value and the cyclic components of −i∇ acting on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalValue {
    pub value: Complex64,
    /// Cartesian gradient ∇φ.
    pub gradient: [Complex64; 3],
    /// (−i∇)_σ for σ = −1, 0, +1 stored at index σ + 1.
    pub gradient_cyclic: [Complex64; 3],
}

/// Spherical (cyclic) components v_σ at index σ + 1, with
/// v_{±1} = ∓(v_x ± i v_y)/√2 and v_0 = v_z.
pub fn cyclic_components(v: [Complex64; 3]) -> [Complex64; 3] {
    let i = Complex64::i();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [(v[0] - i * v[1]) * s, v[2], -(v[0] + i * v[1]) * s]
}

impl BoundOrbital {
    pub fn new(z: u32, n: u32, l: u32, m: i32) -> Result<Self> {
        if z == 0 {
            return Err(Error::domain("nuclear charge must be positive"));
        }
        if n == 0 || l >= n {
            return Err(Error::domain(format!("need 0 <= l < n, got n = {n}, l = {l}")));
        }
        if l > MAX_WIGNER_L {
            return Err(Error::domain(format!("l = {l} exceeds supported {MAX_WIGNER_L}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(Self { z, n, l, m })
    }

    pub fn z(&self) -> u32 {
        self.z
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn m(&self) -> i32 {
        self.m
    }

    /// Same shell with a different magnetic quantum number.
    pub fn with_m(&self, m: i32) -> Result<Self> {
        Self::new(self.z, self.n, self.l, m)
    }

    /// ε = −Z²/(2n²) Hartree.
    pub fn energy(&self) -> f64 {
        let (z, n) = (self.z as f64, self.n as f64);
        -z * z / (2.0 * n * n)
    }

    /// Exponential decay constant Z/n of the radial function.
    pub fn decay(&self) -> f64 {
        self.z as f64 / self.n as f64
    }

    fn normalization(&self) -> f64 {
        let (n, l) = (self.n, self.l);
        let k = 2.0 * self.decay();
        let ln_ratio = ln_factorial(n - l - 1) - ln_factorial(n + l);
        (k.powi(3) * ln_ratio.exp() / (2.0 * n as f64)).sqrt()
    }

    /// Radial function without its exponential: R(r) = e^{-(Z/n) r} u(r).
    /// Returns (u, du/dr).
    pub fn radial_reduced(&self, r: f64) -> (f64, f64) {
        let k = 2.0 * self.decay();
        let rho = k * r;
        let degree = self.n - self.l - 1;
        let alpha = (2 * self.l + 1) as f64;
        let lag = laguerre(degree, alpha, rho);
        let dlag = if degree == 0 { 0.0 } else { -laguerre(degree - 1, alpha + 1.0, rho) };
        let norm = self.normalization();
        let li = self.l as i32;
        let u = norm * rho.powi(li) * lag;
        let du = if self.l == 0 {
            norm * k * dlag
        } else {
            norm * k * (li as f64 * rho.powi(li - 1) * lag + rho.powi(li) * dlag)
        };
        (u, du)
    }

    /// Normalized radial function R_{nl}(r).
    pub fn radial(&self, r: f64) -> f64 {
        self.radial_reduced(r).0 * (-self.decay() * r).exp()
    }

    /// dR_{nl}/dr.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        let (u, du) = self.radial_reduced(r);
        (du - self.decay() * u) * (-self.decay() * r).exp()
    }

    /// φ_{nlm} and −i∇φ_{nlm} at a Cartesian point.
    ///
    /// Written as g(r)·S(x, y, z) with S = r^l Y_lm a solid harmonic, so the
    /// gradient has no coordinate singularities. At the origin the cusp of
    /// s-states has no gradient; zero is returned there.
    pub fn evaluate(&self, point: [f64; 3]) -> OrbitalValue {
        let [x, y, z] = point;
        let r = (x * x + y * y + z * z).sqrt();
        let k = 2.0 * self.decay();
        let rho = k * r;
        let degree = self.n - self.l - 1;
        let alpha = (2 * self.l + 1) as f64;
        let pre = self.normalization() * k.powi(self.l as i32) * (-self.decay() * r).exp();
        let lag = laguerre(degree, alpha, rho);
        let dlag = if degree == 0 { 0.0 } else { -laguerre(degree - 1, alpha + 1.0, rho) };
        let g = pre * lag;
        let dg = pre * (-self.decay() * lag + k * dlag);

        let (s, grad_s) = solid_harmonic(self.l, self.m, point);
        let value = s * g;
        let mut gradient = [Complex64::new(0.0, 0.0); 3];
        for (c, gs) in gradient.iter_mut().zip(grad_s) {
            *c = gs * g;
        }
        if r > 0.0 {
            for (c, xi) in gradient.iter_mut().zip(point) {
                *c += s * (dg * xi / r);
            }
        }
        let momentum = gradient.map(|c| c * Complex64::new(0.0, -1.0));
        OrbitalValue { value, gradient, gradient_cyclic: cyclic_components(momentum) }
    }
}

/// ε_{nl} in Hartree.
pub fn orbital_energy(orb: &BoundOrbital) -> f64 {
    orb.energy()
}

/// Generalized Laguerre polynomial L_k^{(α)}(x) by upward recurrence.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// S_lm = r^l Y_lm(θ, φ) as a polynomial in (x, y, z) and its gradient.
fn solid_harmonic(l: u32, m: i32, p: [f64; 3]) -> (Complex64, [Complex64; 3]) {
    let [x, y, z] = p;
    let ma = m.unsigned_abs();
    let ln_ratio = ln_factorial(l - ma) - ln_factorial(l + ma);
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ln_ratio.exp()).sqrt();
    let (w, dw_dy, pref) = if m >= 0 {
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        (Complex64::new(x, y), Complex64::i(), norm * sign)
    } else {
        (Complex64::new(x, -y), -Complex64::i(), norm)
    };
    let r2 = x * x + y * y + z * z;

    // Q(z, r²) = Σ_k c_k z^{l-|m|-2k} (r²)^k
    let (mut q, mut dq_dr2, mut dq_dz) = (0.0, 0.0, 0.0);
    let ln_2l = l as f64 * 2f64.ln();
    let mut k = 0;
    while 2 * k + ma <= l {
        let a = (l - ma - 2 * k) as i32;
        let ln_c = ln_factorial(2 * l - 2 * k)
            - ln_2l
            - ln_factorial(k)
            - ln_factorial(l - k)
            - ln_factorial(l - 2 * k - ma);
        let c = if k % 2 == 0 { ln_c.exp() } else { -ln_c.exp() };
        let ki = k as i32;
        q += c * z.powi(a) * r2.powi(ki);
        if k > 0 {
            dq_dr2 += c * z.powi(a) * ki as f64 * r2.powi(ki - 1);
        }
        if a > 0 {
            dq_dz += c * a as f64 * z.powi(a - 1) * r2.powi(ki);
        }
        k += 1;
    }
    let dq = [2.0 * x * dq_dr2, 2.0 * y * dq_dr2, dq_dz + 2.0 * z * dq_dr2];

    let mi = ma as i32;
    let w_pow = w.powi(mi);
    let dw_pow = if ma == 0 { Complex64::new(0.0, 0.0) } else { w.powi(mi - 1) * ma as f64 };
    let s = w_pow * q * pref;
    let grad = [
        (dw_pow * q + w_pow * dq[0]) * pref,
        (dw_pow * dw_dy * q + w_pow * dq[1]) * pref,
        w_pow * dq[2] * pref,
    ];
    (s, grad)
}

/// Radial integral ∫₀^∞ e^{-decay·r} g(r) dr by Gauss-Laguerre quadrature,
/// accepted only if the 64- and 128-node results agree to 1e-10 relative
/// to ∫|…|.
pub(crate) fn converged_radial_integral<F: Fn(f64) -> f64>(decay: f64, g: F) -> Result<f64> {
    let coarse = cached_rule(QuadratureKind::SemiInfiniteExponential, 64)?;
    let fine = cached_rule(QuadratureKind::SemiInfiniteExponential, 128)?;
    let a = coarse.integrate_decaying(decay, &g);
    let b = fine.integrate_decaying(decay, &g);
    let scale = fine.integrate_decaying(decay, |r| g(r).abs());
    if (a - b).abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence(format!(
            "radial quadrature: 64 nodes give {a:e}, 128 nodes give {b:e}"
        )));
    }
    Ok(b)
}

/// ∫ R_b(r) r R_a(r) r² dr.
pub fn dipole_radial_integral(orb_a: &BoundOrbital, orb_b: &BoundOrbital) -> Result<f64> {
    if orb_a.z() != orb_b.z() {
        return Err(Error::domain("orbitals belong to different nuclear charges"));
    }
    converged_radial_integral(orb_a.decay() + orb_b.decay(), |r| {
        orb_a.radial_reduced(r).0 * orb_b.radial_reduced(r).0 * r.powi(3)
    })
}
