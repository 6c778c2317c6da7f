//! Gauss-Legendre and Gauss-Laguerre rules plus a spherical product rule for
//! three-dimensional integrals of exponentially decaying integrands.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureKind {
    /// Gauss-Legendre on [-1, 1].
    Finite,
    /// Gauss-Laguerre on [0, ∞) with weight e^{-x}.
    SemiInfiniteExponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
}

const NEWTON_MAX_ITER: usize = 100;

pub fn build_quadrature(kind: QuadratureKind, n_points: usize) -> Result<QuadratureRule> {
    if n_points < 2 {
        return Err(Error::domain(format!("quadrature needs at least 2 points, got {n_points}")));
    }
    let (nodes, weights) = match kind {
        QuadratureKind::Finite => gauss_legendre(n_points)?,
        QuadratureKind::SemiInfiniteExponential => gauss_laguerre(n_points)?,
    };
    Ok(QuadratureRule { nodes, weights, kind })
}

/// Shared, immutable rule for a given kind and size.
pub fn cached_rule(kind: QuadratureKind, n_points: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(QuadratureKind, usize), Arc<QuadratureRule>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&(kind, n_points)) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_quadrature(kind, n_points)?);
    cache
        .lock()
        .expect("quadrature cache poisoned")
        .insert((kind, n_points), Arc::clone(&rule));
    Ok(rule)
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ) on the rule's native domain and weight.
    pub fn sum<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// ∫_a^b f(x) dx for a finite rule.
    pub fn integrate_interval<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        debug_assert_eq!(self.kind, QuadratureKind::Finite);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self.sum(|x| f(mid + half * x))
    }

    /// ∫₀^∞ e^{-decay·r} g(r) dr for a semi-infinite rule; `g` carries no
    /// exponential factor of its own.
    pub fn integrate_decaying<F: Fn(f64) -> f64>(&self, decay: f64, g: F) -> f64 {
        debug_assert_eq!(self.kind, QuadratureKind::SemiInfiniteExponential);
        self.sum(|x| g(x / decay)) / decay
    }
}

fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!("Gauss-Legendre node {i} of {n}")));
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut converged = false;
        let (mut p_deriv, mut p_prev) = (0.0, 0.0);
        for _ in 0..NEWTON_MAX_ITER {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 - z) * p2 / (j + 1) as f64 - j as f64 * p3 / (j + 1) as f64;
            }
            p_deriv = (nf * p1 - nf * p2) / z;
            p_prev = p2;
            let z_old = z;
            z = z_old - p1 / p_deriv;
            if (z - z_old).abs() <= 1e-14 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!("Gauss-Laguerre node {i} of {n}")));
        }
        nodes.push(z);
        weights.push(-1.0 / (p_deriv * nf * p_prev));
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::NonConvergence(format!("Gauss-Laguerre rule of order {n} is degenerate")));
    }
    Ok((nodes, weights))
}

/// Product rule for ∫ f(r) d³r: Gauss-Laguerre in r with exponential scale
/// `decay`, Gauss-Legendre in cos θ, trapezoid in φ.
#[derive(Debug, Clone)]
pub struct SphericalProductRule {
    radial: Vec<(f64, f64)>,
    polar: Vec<(f64, f64, f64)>,
    azimuthal: Vec<(f64, f64)>,
    azimuthal_weight: f64,
}

impl SphericalProductRule {
    /// `decay` should match the combined exponential decay of the integrand.
    pub fn new(decay: f64, n_radial: usize, n_polar: usize, n_azimuthal: usize) -> Result<Self> {
        if !(decay > 0.0) || n_azimuthal == 0 {
            return Err(Error::domain("spherical rule needs positive decay and azimuthal points"));
        }
        let lag = cached_rule(QuadratureKind::SemiInfiniteExponential, n_radial)?;
        let leg = cached_rule(QuadratureKind::Finite, n_polar)?;
        let radial = lag
            .nodes
            .iter()
            .zip(&lag.weights)
            .map(|(&x, &w)| {
                let r = x / decay;
                (r, (w.ln() + x).exp() * r * r / decay)
            })
            .collect();
        let polar = leg
            .nodes
            .iter()
            .zip(&leg.weights)
            .map(|(&c, &w)| (c, (1.0 - c * c).max(0.0).sqrt(), w))
            .collect();
        let azimuthal = (0..n_azimuthal)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / n_azimuthal as f64;
                (phi.cos(), phi.sin())
            })
            .collect();
        Ok(Self { radial, polar, azimuthal, azimuthal_weight: 2.0 * PI / n_azimuthal as f64 })
    }

    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn([f64; 3]) -> Complex64 + Sync,
    {
        self.radial
            .par_iter()
            .map(|&(r, wr)| {
                let mut shell = Complex64::new(0.0, 0.0);
                for &(c, s, wt) in &self.polar {
                    let mut ring = Complex64::new(0.0, 0.0);
                    for &(cp, sp) in &self.azimuthal {
                        ring += f([r * s * cp, r * s * sp, r * c]);
                    }
                    shell += ring * wt;
                }
                shell * wr
            })
            .sum::<Complex64>()
            * self.azimuthal_weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_legendre() {
        let rule = build_quadrature(QuadratureKind::Finite, 2).unwrap();
        let a = 1.0 / 3f64.sqrt();
        assert!((rule.nodes[0] + a).abs() < 1e-15 && (rule.nodes[1] - a).abs() < 1e-15);
        assert!((rule.weights[0] - 1.0).abs() < 1e-15 && (rule.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_exactness() {
        let rule = build_quadrature(QuadratureKind::Finite, 16).unwrap();
        assert!((rule.sum(|x| x.powi(10)) - 2.0 / 11.0).abs() < 1e-14);
        for n in [2usize, 3, 5, 8, 17, 32, 64] {
            let rule = build_quadrature(QuadratureKind::Finite, n).unwrap();
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got = rule.sum(|x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}: {got}");
            }
        }
    }

    #[test]
    fn laguerre_exactness() {
        let rule = build_quadrature(QuadratureKind::SemiInfiniteExponential, 32).unwrap();
        assert!((rule.sum(|x| x.powi(4)) - 24.0).abs() < 1e-12);
        for n in [2usize, 4, 10, 32, 64, 128] {
            let rule = build_quadrature(QuadratureKind::SemiInfiniteExponential, n).unwrap();
            let mut fact = 1.0;
            for deg in 0..(2 * n).min(20) {
                if deg > 0 {
                    fact *= deg as f64;
                }
                let got = rule.sum(|x| x.powi(deg as i32));
                assert!((got - fact).abs() < 1e-12 * fact, "n={n} deg={deg}: {got} vs {fact}");
            }
        }
    }

    #[test]
    fn rule_invariants() {
        for kind in [QuadratureKind::Finite, QuadratureKind::SemiInfiniteExponential] {
            for n in [2usize, 7, 64, 128] {
                let rule = build_quadrature(kind, n).unwrap();
                assert_eq!(rule.nodes.len(), rule.weights.len());
                assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
                assert!(rule.weights.iter().all(|&w| w > 0.0));
            }
        }
        assert!(build_quadrature(QuadratureKind::Finite, 1).is_err());
    }

    #[test]
    fn spherical_rule_gaussian_volume() {
        // ∫ e^{-2r} d³r = 4π · 2!/2³ = π
        let rule = SphericalProductRule::new(2.0, 32, 8, 8).unwrap();
        let v = rule.integrate(|p| {
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            Complex64::new((-2.0 * r).exp(), 0.0)
        });
        assert!((v.re - PI).abs() < 1e-12);
    }
}
