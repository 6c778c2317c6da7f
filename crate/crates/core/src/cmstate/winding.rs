//! Topological charge of a sampled field and finite-difference eigenvalue
//! checks of L_z and the transverse Laplacian.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::ComplexGrid;

pub const MIN_CIRCLE_SAMPLES: usize = 256;
const MAX_RESIDUAL: f64 = 0.1;
/// Circle samples must stay above this fraction of the grid maximum.
const MIN_RELATIVE_AMPLITUDE: f64 = 1e-3;
const MAX_PHASE_STEP: f64 = 0.5 * PI;
const RADIUS_RETRIES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingMeasurement {
    pub winding: i32,
    /// |w − round(w)| for the log-derivative estimate w = (1/2π)∮ Im(dΦ/Φ).
    pub residual: f64,
    pub radius: f64,
    pub samples: usize,
}

/// Winding of the phase of `grid` around a circle. Samples come from
/// bilinear interpolation. The integer is the sum of nearest-branch
/// phase steps; the residual compares it with a continuous estimate.
pub fn winding_number(grid: &ComplexGrid, center: [f64; 2], radius: f64) -> Result<WindingMeasurement> {
    let w = &grid.window;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain(format!("winding radius must be positive, got {radius}")));
    }
    let spacing = w.dx().min(w.dy());
    let n = MIN_CIRCLE_SAMPLES.max((4.0 * PI * radius / spacing).ceil() as usize);
    let samples: Vec<Complex64> = (0..n)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / n as f64;
            grid.interpolate(center[0] + radius * phi.cos(), center[1] + radius * phi.sin())
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::domain("winding circle leaves the grid window"))?;

    let floor = MIN_RELATIVE_AMPLITUDE * grid.max_abs();
    if samples.iter().any(|z| z.norm() <= floor) {
        return Err(Error::AmbiguousWinding(format!(
            "field nearly vanishes on the circle of radius {radius}"
        )));
    }
    let mut total = 0.0;
    let mut continuous = 0.0;
    for j in 0..n {
        let prev = samples[(j + n - 1) % n];
        let here = samples[j];
        let next = samples[(j + 1) % n];
        let step = (next / here).arg();
        if step.abs() > MAX_PHASE_STEP {
            return Err(Error::AmbiguousWinding(format!(
                "phase step {step:.3} rad between circle samples is too large"
            )));
        }
        total += step;
        continuous += ((next - prev) / (2.0 * here)).im;
    }
    let winding = (total / (2.0 * PI)).round() as i32;
    let residual = (continuous / (2.0 * PI) - winding as f64).abs();
    if residual > MAX_RESIDUAL {
        return Err(Error::AmbiguousWinding(format!(
            "winding estimate off the integer {winding} by {residual:.3}"
        )));
    }
    Ok(WindingMeasurement { winding, residual, radius, samples: n })
}

/// Retries `winding_number` on slightly larger circles while the result is
/// ambiguous, e.g. because the circle runs along a nodal ring.
pub fn measure_winding(grid: &ComplexGrid, center: [f64; 2], radius: f64) -> Result<WindingMeasurement> {
    let mut last = None;
    for attempt in 0..RADIUS_RETRIES {
        let r = radius * (1.0 + 0.03 * attempt as f64);
        match winding_number(grid, center, r) {
            Ok(m) => return Ok(m),
            Err(e @ Error::AmbiguousWinding(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn d_fourth(f: impl Fn(isize) -> Complex64, h: f64) -> Complex64 {
    (f(-2) - f(-1) * 8.0 + f(1) * 8.0 - f(2)) / (12.0 * h)
}

/// (L_z Φ)/Φ at a grid node with L_z = −i(x∂_y − y∂_x) about `center`,
/// by fourth-order central differences. `None` within two nodes of the edge.
pub fn azimuthal_eigenvalue(grid: &ComplexGrid, center: [f64; 2], ix: usize, iy: usize) -> Option<Complex64> {
    let w = &grid.window;
    if ix < 2 || iy < 2 || ix + 2 >= w.nx || iy + 2 >= w.ny {
        return None;
    }
    let at = |dx: isize, dy: isize| grid.get((ix as isize + dx) as usize, (iy as isize + dy) as usize);
    let dfdx = d_fourth(|s| at(s, 0), w.dx());
    let dfdy = d_fourth(|s| at(0, s), w.dy());
    let (x, y) = (w.x(ix) - center[0], w.y(iy) - center[1]);
    Some(Complex64::new(0.0, -1.0) * (dfdy * x - dfdx * y) / grid.get(ix, iy))
}

/// (−∇_⊥²Φ)/Φ at a grid node by the five-point stencil.
pub fn transverse_laplacian_eigenvalue(grid: &ComplexGrid, ix: usize, iy: usize) -> Option<Complex64> {
    let w = &grid.window;
    if ix < 1 || iy < 1 || ix + 1 >= w.nx || iy + 1 >= w.ny {
        return None;
    }
    let c = grid.get(ix, iy);
    let lap_x = (grid.get(ix + 1, iy) + grid.get(ix - 1, iy) - c * 2.0) / (w.dx() * w.dx());
    let lap_y = (grid.get(ix, iy + 1) + grid.get(ix, iy - 1) - c * 2.0) / (w.dy() * w.dy());
    Some(-(lap_x + lap_y) / c)
}
