//! Rectangular transverse grids of complex samples.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Transverse window [x_min, x_max] × [y_min, y_max] sampled at nx × ny
/// points including both edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridWindow {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_max < x_min || y_max < y_min {
            return Err(Error::domain("grid window must be finite and ordered"));
        }
        if nx == 0 || ny == 0 || (nx == 1 && x_max > x_min) || (ny == 1 && y_max > y_min) {
            return Err(Error::domain("grid resolution must be positive"));
        }
        Ok(Self { x_min, x_max, y_min, y_max, nx, ny })
    }

    /// Square window of side 2·half_width centred on `center`.
    pub fn square(center: [f64; 2], half_width: f64, n: usize) -> Result<Self> {
        Self::new(
            center[0] - half_width,
            center[0] + half_width,
            center[1] - half_width,
            center[1] + half_width,
            n,
            n,
        )
    }

    pub fn dx(&self) -> f64 {
        if self.nx > 1 { (self.x_max - self.x_min) / (self.nx - 1) as f64 } else { 0.0 }
    }

    pub fn dy(&self) -> f64 {
        if self.ny > 1 { (self.y_max - self.y_min) / (self.ny - 1) as f64 } else { 0.0 }
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + ix as f64 * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + iy as f64 * self.dy()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }

    pub fn corners(&self) -> [[f64; 2]; 4] {
        [
            [self.x_min, self.y_min],
            [self.x_max, self.y_min],
            [self.x_min, self.y_max],
            [self.x_max, self.y_max],
        ]
    }
}

/// Complex samples over a window at fixed longitudinal coordinate, stored
/// row-major (index = iy·nx + ix).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    pub window: GridWindow,
    pub z_slice: f64,
    pub values: Vec<Complex64>,
}

impl ComplexGrid {
    /// Samples `f(x, y)`, rows in parallel.
    pub fn from_fn<F>(window: GridWindow, z_slice: f64, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let values = (0..window.ny)
            .into_par_iter()
            .flat_map_iter(|iy| {
                let y = window.y(iy);
                let f = &f;
                (0..window.nx).map(move |ix| f(window.x(ix), y))
            })
            .collect();
        Self { window, z_slice, values }
    }

    pub fn try_from_fn<F>(window: GridWindow, z_slice: f64, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        let rows: Result<Vec<Vec<Complex64>>> = (0..window.ny)
            .into_par_iter()
            .map(|iy| {
                let y = window.y(iy);
                (0..window.nx).map(|ix| f(window.x(ix), y)).collect()
            })
            .collect();
        Ok(Self { window, z_slice, values: rows?.into_iter().flatten().collect() })
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.window.nx + ix]
    }

    pub fn map<F: Fn(Complex64) -> Complex64 + Sync>(&self, f: F) -> Self {
        Self {
            window: self.window,
            z_slice: self.z_slice,
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Bilinear interpolation; `None` outside the window.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<Complex64> {
        let w = &self.window;
        if !w.contains(x, y) || w.nx < 2 || w.ny < 2 {
            return None;
        }
        let fx = ((x - w.x_min) / w.dx()).min((w.nx - 1) as f64);
        let fy = ((y - w.y_min) / w.dy()).min((w.ny - 1) as f64);
        let ix = (fx.floor() as usize).min(w.nx - 2);
        let iy = (fy.floor() as usize).min(w.ny - 2);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let v00 = self.get(ix, iy);
        let v10 = self.get(ix + 1, iy);
        let v01 = self.get(ix, iy + 1);
        let v11 = self.get(ix + 1, iy + 1);
        Some(v00 * ((1.0 - tx) * (1.0 - ty)) + v10 * (tx * (1.0 - ty)) + v01 * ((1.0 - tx) * ty) + v11 * (tx * ty))
    }

    /// ‖self − other‖₂ / ‖other‖₂ over matching samples.
    pub fn relative_l2_error(&self, other: &ComplexGrid) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::domain("grids differ in shape"));
        }
        let diff: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        let norm: f64 = other.values.iter().map(|b| b.norm_sqr()).sum();
        Ok((diff / norm.max(f64::MIN_POSITIVE)).sqrt())
    }
}
