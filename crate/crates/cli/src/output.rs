//! Deterministic writers: fixed-precision CSV, JSON-lines grids and
//! pretty-printed JSON reports. No timestamps go into data files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use twisted_atoms::grid::{ComplexGrid, GridWindow};

use crate::error::{CliError, CliResult};

pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

#[derive(Serialize)]
struct GridHeader<'a> {
    grid: &'a str,
    units: &'a str,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
    z: f64,
}

#[derive(Serialize)]
struct ComplexSample {
    ix: usize,
    iy: usize,
    x: f64,
    y: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct RealSample {
    ix: usize,
    iy: usize,
    x: f64,
    y: f64,
    value: f64,
}

/// Fixed-point number with twelve decimals.
pub fn fixed(v: f64) -> String {
    format!("{v:.12}")
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Io { path: root.to_path_buf(), source })?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn write_with<F>(&mut self, name: &str, body: F) -> CliResult<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    {
        let path = self.root.join(name);
        let io_err = |source| CliError::Io { path: path.clone(), source };
        let file = File::create(&path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        body(&mut out).and_then(|_| out.flush()).map_err(io_err)?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn csv(&mut self, name: &str, header: &[String], rows: &[Vec<f64>]) -> CliResult<()> {
        self.write_with(name, |out| {
            writeln!(out, "{}", header.join(","))?;
            for row in rows {
                let cells: Vec<String> = row.iter().map(|&v| fixed(v)).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
            Ok(())
        })
    }

    /// Header line, then one `{ix, iy, x, y, re, im}` object per sample.
    /// `scale` rescales the coordinates (e.g. to κx, κy).
    pub fn complex_grid(&mut self, name: &str, label: &str, units: &str, grid: &ComplexGrid, scale: f64) -> CliResult<()> {
        let w = grid.window;
        self.write_with(name, |out| {
            write_header(out, label, units, &w, grid.z_slice, scale)?;
            for iy in 0..w.ny {
                for ix in 0..w.nx {
                    let v = grid.get(ix, iy);
                    let s = ComplexSample { ix, iy, x: w.x(ix) * scale, y: w.y(iy) * scale, re: v.re, im: v.im };
                    serde_json::to_writer(&mut *out, &s)?;
                    writeln!(out)?;
                }
            }
            Ok(())
        })
    }

    pub fn real_grid<F>(&mut self, name: &str, label: &str, units: &str, grid: &ComplexGrid, scale: f64, f: F) -> CliResult<()>
    where
        F: Fn(usize, usize) -> f64,
    {
        let w = grid.window;
        self.write_with(name, |out| {
            write_header(out, label, units, &w, grid.z_slice, scale)?;
            for iy in 0..w.ny {
                for ix in 0..w.nx {
                    let s = RealSample { ix, iy, x: w.x(ix) * scale, y: w.y(iy) * scale, value: f(ix, iy) };
                    serde_json::to_writer(&mut *out, &s)?;
                    writeln!(out)?;
                }
            }
            Ok(())
        })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        self.write_with(name, |out| {
            serde_json::to_writer_pretty(&mut *out, value)?;
            writeln!(out)
        })
    }
}

fn write_header(out: &mut impl Write, label: &str, units: &str, w: &GridWindow, z: f64, scale: f64) -> std::io::Result<()> {
    let header = GridHeader {
        grid: label,
        units,
        x_min: w.x_min * scale,
        x_max: w.x_max * scale,
        y_min: w.y_min * scale,
        y_max: w.y_max * scale,
        nx: w.nx,
        ny: w.ny,
        z,
    };
    serde_json::to_writer(&mut *out, &header)?;
    writeln!(out)
}
