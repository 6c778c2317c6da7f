//! Command-line front end for twisted-photon absorption calculations.
//!
//! ```text
//! twisted-atoms amplitudes   --out run/ --points 141 --theta-max 1.4
//! twisted-atoms photon-field --out run/ --m-gamma 4 --theta-k 0.2
//! twisted-atoms cm-state     --out run/ --impact-b 5 0 --tilt 0.001 0
//! twisted-atoms zeeman       --out run/ --field 1e-6 --tune-m-b 1
//! twisted-atoms baseline     --out run/ --plane-theta 0.3
//! ```
//!
//! Every run writes its data files plus `run.json`, which echoes the fully
//! resolved configuration. Exit codes: 0 ok, 2 configuration, 3 kinematics,
//! 4 numerical, 5 selection or resolvability, 6 I/O, 7 forbidden channel.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use twisted_atoms::cmstate::Geometry;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::OutputDir;

#[derive(Parser)]
#[command(name = "twisted-atoms", version, about = "Absorption of twisted photons by hydrogen-like atoms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized 1s→2p amplitudes versus opening angle (CSV).
    Amplitudes(CommonArgs),
    /// Twisted photon density and phase maps (JSON lines).
    PhotonField(CommonArgs),
    /// Center-of-mass state grid and report.
    CmState(CommonArgs),
    /// Zeeman selection of a single final sublevel.
    Zeeman(CommonArgs),
    /// Plane-wave photon control run.
    Baseline(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Amplitudes(_) => "amplitudes",
            Command::PhotonField(_) => "photon-field",
            Command::CmState(_) => "cm-state",
            Command::Zeeman(_) => "zeeman",
            Command::Baseline(_) => "baseline",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Amplitudes(a)
            | Command::PhotonField(a)
            | Command::CmState(a)
            | Command::Zeeman(a)
            | Command::Baseline(a) => a,
        }
    }
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// TOML key-value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    theta_max: Option<f64>,
    /// Photon beam axis offset (Bohr).
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    impact_b: Option<Vec<f64>>,
    /// Transverse momentum of the incoming atom (a.u.).
    #[arg(long, num_args = 2, value_names = ["PX", "PY"], allow_negative_numbers = true)]
    tilt: Option<Vec<f64>>,
    /// Require Δm = m_γ as for an infinitely heavy atom.
    #[arg(long)]
    infinite_mass: bool,
    /// Reserved; all computations are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Add SI conversions to reports.
    #[arg(long)]
    show_si: bool,
    #[arg(long, allow_negative_numbers = true)]
    m_gamma: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    m_a: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    m_b: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    helicity: Option<i32>,
    /// Photon opening angle (rad).
    #[arg(long, allow_negative_numbers = true)]
    theta_k: Option<f64>,
    /// Longitudinal momentum of the incoming atom (a.u.).
    #[arg(long, allow_negative_numbers = true)]
    p_za: Option<f64>,
    #[arg(long, value_parser = parse_geometry)]
    geometry: Option<Geometry>,
    #[arg(long)]
    grid_points: Option<usize>,
    /// Grid width in units of 1/κ.
    #[arg(long)]
    window: Option<f64>,
    /// Plane-wave polar angle for the baseline (rad).
    #[arg(long)]
    plane_theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    plane_phi: Option<f64>,
    /// Magnetic field, as the Zeeman energy per unit m (Hartree).
    #[arg(long)]
    field: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g_factor: Option<f64>,
    #[arg(long)]
    linewidth: Option<f64>,
    /// Final sublevel the photon is tuned to.
    #[arg(long, allow_negative_numbers = true)]
    tune_m_b: Option<i32>,
    /// Photon energy (Hartree); solved from the resonance when absent.
    #[arg(long)]
    photon_energy: Option<f64>,
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    match s {
        "counter-propagating" | "counter" => Ok(Geometry::CounterPropagating),
        "co-propagating" | "co" => Ok(Geometry::CoPropagating),
        other => Err(format!("unknown geometry `{other}`")),
    }
}

fn pair(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

impl CommonArgs {
    fn resolve(&self) -> CliResult<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(if let Some(v) = self.$field { c.$field = v; })*};
        }
        set!(points, theta_max, m_gamma, m_a, m_b, helicity, theta_k, p_za, geometry, grid_points, window, plane_theta, plane_phi, g_factor, linewidth, tune_m_b, seed);
        if let Some(v) = self.field {
            c.field_strength = v;
        }
        if let Some(w) = self.window {
            c.photon_window = w;
        }
        if let Some(b) = &self.impact_b {
            c.impact_b = pair(b);
        }
        if let Some(t) = &self.tilt {
            c.tilt = pair(t);
        }
        if self.photon_energy.is_some() {
            c.photon_energy = self.photon_energy;
        }
        c.infinite_mass |= self.infinite_mass;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    outputs: &'a [String],
}

fn run(command: &Command) -> CliResult<()> {
    let args = command.args();
    let cfg = args.resolve()?;
    let mut out = OutputDir::create(&args.out)?;
    match command {
        Command::Amplitudes(_) => commands::amplitudes(&cfg, &mut out)?,
        Command::PhotonField(_) => commands::photon_field(&cfg, &mut out)?,
        Command::CmState(_) => commands::cm_state(&cfg, args.show_si, &mut out)?,
        Command::Zeeman(_) => commands::zeeman(&cfg, &mut out)?,
        Command::Baseline(_) => commands::baseline(&cfg, args.show_si, &mut out)?,
    }
    let outputs = out.written().to_vec();
    let sidecar = Sidecar { command: command.name(), version: env!("CARGO_PKG_VERSION"), config: &cfg, outputs: &outputs };
    out.json("run.json", &sidecar)?;
    for name in &outputs {
        println!("{}", args.out.join(name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
