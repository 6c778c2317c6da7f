//! One function per subcommand. Each writes its data files and returns the
//! names of what it wrote.

use std::f64::consts::PI;

use serde::Serialize;
use twisted_atoms::cmstate::{
    infinite_mass_channel, measure_winding, resonant_photon, solve_resonance, synthesize_cm_state,
    CmState, WindingMeasurement,
};
use twisted_atoms::constants::{BOHR_IN_METERS, HARTREE_IN_EV, MOMENTUM_AU_IN_SI};
use twisted_atoms::grid::{ComplexGrid, GridWindow};
use twisted_atoms::matrixel::TransitionChannel;
use twisted_atoms::photon::{bessel_mode_field, TwistedPhoton};
use twisted_atoms::scenarios::{baseline_plane_wave, figure2_run, tune_to_sublevel, zeeman_select, ZeemanReport};
use twisted_atoms::Complex64;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

/// Fraction of the half-window used as the first winding radius.
const WINDING_RADIUS_FRACTION: f64 = 0.55;

pub fn amplitudes(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<()> {
    let table = figure2_run(cfg.points, cfg.theta_max)?;
    let sweep = &table.sweep;
    let mut header = vec!["theta_k".to_string()];
    header.extend(sweep.m_b.iter().map(|m| format!("M_N(m_b={m})")));
    let rows: Vec<Vec<f64>> = sweep
        .theta
        .iter()
        .zip(&sweep.magnitudes)
        .map(|(t, mags)| std::iter::once(*t).chain(mags.iter().copied()).collect())
        .collect();
    out.csv("amplitudes.csv", &header, &rows)?;

    let mut header = vec!["theta_k".to_string()];
    for m in &sweep.m_b {
        header.push(format!("re_M_N(m_b={m})"));
        header.push(format!("im_M_N(m_b={m})"));
    }
    let rows: Vec<Vec<f64>> = sweep
        .theta
        .iter()
        .zip(&sweep.values)
        .map(|(t, vals)| std::iter::once(*t).chain(vals.iter().flat_map(|c| [c.re, c.im])).collect())
        .collect();
    out.csv("amplitudes_complex.csv", &header, &rows)?;

    #[derive(Serialize)]
    struct Summary {
        points: usize,
        theta_max: f64,
        dominance_boundary: Option<f64>,
    }
    out.json(
        "amplitudes_summary.json",
        &Summary { points: cfg.points, theta_max: cfg.theta_max, dominance_boundary: table.dominance_boundary },
    )
}

#[derive(Serialize)]
struct PhotonFieldReport {
    m_gamma: i32,
    theta_k: f64,
    helicity: i32,
    photon_energy: f64,
    kappa: f64,
    density_at_origin: f64,
    winding_az: i32,
    winding_az_residual: f64,
    max_ring_variation: f64,
}

fn photon_for(cfg: &RunConfig) -> CliResult<TwistedPhoton> {
    match cfg.photon_energy {
        Some(w) => Ok(TwistedPhoton::from_energy(w, cfg.theta_k, cfg.m_gamma, cfg.helicity()?)?),
        None => Ok(resonant_photon(&cfg.twisted_kinematics()?)?),
    }
}

/// Density and phases of the twisted photon on a grid in κx, κy. The
/// photon is centred on the origin regardless of the impact parameter.
pub fn photon_field(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<()> {
    let photon = photon_for(cfg)?.with_impact_parameter([0.0, 0.0]);
    let k = photon.kappa;
    let half = 0.5 * cfg.photon_window / k;
    let window = GridWindow::square([0.0, 0.0], half, cfg.grid_points)?;
    let fields: Vec<[Complex64; 3]> = (0..window.ny)
        .flat_map(|iy| (0..window.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| bessel_mode_field(&photon, [window.x(ix), window.y(iy), 0.0]))
        .collect();
    let component = |c: usize| ComplexGrid {
        window,
        z_slice: 0.0,
        values: fields.iter().map(|f| f[c]).collect(),
    };
    let (ax, az) = (component(0), component(2));
    let density = |ix: usize, iy: usize| fields[iy * window.nx + ix].iter().map(|c| c.norm_sqr()).sum::<f64>();
    out.real_grid("photon_density.jsonl", "density", "kappa_x,kappa_y", &ax, k, density)?;
    out.real_grid("photon_arg_ax.jsonl", "arg_ax", "kappa_x,kappa_y", &ax, k, |ix, iy| ax.get(ix, iy).arg())?;
    out.real_grid("photon_arg_az.jsonl", "arg_az", "kappa_x,kappa_y", &az, k, |ix, iy| az.get(ix, iy).arg())?;

    let winding = measure_winding(&az, [0.0, 0.0], WINDING_RADIUS_FRACTION * half)?;
    let ring = |r: f64| -> Vec<f64> {
        (0..64)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / 64.0;
                bessel_mode_field(&photon, [r * phi.cos(), r * phi.sin(), 0.0]).iter().map(|c| c.norm_sqr()).sum()
            })
            .collect()
    };
    let max_ring_variation = [1.0, 3.0, 5.0]
        .iter()
        .map(|u| {
            let d = ring(u / k);
            let hi = d.iter().cloned().fold(f64::MIN, f64::max);
            let lo = d.iter().cloned().fold(f64::MAX, f64::min);
            (hi - lo) / hi.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    out.json(
        "photon_field.json",
        &PhotonFieldReport {
            m_gamma: photon.m_gamma,
            theta_k: photon.opening_angle(),
            helicity: photon.helicity.value(),
            photon_energy: photon.energy(),
            kappa: k,
            density_at_origin: density_at(&photon),
            winding_az: winding.winding,
            winding_az_residual: winding.residual,
            max_ring_variation,
        },
    )
}

fn density_at(photon: &TwistedPhoton) -> f64 {
    bessel_mode_field(photon, [0.0; 3]).iter().map(|c| c.norm_sqr()).sum()
}

#[derive(Serialize)]
struct SiValues {
    #[serde(rename = "E_b_eV")]
    e_b_ev: f64,
    #[serde(rename = "P_zb_kg_m_per_s")]
    p_zb: f64,
    kappa_per_meter: f64,
    #[serde(rename = "photon_energy_eV")]
    photon_energy_ev: f64,
}

#[derive(Serialize)]
struct CmReport {
    #[serde(rename = "E_b")]
    e_b: f64,
    #[serde(rename = "P_zb")]
    p_zb: f64,
    kappa: f64,
    nu: i32,
    #[serde(rename = "theta_Pb")]
    theta_pb: f64,
    winding_measured: i32,
    winding_residual: f64,
    winding_radius: f64,
    amplitude_abs: f64,
    photon_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    infinite_mass_allowed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    si: Option<SiValues>,
}

pub fn cm_state(cfg: &RunConfig, show_si: bool, out: &mut OutputDir) -> CliResult<()> {
    let kin = cfg.twisted_kinematics()?;
    let CmState::Twisted(state) = synthesize_cm_state(&kin)? else {
        unreachable!("twisted kinematics");
    };
    let infinite_mass_allowed = if cfg.infinite_mass {
        let omega = solve_resonance(&kin)?;
        let channel = TransitionChannel::new(kin.orbital_a, kin.orbital_b, cfg.helicity()?, omega)?;
        let outcome = infinite_mass_channel(&channel, cfg.m_gamma, cfg.m_a, cfg.m_b, cfg.theta_k)?;
        if !outcome.allowed {
            return Err(CliError::ChannelForbidden(format!(
                "an infinitely heavy atom needs m_b - m_a = m_gamma, got {} - {} != {}",
                cfg.m_b, cfg.m_a, cfg.m_gamma
            )));
        }
        Some(true)
    } else {
        None
    };
    let half = 0.5 * cfg.window / state.kappa;
    let window = GridWindow::square(state.impact_parameter, half, cfg.grid_points)?;
    let grid = twisted_atoms::cmstate::evaluate_cm_grid(&state, window);
    out.complex_grid("cm_grid.jsonl", "cm_state", "bohr", &grid, 1.0)?;
    let WindingMeasurement { winding, residual, radius, .. } =
        measure_winding(&grid, state.impact_parameter, WINDING_RADIUS_FRACTION * half)?;
    let si = show_si.then(|| SiValues {
        e_b_ev: state.energy * HARTREE_IN_EV,
        p_zb: state.p_zb * MOMENTUM_AU_IN_SI,
        kappa_per_meter: state.kappa / BOHR_IN_METERS,
        photon_energy_ev: state.photon_energy * HARTREE_IN_EV,
    });
    out.json(
        "cm_report.json",
        &CmReport {
            e_b: state.energy,
            p_zb: state.p_zb,
            kappa: state.kappa,
            nu: state.tam_projection,
            theta_pb: state.opening_angle(),
            winding_measured: winding,
            winding_residual: residual,
            winding_radius: radius,
            amplitude_abs: state.amplitude_scale.norm(),
            photon_energy: state.photon_energy,
            infinite_mass_allowed,
            si,
        },
    )
}

#[derive(Serialize)]
struct ZeemanOutput {
    field_strength: f64,
    g_factor: f64,
    linewidth: f64,
    #[serde(flatten)]
    report: ZeemanReport,
}

pub fn zeeman(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<()> {
    let setting = cfg.zeeman()?;
    let kin = cfg.twisted_kinematics()?;
    let photon_energy = match cfg.photon_energy {
        Some(w) => w,
        None => tune_to_sublevel(&setting, &kin, cfg.tune_m_b)?,
    };
    let report = zeeman_select(&setting, &kin, photon_energy)?;
    out.json(
        "zeeman_report.json",
        &ZeemanOutput {
            field_strength: setting.field_strength,
            g_factor: setting.g_factor,
            linewidth: setting.linewidth,
            report,
        },
    )
}

#[derive(Serialize)]
struct BaselineOutput {
    photon_energy: f64,
    momentum: [f64; 3],
    energy: f64,
    amplitude_re: f64,
    amplitude_im: f64,
    amplitude_abs: f64,
    #[serde(rename = "energy_eV", skip_serializing_if = "Option::is_none")]
    energy_ev: Option<f64>,
}

pub fn baseline(cfg: &RunConfig, show_si: bool, out: &mut OutputDir) -> CliResult<()> {
    let report = baseline_plane_wave(&cfg.plane_wave_kinematics()?)?;
    out.json(
        "baseline_report.json",
        &BaselineOutput {
            photon_energy: report.photon_energy,
            momentum: report.momentum,
            energy: report.energy,
            amplitude_re: report.amplitude.re,
            amplitude_im: report.amplitude.im,
            amplitude_abs: report.amplitude.norm(),
            energy_ev: show_si.then_some(report.energy * HARTREE_IN_EV),
        },
    )
}
