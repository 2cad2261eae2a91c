//! Shipped scenarios and the window/timeline builder behind them.
//!
//! Desk-scale pulses use w0 = 20 lambda0 / n and a 1% bandwidth, which keeps
//! the per-photon momenta of the mm-scale pulse while fitting a small grid.

use super::{OutputSpec, RunSpec, Scenario};
use crate::constants::C;
use crate::error::{Error, Result};
use crate::fiber::FiberPlan;
use crate::forces::{Elasticity, ForceMode};
use crate::grid::{GridSpec, ENVELOPE_FLOOR};
use crate::lgfields::{MediumSpec, PulseSpec};

pub const PRESET_NAMES: [&str; 5] = [
    "silicon-lg02-linear",
    "silicon-lg00-circular",
    "silicon-lg01-linear",
    "silicon-lg01-circular",
    "vacuum-null",
];

pub const PLAN_PRESET: &str = "fiber-silicon";

pub fn preset_names() -> &'static [&'static str] {
    &PRESET_NAMES
}

/// Window shape and time step choices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowOptions {
    pub transverse_cells: usize,
    pub longitudinal_cells: usize,
    /// Transverse window side in units of w0.
    pub transverse_waists: f64,
    /// Window length in units of 1/(n dk0).
    pub length_widths: f64,
    /// Cells the window advances while following the pulse around t = 0.
    pub comove_cells: usize,
    pub mode: ForceMode,
    /// Time step as a fraction of its mode limit.
    pub dt_fraction: f64,
}

impl Default for WindowOptions {
    fn default() -> Self {
        Self {
            transverse_cells: 24,
            longitudinal_cells: 32,
            transverse_waists: 8.0,
            length_widths: 10.0,
            comove_cells: 4,
            mode: ForceMode::TimeAveraged,
            dt_fraction: 1.0,
        }
    }
}

/// Largest stable time step for a force mode.
pub fn dt_limit(pulse: &PulseSpec, mode: ForceMode) -> f64 {
    match mode {
        ForceMode::TimeAveraged => 0.05 / (pulse.delta_k0() * C),
        ForceMode::Instantaneous => pulse.wavelength / C / 32.0,
    }
}

/// A window centered on the pulse at t = 0 that starts and ends with the
/// pulse outside it.
///
/// In instantaneous mode the cell length is nudged so that twice the carrier
/// phase advances by an odd multiple of pi per cell; the force oscillating at
/// twice the carrier then alternates in sign from cell to cell instead of
/// aliasing onto the envelope.
pub fn build_grid(pulse: &PulseSpec, medium: &MediumSpec, opts: &WindowOptions) -> GridSpec {
    let n = medium.n;
    let a = n * pulse.delta_k0();
    let vg = C / n;
    let side = opts.transverse_waists * pulse.waist;
    let dx = side / opts.transverse_cells as f64;
    let mut dz = opts.length_widths / a / opts.longitudinal_cells as f64;
    if opts.mode == ForceMode::Instantaneous {
        let phase = 2.0 * n * dz / pulse.wavelength;
        let m = (phase - 0.5).round().max(0.0);
        dz = (m + 0.5) * pulse.wavelength / (2.0 * n);
    }
    let len = dz * opts.longitudinal_cells as f64;
    let dt = dt_limit(pulse, opts.mode) * opts.dt_fraction;

    let tau = opts.comove_cells as f64 * dz / vg;
    let (comove_from, comove_until) = if opts.comove_cells > 0 {
        (-0.5 * tau, 0.5 * tau)
    } else {
        (0.0, 0.0)
    };
    let shift_at_zero = opts.comove_cells / 2;
    let z_start = -0.5 * len - shift_at_zero as f64 * dz;
    let clearance = (-2.0 * ENVELOPE_FLOOR.ln()).sqrt() / a * 1.02;
    let n0 = ((clearance - z_start) / (vg * dt)).ceil();
    let front = z_start + opts.comove_cells as f64 * dz + len;
    let n1 = ((front + clearance) / (vg * dt)).ceil();
    GridSpec {
        nx: opts.transverse_cells,
        ny: opts.transverse_cells,
        nz: opts.longitudinal_cells,
        dx,
        dy: dx,
        dz,
        z_start,
        window_speed: vg,
        comove_from,
        comove_until,
        t0: -n0 * dt,
        t1: n1 * dt,
        dt,
    }
}

/// Desk-scale LG pulse.
pub fn desk_pulse(p: u32, l: i32, sigma: i32, medium: &MediumSpec) -> PulseSpec {
    PulseSpec {
        p,
        l,
        sigma,
        energy: 5e-3,
        wavelength: 1550e-9,
        rel_bandwidth: 1e-2,
        waist: 20.0 * 1550e-9 / medium.n,
    }
}

/// The mm-scale 5 mJ pulse: dk_x = sqrt(2)/w0 =
/// 1e-4 k0 and a 1e-5 relative bandwidth.
pub fn mm_scale_pulse(l: i32, sigma: i32) -> PulseSpec {
    let wavelength = 1550e-9;
    let k0 = 2.0 * std::f64::consts::PI / wavelength;
    PulseSpec {
        p: 0,
        l,
        sigma,
        energy: 5e-3,
        wavelength,
        rel_bandwidth: 1e-5,
        waist: std::f64::consts::SQRT_2 / (1e-4 * k0),
    }
}

pub fn scenario(name: &str, pulse: PulseSpec, medium: MediumSpec, opts: &WindowOptions) -> Scenario {
    Scenario {
        name: name.to_string(),
        pulse,
        medium,
        grid: build_grid(&pulse, &medium, opts),
        run: RunSpec {
            mode: opts.mode,
            elasticity: Elasticity::Off,
            report_time: 0.0,
            snapshot_every: 0,
        },
        output: OutputSpec::default(),
    }
}

/// The same physical case rebuilt for instantaneous-field forces.
pub fn instantaneous_variant(s: &Scenario, opts: &WindowOptions) -> Scenario {
    let opts = WindowOptions {
        mode: ForceMode::Instantaneous,
        ..*opts
    };
    Scenario {
        name: format!("{}-instantaneous", s.name),
        ..scenario(&s.name, s.pulse, s.medium, &opts)
    }
}

/// Options that reproduce a scenario's own window shape, for rebuilding it.
pub fn options_of(s: &Scenario) -> WindowOptions {
    let a = s.medium.n * s.pulse.delta_k0();
    let comove = s.grid.shift_at(s.grid.t1);
    WindowOptions {
        transverse_cells: s.grid.nx,
        longitudinal_cells: s.grid.nz,
        transverse_waists: s.grid.extent_x() / s.pulse.waist,
        length_widths: s.grid.window_length() * a,
        comove_cells: comove,
        mode: s.run.mode,
        dt_fraction: 1.0,
    }
}

/// Ring-symmetry check case: instantaneous forces, a finer transverse grid
/// and a broader spectrum to keep the step count small.
pub fn discriminator_scenario(l: i32, sigma: i32) -> Scenario {
    let si = MediumSpec::silicon();
    let pulse = PulseSpec {
        rel_bandwidth: 0.05,
        ..desk_pulse(0, l, sigma, &si)
    };
    let opts = WindowOptions {
        transverse_cells: 48,
        longitudinal_cells: 16,
        comove_cells: 0,
        mode: ForceMode::Instantaneous,
        ..WindowOptions::default()
    };
    scenario(&format!("ring-lg0{l}-sigma{sigma}"), pulse, si, &opts)
}

pub fn preset(name: &str) -> Result<Scenario> {
    let si = MediumSpec::silicon();
    let opts = WindowOptions::default();
    let (l, sigma, medium) = match name {
        "silicon-lg02-linear" => (2, 0, si),
        "silicon-lg00-circular" => (0, 1, si),
        "silicon-lg01-linear" => (1, 0, si),
        "silicon-lg01-circular" => (1, 1, si),
        "vacuum-null" => (1, 1, MediumSpec::vacuum_like()),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown preset '{name}' (known: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(scenario(name, desk_pulse(0, l, sigma, &medium), medium, &opts))
}

/// The fiber of the rotation estimate: d = 2.5 um, I = 1.1e9 W/cm^2.
pub fn fiber_preset() -> FiberPlan {
    FiberPlan {
        radius: 1.25e-6,
        length: 1e-2,
        intensity: 1.1e13,
        sigma: 1,
        wavelength: 1550e-9,
        medium: MediumSpec::silicon(),
        u_th: 13.3e6,
    }
}
