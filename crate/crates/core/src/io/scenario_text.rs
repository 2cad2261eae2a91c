use std::path::Path;

use super::keyvalue::{si_line, Reader};
use super::units::Quantity;
use super::{OutputSpec, RunSpec, Scenario};
use crate::error::{Error, Result};
use crate::forces::{Elasticity, ForceMode};
use crate::grid::GridSpec;
use crate::lgfields::{MediumSpec, PulseSpec};

pub(crate) fn read_medium(r: &mut Reader) -> Result<Option<MediumSpec>> {
    let n = r.real("medium.n", true)?;
    let rho0 = r.quantity("medium.density", Quantity::Density, true)?;
    let c11 = r.quantity("medium.c11", Quantity::Pressure, true)?;
    let c12 = r.quantity("medium.c12", Quantity::Pressure, true)?;
    let c44 = r.quantity("medium.c44", Quantity::Pressure, true)?;
    let alpha = r.quantity("medium.absorption", Quantity::InverseLength, true)?;
    Ok(match (n, rho0, c11, c12, c44, alpha) {
        (Some(n), Some(rho0), Some(c11), Some(c12), Some(c44), Some(alpha)) => Some(MediumSpec {
            n,
            rho0,
            c11,
            c12,
            c44,
            alpha,
        }),
        _ => None,
    })
}

pub(crate) fn write_medium(out: &mut String, m: &MediumSpec) {
    out.push_str(&format!("medium.n = {:e}\n", m.n));
    out.push_str(&si_line("medium.density", m.rho0, Quantity::Density));
    out.push_str(&si_line("medium.c11", m.c11, Quantity::Pressure));
    out.push_str(&si_line("medium.c12", m.c12, Quantity::Pressure));
    out.push_str(&si_line("medium.c44", m.c44, Quantity::Pressure));
    out.push_str(&si_line("medium.absorption", m.alpha, Quantity::InverseLength));
}

fn count(r: &mut Reader, key: &str) -> Result<Option<usize>> {
    match r.integer(key, true)? {
        Some(v) if v >= 0 => Ok(Some(v as usize)),
        Some(_) => {
            r.missing.push(crate::error::Violation::new(key, "must be nonnegative"));
            Ok(None)
        }
        None => Ok(None),
    }
}

/// Parse and fully validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut r = Reader::new(text)?;
    let name = r.word("name", false)?.unwrap_or_else(|| "scenario".to_string());

    let p = r.integer("pulse.p", true)?;
    let l = r.integer("pulse.l", true)?;
    let sigma = r.integer("pulse.sigma", true)?;
    let energy = r.quantity("pulse.energy", Quantity::Energy, true)?;
    let wavelength = r.quantity("pulse.wavelength", Quantity::Length, true)?;
    let rel_bandwidth = r.real("pulse.rel_bandwidth", true)?;
    let waist = r.quantity("pulse.waist", Quantity::Length, true)?;

    let medium = read_medium(&mut r)?;

    let nx = count(&mut r, "grid.nx")?;
    let ny = count(&mut r, "grid.ny")?;
    let nz = count(&mut r, "grid.nz")?;
    let dx = r.quantity("grid.dx", Quantity::Length, true)?;
    let dy = r.quantity("grid.dy", Quantity::Length, true)?;
    let dz = r.quantity("grid.dz", Quantity::Length, true)?;
    let z_start = r.quantity("grid.z_start", Quantity::Length, true)?;
    let window_speed = r.quantity("grid.window_speed", Quantity::Speed, true)?;
    let comove_from = r.quantity("grid.comove_from", Quantity::Time, true)?;
    let comove_until = r.quantity("grid.comove_until", Quantity::Time, true)?;
    let t0 = r.quantity("grid.t0", Quantity::Time, true)?;
    let t1 = r.quantity("grid.t1", Quantity::Time, true)?;
    let dt = r.quantity("grid.dt", Quantity::Time, true)?;

    let defaults = RunSpec::default();
    let mode = r
        .choice("run.mode", &["time-averaged", "instantaneous"], ForceMode::parse)?
        .unwrap_or(defaults.mode);
    let elasticity = r
        .choice("run.elasticity", &["off", "on"], Elasticity::parse)?
        .unwrap_or(defaults.elasticity);
    let report_time = r
        .quantity("run.report_time", Quantity::Time, false)?
        .unwrap_or(defaults.report_time);
    let snapshot_every = match r.integer("run.snapshot_every", false)? {
        Some(v) if v >= 0 => v as usize,
        Some(_) => {
            r.missing.push(crate::error::Violation::new("run.snapshot_every", "must be nonnegative"));
            0
        }
        None => 0,
    };
    let directory = r.word("output.directory", false)?;
    let field_dump = r.boolean("output.field_dump")?.unwrap_or(false);
    let tables = r.boolean("output.tables")?.unwrap_or(false);

    let mut violations = std::mem::take(&mut r.missing);
    violations.extend(r.unknown());

    let small = |v: Option<i64>, key: &str, violations: &mut Vec<_>| -> Option<i64> {
        match v {
            Some(x) if x.abs() <= 64 => Some(x),
            Some(_) => {
                violations.push(crate::error::Violation::new(key, "magnitude above 64 is not supported"));
                None
            }
            None => None,
        }
    };
    let p = small(p, "pulse.p", &mut violations);
    let l = small(l, "pulse.l", &mut violations);
    let sigma = small(sigma, "pulse.sigma", &mut violations);
    if let Some(pv) = p {
        if pv < 0 {
            violations.push(crate::error::Violation::new("pulse.p", "must be nonnegative"));
        }
    }

    let scenario = match (
        p, l, sigma, energy, wavelength, rel_bandwidth, waist, medium, nx, ny, nz, dx, dy, dz,
        z_start, window_speed, comove_from, comove_until, t0, t1, dt,
    ) {
        (
            Some(p), Some(l), Some(sigma), Some(energy), Some(wavelength), Some(rel_bandwidth),
            Some(waist), Some(medium), Some(nx), Some(ny), Some(nz), Some(dx), Some(dy), Some(dz),
            Some(z_start), Some(window_speed), Some(comove_from), Some(comove_until), Some(t0),
            Some(t1), Some(dt),
        ) if p >= 0 => Some(Scenario {
            name,
            pulse: PulseSpec {
                p: p as u32,
                l: l as i32,
                sigma: sigma as i32,
                energy,
                wavelength,
                rel_bandwidth,
                waist,
            },
            medium,
            grid: GridSpec {
                nx,
                ny,
                nz,
                dx,
                dy,
                dz,
                z_start,
                window_speed,
                comove_from,
                comove_until,
                t0,
                t1,
                dt,
            },
            run: RunSpec {
                mode,
                elasticity,
                report_time,
                snapshot_every,
            },
            output: OutputSpec {
                directory,
                field_dump,
                tables,
            },
        }),
        _ => None,
    };
    match scenario {
        Some(s) => {
            violations.extend(s.validate());
            if violations.is_empty() {
                Ok(s)
            } else {
                Err(Error::Invalid(violations))
            }
        }
        None => {
            // report what can be checked on the pieces that did parse
            if let (Some(p), Some(l), Some(sigma), Some(energy), Some(wavelength), Some(rel_bandwidth), Some(waist)) =
                (p, l, sigma, energy, wavelength, rel_bandwidth, waist)
            {
                let pulse = PulseSpec {
                    p: p.max(0) as u32,
                    l: l as i32,
                    sigma: sigma as i32,
                    energy,
                    wavelength,
                    rel_bandwidth,
                    waist,
                };
                violations.extend(pulse.validate());
            }
            if let Some(m) = medium {
                violations.extend(m.validate());
            }
            Err(Error::Invalid(violations))
        }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

/// Canonical text form in SI units.
pub fn scenario_to_text(s: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = {}\n\n", s.name));
    let p = &s.pulse;
    out.push_str(&format!("pulse.p = {}\n", p.p));
    out.push_str(&format!("pulse.l = {}\n", p.l));
    out.push_str(&format!("pulse.sigma = {}\n", p.sigma));
    out.push_str(&si_line("pulse.energy", p.energy, Quantity::Energy));
    out.push_str(&si_line("pulse.wavelength", p.wavelength, Quantity::Length));
    out.push_str(&format!("pulse.rel_bandwidth = {:e}\n", p.rel_bandwidth));
    out.push_str(&si_line("pulse.waist", p.waist, Quantity::Length));
    out.push('\n');
    write_medium(&mut out, &s.medium);
    out.push('\n');
    let g = &s.grid;
    out.push_str(&format!("grid.nx = {}\n", g.nx));
    out.push_str(&format!("grid.ny = {}\n", g.ny));
    out.push_str(&format!("grid.nz = {}\n", g.nz));
    out.push_str(&si_line("grid.dx", g.dx, Quantity::Length));
    out.push_str(&si_line("grid.dy", g.dy, Quantity::Length));
    out.push_str(&si_line("grid.dz", g.dz, Quantity::Length));
    out.push_str(&si_line("grid.z_start", g.z_start, Quantity::Length));
    out.push_str(&si_line("grid.window_speed", g.window_speed, Quantity::Speed));
    out.push_str(&si_line("grid.comove_from", g.comove_from, Quantity::Time));
    out.push_str(&si_line("grid.comove_until", g.comove_until, Quantity::Time));
    out.push_str(&si_line("grid.t0", g.t0, Quantity::Time));
    out.push_str(&si_line("grid.t1", g.t1, Quantity::Time));
    out.push_str(&si_line("grid.dt", g.dt, Quantity::Time));
    out.push('\n');
    out.push_str(&format!("run.mode = {}\n", s.run.mode.as_str()));
    out.push_str(&format!("run.elasticity = {}\n", s.run.elasticity.as_str()));
    out.push_str(&si_line("run.report_time", s.run.report_time, Quantity::Time));
    out.push_str(&format!("run.snapshot_every = {}\n", s.run.snapshot_every));
    if let Some(d) = &s.output.directory {
        out.push_str(&format!("output.directory = {d}\n"));
    }
    out.push_str(&format!("output.field_dump = {}\n", s.output.field_dump));
    out.push_str(&format!("output.tables = {}\n", s.output.tables));
    out
}
