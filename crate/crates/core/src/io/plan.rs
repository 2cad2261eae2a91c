use std::path::Path;

use super::keyvalue::{si_line, Reader};
use super::scenario_text::{read_medium, write_medium};
use super::units::Quantity;
use crate::error::{Error, Result};
use crate::fiber::FiberPlan;

pub fn parse_plan(text: &str) -> Result<FiberPlan> {
    let mut r = Reader::new(text)?;
    let diameter = r.quantity("fiber.diameter", Quantity::Length, true)?;
    let length = r.quantity("fiber.length", Quantity::Length, true)?;
    let u_th = r.quantity("fiber.breakdown_energy_density", Quantity::EnergyDensity, true)?;
    let intensity = r.quantity("beam.intensity", Quantity::Intensity, true)?;
    let sigma = r.integer("beam.sigma", true)?;
    let wavelength = r.quantity("beam.wavelength", Quantity::Length, true)?;
    let medium = read_medium(&mut r)?;
    let mut violations = std::mem::take(&mut r.missing);
    violations.extend(r.unknown());
    if sigma.is_some_and(|s| s.abs() > 1) {
        violations.push(crate::error::Violation::new("beam.sigma", "must be +1 or -1"));
    }
    let plan = match (diameter, length, u_th, intensity, sigma, wavelength, medium) {
        (Some(d), Some(length), Some(u_th), Some(intensity), Some(sigma), Some(wavelength), Some(medium))
            if sigma.abs() <= 1 =>
        {
            Some(FiberPlan {
                radius: 0.5 * d,
                length,
                intensity,
                sigma: sigma as i32,
                wavelength,
                medium,
                u_th,
            })
        }
        _ => None,
    };
    match plan {
        Some(p) => {
            violations.extend(p.validate());
            if violations.is_empty() {
                Ok(p)
            } else {
                Err(Error::Invalid(violations))
            }
        }
        None => Err(Error::Invalid(violations)),
    }
}

pub fn load_plan(path: &Path) -> Result<FiberPlan> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_plan(&text)
}

pub fn plan_to_text(p: &FiberPlan) -> String {
    let mut out = String::new();
    out.push_str(&si_line("fiber.diameter", p.diameter(), Quantity::Length));
    out.push_str(&si_line("fiber.length", p.length, Quantity::Length));
    out.push_str(&si_line("fiber.breakdown_energy_density", p.u_th, Quantity::EnergyDensity));
    out.push_str(&si_line("beam.intensity", p.intensity, Quantity::Intensity));
    out.push_str(&format!("beam.sigma = {}\n", p.sigma));
    out.push_str(&si_line("beam.wavelength", p.wavelength, Quantity::Length));
    write_medium(&mut out, &p.medium);
    out
}
