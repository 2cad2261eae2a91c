//! Closed-form planner for spinning a fiber with counter-propagating
//! circularly polarized beams: rotation from the medium's share of the spin
//! versus rotation from absorption.

use crate::constants::C;
use crate::error::{Error, Result, Violation};
use crate::lgfields::MediumSpec;

/// Largest alpha * L for which absorption is treated as linear.
pub const MAX_ALPHA_L: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberPlan {
    /// Fiber radius (m).
    pub radius: f64,
    /// Fiber length (m).
    pub length: f64,
    /// Time-averaged intensity of one beam (W/m^2).
    pub intensity: f64,
    pub sigma: i32,
    /// Vacuum wavelength of the beams (m).
    pub wavelength: f64,
    pub medium: MediumSpec,
    /// Breakdown threshold energy density (J/m^3).
    pub u_th: f64,
}

impl FiberPlan {
    pub fn omega0(&self) -> f64 {
        2.0 * std::f64::consts::PI * C / self.wavelength
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn with_diameter(&self, d: f64) -> Self {
        Self {
            radius: 0.5 * d,
            ..*self
        }
    }

    /// Field energy inside the fiber from both beams.
    pub fn energy_inside(&self) -> f64 {
        2.0 * self.medium.n * std::f64::consts::PI * self.radius.powi(2) * self.length * self.intensity / C
    }

    pub fn moment_of_inertia(&self) -> f64 {
        0.5 * std::f64::consts::PI * self.medium.rho0 * self.radius.powi(4) * self.length
    }

    pub fn threshold(&self) -> f64 {
        threshold_intensity(&self.medium, self.u_th)
    }

    /// Medium angular momentum from its share of the beams' spin.
    pub fn mdw_angular_momentum(&self) -> f64 {
        let n = self.medium.n;
        (1.0 - 1.0 / (n * n)) * self.sigma as f64 * self.energy_inside() / self.omega0()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.medium.validate();
        for (key, v) in [
            ("fiber.radius", self.radius),
            ("fiber.length", self.length),
            ("beam.intensity", self.intensity),
            ("beam.wavelength", self.wavelength),
            ("fiber.breakdown_energy_density", self.u_th),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(Violation::new(key, "must be positive and finite"));
            }
        }
        if self.sigma.abs() != 1 {
            out.push(Violation::new("beam.sigma", "must be +1 or -1"));
        }
        if out.is_empty() && self.intensity > self.threshold() {
            out.push(Violation::new(
                "beam.intensity",
                format!(
                    "{:e} W/m^2 exceeds the breakdown threshold {:e} W/m^2",
                    self.intensity,
                    self.threshold()
                ),
            ));
        }
        out
    }

    fn check_intensity(&self) -> Result<()> {
        let th = self.threshold();
        if self.intensity > th {
            return Err(Error::AboveThreshold {
                intensity: self.intensity,
                threshold: th,
                ratio: self.intensity / th,
            });
        }
        Ok(())
    }
}

pub fn threshold_intensity(medium: &MediumSpec, u_th: f64) -> f64 {
    u_th * C / medium.n
}

/// Rigid rotation rate (rad/s); its sign follows sigma.
pub fn angular_velocity(plan: &FiberPlan) -> Result<f64> {
    plan.check_intensity()?;
    let n = plan.medium.n;
    Ok(4.0 * plan.sigma as f64 * (n - 1.0 / n) * plan.intensity
        / (C * plan.omega0() * plan.medium.rho0 * plan.radius.powi(2)))
}

/// Azimuthal surface displacement from the medium's angular momentum (m).
pub fn displacement_mdw(plan: &FiberPlan, t: f64) -> Result<f64> {
    Ok(plan.radius * angular_velocity(plan)? * t)
}

/// Angular acceleration from absorption. `exact` keeps the full
/// (1 - exp(-alpha L)) absorbed fraction instead of alpha L.
pub fn absorption_angular_acceleration(plan: &FiberPlan, exact: bool) -> f64 {
    let a = plan.medium.alpha;
    let l = plan.length;
    let fraction = if exact { -(-a * l).exp_m1() } else { a * l };
    let torque = fraction * 2.0 * plan.sigma as f64 * std::f64::consts::PI * plan.radius.powi(2)
        * plan.intensity
        / plan.omega0();
    torque / plan.moment_of_inertia()
}

/// Azimuthal surface displacement from absorbed spin (m).
pub fn displacement_abs(plan: &FiberPlan, t: f64) -> Result<f64> {
    plan.check_intensity()?;
    let al = plan.medium.alpha * plan.length;
    if al > MAX_ALPHA_L {
        return Err(Error::AbsorptionNotSmall { alpha_l: al });
    }
    Ok(2.0 * plan.medium.alpha * plan.sigma as f64 * plan.intensity * t * t
        / (plan.omega0() * plan.medium.rho0 * plan.radius))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossover {
    At(f64),
    /// No absorption: the medium contribution dominates forever.
    Never,
}

/// Time at which the absorption displacement catches up with the medium one.
pub fn crossover_time(medium: &MediumSpec) -> Crossover {
    if medium.alpha <= 0.0 {
        return Crossover::Never;
    }
    let n = medium.n;
    Crossover::At(2.0 * (n - 1.0 / n) / (C * medium.alpha))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub times: Vec<f64>,
    pub diameters: Vec<f64>,
    /// `values[i][j]` at `times[i]`, `diameters[j]` (m).
    pub values: Vec<Vec<f64>>,
}

/// Medium-driven displacement over a time by diameter grid.
pub fn sweep_grid(plan: &FiberPlan, times: &[f64], diameters: &[f64]) -> Result<SweepTable> {
    let mut bad = Vec::new();
    if times.is_empty() || times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        bad.push(Violation::new("times", "must be a non-empty list of nonnegative times"));
    }
    if diameters.is_empty() || diameters.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        bad.push(Violation::new("diameters", "must be a non-empty list of positive diameters"));
    }
    if let Crossover::At(t_eq) = crossover_time(&plan.medium) {
        if times.iter().any(|t| *t > t_eq * (1.0 + 1e-12)) {
            bad.push(Violation::new(
                "times",
                format!("must not exceed the crossover time {t_eq:e} s"),
            ));
        }
    }
    if !bad.is_empty() {
        return Err(Error::Invalid(bad));
    }
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let mut row = Vec::with_capacity(diameters.len());
        for &d in diameters {
            row.push(displacement_mdw(&plan.with_diameter(d), t)?);
        }
        values.push(row);
    }
    Ok(SweepTable {
        times: times.to_vec(),
        diameters: diameters.to_vec(),
        values,
    })
}
