//! Laguerre-Gaussian mode functions and the fields of linearly and circularly
//! polarized LG pulses in a nondispersive dielectric.
//!
//! Fields use the monochromatic closed forms by default: the spectral integral
//! over k collapses onto the central wavenumber and the pulse shape is carried
//! by a Gaussian envelope travelling at c/n. The exact spectral integrals are
//! available in [`spectral`] as a quadrature reference.

mod mode;
mod normalize;
mod pulse;
pub mod spectral;

pub use mode::{laguerre, lg_mode, ModeValue};
pub use normalize::{clipped_fraction, normalize_u0, transverse_energy_reference};
pub use pulse::{fields_circular, fields_linear, poynting_instantaneous, Phasors, PulseField};

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::constants::{C, HBAR};
use crate::error::Violation;

/// Complex mode amplitude in mode-function units.
pub type ComplexAmplitude = Complex64;

/// Pulse parameters. SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Radial index.
    pub p: u32,
    /// Topological charge of the vortex.
    pub l: i32,
    /// Helicity: 0 for x-polarized light, +1/-1 for right/left circular.
    pub sigma: i32,
    /// Total electromagnetic energy U0 (J).
    pub energy: f64,
    /// Central vacuum wavelength (m).
    pub wavelength: f64,
    /// Relative spectral width dk0/k0.
    pub rel_bandwidth: f64,
    /// Waist radius w0 (m).
    pub waist: f64,
}

impl PulseSpec {
    pub fn k0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn omega0(&self) -> f64 {
        C * self.k0()
    }

    /// Vacuum standard deviation of the wavenumber.
    pub fn delta_k0(&self) -> f64 {
        self.rel_bandwidth * self.k0()
    }

    pub fn photon_energy(&self) -> f64 {
        HBAR * self.omega0()
    }

    pub fn photon_number(&self) -> f64 {
        self.energy / self.photon_energy()
    }

    /// Standard deviation of the transverse wavenumbers, sqrt(2)/w0.
    pub fn transverse_k_spread(&self) -> f64 {
        std::f64::consts::SQRT_2 / self.waist
    }

    /// Longitudinal standard deviation of the energy density in a medium of index `n`.
    pub fn delta_z(&self, n: f64) -> f64 {
        1.0 / (std::f64::consts::SQRT_2 * n * self.delta_k0())
    }

    /// Temporal standard deviation of the energy density.
    pub fn delta_t(&self, n: f64) -> f64 {
        n * self.delta_z(n) / C
    }

    pub fn fwhm_duration(&self, n: f64) -> f64 {
        2.0 * (2.0 * std::f64::consts::LN_2).sqrt() * self.delta_t(n)
    }

    pub fn is_circular(&self) -> bool {
        self.sigma != 0
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.energy > 0.0 && self.energy.is_finite()) {
            out.push(Violation::new("pulse.energy", "must be positive and finite"));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            out.push(Violation::new("pulse.wavelength", "must be positive and finite"));
        }
        if !(self.waist > 0.0 && self.waist.is_finite()) {
            out.push(Violation::new("pulse.waist", "must be positive and finite"));
        }
        if !(self.rel_bandwidth > 0.0 && self.rel_bandwidth < 0.1) {
            out.push(Violation::new(
                "pulse.rel_bandwidth",
                format!(
                    "{} outside (0, 0.1): monochromatic approximation invalid",
                    self.rel_bandwidth
                ),
            ));
        }
        if !(-1..=1).contains(&self.sigma) {
            out.push(Violation::new("pulse.sigma", "must be -1, 0 or +1"));
        }
        out
    }
}

/// Homogeneous dielectric with cubic elasticity, crystal axes along the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    /// Phase refractive index.
    pub n: f64,
    /// Mass density (kg/m^3).
    pub rho0: f64,
    pub c11: f64,
    pub c12: f64,
    pub c44: f64,
    /// Absorption coefficient (1/m).
    pub alpha: f64,
}

impl MediumSpec {
    /// Crystalline silicon at 1550 nm, elastic constants for the (100) plane.
    pub fn silicon() -> Self {
        Self {
            n: 3.4757,
            rho0: 2329.0,
            c11: 165.7e9,
            c12: 63.9e9,
            c44: 79.6e9,
            alpha: 1e-6,
        }
    }

    /// Massive medium with unit index; optical forces vanish identically.
    pub fn vacuum_like() -> Self {
        Self {
            n: 1.0,
            ..Self::silicon()
        }
    }

    pub fn bulk_modulus(&self) -> f64 {
        (self.c11 + 2.0 * self.c12) / 3.0
    }

    pub fn shear_modulus(&self) -> f64 {
        self.c44
    }

    pub fn longitudinal_speed(&self) -> f64 {
        (self.c11 / self.rho0).sqrt()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.n >= 1.0 && self.n.is_finite()) {
            out.push(Violation::new("medium.n", "refractive index must be >= 1"));
        }
        if !(self.rho0 > 0.0 && self.rho0.is_finite()) {
            out.push(Violation::new("medium.density", "must be positive"));
        }
        for (key, v) in [
            ("medium.c11", self.c11),
            ("medium.c12", self.c12),
            ("medium.c44", self.c44),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(Violation::new(key, "elastic constant must be positive"));
            }
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            out.push(Violation::new("medium.absorption", "must be nonnegative"));
        }
        out
    }
}

/// Fields at one point and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Electric field (V/m).
    pub e: Vector3<f64>,
    /// Magnetic field (A/m).
    pub h: Vector3<f64>,
    /// Cycle-averaged Poynting vector (W/m^2).
    pub s_avg: Vector3<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm_scale_pulse() -> PulseSpec {
        PulseSpec {
            p: 0,
            l: 2,
            sigma: 0,
            energy: 5e-3,
            wavelength: 1550e-9,
            rel_bandwidth: 1e-5,
            waist: 3.5e-3,
        }
    }

    #[test]
    fn photon_number_of_five_millijoule_pulse() {
        let n_ph = mm_scale_pulse().photon_number();
        assert!((n_ph / 3.901e16 - 1.0).abs() < 5e-4, "{n_ph}");
        assert!((mm_scale_pulse().omega0() / 1.215e15 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn mm_scale_widths() {
        let mut p = mm_scale_pulse();
        p.waist = std::f64::consts::SQRT_2 / (1e-4 * p.k0());
        assert!((p.waist - 3.5e-3).abs() < 0.05e-3);
        let n = MediumSpec::silicon().n;
        assert!((p.delta_z(n) - 5.0e-3).abs() < 0.1e-3, "{}", p.delta_z(n));
        assert!((p.fwhm_duration(n) - 140e-12).abs() < 3e-12, "{}", p.fwhm_duration(n));
    }

    #[test]
    fn silicon_moduli() {
        let si = MediumSpec::silicon();
        assert!((si.bulk_modulus() - 97.8e9).abs() < 0.05e9);
        assert_eq!(si.shear_modulus(), 79.6e9);
        assert!((si.longitudinal_speed() / 8433.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn bandwidth_guard() {
        let mut p = mm_scale_pulse();
        p.rel_bandwidth = 0.5;
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].key, "pulse.rel_bandwidth");
    }
}
