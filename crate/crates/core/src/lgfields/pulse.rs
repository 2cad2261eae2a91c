use nalgebra::Vector3;
use num_complex::Complex64;

use super::mode::{mode_cartesian, ModeValue};
use super::{FieldSample, MediumSpec, PulseSpec};
use crate::constants::{C, EPS0, MU0};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Carrier-free, envelope-free complex amplitudes of E and H at a transverse
/// position. The real fields are `Re[e * exp(i(n k0 z - w0 t))] * envelope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phasors {
    pub e: Vector3<Complex64>,
    pub h: Vector3<Complex64>,
}

impl Phasors {
    /// Real fields for a given carrier phase factor and envelope value.
    pub fn real(&self, carrier: Complex64, envelope: f64) -> (Vector3<f64>, Vector3<f64>) {
        let e = self.e.map(|c| (c * carrier).re * envelope);
        let h = self.h.map(|c| (c * carrier).re * envelope);
        (e, h)
    }

    /// Cycle average of E x H at unit envelope, `Re(e x h*) / 2`.
    pub fn cycle_average_poynting(&self) -> Vector3<f64> {
        let e = &self.e;
        let h = self.h.map(|c| c.conj());
        Vector3::new(
            (e.y * h.z - e.z * h.y).re,
            (e.z * h.x - e.x * h.z).re,
            (e.x * h.y - e.y * h.x).re,
        ) * 0.5
    }
}

/// An LG pulse with a fixed amplitude `u0` travelling along +z in a medium.
/// The pulse center sits at `z = c t / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseField {
    pub pulse: PulseSpec,
    pub medium: MediumSpec,
    pub u0: f64,
}

impl PulseField {
    pub fn new(pulse: PulseSpec, medium: MediumSpec, u0: f64) -> Self {
        Self { pulse, medium, u0 }
    }

    pub fn omega0(&self) -> f64 {
        self.pulse.omega0()
    }

    /// Central wavenumber in the medium, n k0.
    pub fn k_med(&self) -> f64 {
        self.medium.n * self.pulse.k0()
    }

    /// Wavenumber spread in the medium, n dk0.
    pub fn dk_med(&self) -> f64 {
        self.medium.n * self.pulse.delta_k0()
    }

    pub fn group_speed(&self) -> f64 {
        C / self.medium.n
    }

    pub fn carrier_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega0()
    }

    pub fn center(&self, t: f64) -> f64 {
        self.group_speed() * t
    }

    pub fn mode(&self, x: f64, y: f64) -> ModeValue {
        mode_cartesian(&self.pulse, self.u0, x, y)
    }

    /// Field envelope `exp(-(n dk0)^2 (z - ct/n)^2 / 2)`.
    pub fn envelope(&self, z: f64, t: f64) -> f64 {
        let xi = self.dk_med() * (z - self.center(t));
        (-0.5 * xi * xi).exp()
    }

    /// Time derivative of the squared envelope.
    pub fn d_envelope_sq_dt(&self, z: f64, t: f64) -> f64 {
        let a = self.dk_med();
        let xi = z - self.center(t);
        2.0 * a * a * xi * self.group_speed() * (-(a * xi) * (a * xi)).exp()
    }

    pub fn carrier(&self, z: f64, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.k_med() * z - self.omega0() * t)
    }

    pub fn phasors(&self, x: f64, y: f64) -> Phasors {
        let m = self.mode(x, y);
        let w0 = self.omega0();
        let q = self.k_med();
        // x-polarized partner and its y-polarized twin
        let ex = Vector3::new(m.u, Complex64::new(0.0, 0.0), I * m.du_dx / q) * (I * w0);
        let hy = Vector3::new(Complex64::new(0.0, 0.0), m.u, I * m.du_dy / q) * (I * q / MU0);
        if self.pulse.sigma == 0 {
            return Phasors { e: ex, h: hy };
        }
        let ey = Vector3::new(Complex64::new(0.0, 0.0), m.u, I * m.du_dy / q) * (I * w0);
        let hx = Vector3::new(m.u, Complex64::new(0.0, 0.0), I * m.du_dx / q) * (I * q / MU0);
        // exp(i sigma pi/2) = i sigma
        let shift = I * self.pulse.sigma as f64;
        let norm = std::f64::consts::FRAC_1_SQRT_2;
        Phasors {
            e: (ex + ey * shift) * Complex64::from(norm),
            h: (hy - hx * shift) * Complex64::from(norm),
        }
    }

    /// Closed-form cycle-averaged Poynting vector at unit envelope.
    pub fn s_profile(&self, x: f64, y: f64) -> Vector3<f64> {
        let m = self.mode(x, y);
        let w0 = self.omega0();
        let q = self.k_med();
        let pref = self.medium.n * w0 * w0 / (2.0 * MU0 * C);
        let sigma = self.pulse.sigma as f64;
        let sx = (m.u * (sigma * m.du_dy.conj() + I * m.du_dx.conj()) / q).re;
        let sy = -(m.u.conj() * (sigma * m.du_dx + I * m.du_dy) / q).re;
        Vector3::new(sx, sy, m.u.norm_sqr()) * pref
    }

    /// Cycle-averaged energy density at unit envelope.
    pub fn energy_profile(&self, x: f64, y: f64) -> f64 {
        let ph = self.phasors(x, y);
        let n2 = self.medium.n * self.medium.n;
        0.25 * (EPS0 * n2 * ph.e.norm_squared() + MU0 * ph.h.norm_squared())
    }

    pub fn s_avg(&self, r: &Vector3<f64>, t: f64) -> Vector3<f64> {
        let g = self.envelope(r.z, t);
        self.s_profile(r.x, r.y) * (g * g)
    }

    pub fn ds_avg_dt(&self, r: &Vector3<f64>, t: f64) -> Vector3<f64> {
        self.s_profile(r.x, r.y) * self.d_envelope_sq_dt(r.z, t)
    }

    pub fn energy_density(&self, r: &Vector3<f64>, t: f64) -> f64 {
        let g = self.envelope(r.z, t);
        self.energy_profile(r.x, r.y) * g * g
    }

    /// Real E and H at a point.
    pub fn instantaneous(&self, r: &Vector3<f64>, t: f64) -> (Vector3<f64>, Vector3<f64>) {
        self.phasors(r.x, r.y)
            .real(self.carrier(r.z, t), self.envelope(r.z, t))
    }

    pub fn sample(&self, r: &Vector3<f64>, t: f64) -> FieldSample {
        let (e, h) = self.instantaneous(r, t);
        FieldSample {
            e,
            h,
            s_avg: self.s_avg(r, t),
        }
    }
}

/// Fields of an x-polarized LG pulse.
pub fn fields_linear(
    spec: &PulseSpec,
    u0: f64,
    medium: &MediumSpec,
    r: &Vector3<f64>,
    t: f64,
) -> Result<FieldSample> {
    if spec.sigma != 0 {
        return Err(Error::Precondition(format!(
            "fields_linear needs sigma = 0, got {}",
            spec.sigma
        )));
    }
    Ok(PulseField::new(*spec, *medium, u0).sample(r, t))
}

/// Fields of a circularly polarized LG pulse, sigma = +1 (right) or -1 (left).
pub fn fields_circular(
    spec: &PulseSpec,
    u0: f64,
    medium: &MediumSpec,
    r: &Vector3<f64>,
    t: f64,
) -> Result<FieldSample> {
    if spec.sigma.abs() != 1 {
        return Err(Error::Precondition(format!(
            "fields_circular needs sigma = +1 or -1, got {}",
            spec.sigma
        )));
    }
    Ok(PulseField::new(*spec, *medium, u0).sample(r, t))
}

pub fn poynting_instantaneous(e: &Vector3<f64>, h: &Vector3<f64>) -> Vector3<f64> {
    e.cross(h)
}
