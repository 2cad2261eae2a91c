//! Co-moving simulation window geometry.
//!
//! The window is a box of `nx * ny * nz` cells fixed to the lab frame in x and
//! y. Along z it starts at `z_start` and is advanced by whole cells while
//! `comove_from <= t <= comove_until`, at `window_speed`. Cell (i, j, k) of a
//! window that has been shifted by `offset` cells sits at lab position
//! `(x(i), y(j), z_start + (offset + k + 1/2) dz)`.

use nalgebra::Vector3;

use crate::error::Violation;
use crate::forces::{Elasticity, ForceMode};
use crate::lgfields::{MediumSpec, PulseSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    /// Lab z of the trailing window face before any shift (m).
    pub z_start: f64,
    /// Window speed while co-moving (m/s), normally c/n.
    pub window_speed: f64,
    pub comove_from: f64,
    pub comove_until: f64,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

/// Amplitude ratio that counts as "no pulse" at the window faces.
pub const ENVELOPE_FLOOR: f64 = 1e-8;

impl GridSpec {
    pub fn cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn columns(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let i = idx % self.nx;
        let j = (idx / self.nx) % self.ny;
        let k = idx / (self.nx * self.ny);
        (i, j, k)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * self.nx as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * self.ny as f64 + 0.5) * self.dy
    }

    #[inline]
    pub fn z(&self, k: usize, offset: usize) -> f64 {
        self.z_start + ((offset + k) as f64 + 0.5) * self.dz
    }

    #[inline]
    pub fn position(&self, idx: usize, offset: usize) -> Vector3<f64> {
        let (i, j, k) = self.unravel(idx);
        Vector3::new(self.x(i), self.y(j), self.z(k, offset))
    }

    pub fn extent_x(&self) -> f64 {
        self.nx as f64 * self.dx
    }

    pub fn extent_y(&self) -> f64 {
        self.ny as f64 * self.dy
    }

    pub fn window_length(&self) -> f64 {
        self.nz as f64 * self.dz
    }

    /// Lab z of the window center for a given shift.
    pub fn window_center(&self, offset: usize) -> f64 {
        self.z_start + offset as f64 * self.dz + 0.5 * self.window_length()
    }

    /// Number of whole cells the window has advanced by time `t`.
    pub fn shift_at(&self, t: f64) -> usize {
        if self.window_speed <= 0.0 || self.comove_until <= self.comove_from {
            return 0;
        }
        let active = t.clamp(self.comove_from, self.comove_until) - self.comove_from;
        // absorb rounding in t = t0 + s*dt
        ((self.window_speed * active / self.dz) + 1e-9).floor().max(0.0) as usize
    }

    pub fn steps(&self) -> usize {
        ((self.t1 - self.t0) / self.dt).round().max(0.0) as usize
    }

    pub fn time(&self, step: usize) -> f64 {
        self.t0 + step as f64 * self.dt
    }

    /// Step whose time is nearest to `t`.
    pub fn step_near(&self, t: f64) -> usize {
        (((t - self.t0) / self.dt).round().max(0.0) as usize).min(self.steps())
    }

    /// Halve the cell counts (doubling spacings) `levels` times along every axis.
    pub fn coarsened(&self, levels: u32) -> Option<GridSpec> {
        let f = 1usize << levels;
        if !self.nx.is_multiple_of(f) || !self.ny.is_multiple_of(f) || !self.nz.is_multiple_of(f) {
            return None;
        }
        Some(GridSpec {
            nx: self.nx / f,
            ny: self.ny / f,
            nz: self.nz / f,
            dx: self.dx * f as f64,
            dy: self.dy * f as f64,
            dz: self.dz * f as f64,
            ..*self
        })
    }

    /// Check this grid against the pulse it must carry.
    pub fn validate(
        &self,
        pulse: &PulseSpec,
        medium: &MediumSpec,
        mode: ForceMode,
        elasticity: Elasticity,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        for (key, n) in [("grid.nx", self.nx), ("grid.ny", self.ny), ("grid.nz", self.nz)] {
            if n < 2 {
                out.push(Violation::new(key, "need at least 2 cells"));
            }
        }
        for (key, d) in [
            ("grid.dx", self.dx),
            ("grid.dy", self.dy),
            ("grid.dz", self.dz),
            ("grid.dt", self.dt),
        ] {
            if !(d > 0.0 && d.is_finite()) {
                out.push(Violation::new(key, "must be positive and finite"));
            }
        }
        if !(self.t1 > self.t0) {
            out.push(Violation::new("grid.t1", "must be later than grid.t0"));
        }
        if !out.is_empty() || !pulse.validate().is_empty() || !medium.validate().is_empty() {
            return out;
        }

        let w0 = pulse.waist;
        let n = medium.n;
        if self.extent_x().min(self.extent_y()) < 6.0 * w0 * (1.0 - 1e-12) {
            out.push(Violation::new(
                "grid.dx",
                format!(
                    "transverse extent {:e} m is below 6 w0 = {:e} m",
                    self.extent_x().min(self.extent_y()),
                    6.0 * w0
                ),
            ));
        }
        let dz_pulse = pulse.delta_z(n);
        if self.window_length() < 8.0 * dz_pulse * (1.0 - 1e-12) {
            out.push(Violation::new(
                "grid.dz",
                format!(
                    "window length {:e} m is below 8 dz_pulse = {:e} m",
                    self.window_length(),
                    8.0 * dz_pulse
                ),
            ));
        }
        let dt_limit = match mode {
            ForceMode::TimeAveraged => 0.05 / (pulse.delta_k0() * crate::constants::C),
            ForceMode::Instantaneous => {
                2.0 * std::f64::consts::PI / pulse.omega0() / 32.0
            }
        };
        if self.dt > dt_limit * (1.0 + 1e-9) {
            out.push(Violation::new(
                "grid.dt",
                format!("{:e} s exceeds the {} limit {:e} s", self.dt, mode.as_str(), dt_limit),
            ));
        }
        if elasticity == Elasticity::On {
            let h = self.dx.min(self.dy).min(self.dz);
            let limit = 0.5 * h / medium.longitudinal_speed();
            if self.dt > limit {
                out.push(Violation::new(
                    "grid.dt",
                    format!("{:e} s exceeds the elastic stability limit {:e} s", self.dt, limit),
                ));
            }
        }
        let steps = (self.t1 - self.t0) / self.dt;
        if (steps - steps.round()).abs() > 1e-6 {
            out.push(Violation::new(
                "grid.t1",
                "t1 - t0 must be a whole number of time steps",
            ));
        }

        // The pulse must start outside the trailing face and end outside the
        // leading face, to the envelope floor.
        let a = n * pulse.delta_k0();
        let clearance = (-2.0 * ENVELOPE_FLOOR.ln()).sqrt() / a;
        let vg = crate::constants::C / n;
        let gap_start = self.z_start - vg * self.t0;
        if gap_start < clearance * (1.0 - 1e-9) {
            out.push(Violation::new(
                "grid.t0",
                format!(
                    "pulse center is only {:e} m behind the window at t0; need {:e} m",
                    gap_start, clearance
                ),
            ));
        }
        let front = self.z_start + self.shift_at(self.t1) as f64 * self.dz + self.window_length();
        let gap_end = vg * self.t1 - front;
        if gap_end < clearance * (1.0 - 1e-9) {
            out.push(Violation::new(
                "grid.t1",
                format!(
                    "pulse center is only {:e} m past the window at t1; need {:e} m",
                    gap_end, clearance
                ),
            ));
        }
        out
    }
}
