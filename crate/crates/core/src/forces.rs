//! Optical and elastic force densities on the medium.

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{C, EPS0};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::lgfields::{MediumSpec, PulseField};

/// How the optical force sees the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForceMode {
    /// Analytic time derivative of the cycle-averaged Poynting vector.
    #[default]
    TimeAveraged,
    /// Centered difference of instantaneous E x H.
    Instantaneous,
}

impl ForceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ForceMode::TimeAveraged => "time-averaged",
            ForceMode::Instantaneous => "instantaneous",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "time-averaged" => Some(ForceMode::TimeAveraged),
            "instantaneous" => Some(ForceMode::Instantaneous),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Elasticity {
    #[default]
    Off,
    On,
}

impl Elasticity {
    pub fn as_str(self) -> &'static str {
        match self {
            Elasticity::Off => "off",
            Elasticity::On => "on",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "off" => Some(Elasticity::Off),
            "on" => Some(Elasticity::On),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceKind {
    Optical,
    Elastic,
    Total,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceField {
    pub f: Vec<Vector3<f64>>,
    pub kind: ForceKind,
}

impl ForceField {
    pub fn zeros(cells: usize, kind: ForceKind) -> Self {
        Self {
            f: vec![Vector3::zeros(); cells],
            kind,
        }
    }

    pub fn total(optical: &ForceField, elastic: &ForceField) -> ForceField {
        ForceField {
            f: optical.f.iter().zip(&elastic.f).map(|(a, b)| a + b).collect(),
            kind: ForceKind::Total,
        }
    }
}

/// Refractive index as a function of lab z. The pulse fields themselves are
/// always those of the bulk medium; the profile only feeds the force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexProfile {
    Uniform(f64),
    /// `n_before` for z well below `position`, `n_after` well above, joined by
    /// a tanh ramp of half-width `width`.
    Interface {
        n_before: f64,
        n_after: f64,
        position: f64,
        width: f64,
    },
}

impl IndexProfile {
    pub fn n(&self, z: f64) -> f64 {
        match *self {
            IndexProfile::Uniform(n) => n,
            IndexProfile::Interface {
                n_before,
                n_after,
                position,
                width,
            } => n_before + (n_after - n_before) * 0.5 * (1.0 + ((z - position) / width).tanh()),
        }
    }

    /// z component of grad n^2; the other components vanish.
    pub fn dn2_dz(&self, z: f64) -> f64 {
        match *self {
            IndexProfile::Uniform(_) => 0.0,
            IndexProfile::Interface {
                n_before,
                n_after,
                position,
                width,
            } => {
                let sech = 1.0 / ((z - position) / width).cosh();
                let dn = (n_after - n_before) * 0.5 * sech * sech / width;
                2.0 * self.n(z) * dn
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, IndexProfile::Uniform(_))
    }

    /// The ramp must span at least two stencil steps.
    pub fn check_resolved(&self, step: f64) -> Result<()> {
        if let IndexProfile::Interface { width, .. } = *self {
            if width < 2.0 * step {
                return Err(Error::UnderresolvedInterface { width, step });
            }
        }
        Ok(())
    }
}

/// Carrier period fraction for the instantaneous time difference.
pub const INSTANT_DT_FRACTION: f64 = 1.0 / 64.0;

/// Optical force density at one point.
///
/// `step` is the spacing the caller samples the force on; it is used only to
/// reject an index interface the sampling cannot resolve.
pub fn optical_force_density(
    mode: ForceMode,
    field: &PulseField,
    profile: &IndexProfile,
    step: f64,
    r: &Vector3<f64>,
    t: f64,
) -> Result<Vector3<f64>> {
    profile.check_resolved(step)?;
    let n = profile.n(r.z);
    let coef = (n * n - 1.0) / (C * C);
    let (ds_dt, e2) = match mode {
        ForceMode::TimeAveraged => {
            let g = field.envelope(r.z, t);
            let e2 = if profile.is_uniform() {
                0.0
            } else {
                0.5 * field.phasors(r.x, r.y).e.norm_squared() * g * g
            };
            (field.ds_avg_dt(r, t), e2)
        }
        ForceMode::Instantaneous => {
            let h = field.carrier_period() * INSTANT_DT_FRACTION;
            let s = |tt: f64| {
                let (e, hf) = field.instantaneous(r, tt);
                e.cross(&hf)
            };
            let e2 = if profile.is_uniform() {
                0.0
            } else {
                field.instantaneous(r, t).0.norm_squared()
            };
            ((s(t + h) - s(t - h)) / (2.0 * h), e2)
        }
    };
    let mut f = ds_dt * coef;
    if coef == 0.0 {
        f = Vector3::zeros();
    }
    f.z -= 0.5 * EPS0 * e2 * profile.dn2_dz(r.z);
    Ok(f)
}

/// Per-column transverse data reused by every cell of the window.
#[derive(Debug, Clone)]
pub struct TransverseCache {
    /// Cycle-averaged Poynting vector at unit envelope.
    pub s_avg: Vec<Vector3<f64>>,
    /// Half of e x h (no conjugate); the part of E x H oscillating at 2 w0.
    pub s_osc: Vec<Vector3<Complex64>>,
    /// Cycle average of E^2 at unit envelope.
    pub e2_avg: Vec<f64>,
    /// Half of e . e (no conjugate).
    pub e2_osc: Vec<Complex64>,
}

impl TransverseCache {
    pub fn new(field: &PulseField, grid: &GridSpec) -> Self {
        let cols = grid.columns();
        let mut cache = Self {
            s_avg: Vec::with_capacity(cols),
            s_osc: Vec::with_capacity(cols),
            e2_avg: Vec::with_capacity(cols),
            e2_osc: Vec::with_capacity(cols),
        };
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (x, y) = (grid.x(i), grid.y(j));
                let ph = field.phasors(x, y);
                cache.s_avg.push(field.s_profile(x, y));
                let (e, h) = (ph.e, ph.h);
                cache.s_osc.push(
                    Vector3::new(
                        e.y * h.z - e.z * h.y,
                        e.z * h.x - e.x * h.z,
                        e.x * h.y - e.y * h.x,
                    ) * Complex64::from(0.5),
                );
                cache.e2_avg.push(0.5 * e.norm_squared());
                cache.e2_osc.push(0.5 * (e.x * e.x + e.y * e.y + e.z * e.z));
            }
        }
        cache
    }

    /// Instantaneous E x H at a cell of column `col`, from the cached phasors.
    #[inline]
    pub fn s_inst(&self, field: &PulseField, col: usize, z: f64, t: f64) -> Vector3<f64> {
        let g = field.envelope(z, t);
        let c2 = field.carrier(z, t).powi(2);
        (self.s_avg[col] + self.s_osc[col].map(|v| (v * c2).re)) * (g * g)
    }

    #[inline]
    pub fn e2_inst(&self, field: &PulseField, col: usize, z: f64, t: f64) -> f64 {
        let g = field.envelope(z, t);
        let c2 = field.carrier(z, t).powi(2);
        (self.e2_avg[col] + (self.e2_osc[col] * c2).re) * g * g
    }
}

/// Optical force on every cell of the window at time `t`.
pub fn optical_force_grid(
    mode: ForceMode,
    field: &PulseField,
    cache: &TransverseCache,
    profile: &IndexProfile,
    grid: &GridSpec,
    offset: usize,
    t: f64,
    out: &mut [Vector3<f64>],
) {
    let cols = grid.columns();
    let h = field.carrier_period() * INSTANT_DT_FRACTION;
    out.par_chunks_mut(cols).enumerate().for_each(|(k, slab)| {
        let z = grid.z(k, offset);
        let n = profile.n(z);
        let coef = (n * n - 1.0) / (C * C);
        let grad = profile.dn2_dz(z);
        match mode {
            ForceMode::TimeAveraged => {
                let d = field.d_envelope_sq_dt(z, t) * coef;
                let g2 = field.envelope(z, t).powi(2);
                for (col, f) in slab.iter_mut().enumerate() {
                    *f = cache.s_avg[col] * d;
                    if grad != 0.0 {
                        f.z -= 0.5 * EPS0 * cache.e2_avg[col] * g2 * grad;
                    }
                }
            }
            ForceMode::Instantaneous => {
                // shared carrier and envelope factors for the whole slab
                let gp = field.envelope(z, t + h).powi(2);
                let gm = field.envelope(z, t - h).powi(2);
                let cp = field.carrier(z, t + h).powi(2);
                let cm = field.carrier(z, t - h).powi(2);
                let g0 = field.envelope(z, t).powi(2);
                let c0 = field.carrier(z, t).powi(2);
                for (col, f) in slab.iter_mut().enumerate() {
                    let sa = cache.s_avg[col];
                    let so = &cache.s_osc[col];
                    let sp = (sa + so.map(|v| (v * cp).re)) * gp;
                    let sm = (sa + so.map(|v| (v * cm).re)) * gm;
                    *f = (sp - sm) * (coef / (2.0 * h));
                    if grad != 0.0 {
                        let e2 = (cache.e2_avg[col] + (cache.e2_osc[col] * c0).re) * g0;
                        f.z -= 0.5 * EPS0 * e2 * grad;
                    }
                }
            }
        }
        if coef == 0.0 && grad == 0.0 {
            slab.iter_mut().for_each(|f| *f = Vector3::zeros());
        }
    });
}

/// Cubic-crystal elastic force density, crystal axes along the grid axes.
/// Displacements beyond the transverse faces are zero. The pulse crosses the
/// longitudinal faces, so there the outside medium copies the face cell.
pub fn elastic_force_density(grid: &GridSpec, ra: &[Vector3<f64>], medium: &MediumSpec) -> ForceField {
    let (nx, ny, nz) = (grid.nx as isize, grid.ny as isize, grid.nz as isize);
    let h = [grid.dx, grid.dy, grid.dz];
    let at = |i: isize, j: isize, k: isize| -> Vector3<f64> {
        if i < 0 || j < 0 || i >= nx || j >= ny {
            Vector3::zeros()
        } else {
            let k = k.clamp(0, nz - 1);
            ra[grid.index(i as usize, j as usize, k as usize)]
        }
    };
    let (c11, c12, c44) = (medium.c11, medium.c12, medium.c44);
    let unit = |a: usize| -> [isize; 3] {
        let mut e = [0; 3];
        e[a] = 1;
        e
    };
    let f = (0..grid.cells())
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = grid.unravel(idx);
            let (i, j, k) = (i as isize, j as isize, k as isize);
            let c = at(i, j, k);
            let mut second = [Vector3::zeros(); 3];
            for (a, s) in second.iter_mut().enumerate() {
                let e = unit(a);
                let p = at(i + e[0], j + e[1], k + e[2]);
                let m = at(i - e[0], j - e[1], k - e[2]);
                *s = (p - 2.0 * c + m) / (h[a] * h[a]);
            }
            let mut out = Vector3::zeros();
            for a in 0..3 {
                out[a] += c11 * second[a][a];
                for b in 0..3 {
                    if b == a {
                        continue;
                    }
                    out[a] += c44 * second[b][a];
                    let (ea, eb) = (unit(a), unit(b));
                    let pp = at(i + ea[0] + eb[0], j + ea[1] + eb[1], k + ea[2] + eb[2]);
                    let pm = at(i + ea[0] - eb[0], j + ea[1] - eb[1], k + ea[2] - eb[2]);
                    let mp = at(i - ea[0] + eb[0], j - ea[1] + eb[1], k - ea[2] + eb[2]);
                    let mm = at(i - ea[0] - eb[0], j - ea[1] - eb[1], k - ea[2] - eb[2]);
                    let mixed = (pp[b] - pm[b] - mp[b] + mm[b]) / (4.0 * h[a] * h[b]);
                    out[a] += (c12 + c44) * mixed;
                }
            }
            out
        })
        .collect();
    ForceField {
        f,
        kind: ForceKind::Elastic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lgfields::PulseSpec;
    use proptest::prelude::*;

    fn pulse(l: i32, sigma: i32) -> PulseSpec {
        PulseSpec {
            p: 0,
            l,
            sigma,
            energy: 5e-3,
            wavelength: 1550e-9,
            rel_bandwidth: 1e-2,
            waist: 20.0 * 1550e-9 / 3.4757,
        }
    }

    fn box_grid(n: usize, h: f64) -> GridSpec {
        GridSpec {
            nx: n,
            ny: n,
            nz: n,
            dx: h,
            dy: h,
            dz: h,
            z_start: -0.5 * n as f64 * h,
            window_speed: 0.0,
            comove_from: 0.0,
            comove_until: 0.0,
            t0: 0.0,
            t1: 1.0,
            dt: 1.0,
        }
    }

    #[test]
    fn vacuum_force_is_exactly_zero() {
        let f = PulseField::new(pulse(1, 1), MediumSpec::vacuum_like(), 1e6);
        let r = Vector3::new(1e-6, 2e-6, 1e-5);
        for mode in [ForceMode::TimeAveraged, ForceMode::Instantaneous] {
            let v = optical_force_density(mode, &f, &IndexProfile::Uniform(1.0), 1e-6, &r, 1e-14)
                .unwrap();
            assert_eq!(v, Vector3::zeros());
        }
    }

    #[test]
    fn static_envelope_gives_no_force() {
        // at the envelope peak the averaged flux has zero time derivative
        let si = MediumSpec::silicon();
        let f = PulseField::new(pulse(0, 0), si, 1e6);
        let t = 1e-13;
        let r = Vector3::new(1e-6, 0.0, f.center(t));
        let v = optical_force_density(ForceMode::TimeAveraged, &f, &IndexProfile::Uniform(si.n), 1e-6, &r, t)
            .unwrap();
        assert_eq!(v, Vector3::zeros());
    }

    #[test]
    fn leading_half_pushes_trailing_half_pulls() {
        let si = MediumSpec::silicon();
        let f = PulseField::new(pulse(0, 0), si, 1e6);
        let prof = IndexProfile::Uniform(si.n);
        let a = f.dk_med();
        // fixed plane z = 0; the pulse center passes at t = 0
        let nt = 4001;
        let span = 8.0 / (a * f.group_speed());
        let dt = 2.0 * span / (nt - 1) as f64;
        let r = Vector3::new(0.3 * f.pulse.waist, 0.0, 0.0);
        let (mut lead, mut trail) = (0.0, 0.0);
        for s in 0..nt {
            let t = -span + s as f64 * dt;
            let w = if s == 0 || s == nt - 1 { 0.5 } else { 1.0 };
            let fz = optical_force_density(ForceMode::TimeAveraged, &f, &prof, 1e-6, &r, t).unwrap().z;
            if t < 0.0 {
                lead += w * fz * dt;
            } else {
                trail += w * fz * dt;
            }
        }
        assert!(lead > 0.0 && trail < 0.0);
        assert!((lead + trail).abs() < 1e-6 * lead);
    }

    #[test]
    fn instantaneous_average_matches_time_averaged() {
        let si = MediumSpec::silicon();
        let f = PulseField::new(pulse(1, 1), si, 1e6);
        let prof = IndexProfile::Uniform(si.n);
        let z = 0.7 / f.dk_med();
        let r = Vector3::new(0.4 * f.pulse.waist, -0.2 * f.pulse.waist, z);
        let period = f.carrier_period();
        let m = 64;
        let mut avg = Vector3::zeros();
        for s in 0..m {
            let t = period * s as f64 / m as f64;
            avg += optical_force_density(ForceMode::Instantaneous, &f, &prof, 1e-6, &r, t).unwrap();
        }
        avg /= m as f64;
        let reference = optical_force_density(ForceMode::TimeAveraged, &f, &prof, 1e-6, &r, 0.5 * period).unwrap();
        // averaging over one period of a slowly varying envelope
        assert!((avg - reference).norm() < 1e-2 * reference.norm(), "{avg} {reference}");
    }

    #[test]
    fn grid_force_matches_pointwise() {
        let si = MediumSpec::silicon();
        let p = pulse(2, 0);
        let f = PulseField::new(p, si, 1e6);
        let mut g = box_grid(8, p.waist);
        g.dz = 1.0 / f.dk_med();
        g.z_start = -4.0 * g.dz;
        let cache = TransverseCache::new(&f, &g);
        let prof = IndexProfile::Uniform(si.n);
        for mode in [ForceMode::TimeAveraged, ForceMode::Instantaneous] {
            let mut out = vec![Vector3::zeros(); g.cells()];
            let t = 3e-15;
            optical_force_grid(mode, &f, &cache, &prof, &g, 0, t, &mut out);
            for idx in (0..g.cells()).step_by(37) {
                let r = g.position(idx, 0);
                let v = optical_force_density(mode, &f, &prof, g.dz, &r, t).unwrap();
                let scale = out.iter().map(|x| x.norm()).fold(0.0, f64::max);
                assert!((out[idx] - v).norm() <= 1e-9 * scale, "{mode:?} {idx}");
            }
        }
    }

    #[test]
    fn interface_gradient_force() {
        let si = MediumSpec::silicon();
        let f = PulseField::new(pulse(0, 0), si, 1e6);
        let prof = IndexProfile::Interface {
            n_before: 1.0,
            n_after: si.n,
            position: 0.0,
            width: 1e-6,
        };
        assert!(matches!(
            prof.check_resolved(1e-6),
            Err(Error::UnderresolvedInterface { .. })
        ));
        let r = Vector3::new(0.0, 0.0, 0.0);
        let got = optical_force_density(ForceMode::TimeAveraged, &f, &prof, 1e-7, &r, 0.0).unwrap();
        let n_mid = 0.5 * (1.0 + si.n);
        let dn = (si.n - 1.0) * 0.5 / 1e-6;
        let e2 = 0.5 * (f.omega0() * 1e6).powi(2);
        let expect = -0.5 * EPS0 * e2 * 2.0 * n_mid * dn;
        // center of the pulse: no dS/dt contribution
        assert!((got.z / expect - 1.0).abs() < 1e-12, "{} {}", got.z, expect);
    }

    fn silicon_grid() -> (GridSpec, MediumSpec) {
        (box_grid(16, 1e-7), MediumSpec::silicon())
    }

    #[test]
    fn uniform_translation_is_force_free_inside() {
        let (g, m) = silicon_grid();
        let ra = vec![Vector3::new(1e-9, -2e-9, 3e-9); g.cells()];
        let f = elastic_force_density(&g, &ra, &m);
        for k in 1..g.nz - 1 {
            for j in 1..g.ny - 1 {
                for i in 1..g.nx - 1 {
                    assert!(f.f[g.index(i, j, k)].norm() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn shear_and_longitudinal_plane_waves() {
        let (mut g, m) = silicon_grid();
        g.nz = 64;
        let kw = 2.0 * std::f64::consts::PI / (32.0 * g.dz);
        let amp = 1e-10;
        let discrete = 4.0 / (g.dz * g.dz) * (0.5 * kw * g.dz).sin().powi(2);
        for (axis, modulus) in [(0usize, m.c44), (2usize, m.c11)] {
            let ra: Vec<Vector3<f64>> = (0..g.cells())
                .map(|idx| {
                    let z = g.position(idx, 0).z;
                    let mut v = Vector3::zeros();
                    v[axis] = amp * (kw * z).sin();
                    v
                })
                .collect();
            let f = elastic_force_density(&g, &ra, &m);
            for k in 2..g.nz - 2 {
                let idx = g.index(8, 8, k);
                let expect = -modulus * discrete * ra[idx][axis];
                assert!((f.f[idx][axis] - expect).abs() < 1e-9 * modulus * discrete * amp);
            }
        }
        assert!((m.longitudinal_speed() / 8433.0 - 1.0).abs() < 1e-3);
    }

    fn bump(g: &GridSpec, seed: [f64; 6]) -> Vec<Vector3<f64>> {
        // compact support well inside the window
        let c = 0.5 * g.nx as f64 * g.dx;
        let radius = c - 1.5 * g.dx;
        (0..g.cells())
            .map(|idx| {
                let r = g.position(idx, 0) - Vector3::new(0.0, 0.0, g.z_start + c);
                let s = 1.0 - r.norm_squared() / (radius * radius);
                let w = if s > 0.0 { s.powi(4) } else { 0.0 };
                Vector3::new(
                    seed[0] + seed[3] * r.y / c,
                    seed[1] + seed[4] * r.z / c,
                    seed[2] + seed[5] * r.x / c,
                ) * (1e-10 * w)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn elastic_force_has_no_net_momentum(seed in proptest::array::uniform6(-1.0f64..1.0)) {
            let (g, m) = silicon_grid();
            let ra = bump(&g, seed);
            let f = elastic_force_density(&g, &ra, &m);
            let net = f.f.iter().fold(Vector3::zeros(), |a, b| a + b);
            let mag: f64 = f.f.iter().map(|v| v.abs().sum()).sum();
            prop_assert!(net.abs().max() < 1e-9 * mag);
        }

        #[test]
        fn isotropic_constants_give_navier(seed in proptest::array::uniform6(-1.0f64..1.0)) {
            let (g, _) = silicon_grid();
            let (b, sh) = (97.8e9, 79.6e9);
            let iso = MediumSpec { c11: b + 4.0 * sh / 3.0, c12: b - 2.0 * sh / 3.0, c44: sh, ..MediumSpec::silicon() };
            let ra = bump(&g, seed);
            let f = elastic_force_density(&g, &ra, &iso);
            // Navier: G lap u + (B + G/3) grad div u, with independent stencils
            let lam_g = b + sh / 3.0;
            let h = g.dx;
            let at = |i: usize, j: usize, k: usize| ra[g.index(i, j, k)];
            let div = |i: usize, j: usize, k: usize| {
                (at(i + 1, j, k).x - at(i - 1, j, k).x
                    + at(i, j + 1, k).y - at(i, j - 1, k).y
                    + at(i, j, k + 1).z - at(i, j, k - 1).z) / (2.0 * h)
            };
            let mut worst: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for k in 3..g.nz - 3 {
                for j in 3..g.ny - 3 {
                    for i in 3..g.nx - 3 {
                        let lap = (at(i + 1, j, k) + at(i - 1, j, k) + at(i, j + 1, k) + at(i, j - 1, k)
                            + at(i, j, k + 1) + at(i, j, k - 1) - 6.0 * at(i, j, k)) / (h * h);
                        let grad = Vector3::new(
                            div(i + 1, j, k) - div(i - 1, j, k),
                            div(i, j + 1, k) - div(i, j - 1, k),
                            div(i, j, k + 1) - div(i, j, k - 1),
                        ) / (2.0 * h);
                        let navier = lap * sh + grad * lam_g;
                        let got = f.f[g.index(i, j, k)];
                        worst = worst.max((got - navier).norm());
                        scale = scale.max(navier.norm());
                    }
                }
            }
            // the two stencils differ at second order in h
            prop_assert!(worst < 0.15 * scale, "{} {}", worst, scale);
        }
    }
}
