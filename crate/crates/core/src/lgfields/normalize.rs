use super::{MediumSpec, PulseField, PulseSpec};
use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Largest tolerated fraction of pulse energy outside the window.
pub const CLIP_LIMIT: f64 = 1e-6;

/// Amplitude `u0` for which the cycle-averaged field energy summed over the
/// grid window equals `U0`, with the pulse centered in the window.
pub fn normalize_u0(spec: &PulseSpec, medium: &MediumSpec, grid: &GridSpec) -> Result<f64> {
    let mut bad = spec.validate();
    bad.extend(medium.validate());
    if !bad.is_empty() {
        return Err(Error::Invalid(bad));
    }
    let clipped = clipped_fraction(spec, medium, grid);
    if clipped > CLIP_LIMIT {
        return Err(Error::EnergyClipped {
            fraction: clipped,
            limit: CLIP_LIMIT,
        });
    }
    let unit = grid_energy(&PulseField::new(*spec, *medium, 1.0), grid);
    Ok((spec.energy / unit).sqrt())
}

/// Field energy summed over the window at the moment the pulse is centered in it.
pub(crate) fn grid_energy(field: &PulseField, grid: &GridSpec) -> f64 {
    let mut transverse = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            transverse += field.energy_profile(grid.x(i), grid.y(j));
        }
    }
    let zc = grid.window_center(0);
    let a = field.dk_med();
    let longitudinal: f64 = (0..grid.nz)
        .map(|k| {
            let xi = a * (grid.z(k, 0) - zc);
            (-xi * xi).exp()
        })
        .sum();
    transverse * longitudinal * grid.cell_volume()
}

fn simpson_weights(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| {
        if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        }
    })
}

/// Transverse integral of the unit-envelope energy density over the whole
/// plane and over the window cross-section, by independent fine quadrature.
pub fn transverse_energy_reference(field: &PulseField, half_x: f64, half_y: f64) -> (f64, f64) {
    let w0 = field.pulse.waist;
    let order = 2 * field.pulse.p as usize + field.pulse.l.unsigned_abs() as usize;
    let r_max = w0 * (6.0 + (order as f64).sqrt() * 2.0);

    // polar: Simpson in r, trapezoid (spectral for periodic integrands) in phi
    let nr = 2000;
    let nphi = 64;
    let hr = r_max / nr as f64;
    let mut full = 0.0;
    for (k, wr) in simpson_weights(nr).enumerate() {
        let r = k as f64 * hr;
        if r == 0.0 {
            continue;
        }
        let ring: f64 = (0..nphi)
            .map(|m| {
                let phi = 2.0 * std::f64::consts::PI * m as f64 / nphi as f64;
                field.energy_profile(r * phi.cos(), r * phi.sin())
            })
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI / nphi as f64);
        full += wr * r * ring;
    }
    full *= hr / 3.0;

    let n = 600;
    let hx = 2.0 * half_x / n as f64;
    let hy = 2.0 * half_y / n as f64;
    let wy: Vec<f64> = simpson_weights(n).collect();
    let mut boxed = 0.0;
    for (a, wa) in simpson_weights(n).enumerate() {
        let x = -half_x + a as f64 * hx;
        let mut col = 0.0;
        for (b, wb) in wy.iter().enumerate() {
            let y = -half_y + b as f64 * hy;
            col += wb * field.energy_profile(x, y);
        }
        boxed += wa * col;
    }
    boxed *= hx * hy / 9.0;
    (full, boxed)
}

/// Fraction of the pulse energy that lies outside the window when the pulse
/// is centered in it.
pub fn clipped_fraction(spec: &PulseSpec, medium: &MediumSpec, grid: &GridSpec) -> f64 {
    let field = PulseField::new(*spec, *medium, 1.0);
    let (full, boxed) =
        transverse_energy_reference(&field, 0.5 * grid.extent_x(), 0.5 * grid.extent_y());
    let inside_t = (boxed / full).min(1.0);
    let a = field.dk_med();
    let half = 0.5 * grid.window_length();
    let inside_z = libm::erf(a * half);
    (1.0 - inside_t * inside_z).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{C, EPS0};

    fn pulse(l: i32, waist: f64) -> PulseSpec {
        PulseSpec {
            p: 0,
            l,
            sigma: 0,
            energy: 5e-3,
            wavelength: 1550e-9,
            rel_bandwidth: 1e-2,
            waist,
        }
    }

    fn grid_for(p: &PulseSpec, n: f64, nt: usize, nz: usize) -> GridSpec {
        let a = n * p.delta_k0();
        let len = 10.0 / a;
        let ext = 8.0 * p.waist;
        GridSpec {
            nx: nt,
            ny: nt,
            nz,
            dx: ext / nt as f64,
            dy: ext / nt as f64,
            dz: len / nz as f64,
            z_start: -0.5 * len,
            window_speed: C / n,
            comove_from: 0.0,
            comove_until: 0.0,
            t0: -1.0,
            t1: 1.0,
            dt: 1.0,
        }
    }

    #[test]
    fn energy_scales_with_amplitude_squared() {
        let si = MediumSpec::silicon();
        let p = pulse(2, 20.0 * 1550e-9 / si.n);
        let g = grid_for(&p, si.n, 24, 32);
        let u1 = normalize_u0(&p, &si, &g).unwrap();
        let p2 = PulseSpec { energy: 2.0 * p.energy, ..p };
        let u2 = normalize_u0(&p2, &si, &g).unwrap();
        assert!((u2 / u1 - 2f64.sqrt()).abs() < 1e-12);
        let e = grid_energy(&PulseField::new(p, si, u1), &g);
        assert!((e / p.energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halving_waist_doubles_amplitude() {
        let si = MediumSpec::silicon();
        let w0 = 20.0 * 1550e-9 / si.n;
        let p = pulse(0, w0);
        let ph = pulse(0, 0.5 * w0);
        let u = normalize_u0(&p, &si, &grid_for(&p, si.n, 24, 32)).unwrap();
        let uh = normalize_u0(&ph, &si, &grid_for(&ph, si.n, 24, 32)).unwrap();
        // exact only in the paraxial limit; longitudinal field energy scales as 1/(n k0 w0)^2
        assert!((uh / u - 2.0).abs() < 1e-3, "{}", uh / u);
    }

    #[test]
    fn gaussian_energy_matches_closed_form() {
        // transverse-only energy of LG00: eps0 n^2 w0^2 |u0|^2 pi/4 per unit length
        // at unit amplitude; longitudinal terms add a relative 1/(n k0 w0)^2
        let si = MediumSpec::silicon();
        let p = pulse(0, 20.0 * 1550e-9 / si.n);
        let f = PulseField::new(p, si, 1.0);
        let (full, _) = transverse_energy_reference(&f, 4.0 * p.waist, 4.0 * p.waist);
        let w0 = f.omega0();
        let expect = EPS0 * si.n * si.n * w0 * w0 / 2.0 * std::f64::consts::PI * p.waist.powi(2) / 2.0;
        let eps = 1.0 / (si.n * p.k0() * p.waist).powi(2);
        assert!((full / (expect * (1.0 + eps)) - 1.0).abs() < 1e-9, "{}", full / expect - 1.0);
    }

    #[test]
    fn small_window_reports_clipping() {
        let si = MediumSpec::silicon();
        let p = pulse(2, 20.0 * 1550e-9 / si.n);
        let mut g = grid_for(&p, si.n, 24, 32);
        g.dx *= 0.25;
        g.dy *= 0.25;
        match normalize_u0(&p, &si, &g) {
            Err(Error::EnergyClipped { fraction, .. }) => assert!(fraction > 1e-3),
            other => panic!("expected clipping error, got {other:?}"),
        }
        assert!(clipped_fraction(&p, &si, &grid_for(&p, si.n, 24, 32)) < 1e-9);
    }
}
