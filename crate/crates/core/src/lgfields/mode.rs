use num_complex::Complex64;

use super::PulseSpec;

/// Generalized Laguerre polynomial `L_p^a(x)` by the three-term recurrence.
pub fn laguerre(p: u32, a: u32, x: f64) -> f64 {
    let a = a as f64;
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// LG mode amplitude at polar position `(r, phi)` in the constant-waist limit.
pub fn lg_mode(spec: &PulseSpec, u0: f64, r: f64, phi: f64) -> Complex64 {
    let w0 = spec.waist;
    let al = spec.l.unsigned_abs();
    let radial = (std::f64::consts::SQRT_2 * r / w0).powi(al as i32)
        * (-r * r / (w0 * w0)).exp()
        * laguerre(spec.p, al, 2.0 * r * r / (w0 * w0));
    Complex64::from_polar(u0 * radial, spec.l as f64 * phi)
}

/// Mode value with its transverse gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub u: Complex64,
    pub du_dx: Complex64,
    pub du_dy: Complex64,
}

impl ModeValue {
    pub fn intensity(&self) -> f64 {
        self.u.norm_sqr()
    }

    /// Radial derivative of `|u|^2`; zero on the axis.
    pub fn d_intensity_dr(&self, x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        if r == 0.0 {
            return 0.0;
        }
        let dx = 2.0 * (self.u.conj() * self.du_dx).re;
        let dy = 2.0 * (self.u.conj() * self.du_dy).re;
        (x * dx + y * dy) / r
    }
}

/// Mode and gradient in Cartesian form: `u = A (x + i s y)^|l| g(x^2 + y^2)`
/// with `s = sign(l)`, which stays regular on the axis.
pub(crate) fn mode_cartesian(spec: &PulseSpec, u0: f64, x: f64, y: f64) -> ModeValue {
    let w0 = spec.waist;
    let w2 = w0 * w0;
    let al = spec.l.unsigned_abs();
    let s = if spec.l < 0 { -1.0 } else { 1.0 };
    let amp = u0 * (std::f64::consts::SQRT_2 / w0).powi(al as i32);
    let q = x * x + y * y;
    let arg = 2.0 * q / w2;
    let gauss = (-q / w2).exp();
    let lag = laguerre(spec.p, al, arg);
    // d/dx L_p^a(x) = -L_{p-1}^{a+1}(x)
    let dlag = if spec.p == 0 {
        0.0
    } else {
        -laguerre(spec.p - 1, al + 1, arg)
    };
    let g = gauss * lag;
    let dg_dq = gauss * (-lag / w2 + 2.0 * dlag / w2);

    let zeta = Complex64::new(x, s * y);
    let (zp, zp_minus) = if al == 0 {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        let zm = zeta.powu(al - 1);
        (zm * zeta, zm)
    };
    let u = amp * zp * g;
    let du_dx = amp * (al as f64 * zp_minus * g + zp * dg_dq * 2.0 * x);
    let du_dy = amp * (Complex64::new(0.0, s) * al as f64 * zp_minus * g + zp * dg_dq * 2.0 * y);
    ModeValue { u, du_dx, du_dy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn spec(p: u32, l: i32) -> PulseSpec {
        PulseSpec {
            p,
            l,
            sigma: 0,
            energy: 1e-3,
            wavelength: 1e-6,
            rel_bandwidth: 1e-2,
            waist: 2e-6,
        }
    }

    // Coefficient form: L_n^a(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!
    fn laguerre_coefficients(n: u32, a: u32, x: f64) -> f64 {
        fn binom(n: u32, k: u32) -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        }
        (0..=n)
            .map(|k| {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                (-1f64).powi(k as i32) * binom(n + a, n - k) * x.powi(k as i32) / fact
            })
            .sum()
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 0, 3.7), 1.0);
        assert_eq!(laguerre(1, 0, 1.0), 0.0);
        // L_2^1(x) = (x^2 - 6x + 6)/2 -> 1.625 at x = 0.5
        assert!((laguerre(2, 1, 0.5) - 1.625).abs() < 1e-15);
        assert!((laguerre(2, 1, 0.5) - laguerre_coefficients(2, 1, 0.5)).abs() < 1e-15);
    }

    #[test]
    fn laguerre_matches_coefficient_form() {
        for n in 0..8 {
            for a in 0..5 {
                for &x in &[0.0, 0.3, 1.7, 4.2, 9.0] {
                    let r = laguerre(n, a, x);
                    let o = laguerre_coefficients(n, a, x);
                    assert!((r - o).abs() <= 1e-11 * o.abs().max(1.0), "n={n} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn mode_at_origin() {
        let s = spec(0, 0);
        let u = lg_mode(&s, 2.5, 0.0, 1.234);
        assert_eq!(u, Complex64::new(2.5, 0.0));
        assert_eq!(lg_mode(&spec(0, 2), 2.5, 0.0, 0.3).norm(), 0.0);
    }

    #[test]
    fn lg01_at_waist() {
        let s = spec(0, 1);
        let u = lg_mode(&s, 1.0, s.waist, FRAC_PI_2);
        assert!((u.norm() - SQRT_2 * (-1f64).exp()).abs() < 1e-15);
        assert!((u.arg() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn cartesian_form_agrees_with_polar() {
        for (p, l) in [(0, 0), (0, 1), (1, -2), (2, 3), (0, -1)] {
            let s = spec(p, l);
            for &(x, y) in &[(0.3e-6, -1.1e-6), (-2.0e-6, 0.7e-6), (1.5e-6, 1.5e-6)] {
                let m = mode_cartesian(&s, 1.3, x, y);
                let u = lg_mode(&s, 1.3, f64::hypot(x, y), y.atan2(x));
                assert!((m.u - u).norm() < 1e-13, "p={p} l={l}");
            }
        }
    }

    #[test]
    fn gradient_matches_finite_difference() {
        for (p, l) in [(0, 0), (0, 2), (1, 1), (2, -3)] {
            let s = spec(p, l);
            let h = 1e-6 * s.waist;
            for &(x, y) in &[(0.4e-6, 0.9e-6), (-1.3e-6, 0.2e-6), (0.0, 0.0)] {
                let m = mode_cartesian(&s, 1.0, x, y);
                let fx = (mode_cartesian(&s, 1.0, x + h, y).u - mode_cartesian(&s, 1.0, x - h, y).u)
                    / (2.0 * h);
                let fy = (mode_cartesian(&s, 1.0, x, y + h).u - mode_cartesian(&s, 1.0, x, y - h).u)
                    / (2.0 * h);
                let scale = 1.0 / s.waist;
                assert!((m.du_dx - fx).norm() < 1e-7 * scale, "p={p} l={l} x");
                assert!((m.du_dy - fy).norm() < 1e-7 * scale, "p={p} l={l} y");
            }
        }
    }
}
