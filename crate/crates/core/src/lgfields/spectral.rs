//! Exact wavenumber superposition of monochromatic LG components with a
//! Gaussian spectrum, evaluated by Gauss-Hermite quadrature. Used only to
//! validate the closed-form pulse fields.

use std::sync::OnceLock;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use super::PulseField;
use crate::constants::{C, MU0};

pub const NODES: usize = 129;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Nodes and weights for `int exp(-x^2) f(x) dx`, Golub-Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(NODES))
}

/// Real E and H of the pulse without the monochromatic approximation.
pub fn exact_fields(field: &PulseField, r: &Vector3<f64>, t: f64) -> (Vector3<f64>, Vector3<f64>) {
    let (nodes, weights) = rule();
    let n = field.medium.n;
    let m = field.mode(r.x, r.y);
    let zero = Complex64::new(0.0, 0.0);
    let sigma = field.pulse.sigma as f64;
    let norm = if sigma == 0.0 {
        1.0
    } else {
        std::f64::consts::FRAC_1_SQRT_2
    };
    let mut e = Vector3::from_element(zero);
    let mut h = Vector3::from_element(zero);
    let spread = std::f64::consts::SQRT_2 * field.dk_med();
    for (&x, &w) in nodes.iter().zip(weights) {
        let k = field.k_med() + spread * x;
        let omega = C * k / n;
        let phase = Complex64::from_polar(w / std::f64::consts::PI.sqrt(), k * r.z - omega * t);
        let ex = Vector3::new(m.u, zero, I * m.du_dx / k) * (I * omega);
        let hy = Vector3::new(zero, m.u, I * m.du_dy / k) * (I * k / MU0);
        if sigma == 0.0 {
            e += ex * phase;
            h += hy * phase;
        } else {
            let ey = Vector3::new(zero, m.u, I * m.du_dy / k) * (I * omega);
            let hx = Vector3::new(m.u, zero, I * m.du_dx / k) * (I * k / MU0);
            let shift = I * sigma;
            e += (ex + ey * shift) * phase;
            h += (hy - hx * shift) * phase;
        }
    }
    (e.map(|c| c.re * norm), h.map(|c| c.re * norm))
}
