//! Physical constants in SI units (CODATA 2018).

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;

/// Vacuum permeability (H/m).
pub const MU0: f64 = 1.256_637_062_12e-6;

/// Vacuum permittivity (F/m), derived from `1 / (MU0 * C^2)`.
pub const EPS0: f64 = 1.0 / (MU0 * C * C);

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permittivity_matches_codata() {
        assert!((EPS0 - 8.854_187_812_8e-12).abs() / 8.854e-12 < 1e-9);
    }
}
