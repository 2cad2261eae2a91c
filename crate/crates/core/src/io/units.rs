//! Unit suffixes accepted in scenario and plan files, converted to SI.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Length,
    Energy,
    Time,
    Density,
    Pressure,
    InverseLength,
    Intensity,
    EnergyDensity,
    Speed,
}

impl Quantity {
    /// Accepted suffixes with their factor to SI; the first one is SI itself.
    pub fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Quantity::Length => &[("m", 1.0), ("cm", 1e-2), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)],
            Quantity::Energy => &[("J", 1.0), ("mJ", 1e-3), ("uJ", 1e-6), ("nJ", 1e-9)],
            Quantity::Time => &[
                ("s", 1.0),
                ("ms", 1e-3),
                ("us", 1e-6),
                ("ns", 1e-9),
                ("ps", 1e-12),
                ("fs", 1e-15),
            ],
            Quantity::Density => &[("kg/m^3", 1.0), ("g/cm^3", 1e3)],
            Quantity::Pressure => &[("Pa", 1.0), ("MPa", 1e6), ("GPa", 1e9)],
            Quantity::InverseLength => &[("1/m", 1.0), ("1/cm", 1e2)],
            Quantity::Intensity => &[("W/m^2", 1.0), ("W/cm^2", 1e4)],
            Quantity::EnergyDensity => &[("J/m^3", 1.0), ("J/cm^3", 1e6)],
            Quantity::Speed => &[("m/s", 1.0)],
        }
    }

    pub fn si(self) -> &'static str {
        self.units()[0].0
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Length => "length",
            Quantity::Energy => "energy",
            Quantity::Time => "time",
            Quantity::Density => "mass density",
            Quantity::Pressure => "pressure",
            Quantity::InverseLength => "inverse length",
            Quantity::Intensity => "intensity",
            Quantity::EnergyDensity => "energy density",
            Quantity::Speed => "speed",
        }
    }
}

/// Factor converting `unit` to SI, if it measures `q`.
pub fn factor(q: Quantity, unit: &str) -> Option<f64> {
    q.units().iter().find(|(u, _)| *u == unit).map(|(_, f)| *f)
}

pub fn to_si(q: Quantity, value: f64, unit: &str) -> Option<f64> {
    factor(q, unit).map(|f| value * f)
}
