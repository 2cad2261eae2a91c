//! Scenario and plan files, presets, reports, field dumps and run manifests.

mod dump;
mod keyvalue;
mod manifest;
mod plan;
pub mod presets;
mod report;
mod scenario_text;
pub mod units;

pub use dump::{parse_dump_header, read_dump, read_dump_values, write_dump, DumpHeader, DumpVariable};
pub use manifest::RunManifest;
pub use plan::{load_plan, parse_plan, plan_to_text};
pub use presets::{fiber_preset, preset, preset_names, PLAN_PRESET, PRESET_NAMES};
pub use report::{fiber_table, momentum_summary, sweep_table, trajectory_table, write_text};
pub use scenario_text::{load_scenario, parse_scenario, scenario_to_text};

use crate::error::Violation;
use crate::forces::{Elasticity, ForceMode};
use crate::grid::GridSpec;
use crate::lgfields::{MediumSpec, PulseSpec};

/// Run controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub mode: ForceMode,
    pub elasticity: Elasticity,
    /// Time at which momenta are reported (s).
    pub report_time: f64,
    /// Keep a full state snapshot every this many steps; 0 keeps none.
    pub snapshot_every: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            mode: ForceMode::TimeAveraged,
            elasticity: Elasticity::Off,
            report_time: 0.0,
            snapshot_every: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    /// Directory for reports; `None` writes nothing.
    pub directory: Option<String>,
    pub field_dump: bool,
    /// Emit the per-step diagnostics table.
    pub tables: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub pulse: PulseSpec,
    pub medium: MediumSpec,
    pub grid: GridSpec,
    pub run: RunSpec,
    pub output: OutputSpec,
}

impl Scenario {
    /// Every violated invariant across all components.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.pulse.validate();
        out.extend(self.medium.validate());
        out.extend(
            self.grid
                .validate(&self.pulse, &self.medium, self.run.mode, self.run.elasticity),
        );
        if self.run.elasticity == Elasticity::On && self.grid.comove_until > self.grid.comove_from {
            // strain relaxation behind the pulse would leave through the moving window
            out.push(Violation::new(
                "run.elasticity",
                "elastic coupling needs a window that does not move (grid.comove_until = grid.comove_from)",
            ));
        }
        if !(self.run.report_time >= self.grid.t0 && self.run.report_time <= self.grid.t1) {
            out.push(Violation::new(
                "run.report_time",
                "must lie within [grid.t0, grid.t1]",
            ));
        }
        out
    }
}
