//! Whole-run drivers: a single simulation with its momentum report, the
//! averaged-versus-instantaneous cross-check and grid refinement studies.

use nalgebra::Vector3;

use crate::dynamics::{run, Trajectory};
use crate::error::{Error, Result};
use crate::forces::ForceMode;
use crate::io::presets::{instantaneous_variant, options_of};
use crate::io::Scenario;
use crate::lgfields::{normalize_u0, PulseField};
use crate::observables::{angular_decomposition, AngularDecomposition, FieldGrid, MomentumReport};
use crate::reduce::ReductionOrder;

#[derive(Debug, Clone)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub report: MomentumReport,
    pub decomposition: AngularDecomposition,
}

/// Run a scenario and evaluate the momenta at its report time about the
/// beam axis.
pub fn simulate(scenario: &Scenario, order: ReductionOrder) -> Result<Simulation> {
    let trajectory = run(scenario, order)?;
    let field = PulseField::new(scenario.pulse, scenario.medium, trajectory.u0);
    let snap = &trajectory.report;
    let fg = FieldGrid::sample(&field, &scenario.grid, snap.offset, snap.time, scenario.run.mode);
    let origin = Vector3::zeros();
    let report = MomentumReport::from_fields(&field, &fg, snap, &origin, order);
    let decomposition = angular_decomposition(&fg, &origin, order);
    Ok(Simulation {
        trajectory,
        report,
        decomposition,
    })
}

#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub averaged: MomentumReport,
    pub instantaneous: MomentumReport,
    /// |J_mdw,z(instantaneous) / J_mdw,z(averaged) - 1|.
    pub relative_gap: f64,
}

/// Run the same pulse with cycle-averaged and with instantaneous forces and
/// compare the medium's angular momentum.
pub fn oracle(scenario: &Scenario, order: ReductionOrder) -> Result<OracleComparison> {
    let opts = options_of(scenario);
    let averaged_case = Scenario {
        run: crate::io::RunSpec {
            mode: ForceMode::TimeAveraged,
            ..scenario.run
        },
        ..scenario.clone()
    };
    let averaged_case = if scenario.run.mode == ForceMode::TimeAveraged {
        averaged_case
    } else {
        crate::io::presets::scenario(
            &scenario.name,
            scenario.pulse,
            scenario.medium,
            &crate::io::presets::WindowOptions {
                mode: ForceMode::TimeAveraged,
                ..opts
            },
        )
    };
    let inst_case = if scenario.run.mode == ForceMode::Instantaneous {
        scenario.clone()
    } else {
        instantaneous_variant(scenario, &opts)
    };
    let averaged = simulate(&averaged_case, order)?.report;
    let instantaneous = simulate(&inst_case, order)?.report;
    if averaged.j_mdw.z == 0.0 {
        return Err(Error::Precondition(
            "the medium carries no angular momentum to compare".to_string(),
        ));
    }
    let relative_gap = (instantaneous.j_mdw.z / averaged.j_mdw.z - 1.0).abs();
    Ok(OracleComparison {
        averaged,
        instantaneous,
        relative_gap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementLevel {
    /// Cell size relative to the scenario grid.
    pub coarsening: usize,
    pub nx: usize,
    pub nz: usize,
    /// Total angular momentum per photon along z (units of hbar).
    pub j_per_photon: f64,
    /// Distance from l + sigma.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// Coarsest first.
    pub levels: Vec<RefinementLevel>,
    /// Observed order from each consecutive triple of levels. `lower_bound`
    /// is set when the finer difference sits at the roundoff floor.
    pub orders: Vec<ObservedOrder>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedOrder {
    pub order: f64,
    pub lower_bound: bool,
}

impl ConvergenceStudy {
    pub fn errors_nonincreasing(&self) -> bool {
        self.levels
            .windows(2)
            .all(|w| w[1].error <= w[0].error * (1.0 + 1e-9) + 1e-12)
    }

    pub fn manifest_lines(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, l) in self.levels.iter().enumerate() {
            out.push((
                format!("level{i}"),
                format!(
                    "coarsening={} nx={} nz={} J_per_photon={:.9e} error={:.3e}",
                    l.coarsening, l.nx, l.nz, l.j_per_photon, l.error
                ),
            ));
        }
        for (i, o) in self.orders.iter().enumerate() {
            let tag = if o.lower_bound { ">=" } else { "" };
            out.push((format!("order{i}"), format!("{tag}{:.3}", o.order)));
        }
        out
    }
}

/// Roundoff floor for differences between refinement levels.
fn floor_of(q: f64) -> f64 {
    1e-13 * q.abs().max(1.0)
}

/// Observed convergence order from three successive values, coarsest first.
pub fn observed_order(q0: f64, q1: f64, q2: f64) -> ObservedOrder {
    let floor = floor_of(q2);
    let coarse = (q0 - q1).abs();
    let fine = (q1 - q2).abs();
    if fine <= floor {
        ObservedOrder {
            order: (coarse.max(floor) / floor).log2(),
            lower_bound: true,
        }
    } else {
        ObservedOrder {
            order: (coarse / fine).log2(),
            lower_bound: false,
        }
    }
}

/// Repeat a scenario on `levels` grids, each twice as coarse in every
/// direction as the next, ending with the scenario's own grid. The time step
/// is held fixed.
pub fn convergence_study(scenario: &Scenario, levels: usize, order: ReductionOrder) -> Result<ConvergenceStudy> {
    if levels < 3 {
        return Err(Error::Precondition(
            "a convergence study needs at least 3 levels".to_string(),
        ));
    }
    let target = (scenario.pulse.l + scenario.pulse.sigma) as f64;
    let mut out = Vec::with_capacity(levels);
    for k in 0..levels {
        let c = (levels - 1 - k) as u32;
        let grid = scenario.grid.coarsened(c).ok_or_else(|| {
            Error::Precondition(format!(
                "grid {}x{}x{} cannot be halved {c} times",
                scenario.grid.nx, scenario.grid.ny, scenario.grid.nz
            ))
        })?;
        let case = Scenario {
            grid,
            ..scenario.clone()
        };
        // coarse levels must still resolve the pulse energy
        normalize_u0(&case.pulse, &case.medium, &case.grid)?;
        let sim = simulate(&case, order)?;
        let j = sim.report.per_photon_j(&sim.report.j_mp).z;
        out.push(RefinementLevel {
            coarsening: 1 << c,
            nx: grid.nx,
            nz: grid.nz,
            j_per_photon: j,
            error: (j - target).abs(),
        });
    }
    let orders = out
        .windows(3)
        .map(|w| observed_order(w[0].j_per_photon, w[1].j_per_photon, w[2].j_per_photon))
        .collect();
    Ok(ConvergenceStudy { levels: out, orders })
}
