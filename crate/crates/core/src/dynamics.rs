//! Newtonian motion of the medium under the optical (and optionally elastic)
//! force on a window that can follow the pulse.

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::constants::C;
use crate::error::{Error, Result};
use crate::forces::{
    elastic_force_density, optical_force_grid, Elasticity, ForceField, ForceKind, ForceMode,
    IndexProfile, TransverseCache,
};
use crate::grid::GridSpec;
use crate::io::Scenario;
use crate::lgfields::{normalize_u0, MediumSpec, PulseField};
use crate::reduce::{sum_scalar, sum_vec3, ReductionOrder};

/// Largest tolerated |v|/c.
pub const MAX_SPEED_RATIO: f64 = 1e-6;
/// Largest tolerated speed of a cell leaving the window, relative to the peak.
pub const WAKE_SPEED_LIMIT: f64 = 1e-8;

/// What cells that left the window carried with them. Angular momentum is
/// about the lab origin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WakeIntegrals {
    pub cells: usize,
    pub momentum: Vector3<f64>,
    pub angular_momentum: Vector3<f64>,
    pub mass: f64,
    pub positive_mass: f64,
    pub kinetic_energy: f64,
    pub max_speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MediumState {
    pub ra: Vec<Vector3<f64>>,
    pub va: Vec<Vector3<f64>>,
    pub rho_mdw: Vec<f64>,
    pub wake: WakeIntegrals,
}

impl MediumState {
    pub fn at_rest(cells: usize) -> Self {
        Self {
            ra: vec![Vector3::zeros(); cells],
            va: vec![Vector3::zeros(); cells],
            rho_mdw: vec![0.0; cells],
            wake: WakeIntegrals::default(),
        }
    }

    pub fn max_speed(&self) -> f64 {
        self.va.par_iter().map(|v| v.norm()).reduce(|| 0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.ra.iter().chain(&self.va).all(|v| *v == Vector3::zeros())
            && self.rho_mdw.iter().all(|r| *r == 0.0)
            && WakeIntegrals { cells: 0, ..self.wake } == WakeIntegrals::default()
    }
}

fn derivative(grid: &GridSpec, ra: &[Vector3<f64>], i: usize, j: usize, k: usize, axis: usize) -> f64 {
    let (n, h, pos) = match axis {
        0 => (grid.nx, grid.dx, i),
        1 => (grid.ny, grid.dy, j),
        _ => (grid.nz, grid.dz, k),
    };
    let at = |p: usize| {
        let idx = match axis {
            0 => grid.index(p, j, k),
            1 => grid.index(i, p, k),
            _ => grid.index(i, j, p),
        };
        ra[idx][axis]
    };
    if n < 2 {
        0.0
    } else if pos == 0 {
        (at(1) - at(0)) / h
    } else if pos == n - 1 {
        (at(n - 1) - at(n - 2)) / h
    } else {
        (at(pos + 1) - at(pos - 1)) / (2.0 * h)
    }
}

/// Linearized continuity: rho_mdw = -rho0 div(ra), centered inside the
/// window and one-sided on its faces.
pub fn density_perturbation(grid: &GridSpec, ra: &[Vector3<f64>], rho0: f64, out: &mut [f64]) {
    out.par_iter_mut().enumerate().for_each(|(idx, rho)| {
        let (i, j, k) = grid.unravel(idx);
        let div = derivative(grid, ra, i, j, k, 0)
            + derivative(grid, ra, i, j, k, 1)
            + derivative(grid, ra, i, j, k, 2);
        *rho = -rho0 * div;
    });
}

fn check_finite(grid: &GridSpec, state: &MediumState, step: usize) -> Result<()> {
    let bad = state
        .ra
        .par_iter()
        .zip(&state.va)
        .position_first(|(r, v)| !(r.iter().all(|x| x.is_finite()) && v.iter().all(|x| x.is_finite())));
    if let Some(idx) = bad {
        let (i, j, k) = grid.unravel(idx);
        return Err(Error::NonFinite { step, i, j, k });
    }
    Ok(())
}

/// One velocity-Verlet step. `forces` is the force at the current time;
/// `force_next` evaluates the force at the end of the step from the updated
/// displacements and is returned for reuse by the next step.
pub fn step<F>(
    grid: &GridSpec,
    state: &mut MediumState,
    forces: &ForceField,
    medium: &MediumSpec,
    dt: f64,
    step_index: usize,
    force_next: F,
) -> Result<ForceField>
where
    F: FnOnce(&[Vector3<f64>]) -> ForceField,
{
    let inv_rho = 1.0 / medium.rho0;
    state
        .va
        .par_iter_mut()
        .zip(state.ra.par_iter_mut())
        .zip(forces.f.par_iter())
        .for_each(|((v, r), f)| {
            *v += f * (0.5 * dt * inv_rho);
            *r += *v * dt;
        });
    let next = force_next(&state.ra);
    state
        .va
        .par_iter_mut()
        .zip(next.f.par_iter())
        .for_each(|(v, f)| *v += f * (0.5 * dt * inv_rho));
    check_finite(grid, state, step_index)?;
    density_perturbation(grid, &state.ra, medium.rho0, &mut state.rho_mdw);
    Ok(next)
}

/// Advance the window by `shift` cells. Cells leaving through the trailing
/// face are folded into the wake integrals; cells entering through the
/// leading face start at rest. `offset` is the shift before this call and
/// `peak_speed` the largest speed seen so far, for the wake-loss check.
pub fn comoving_remap(
    grid: &GridSpec,
    state: &MediumState,
    medium: &MediumSpec,
    offset: usize,
    shift: usize,
    peak_speed: f64,
) -> Result<MediumState> {
    if shift == 0 {
        return Ok(state.clone());
    }
    let cols = grid.columns();
    let leaving = shift.min(grid.nz) * cols;
    let vol = grid.cell_volume();
    let mut wake = state.wake;
    let mut leave_speed: f64 = 0.0;
    for idx in 0..leaving {
        let v = state.va[idx];
        let p = v * (medium.rho0 * vol);
        let r = grid.position(idx, offset);
        wake.cells += 1;
        wake.momentum += p;
        wake.angular_momentum += r.cross(&p);
        wake.mass += state.rho_mdw[idx] * vol;
        wake.positive_mass += state.rho_mdw[idx].max(0.0) * vol;
        wake.kinetic_energy += 0.5 * medium.rho0 * vol * v.norm_squared();
        leave_speed = leave_speed.max(v.norm());
    }
    wake.max_speed = wake.max_speed.max(leave_speed);
    if leave_speed > WAKE_SPEED_LIMIT * peak_speed {
        return Err(Error::WakeLoss {
            speed: leave_speed,
            limit: WAKE_SPEED_LIMIT * peak_speed,
        });
    }
    let mut next = MediumState::at_rest(grid.cells());
    next.ra[..grid.cells() - leaving].copy_from_slice(&state.ra[leaving..]);
    next.va[..grid.cells() - leaving].copy_from_slice(&state.va[leaving..]);
    next.wake = wake;
    density_perturbation(grid, &next.ra, medium.rho0, &mut next.rho_mdw);
    Ok(next)
}

/// Totals over the window plus wake.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub time: f64,
    pub offset: usize,
    pub kinetic_energy: f64,
    pub momentum: Vector3<f64>,
    pub angular_momentum: Vector3<f64>,
    /// Window sum of f V at this time.
    pub force_sum: Vector3<f64>,
    pub max_speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub offset: usize,
    pub state: MediumState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub u0: f64,
    pub diagnostics: Vec<StepDiagnostics>,
    pub snapshots: Vec<Snapshot>,
    /// State at the step nearest the configured report time.
    pub report: Snapshot,
    pub last: Snapshot,
    pub peak_speed: f64,
    /// Time of the largest window speed.
    pub peak_time: f64,
    /// Largest relative mismatch between the momentum change of a step and
    /// the impulse of the averaged force, over steps with significant force.
    pub bookkeeping_residual: f64,
    /// Largest decrease of any cell's longitudinal displacement within one
    /// step, relative to the largest displacement at the end.
    pub displacement_decrease: f64,
}

pub fn diagnostics(
    grid: &GridSpec,
    state: &MediumState,
    medium: &MediumSpec,
    forces: &ForceField,
    step: usize,
    time: f64,
    offset: usize,
    order: ReductionOrder,
) -> StepDiagnostics {
    let vol = grid.cell_volume();
    let m = medium.rho0 * vol;
    let n = grid.cells();
    let p = sum_vec3(n, order, |i| state.va[i]) * m;
    let j = sum_vec3(n, order, |i| grid.position(i, offset).cross(&state.va[i])) * m;
    let ke = sum_scalar(n, order, |i| state.va[i].norm_squared()) * 0.5 * m;
    let f = sum_vec3(n, order, |i| forces.f[i]) * vol;
    StepDiagnostics {
        step,
        time,
        offset,
        kinetic_energy: ke + state.wake.kinetic_energy,
        momentum: p + state.wake.momentum,
        angular_momentum: j + state.wake.angular_momentum,
        force_sum: f,
        max_speed: state.max_speed(),
    }
}

/// Evaluates the total force for a window position and time.
struct ForceModel<'a> {
    mode: ForceMode,
    elasticity: Elasticity,
    field: PulseField,
    cache: TransverseCache,
    profile: IndexProfile,
    grid: &'a GridSpec,
    medium: &'a MediumSpec,
}

impl ForceModel<'_> {
    fn eval(&self, ra: &[Vector3<f64>], offset: usize, t: f64) -> ForceField {
        let mut out = ForceField::zeros(self.grid.cells(), ForceKind::Optical);
        optical_force_grid(
            self.mode,
            &self.field,
            &self.cache,
            &self.profile,
            self.grid,
            offset,
            t,
            &mut out.f,
        );
        if self.elasticity == Elasticity::On {
            let el = elastic_force_density(self.grid, ra, self.medium);
            out = ForceField::total(&out, &el);
        }
        out
    }
}

/// Normalize the pulse to the scenario energy and integrate from t0 to t1.
pub fn run(scenario: &Scenario, order: ReductionOrder) -> Result<Trajectory> {
    let bad = scenario.validate();
    if !bad.is_empty() {
        return Err(Error::Invalid(bad));
    }
    let u0 = normalize_u0(&scenario.pulse, &scenario.medium, &scenario.grid)?;
    run_with_amplitude(scenario, u0, order)
}

/// Integrate with a given mode amplitude, skipping normalization.
pub fn run_with_amplitude(scenario: &Scenario, u0: f64, order: ReductionOrder) -> Result<Trajectory> {
    let grid = &scenario.grid;
    let medium = &scenario.medium;
    let field = PulseField::new(scenario.pulse, *medium, u0);
    let model = ForceModel {
        mode: scenario.run.mode,
        elasticity: scenario.run.elasticity,
        cache: TransverseCache::new(&field, grid),
        field,
        profile: IndexProfile::Uniform(medium.n),
        grid,
        medium,
    };

    let steps = grid.steps();
    let report_step = grid.step_near(scenario.run.report_time);
    let vol = grid.cell_volume();
    let mut state = MediumState::at_rest(grid.cells());
    let mut offset = grid.shift_at(grid.t0);
    let mut forces = model.eval(&state.ra, offset, grid.t0);

    let mut diags = Vec::with_capacity(steps + 1);
    diags.push(diagnostics(grid, &state, medium, &forces, 0, grid.t0, offset, order));
    let mut snapshots = Vec::new();
    let snap = |s: &MediumState, step: usize, offset: usize| Snapshot {
        step,
        time: grid.time(step),
        offset,
        state: s.clone(),
    };
    let mut report = None;
    if report_step == 0 {
        report = Some(snap(&state, 0, offset));
    }
    let mut peak_speed: f64 = 0.0;
    let mut peak_time = grid.t0;
    let mut residuals = Vec::with_capacity(steps);
    let mut displacement_decrease: f64 = 0.0;
    let mut prev_z: Vec<f64> = Vec::new();

    for s in 1..=steps {
        let t = grid.time(s);
        let new_offset = grid.shift_at(t);
        if scenario.run.mode == ForceMode::TimeAveraged {
            prev_z = state.ra.iter().map(|r| r.z).collect();
        }
        let before = diags.last().copied().expect("initial diagnostics");
        let v_before = state.va.clone();
        // forces at the end of the step are taken at the pre-shift window so
        // both Verlet half kicks see the same cells
        let next = step(grid, &mut state, &forces, medium, grid.dt, s, |ra| {
            model.eval(ra, offset, t)
        })?;
        // momentum change summed cell by cell, so large window totals do not
        // cancel against each other
        let m = medium.rho0 * vol;
        let dp = sum_vec3(grid.cells(), order, |i| state.va[i] - v_before[i]) * m;
        let next_sum = sum_vec3(grid.cells(), order, |i| next.f[i]) * vol;
        let impulse = (before.force_sum + next_sum) * (0.5 * grid.dt);
        residuals.push(((dp - impulse).norm(), impulse.norm()));

        if scenario.run.mode == ForceMode::TimeAveraged {
            let worst = state
                .ra
                .par_iter()
                .zip(prev_z.par_iter())
                .map(|(r, z0)| z0 - r.z)
                .reduce(|| 0.0, f64::max);
            displacement_decrease = displacement_decrease.max(worst);
        }

        let speed = state.max_speed();
        if speed / C >= MAX_SPEED_RATIO {
            return Err(Error::Relativistic {
                speed,
                ratio: speed / C,
            });
        }
        if speed > peak_speed {
            peak_speed = speed;
            peak_time = t;
        }

        forces = next;
        if new_offset > offset {
            state = comoving_remap(grid, &state, medium, offset, new_offset - offset, peak_speed)?;
            offset = new_offset;
            forces = model.eval(&state.ra, offset, t);
        }
        let d = diagnostics(grid, &state, medium, &forces, s, t, offset, order);
        diags.push(d);
        if scenario.run.snapshot_every > 0 && s % scenario.run.snapshot_every == 0 {
            snapshots.push(snap(&state, s, offset));
        }
        if s == report_step {
            report = Some(snap(&state, s, offset));
        }
    }

    let max_impulse = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    let bookkeeping_residual = residuals
        .iter()
        .filter(|r| r.1 > 1e-3 * max_impulse)
        .map(|r| r.0 / r.1)
        .fold(0.0, f64::max);
    let max_dz = state.ra.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
    let last = snap(&state, steps, offset);
    Ok(Trajectory {
        u0,
        diagnostics: diags,
        snapshots,
        report: report.unwrap_or_else(|| last.clone()),
        last,
        peak_speed,
        peak_time,
        bookkeeping_residual,
        displacement_decrease: if max_dz > 0.0 {
            displacement_decrease / max_dz
        } else {
            0.0
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec {
            nx: 3,
            ny: 4,
            nz: 5,
            dx: 1e-6,
            dy: 1e-6,
            dz: 1e-6,
            z_start: 0.0,
            window_speed: 1.0,
            comove_from: 0.0,
            comove_until: 10.0,
            t0: 0.0,
            t1: 1.0,
            dt: 1e-3,
        }
    }

    #[test]
    fn zero_force_leaves_state_unchanged() {
        let g = small_grid();
        let m = MediumSpec::silicon();
        let mut s = MediumState::at_rest(g.cells());
        s.ra[3] = Vector3::new(1e-12, 0.0, 0.0);
        density_perturbation(&g, &s.ra, m.rho0, &mut s.rho_mdw);
        let before = s.clone();
        let zero = ForceField::zeros(g.cells(), ForceKind::Optical);
        step(&g, &mut s, &zero, &m, 1e-9, 1, |_| zero.clone()).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn constant_force_is_uniform_acceleration() {
        let g = small_grid();
        let m = MediumSpec::silicon();
        let mut s = MediumState::at_rest(g.cells());
        let f0 = 1e9;
        let mut f = ForceField::zeros(g.cells(), ForceKind::Optical);
        f.f[7].z = f0;
        let dt = 1e-9;
        let n = 250;
        for k in 1..=n {
            f = step(&g, &mut s, &f, &m, dt, k, |_| f.clone()).unwrap();
        }
        let t = n as f64 * dt;
        assert!((s.va[7].z / (f0 * t / m.rho0) - 1.0).abs() < 1e-12);
        assert!((s.ra[7].z / (f0 * t * t / (2.0 * m.rho0)) - 1.0).abs() < 1e-12);
        assert_eq!(s.va[6], Vector3::zeros());
    }

    #[test]
    fn non_finite_state_names_cell() {
        let g = small_grid();
        let m = MediumSpec::silicon();
        let mut s = MediumState::at_rest(g.cells());
        let mut f = ForceField::zeros(g.cells(), ForceKind::Optical);
        let idx = g.index(2, 1, 3);
        f.f[idx].x = f64::NAN;
        match step(&g, &mut s, &f, &m, 1e-9, 17, |_| f.clone()) {
            Err(Error::NonFinite { step: 17, i: 2, j: 1, k: 3 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn density_of_linear_compression() {
        let g = small_grid();
        let rho0 = 2329.0;
        let ra: Vec<_> = (0..g.cells())
            .map(|i| Vector3::new(0.0, 0.0, -1e-3 * g.position(i, 0).z))
            .collect();
        let mut rho = vec![0.0; g.cells()];
        density_perturbation(&g, &ra, rho0, &mut rho);
        for r in rho {
            assert!((r - rho0 * 1e-3).abs() < 1e-9 * rho0);
        }
    }

    fn random_state(g: &GridSpec) -> MediumState {
        let mut s = MediumState::at_rest(g.cells());
        for i in 0..g.cells() {
            let a = (i as f64 * 0.7).sin();
            let b = (i as f64 * 1.3).cos();
            s.ra[i] = Vector3::new(a, b, a * b) * 1e-12;
            s.va[i] = Vector3::new(b, a, a + b) * 1e-10;
        }
        density_perturbation(g, &s.ra, 2329.0, &mut s.rho_mdw);
        s
    }

    #[test]
    fn remap_by_zero_is_identity() {
        let g = small_grid();
        let s = random_state(&g);
        let out = comoving_remap(&g, &s, &MediumSpec::silicon(), 0, 0, 1.0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn full_window_remap_moves_everything_to_wake() {
        let g = small_grid();
        let m = MediumSpec::silicon();
        let s = random_state(&g);
        let zero = ForceField::zeros(g.cells(), ForceKind::Optical);
        let d = diagnostics(&g, &s, &m, &zero, 0, 0.0, 2, ReductionOrder::Deterministic);
        let out = comoving_remap(&g, &s, &m, 2, g.nz, 1e10).unwrap();
        assert!(out.ra.iter().chain(&out.va).all(|v| *v == Vector3::zeros()));
        assert!((out.wake.momentum - d.momentum).norm() <= 1e-12 * d.momentum.norm());
        assert!(
            (out.wake.angular_momentum - d.angular_momentum).norm()
                <= 1e-12 * d.angular_momentum.norm()
        );
        let mass: f64 = s.rho_mdw.iter().sum::<f64>() * g.cell_volume();
        assert!((out.wake.mass - mass).abs() <= 1e-12 * mass.abs());
        assert_eq!(out.wake.cells, g.cells());
    }

    #[test]
    fn momentum_continuous_across_remap() {
        let g = small_grid();
        let m = MediumSpec::silicon();
        let s = random_state(&g);
        let zero = ForceField::zeros(g.cells(), ForceKind::Optical);
        let order = ReductionOrder::Deterministic;
        let before = diagnostics(&g, &s, &m, &zero, 0, 0.0, 0, order);
        let out = comoving_remap(&g, &s, &m, 0, 2, 1e10).unwrap();
        let after = diagnostics(&g, &out, &m, &zero, 0, 0.0, 2, order);
        assert!((after.momentum - before.momentum).norm() <= 1e-12 * before.momentum.norm());
        assert!(
            (after.angular_momentum - before.angular_momentum).norm()
                <= 1e-12 * before.angular_momentum.norm()
        );
    }

    #[test]
    fn fast_leaving_cells_are_rejected() {
        let g = small_grid();
        let s = random_state(&g);
        let r = comoving_remap(&g, &s, &MediumSpec::silicon(), 0, 1, 1e-5);
        assert!(matches!(r, Err(Error::WakeLoss { .. })));
    }
}
