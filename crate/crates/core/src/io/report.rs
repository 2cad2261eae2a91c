//! Plain-text reports. Keys and column headers are stable; nothing here
//! depends on wall-clock time.

use std::path::Path;

use nalgebra::Vector3;

use super::Scenario;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::fiber::{angular_velocity, crossover_time, displacement_abs, displacement_mdw, Crossover, FiberPlan, SweepTable};
use crate::observables::{AngularDecomposition, MomentumReport};

/// Six significant digits, switching to exponent form for extreme magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{x:.5e}");
    }
    format!("{:.*}", (5 - mag).max(0) as usize, x)
}

fn vec_lines(out: &mut String, key: &str, v: &Vector3<f64>, fmt: impl Fn(f64) -> String) {
    for (axis, c) in ["x", "y", "z"].iter().zip(v.iter()) {
        out.push_str(&format!("{key}_{axis} = {}\n", fmt(*c)));
    }
}

fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn momentum_summary(
    scenario: &Scenario,
    report: &MomentumReport,
    decomposition: Option<&AngularDecomposition>,
    trajectory: Option<&Trajectory>,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario = {}\n", scenario.name));
    out.push_str(&format!("mode = {}\n", scenario.run.mode.as_str()));
    out.push_str(&format!("elasticity = {}\n", scenario.run.elasticity.as_str()));
    out.push_str(&format!("p = {}\nl = {}\nsigma = {}\n", scenario.pulse.p, scenario.pulse.l, scenario.pulse.sigma));
    out.push_str(&format!("n = {}\n", sig6(scenario.medium.n)));
    out.push_str(&format!("report_time_s = {}\n", sci(report.time)));
    vec_lines(&mut out, "origin_m", &report.origin, sci);
    out.push_str(&format!("photon_number = {}\n", sig6(report.photon_number)));
    out.push_str(&format!("field_energy_J = {}\n", sci(report.u_field)));
    vec_lines(&mut out, "P_field_kg_m_per_s", &report.p_field, sci);
    vec_lines(&mut out, "P_mdw_kg_m_per_s", &report.p_mdw, sci);
    vec_lines(&mut out, "P_mp_kg_m_per_s", &report.p_mp, sci);
    vec_lines(&mut out, "J_field_J_s", &report.j_field, sci);
    vec_lines(&mut out, "J_mdw_J_s", &report.j_mdw, sci);
    vec_lines(&mut out, "J_mp_J_s", &report.j_mp, sci);
    vec_lines(&mut out, "P_field_per_photon", &report.per_photon_p(&report.p_field), sig6);
    vec_lines(&mut out, "P_mdw_per_photon", &report.per_photon_p(&report.p_mdw), sig6);
    vec_lines(&mut out, "P_mp_per_photon", &report.per_photon_p(&report.p_mp), sig6);
    vec_lines(&mut out, "J_field_per_photon", &report.per_photon_j(&report.j_field), sig6);
    vec_lines(&mut out, "J_mdw_per_photon", &report.per_photon_j(&report.j_mdw), sig6);
    vec_lines(&mut out, "J_mp_per_photon", &report.per_photon_j(&report.j_mp), sig6);
    if report.j_field.z != 0.0 {
        out.push_str(&format!("J_mdw_over_J_field_z = {}\n", sig6(report.j_mdw.z / report.j_field.z)));
    }
    if report.p_field.z != 0.0 {
        out.push_str(&format!("P_mdw_over_P_field_z = {}\n", sig6(report.p_mdw.z / report.p_field.z)));
    }
    out.push_str(&format!("transferred_mass_kg = {}\n", sci(report.delta_m)));
    out.push_str(&format!("transferred_mass_expected_kg = {}\n", sci(report.delta_m_expected)));
    out.push_str(&format!("medium_kinetic_energy_J = {}\n", sci(report.kinetic_energy)));
    if let Some(d) = decomposition {
        vec_lines(&mut out, "L_field_per_photon", &report.per_photon_j(&d.l_field), sig6);
        vec_lines(&mut out, "S_field_per_photon", &report.per_photon_j(&d.s_field), sig6);
        vec_lines(&mut out, "J_external_per_photon", &report.per_photon_j(&d.j_ext), sig6);
        vec_lines(&mut out, "J_internal_per_photon", &report.per_photon_j(&d.j_int), sig6);
        vec_lines(&mut out, "energy_centroid_m", &d.r0, sci);
    }
    if let Some(t) = trajectory {
        out.push_str(&format!("amplitude_V_per_m = {}\n", sci(t.u0)));
        out.push_str(&format!("peak_speed_m_per_s = {}\n", sci(t.peak_speed)));
        out.push_str(&format!("peak_speed_time_s = {}\n", sci(t.peak_time)));
        out.push_str(&format!("momentum_bookkeeping_residual = {:.3e}\n", t.bookkeeping_residual));
        out.push_str(&format!("displacement_decrease = {:.3e}\n", t.displacement_decrease));
    }
    out
}

pub fn trajectory_table(trajectory: &Trajectory) -> String {
    let mut out = String::from(
        "step,time_s,window_offset,kinetic_energy_J,P_x,P_y,P_z,J_x,J_y,J_z,F_x,F_y,F_z,max_speed_m_per_s\n",
    );
    for d in &trajectory.diagnostics {
        out.push_str(&format!(
            "{},{:e},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
            d.step,
            d.time,
            d.offset,
            d.kinetic_energy,
            d.momentum.x,
            d.momentum.y,
            d.momentum.z,
            d.angular_momentum.x,
            d.angular_momentum.y,
            d.angular_momentum.z,
            d.force_sum.x,
            d.force_sum.y,
            d.force_sum.z,
            d.max_speed
        ));
    }
    out
}

/// Scalar results for a fiber plan followed by displacements at `times`.
pub fn fiber_table(plan: &FiberPlan, times: &[f64]) -> Result<String> {
    let omega = angular_velocity(plan)?;
    let mut out = String::new();
    out.push_str(&format!("radius_m = {:e}\n", plan.radius));
    out.push_str(&format!("intensity_W_per_m2 = {:e}\n", plan.intensity));
    out.push_str(&format!("threshold_intensity_W_per_m2 = {}\n", sig6(plan.threshold())));
    out.push_str(&format!("angular_velocity_rad_per_s = {}\n", sig6(omega)));
    out.push_str(&format!("mdw_angular_momentum_J_s = {}\n", sig6(plan.mdw_angular_momentum())));
    match crossover_time(&plan.medium) {
        Crossover::At(t) => out.push_str(&format!("crossover_time_s = {}\n", sig6(t))),
        Crossover::Never => out.push_str("crossover_time_s = never\n"),
    }
    out.push_str("time_s,dr_mdw_m,dr_abs_m\n");
    for &t in times {
        let abs = match displacement_abs(plan, t) {
            Ok(v) => format!("{v:e}"),
            Err(Error::AbsorptionNotSmall { .. }) => "nan".to_string(),
            Err(e) => return Err(e),
        };
        out.push_str(&format!("{t:e},{:e},{abs}\n", displacement_mdw(plan, t)?));
    }
    Ok(out)
}

/// Rectangular table: one row per time, one column per diameter.
pub fn sweep_table(table: &SweepTable) -> String {
    let mut out = String::from("time_s");
    for d in &table.diameters {
        out.push_str(&format!(",dr_mdw_m_at_d={d:e}"));
    }
    out.push('\n');
    for (t, row) in table.times.iter().zip(&table.values) {
        out.push_str(&format!("{t:e}"));
        for v in row {
            out.push_str(&format!(",{v:e}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
