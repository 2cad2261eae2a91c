use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use mdw_core::fiber::{crossover_time, sweep_grid, Crossover, FiberPlan};
use mdw_core::io::{
    fiber_preset, fiber_table, load_plan, load_scenario, momentum_summary, plan_to_text, preset, preset_names,
    scenario_to_text, sweep_table, trajectory_table, write_dump, write_text, DumpHeader, DumpVariable, RunManifest,
    Scenario, PLAN_PRESET,
};
use mdw_core::dynamics::Snapshot;
use mdw_core::reduce::ReductionOrder;
use mdw_core::study::{convergence_study, oracle, simulate};
use mdw_core::{Error, Result};

/// Mass density wave simulator for Laguerre-Gaussian pulses in dielectrics.
#[derive(Parser)]
#[command(name = "mdw", version)]
struct Cli {
    /// Worker threads for the simulation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Sum reductions in a fixed order so reruns are bit-identical.
    #[arg(long, global = true)]
    deterministic_reductions: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or `preset:NAME` and report momenta.
    Simulate {
        scenario: String,
        /// Repeat on K successively halved grids and report the observed order.
        #[arg(long, value_name = "K")]
        convergence_study: Option<usize>,
        /// Output directory, overriding the scenario's own.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form fiber rotation estimate for a plan file or `preset:fiber-silicon`.
    Fiber {
        plan: String,
        /// Times (s) for the displacement table: a comma list or start:stop:count.
        #[arg(long)]
        times: Option<String>,
    },
    /// Table of medium-driven surface displacement over time and fiber diameter.
    Sweep {
        plan: String,
        /// Times (s): a comma list or start:stop:count.
        #[arg(long)]
        times: String,
        /// Diameters (m): a comma list or start:stop:count.
        #[arg(long)]
        diameters: String,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare cycle-averaged and instantaneous forces on one scenario.
    Oracle { scenario: String },
    /// List or print the shipped presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    Show { name: String },
}

fn scenario_arg(arg: &str) -> Result<Scenario> {
    match arg.strip_prefix("preset:") {
        Some(name) => preset(name),
        None => load_scenario(Path::new(arg)),
    }
}

fn plan_arg(arg: &str) -> Result<FiberPlan> {
    match arg.strip_prefix("preset:") {
        Some(PLAN_PRESET) => Ok(fiber_preset()),
        Some(other) => Err(Error::Precondition(format!(
            "unknown plan preset '{other}' (known: {PLAN_PRESET})"
        ))),
        None => load_plan(Path::new(arg)),
    }
}

fn parse_list(key: &str, text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Precondition(format!("--{key}: expected a comma list or start:stop:count, got '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return match n {
            0 => Err(bad()),
            1 => Ok(vec![a]),
            _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
        };
    }
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

fn dump_state(dir: &Path, stem: &str, scenario: &Scenario, snap: &Snapshot) -> Result<()> {
    let g = &scenario.grid;
    let var = |name: &str, unit: &str| DumpVariable {
        name: name.to_string(),
        unit: unit.to_string(),
    };
    let corner = g.position(0, snap.offset);
    let header = DumpHeader {
        nx: g.nx,
        ny: g.ny,
        nz: g.nz,
        dx: g.dx,
        dy: g.dy,
        dz: g.dz,
        origin: [corner.x, corner.y, corner.z],
        time: snap.time,
        variables: vec![
            var("ra_x", "m"),
            var("ra_y", "m"),
            var("ra_z", "m"),
            var("va_x", "m/s"),
            var("va_y", "m/s"),
            var("va_z", "m/s"),
            var("rho_mdw", "kg/m^3"),
        ],
    };
    let s = &snap.state;
    let mut data: Vec<Vec<f64>> = Vec::with_capacity(7);
    for a in 0..3 {
        data.push(s.ra.iter().map(|v| v[a]).collect());
    }
    for a in 0..3 {
        data.push(s.va.iter().map(|v| v[a]).collect());
    }
    data.push(s.rho_mdw.clone());
    write_dump(&dir.join(stem), &header, &data)
}

fn cmd_simulate(
    arg: &str,
    study: Option<usize>,
    out: Option<PathBuf>,
    order: ReductionOrder,
) -> Result<()> {
    let start = Instant::now();
    let scenario = scenario_arg(arg)?;
    let bad = scenario.validate();
    if !bad.is_empty() {
        return Err(Error::Invalid(bad));
    }
    let mut manifest = RunManifest::new(&scenario, order, rayon::current_num_threads());
    if let Some(k) = study {
        let st = convergence_study(&scenario, k, order)?;
        manifest.convergence = st.manifest_lines();
        for (k, v) in &manifest.convergence {
            println!("convergence.{k} = {v}");
        }
    }
    let sim = simulate(&scenario, order)?;
    let summary = momentum_summary(&scenario, &sim.report, Some(&sim.decomposition), Some(&sim.trajectory));
    manifest.wall_clock_s = start.elapsed().as_secs_f64();
    let dir = out.or_else(|| scenario.output.directory.as_ref().map(PathBuf::from));
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            write_text(&dir.join("summary.txt"), &summary)?;
            write_text(&dir.join("manifest.txt"), &manifest.to_text())?;
            write_text(&dir.join("scenario.txt"), &scenario_to_text(&scenario))?;
            if scenario.output.tables {
                write_text(&dir.join("trajectory.csv"), &trajectory_table(&sim.trajectory))?;
            }
            if scenario.output.field_dump {
                dump_state(&dir, "report_state", &scenario, &sim.trajectory.report)?;
                dump_state(&dir, "final_state", &scenario, &sim.trajectory.last)?;
                for snap in &sim.trajectory.snapshots {
                    dump_state(&dir, &format!("state_{:06}", snap.step), &scenario, snap)?;
                }
            }
            print!("{summary}");
            eprintln!("results written to {}", dir.display());
        }
        None => {
            print!("{summary}");
            print!("{}", manifest.to_text());
        }
    }
    Ok(())
}

fn cmd_fiber(arg: &str, times: Option<String>) -> Result<()> {
    let plan = plan_arg(arg)?;
    let times = match times {
        Some(t) => parse_list("times", &t)?,
        None => {
            let end = match crossover_time(&plan.medium) {
                Crossover::At(t) => t,
                Crossover::Never => 1.0,
            };
            (0..=4).map(|i| end * i as f64 / 4.0).collect()
        }
    };
    print!("{}", fiber_table(&plan, &times)?);
    Ok(())
}

fn cmd_sweep(arg: &str, times: &str, diameters: &str, out: Option<PathBuf>) -> Result<()> {
    let plan = plan_arg(arg)?;
    let table = sweep_grid(&plan, &parse_list("times", times)?, &parse_list("diameters", diameters)?)?;
    let text = sweep_table(&table);
    match out {
        Some(path) => write_text(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_oracle(arg: &str, order: ReductionOrder) -> Result<()> {
    let scenario = scenario_arg(arg)?;
    let cmp = oracle(&scenario, order)?;
    let a = &cmp.averaged;
    let b = &cmp.instantaneous;
    println!("scenario = {}", scenario.name);
    println!("J_mdw_per_photon_z.time_averaged = {:.9}", a.per_photon_j(&a.j_mdw).z);
    println!("J_mdw_per_photon_z.instantaneous = {:.9}", b.per_photon_j(&b.j_mdw).z);
    println!("J_mdw_z.relative_gap = {:.3e}", cmp.relative_gap);
    Ok(())
}

fn cmd_presets(action: PresetAction) -> Result<()> {
    match action {
        PresetAction::List => {
            for name in preset_names() {
                println!("{name}");
            }
            println!("{PLAN_PRESET}");
        }
        PresetAction::Show { name } if name == PLAN_PRESET => print!("{}", plan_to_text(&fiber_preset())),
        PresetAction::Show { name } => print!("{}", scenario_to_text(&preset(&name)?)),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Precondition("--threads must be at least 1".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    }
    let order = if cli.deterministic_reductions {
        ReductionOrder::Deterministic
    } else {
        ReductionOrder::Unordered
    };
    match cli.command {
        Command::Simulate {
            scenario,
            convergence_study,
            out,
        } => cmd_simulate(&scenario, convergence_study, out, order),
        Command::Fiber { plan, times } => cmd_fiber(&plan, times),
        Command::Sweep {
            plan,
            times,
            diameters,
            out,
        } => cmd_sweep(&plan, &times, &diameters, out),
        Command::Oracle { scenario } => cmd_oracle(&scenario, order),
        Command::Presets { action } => cmd_presets(action),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
