use mdw_core::io::{
    fiber_preset, load_plan, load_scenario, parse_plan, parse_scenario, plan_to_text, preset, scenario_to_text,
    PRESET_NAMES,
};
use mdw_core::{Error, Violation};
use proptest::prelude::*;

fn keys(v: &[Violation]) -> Vec<&str> {
    v.iter().map(|v| v.key.as_str()).collect()
}

#[test]
fn silicon_preset_constants() {
    let s = preset("silicon-lg02-linear").unwrap();
    let m = s.medium;
    assert_eq!(m.n, 3.4757);
    assert_eq!(m.rho0, 2329.0);
    assert_eq!((m.c11, m.c12, m.c44), (165.7e9, 63.9e9, 79.6e9));
    assert_eq!((s.pulse.l, s.pulse.sigma), (2, 0));
}

#[test]
fn presets_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in PRESET_NAMES {
        let s = preset(name).unwrap();
        let path = dir.path().join(format!("{name}.txt"));
        std::fs::write(&path, scenario_to_text(&s)).unwrap();
        let once = load_scenario(&path).unwrap();
        assert_eq!(once, s);
        assert_eq!(parse_scenario(&scenario_to_text(&once)).unwrap(), once);
    }
    let plan = fiber_preset();
    let path = dir.path().join("plan.txt");
    std::fs::write(&path, plan_to_text(&plan)).unwrap();
    assert_eq!(load_plan(&path).unwrap(), plan);
}

#[test]
fn scaled_units_convert_at_the_boundary() {
    let text = scenario_to_text(&preset("silicon-lg00-circular").unwrap())
        .replace("pulse.energy = 5e-3 J", "pulse.energy = 5 mJ")
        .replace("pulse.wavelength = 1.55e-6 m", "pulse.wavelength = 1550 nm")
        .replace("medium.density = 2.329e3 kg/m^3", "medium.density = 2.329 g/cm^3")
        .replace("medium.c11 = 1.657e11 Pa", "medium.c11 = 165.7 GPa")
        .replace("medium.absorption = 1e-6 1/m", "medium.absorption = 1e-8 1/cm");
    let s = parse_scenario(&text).unwrap();
    assert!((s.pulse.energy / 5e-3 - 1.0).abs() < 1e-15);
    assert!((s.pulse.wavelength / 1550e-9 - 1.0).abs() < 1e-15);
    assert!((s.medium.rho0 / 2329.0 - 1.0).abs() < 1e-15);
    assert!((s.medium.c11 / 165.7e9 - 1.0).abs() < 1e-15);
    assert!((s.medium.alpha / 1e-6 - 1.0).abs() < 1e-15);
}

#[test]
fn every_violation_is_listed() {
    let text = scenario_to_text(&preset("silicon-lg02-linear").unwrap())
        .replace("pulse.rel_bandwidth = 1e-2", "pulse.rel_bandwidth = 0.5")
        .replace("grid.nx = 24", "grid.nx = 1")
        .replace("medium.density = 2.329e3 kg/m^3", "medium.density = -1 kg/m^3")
        + "pulse.colour = 3\n";
    match parse_scenario(&text) {
        Err(Error::Invalid(v)) => {
            let k = keys(&v);
            for want in ["pulse.rel_bandwidth", "medium.density", "pulse.colour"] {
                assert!(k.contains(&want), "{want} missing from {k:?}");
            }
            assert!(k.iter().any(|k| k.starts_with("grid.")), "{k:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_key_is_named() {
    let text: String = scenario_to_text(&preset("silicon-lg02-linear").unwrap())
        .lines()
        .filter(|l| !l.starts_with("medium.n ") && !l.starts_with("grid.dt "))
        .map(|l| format!("{l}\n"))
        .collect();
    match parse_scenario(&text) {
        Err(Error::Invalid(v)) => {
            assert_eq!(keys(&v), ["medium.n", "grid.dt"]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let mut text = scenario_to_text(&preset("vacuum-null").unwrap());
    let line = text.lines().count() + 1;
    text.push_str("grid.extra = 3 m m\n");
    match parse_scenario(&text) {
        Err(Error::Parse { line: l, column, .. }) => {
            assert_eq!(l, line);
            assert_eq!(column, 18);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_scenario("pulse.energy = 5 kg\n"),
        Err(Error::Parse { line: 1, column: 18, .. })
    ));
}

#[test]
fn plan_guards() {
    let good = plan_to_text(&fiber_preset());
    let hot = good.replace("beam.intensity = 1.1e13 W/m^2", "beam.intensity = 3e15 W/m^2");
    assert!(matches!(parse_plan(&hot), Err(Error::Invalid(v)) if keys(&v) == ["beam.intensity"]));
    let linear = good.replace("beam.sigma = 1", "beam.sigma = 0");
    assert!(matches!(parse_plan(&linear), Err(Error::Invalid(v)) if keys(&v) == ["beam.sigma"]));
    let two = good.replace("beam.sigma = 1", "beam.sigma = 2");
    assert!(matches!(parse_plan(&two), Err(Error::Invalid(v)) if keys(&v) == ["beam.sigma"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arbitrary_text_never_panics(text in "[a-z._ =0-9\\-/^\n#]{0,200}") {
        let _ = parse_scenario(&text);
        let _ = parse_plan(&text);
    }

    #[test]
    fn edited_energy_round_trips(e in 1e-6f64..1e-2) {
        let mut s = preset("silicon-lg00-circular").unwrap();
        s.pulse.energy = e;
        prop_assert_eq!(parse_scenario(&scenario_to_text(&s)).unwrap(), s);
    }
}
