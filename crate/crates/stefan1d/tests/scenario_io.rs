//! Config files, presets and the on-disk output set, exercised the way a
//! consumer would: parse, validate, run, write, read back.

use std::path::Path;

use stefan1d::driver::{run_scenario, Solver};
use stefan1d::output::{read_csv, read_events, read_report, write_run_outputs};
use stefan1d::scenario::{load_config, preset, presets, LoadedConfig};

fn config_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

#[test]
fn example_configs_parse_build_and_validate() {
    let scenario = match load_config(&config_dir().join("two_phase.toml")).unwrap() {
        LoadedConfig::Scenario(cfg) => cfg,
        other => panic!("expected a scenario, got {other:?}"),
    };
    let problems = scenario.problems();
    assert!(problems.is_empty(), "{problems:?}");
    let state = scenario.build_state().unwrap();
    assert_eq!(state.fronts.len(), scenario.fronts.len());
    assert_eq!(state.phases.len(), scenario.fronts.len() + 1);

    let sweep = match load_config(&config_dir().join("mass_sweep.toml")).unwrap() {
        LoadedConfig::Sweep(cfg) => cfg,
        other => panic!("expected a sweep, got {other:?}"),
    };
    let rows = sweep.expand().unwrap();
    assert_eq!(rows.len(), sweep.alphas.len() * sweep.masses.len());
    for cfg in &rows {
        let problems = cfg.problems();
        assert!(problems.is_empty(), "{}: {problems:?}", cfg.name);
    }
}

#[test]
fn presets_are_distinct_and_self_consistent() {
    let all = presets();
    assert!(all.len() >= 8, "preset library shrank to {}", all.len());

    let mut names: Vec<_> = all.iter().map(|c| c.name.as_str()).collect();
    names.sort_unstable();
    let before = names.len();
    names.dedup();
    assert_eq!(names.len(), before, "duplicate preset names");

    for cfg in &all {
        let problems = cfg.problems();
        assert!(problems.is_empty(), "{}: {problems:?}", cfg.name);
        let state = cfg.build_state().unwrap();
        // every preset declares where it starts; the builder must agree
        assert_eq!(state.fronts.len(), cfg.fronts.len(), "{}", cfg.name);
        assert!(preset(&cfg.name).is_ok());
    }
    assert!(preset("no_such_scenario").is_err());
}

#[test]
fn run_outputs_round_trip_through_disk() {
    // a run with an event exercises every file, including the NaN column
    // tail after the merged fronts disappear
    let cfg = preset("coalescence").unwrap();
    let result = run_scenario(&cfg, Solver::FrontTrack).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_run_outputs(&cfg, &result, dir.path()).unwrap();

    let (header, rows) = read_csv(&dir.path().join("fronts.csv")).unwrap();
    assert_eq!(header.len(), 1 + result.report.initial_fronts.len());
    assert_eq!(rows.len(), result.fronts.len());
    for (row, sample) in rows.iter().zip(&result.fronts) {
        assert_eq!(row[0], sample.t, "shortest round-trip formatting broke");
        for (got, want) in row[1..].iter().zip(&sample.positions) {
            assert!(got == want || (got.is_nan() && want.is_nan()));
        }
    }

    let (dh, drows) = read_csv(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(dh, ["t", "dt", "mass", "sup_sigma_x", "dev_uniform"]);
    assert_eq!(drows.len(), result.diagnostics.len());

    let events = read_events(&dir.path().join("events.jsonl")).unwrap();
    assert_eq!(events.len(), result.report.events.len());
    assert_eq!(events[0].time(), result.report.events[0].time());

    let report = read_report(&dir.path().join("report.json")).unwrap();
    assert_eq!(report.scenario, cfg.name);
    assert_eq!(report.n_steps, result.report.n_steps);
    assert_eq!(report.final_mass, result.report.final_mass);

    assert!(dir.path().join("config.toml").is_file());
    assert!(dir.path().join("snapshots/final.csv").is_file());
}
