//! The binary's surface: subcommands, flags, exit codes and the files a run
//! leaves behind. Each test drives the compiled executable as a subprocess.

use std::path::Path;
use std::process::{Command, Output};

fn stefan1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stefan1d"))
        .args(args)
        .output()
        .expect("binary failed to launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn presets_list_names_every_builtin() {
    let out = stefan1d(&["presets", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in [
        "steady_step",
        "near_steady",
        "bistable_far",
        "bistable_near",
        "annihilation",
        "coalescence",
        "cross_check",
        "one_phase",
        "gradient_watch",
    ] {
        assert!(
            text.contains(name),
            "presets list is missing {name}:\n{text}"
        );
    }
}

#[test]
fn validate_checks_presets_and_rejects_unknown_names() {
    let out = stefan1d(&["validate", "preset:steady_step"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "ok");

    let out = stefan1d(&["validate", "preset:no_such_scenario"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no_such_scenario"));
}

#[test]
fn run_and_sweep_refuse_each_others_configs() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let sweep_path = configs.join("mass_sweep.toml");
    let scenario_path = configs.join("two_phase.toml");

    let out = stefan1d(&["run", sweep_path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("use `stefan1d sweep"),
        "{}",
        stderr(&out)
    );

    let out = stefan1d(&["sweep", scenario_path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("use `stefan1d run"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn run_writes_the_advertised_file_set() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = stefan1d(&[
        "run",
        "preset:steady_step",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("steady_step [fronttrack]"), "{text}");
    for file in [
        "config.toml",
        "fronts.csv",
        "diagnostics.csv",
        "events.jsonl",
        "report.json",
        "snapshots/final.csv",
    ] {
        assert!(out_dir.join(file).is_file(), "missing {file}");
    }
}

#[test]
fn solver_flag_selects_and_rejects() {
    let out = stefan1d(&["run", "preset:steady_step", "--solver", "enthalpy"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[enthalpy]"));

    let out = stefan1d(&["run", "preset:steady_step", "--solver", "bogus"]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("unknown solver 'bogus'"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn seedless_is_reserved_and_rejected() {
    for cmd in ["run", "sweep"] {
        let out = stefan1d(&[cmd, "preset:steady_step", "--seedless"]);
        assert_eq!(out.status.code(), Some(2), "{cmd} accepted --seedless");
        assert!(stderr(&out).contains("reserved"), "{}", stderr(&out));
    }
}

#[test]
fn sweep_runs_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("mini.toml");
    std::fs::write(
        &cfg_path,
        "[sweep]\nname = \"mini\"\nmasses = [0.6]\nt_end = 0.02\n",
    )
    .unwrap();
    let out_dir = dir.path().join("sweep");

    let out = stefan1d(&[
        "sweep",
        cfg_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("scenario"), "{text}");
    assert!(text.contains("mini_a0.85_m0.6"), "{text}");

    assert!(out_dir.join("summary.csv").is_file());
    assert!(out_dir.join("runs/mini_a0.85_m0.6/report.json").is_file());
}
