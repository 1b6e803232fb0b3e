//! Thin command-line front end. Everything it does is one library call plus
//! printing; the examples directory shows the same capabilities in code.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use stefan1d::analysis::Prediction;
use stefan1d::driver::{run_scenario, run_sweep, RunReport, Solver};
use stefan1d::output::write_run_outputs;
use stefan1d::scenario::{load_config, preset, presets, LoadedConfig, ScenarioConfig, SweepConfig};

#[derive(Parser)]
#[command(
    name = "stefan1d",
    version,
    about = "front-tracking simulator for multi-phase cell adhesion profiles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one scenario from a TOML file or `preset:NAME`.
    Run {
        config: String,
        /// Directory for fronts.csv, diagnostics.csv, events.jsonl,
        /// report.json and snapshots/.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "fronttrack", value_parser = parse_solver)]
        solver: Solver,
        /// Reserved for a stochastic particle mode; rejected for now.
        #[arg(long)]
        seedless: bool,
    },
    /// Expand a sweep config and run every scenario in parallel.
    Sweep {
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "fronttrack", value_parser = parse_solver)]
        solver: Solver,
        /// Reserved for a stochastic particle mode; rejected for now.
        #[arg(long)]
        seedless: bool,
    },
    /// Built-in scenarios.
    Presets {
        #[command(subcommand)]
        cmd: PresetCmd,
    },
    /// Check a config file (or `preset:NAME`) and list its problems.
    Validate { config: String },
}

#[derive(Subcommand)]
enum PresetCmd {
    /// One line per preset: name, model, horizon, description.
    List,
}

fn parse_solver(s: &str) -> Result<Solver, String> {
    s.parse()
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run {
            config,
            out,
            solver,
            seedless,
        } => {
            if seedless {
                eprintln!(
                    "--seedless is reserved for a stochastic particle mode that is not \
                     implemented; drop the flag to run the deterministic solvers"
                );
                return ExitCode::from(2);
            }
            run_cmd(&config, out.as_deref(), solver)
        }
        Cmd::Sweep {
            config,
            out,
            solver,
            seedless,
        } => {
            if seedless {
                eprintln!(
                    "--seedless is reserved for a stochastic particle mode that is not \
                     implemented; drop the flag to run the deterministic solvers"
                );
                return ExitCode::from(2);
            }
            sweep_cmd(&config, out.as_deref(), solver)
        }
        Cmd::Presets {
            cmd: PresetCmd::List,
        } => {
            for cfg in presets() {
                println!(
                    "{:<18} alpha={:<5} t_end={:<5} {}",
                    cfg.name, cfg.alpha, cfg.t_end, cfg.description
                );
            }
            ExitCode::SUCCESS
        }
        Cmd::Validate { config } => validate_cmd(&config),
    }
}

/// Resolve a `preset:NAME` or path argument into a scenario.
fn load_scenario(arg: &str) -> Result<ScenarioConfig, String> {
    if let Some(name) = arg.strip_prefix("preset:") {
        return preset(name).map_err(|e| e.to_string());
    }
    match load_config(Path::new(arg)).map_err(|e| e.to_string())? {
        LoadedConfig::Scenario(cfg) => Ok(cfg),
        LoadedConfig::Sweep(_) => Err(format!(
            "{arg} holds a [sweep] table; use `stefan1d sweep {arg}`"
        )),
    }
}

fn load_sweep(arg: &str) -> Result<SweepConfig, String> {
    match load_config(Path::new(arg)).map_err(|e| e.to_string())? {
        LoadedConfig::Sweep(cfg) => Ok(cfg),
        LoadedConfig::Scenario(_) => Err(format!(
            "{arg} holds a single scenario; use `stefan1d run {arg}`"
        )),
    }
}

fn run_cmd(config: &str, out: Option<&Path>, solver: Solver) -> ExitCode {
    let cfg = match load_scenario(config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    let result = match run_scenario(&cfg, solver) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("run failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    print_report(&result.report);
    if let Some(dir) = out {
        if let Err(e) = write_run_outputs(&cfg, &result, dir) {
            eprintln!("writing {}: {e}", dir.display());
            return ExitCode::FAILURE;
        }
        println!("wrote {}", dir.display());
    }
    ExitCode::SUCCESS
}

fn sweep_cmd(config: &str, out: Option<&Path>, solver: Solver) -> ExitCode {
    let sweep = match load_sweep(config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    let reports = match run_sweep(&sweep, solver, out) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sweep failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "{:<28} {:>7} {:>10} {:>10} {:>10}  stop",
        "scenario", "mass", "predicted", "final", "error"
    );
    for r in &reports {
        let predicted = match r.prediction {
            Some(Prediction::SingleFront { s_star }) | Some(Prediction::Bistable { s_star }) => {
                format!("{s_star:.6}")
            }
            _ => "-".to_string(),
        };
        let final_front = match r.final_fronts.as_slice() {
            [s] => format!("{s:.6}"),
            _ => "-".to_string(),
        };
        let error = r
            .front_error
            .map_or("-".to_string(), |e| format!("{e:.2e}"));
        println!(
            "{:<28} {:>7.4} {:>10} {:>10} {:>10}  {:?}",
            r.scenario, r.initial_mass, predicted, final_front, error, r.stop
        );
    }
    if let Some(dir) = out {
        println!("wrote {}", dir.display());
    }
    ExitCode::SUCCESS
}

fn validate_cmd(config: &str) -> ExitCode {
    let problems = if let Some(name) = config.strip_prefix("preset:") {
        match preset(name) {
            Ok(cfg) => cfg.problems(),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::FAILURE;
            }
        }
    } else {
        match load_config(Path::new(config)) {
            Ok(LoadedConfig::Scenario(cfg)) => cfg.problems(),
            Ok(LoadedConfig::Sweep(sweep)) => match sweep.expand() {
                Ok(rows) => rows.iter().flat_map(|c| c.problems()).collect(),
                Err(e) => vec![e.to_string()],
            },
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::FAILURE;
            }
        }
    };
    if problems.is_empty() {
        println!("ok");
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            eprintln!("problem: {p}");
        }
        ExitCode::FAILURE
    }
}

fn print_report(r: &RunReport) {
    println!(
        "{} [{}]  alpha={}  plateaus=({:.6}, {:.6})",
        r.scenario, r.solver, r.alpha, r.rho1, r.rho2
    );
    println!(
        "  {} steps to t={:.6}, stop: {:?}, mass {:.9} -> {:.9}",
        r.n_steps, r.t_final, r.stop, r.initial_mass, r.final_mass
    );
    for e in &r.events {
        match e {
            stefan1d::events::Event::Coalescence {
                t,
                position,
                mass_defect,
                ..
            } => println!("  t={t:.5} coalescence at x={position:.5} (defect {mass_defect:.2e})"),
            stefan1d::events::Event::BoundaryHit {
                t,
                wall,
                mass_defect,
                ..
            } => println!("  t={t:.5} boundary hit at {wall:?} wall (defect {mass_defect:.2e})"),
            stefan1d::events::Event::SteadyState { t, proxy } => {
                println!("  t={t:.5} steady state (proxy {proxy:.2e})")
            }
            stefan1d::events::Event::Blowup { t, detail } => {
                println!("  t={t:.5} blow-up: {detail}")
            }
        }
    }
    println!("  final fronts: {:?}", r.final_fronts);
    if let Some(p) = &r.prediction {
        println!("  prediction: {p:?}");
    }
    if let Some(err) = r.front_error {
        println!("  front error vs prediction: {err:.3e}");
    }
    if let Some(fit) = &r.front_decay {
        println!(
            "  front decay rate {:.6} (r2 {:.4}, window {:?})",
            fit.rate, fit.r2, fit.window
        );
    }
    if let Some(c) = &r.comparison {
        println!(
            "  vs {}: front gap {:?}, profile l2 gap {:.3e}",
            c.reference_solver, c.front_gap, c.l2_gap
        );
    }
}
