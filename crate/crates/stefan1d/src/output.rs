//! Plain-text run outputs and the readers that load them back.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a file
//! read back through [`read_csv`] reproduces the original values bit for
//! bit. Missing fronts appear as NaN.

use crate::driver::{DiagSample, FrontSample, RunReport, RunResult, Snapshot};
use crate::events::Event;
use crate::scenario::ScenarioConfig;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

fn other(err: impl std::fmt::Display) -> io::Error {
    io::Error::other(err.to_string())
}

pub fn fronts_csv(samples: &[FrontSample], n_fronts: usize) -> String {
    let mut out = String::from("t");
    for i in 0..n_fronts {
        write!(out, ",front{i}").unwrap();
    }
    out.push('\n');
    for s in samples {
        write!(out, "{}", s.t).unwrap();
        for p in &s.positions {
            write!(out, ",{p}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn diagnostics_csv(samples: &[DiagSample]) -> String {
    let mut out = String::from("t,dt,mass,sup_sigma_x,dev_uniform\n");
    for s in samples {
        writeln!(
            out,
            "{},{},{},{},{}",
            s.t, s.dt, s.mass, s.sup_sigma_x, s.dev_uniform
        )
        .unwrap();
    }
    out
}

pub fn snapshot_csv(snap: &Snapshot) -> String {
    let mut out = String::from("x,rho\n");
    for (x, r) in snap.x.iter().zip(&snap.rho) {
        writeln!(out, "{x},{r}").unwrap();
    }
    out
}

pub fn events_jsonl(events: &[Event]) -> io::Result<String> {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).map_err(other)?);
        out.push('\n');
    }
    Ok(out)
}

/// Write the full file set for one run:
///
/// ```text
/// dir/config.toml      resolved scenario
/// dir/fronts.csv       front positions over time, NaN once gone
/// dir/diagnostics.csv  mass, step size, gradient sup, uniformity
/// dir/events.jsonl     one event per line
/// dir/report.json      summary
/// dir/snapshots/       profiles at requested times, final.csv always
/// ```
pub fn write_run_outputs(cfg: &ScenarioConfig, result: &RunResult, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("config.toml"),
        toml::to_string_pretty(cfg).map_err(other)?,
    )?;
    fs::write(
        dir.join("fronts.csv"),
        fronts_csv(&result.fronts, result.report.initial_fronts.len()),
    )?;
    fs::write(
        dir.join("diagnostics.csv"),
        diagnostics_csv(&result.diagnostics),
    )?;
    fs::write(
        dir.join("events.jsonl"),
        events_jsonl(&result.report.events)?,
    )?;
    let mut report = serde_json::to_string_pretty(&result.report).map_err(other)?;
    report.push('\n');
    fs::write(dir.join("report.json"), report)?;

    let snapdir = dir.join("snapshots");
    fs::create_dir_all(&snapdir)?;
    let last = result.snapshots.len().saturating_sub(1);
    for (i, snap) in result.snapshots.iter().enumerate() {
        let name = if i == last {
            "final.csv".to_string()
        } else {
            format!("snap{i:02}_t{}.csv", snap.t)
        };
        fs::write(snapdir.join(name), snapshot_csv(snap))?;
    }
    Ok(())
}

/// One row per run: the quantities a sweep is usually after.
pub fn sweep_summary_csv(reports: &[RunReport]) -> String {
    let mut out = String::from(
        "scenario,alpha,initial_mass,prediction,predicted_front,final_front,front_error,\
         decay_rate,stop,n_events,t_final\n",
    );
    for r in reports {
        use crate::analysis::Prediction;
        let (label, s_star) = match r.prediction {
            Some(Prediction::SingleFront { s_star }) => ("single_front", s_star),
            Some(Prediction::Uniform { .. }) => ("uniform", f64::NAN),
            Some(Prediction::Bistable { s_star }) => ("bistable", s_star),
            Some(Prediction::Degenerate) => ("degenerate", f64::NAN),
            None => ("", f64::NAN),
        };
        let final_front = match r.final_fronts.as_slice() {
            [s] => *s,
            _ => f64::NAN,
        };
        let front_error = r.front_error.unwrap_or(f64::NAN);
        let decay = r.front_decay.as_ref().map_or(f64::NAN, |d| d.rate);
        let stop = format!("{:?}", r.stop).to_lowercase();
        writeln!(
            out,
            "{},{},{},{label},{s_star},{final_front},{front_error},{decay},{stop},{},{}",
            r.scenario,
            r.alpha,
            r.initial_mass,
            r.events.len(),
            r.t_final
        )
        .unwrap();
    }
    out
}

pub fn write_sweep_summary(reports: &[RunReport], dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.csv"), sweep_summary_csv(reports))
}

/// Header and numeric rows of a CSV written by this module. Non-numeric
/// cells (the sweep summary's label columns) come back as NaN.
pub fn read_csv(path: &Path) -> io::Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| other("empty csv"))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        rows.push(
            line.split(',')
                .map(|c| c.parse::<f64>().unwrap_or(f64::NAN))
                .collect(),
        );
    }
    Ok((header, rows))
}

pub fn read_events(path: &Path) -> io::Result<Vec<Event>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_str(l).map_err(other))
        .collect()
}

pub fn read_report(path: &Path) -> io::Result<RunReport> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(other)
}
