//! Topology changes: a thin high band collapses and its fronts merge, and a
//! starved two-phase state loses its front at the wall. Both events remove
//! phases mid-run and the simulation continues on the new topology.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example topology_events
//! ```

use stefan1d::analysis::neumann_rate;
use stefan1d::driver::{run_scenario, Solver};
use stefan1d::events::Event;
use stefan1d::scenario::preset;

fn main() {
    // three phases -> one: the sliver between the two fronts drains dry
    let cfg = preset("coalescence").unwrap();
    let result = run_scenario(&cfg, Solver::FrontTrack).unwrap();
    let r = &result.report;
    println!("coalescence: fronts start at {:?}", r.initial_fronts);
    for e in &r.events {
        match e {
            Event::Coalescence {
                t,
                position,
                mass_defect,
                ..
            } => println!(
                "  t = {t:.4}: fronts merged at x = {position:.4} (cut mass {mass_defect:.2e})"
            ),
            Event::SteadyState { t, .. } => {
                println!("  t = {t:.4}: healed profile reached steady state")
            }
            other => println!("  {other:?}"),
        }
    }
    println!(
        "  final fronts: {:?}, mass {:.6}\n",
        r.final_fronts, r.final_mass
    );

    // mass below the low plateau: no front position can balance, extinction
    let cfg = preset("annihilation").unwrap();
    let result = run_scenario(&cfg, Solver::FrontTrack).unwrap();
    let r = &result.report;
    println!(
        "annihilation: mass {:.4} sits below the low plateau {:.4}",
        r.initial_mass,
        cfg.model().unwrap().rho1
    );
    for e in &r.events {
        if let Event::BoundaryHit {
            t,
            wall,
            mass_defect,
            ..
        } = e
        {
            println!(
                "  t = {t:.4}: front absorbed at the {wall:?} wall (cut mass {mass_defect:.2e})"
            );
        }
    }
    // after extinction the profile flattens at the plain heat-equation pace
    let m = cfg.model().unwrap();
    println!(
        "  final deviation from uniform {:.3e}; linearized uniform rate {:.3}",
        result.diagnostics.last().unwrap().dev_uniform,
        neumann_rate(&m, r.final_mass)
    );
}
