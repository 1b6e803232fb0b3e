//! The same scenario through three independent discretizations: explicit
//! front tracking, a fixed-grid enthalpy solver that never sees the front,
//! and a mass-coordinate solver with the front as a derived quantity.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example cross_validate
//! ```

use stefan1d::driver::{run_scenario, Solver};
use stefan1d::scenario::preset;

fn main() {
    let cfg = preset("cross_check").unwrap();
    println!("scenario {:?}, t_end = {}", cfg.name, cfg.t_end);

    let mut finals = Vec::new();
    for solver in [Solver::FrontTrack, Solver::Enthalpy, Solver::Lagrange] {
        let result = run_scenario(&cfg, solver).unwrap();
        let r = &result.report;
        println!(
            "  {:<10} front {:.6} after {:>6} steps (mass drift {:+.1e})",
            r.solver,
            r.final_fronts[0],
            r.n_steps,
            r.final_mass - r.initial_mass
        );
        finals.push(r.final_fronts[0]);
    }
    let spread = finals.iter().fold(f64::MIN, |a, &b| a.max(b))
        - finals.iter().fold(f64::MAX, |a, &b| a.min(b));
    println!("front positions agree within {spread:.2e}");

    // paired mode reruns the enthalpy solver to the same horizon and
    // reports the gaps in one place
    let result = run_scenario(&cfg, Solver::Paired).unwrap();
    let c = result.report.comparison.unwrap();
    println!(
        "paired run: front gap {:.2e}, profile L2 gap {:.2e}",
        c.front_gap.unwrap(),
        c.l2_gap
    );
}
