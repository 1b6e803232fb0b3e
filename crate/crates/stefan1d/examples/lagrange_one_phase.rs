//! One diffusing phase against a resting plateau. In mass coordinates the
//! moving boundary becomes a fixed wall, so the Lagrange solver handles the
//! front implicitly; here it shadows the front tracker through the whole
//! relaxation.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example lagrange_one_phase
//! ```

use stefan1d::driver::{run_scenario, Solver};
use stefan1d::scenario::preset;

fn main() {
    let cfg = preset("one_phase").unwrap();
    let ft = run_scenario(&cfg, Solver::FrontTrack).unwrap();
    let lg = run_scenario(&cfg, Solver::Lagrange).unwrap();

    println!("front trajectory, tracked vs mass-coordinate:");
    println!(
        "{:>7} {:>12} {:>12} {:>10}",
        "t", "tracked", "lagrange", "gap"
    );
    let stride = (ft.fronts.len() / 8).max(1);
    for (i, f) in ft.fronts.iter().enumerate() {
        if i % stride != 0 && i + 1 != ft.fronts.len() {
            continue;
        }
        // both runs sample on the same cadence
        let Some(g) = lg.fronts.get(i) else { break };
        println!(
            "{:>7.3} {:>12.6} {:>12.6} {:>10.2e}",
            f.t,
            f.positions[0],
            g.positions[0],
            (f.positions[0] - g.positions[0]).abs()
        );
    }

    let a = ft.report.final_fronts[0];
    let b = lg.report.final_fronts[0];
    println!();
    println!(
        "steady prediction {:.6}; tracked ends at {a:.6}, lagrange at {b:.6}",
        match ft.report.prediction.unwrap() {
            stefan1d::analysis::Prediction::SingleFront { s_star } => s_star,
            other => panic!("unexpected prediction {other:?}"),
        }
    );
}
