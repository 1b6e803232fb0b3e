//! Two initial data with the same mass, two different fates. In the
//! conditional mass window the front survives only if the bulk keeps
//! feeding it; parked too far away, the same mass arrives too late.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example bistability
//! ```

use stefan1d::driver::{run_scenario, Solver};
use stefan1d::events::Event;
use stefan1d::scenario::preset;

fn main() {
    for name in ["bistable_near", "bistable_far"] {
        let cfg = preset(name).unwrap();
        let result = run_scenario(&cfg, Solver::FrontTrack).unwrap();
        let r = &result.report;

        println!(
            "{name}: mass {:.6}, front starts at {:.4}",
            r.initial_mass, r.initial_fronts[0]
        );
        for e in &r.events {
            if let Event::BoundaryHit { t, wall, .. } = e {
                println!("  front absorbed at the {wall:?} wall at t = {t:.4}");
            }
        }
        match r.final_fronts.as_slice() {
            [] => println!(
                "  no front left; profile relaxes to the uniform value {:.6}",
                r.final_mass
            ),
            [s] => println!(
                "  front survives at {s:.6} (prediction {:?}, gap {:.2e})",
                r.prediction.unwrap(),
                r.front_error.unwrap()
            ),
            more => println!("  unexpected front count: {more:?}"),
        }
        println!();
    }
}
