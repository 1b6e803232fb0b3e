//! A two-plateau step at its steady position should not move: the front
//! velocity, the gradient monitor and the steady-state detector all agree.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example steady_step
//! ```

use stefan1d::driver::{run_scenario, Solver};
use stefan1d::fronttrack::interface_velocities;
use stefan1d::scenario::preset;

fn main() {
    let cfg = preset("steady_step").unwrap();
    let state = cfg.build_state().unwrap();
    println!(
        "initial front {:.6}, velocity {:+.3e}",
        state.fronts[0],
        interface_velocities(&state)[0]
    );

    let result = run_scenario(&cfg, Solver::FrontTrack).unwrap();
    let r = &result.report;
    println!(
        "stopped as {:?} after {} steps at t = {:.4}",
        r.stop, r.n_steps, r.t_final
    );
    println!(
        "front drift {:.3e}, mass drift {:.3e}",
        (r.final_fronts[0] - state.fronts[0]).abs(),
        (r.final_mass - r.initial_mass).abs()
    );
    println!(
        "sup |sigma_x| stayed at {:.3e} (initial {:.3e})",
        r.sup_sigma_x_max, r.sup_sigma_x_initial
    );
}
