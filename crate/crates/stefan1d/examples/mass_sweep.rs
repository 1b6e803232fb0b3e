//! Sweep the conserved mass across the single-front window and watch the
//! final front land on the mass-balance line s* = (rho2 - M)/(rho2 - rho1).
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example mass_sweep
//! ```

use stefan1d::analysis::Prediction;
use stefan1d::driver::{run_sweep, Solver};
use stefan1d::scenario::SweepConfig;

fn main() {
    let sweep: SweepConfig = toml::from_str(
        r#"
        name = "example_sweep"
        alphas = [0.85]
        masses = [0.45, 0.50, 0.55, 0.60, 0.65, 0.70]
        amplitude = 0.03
        t_end = 2.0
        "#,
    )
    .unwrap();

    let reports = run_sweep(&sweep, Solver::FrontTrack, None).unwrap();
    println!(
        "{:>6} {:>11} {:>11} {:>9} {:>8}",
        "mass", "predicted", "final", "error", "rate"
    );
    for r in &reports {
        let s_star = match r.prediction {
            Some(Prediction::SingleFront { s_star }) => s_star,
            other => panic!("sweep should stay in the single-front window, got {other:?}"),
        };
        println!(
            "{:>6.3} {:>11.6} {:>11.6} {:>9.1e} {:>8.3}",
            r.initial_mass,
            s_star,
            r.final_fronts[0],
            r.front_error.unwrap(),
            r.front_decay.as_ref().map_or(f64::NAN, |f| f.rate)
        );
    }
}
