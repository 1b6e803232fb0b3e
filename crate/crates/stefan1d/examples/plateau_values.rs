//! The model layer by itself: plateau densities selected by the equal-area
//! rule, for a few adhesion strengths.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run -q --example plateau_values
//! ```

use stefan1d::model::{unstable_interval, AdhesionModel};

fn main() {
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9}",
        "alpha", "rho_flat", "rho_sharp", "rho1", "rho2", "sigma_bar", "residual"
    );
    for alpha in [0.76, 0.80, 0.85, 0.90, 0.95] {
        let m = AdhesionModel::new(alpha).unwrap();
        // how exactly the selected plateaus balance the equal-area rule
        let residual = m.equal_area_residual();
        println!(
            "{:>5.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>9.1e}",
            alpha, m.rho_flat, m.rho_sharp, m.rho1, m.rho2, m.sigma_bar, residual
        );
    }

    // below alpha = 3/4 the flux is monotone and no interval is excluded
    println!();
    match unstable_interval(0.7) {
        Err(e) => println!("alpha = 0.70: {e}"),
        Ok(_) => unreachable!(),
    }

    // the jump endpoints pinch the unstable interval from both sides
    let m = AdhesionModel::new(0.85).unwrap();
    println!(
        "alpha = 0.85: rho1 < rho_flat < rho_sharp < rho2 reads {:.4} < {:.4} < {:.4} < {:.4}",
        m.rho1, m.rho_flat, m.rho_sharp, m.rho2
    );
}
