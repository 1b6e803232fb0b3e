//! Independent cross-validation solvers.
//!
//! Both solvers discretise the same evolution as the front tracker without
//! tracking fronts, so their agreement with it is evidence against
//! scheme-specific artefacts.
//!
//! The enthalpy solver advances `rho_t = (Ktilde(rho))_xx` on a fixed grid,
//! where `Ktilde` is the temperature with its non-monotone middle flattened
//! to the constant `sigma_bar`. Jumps appear as steep internal layers; front
//! positions are recovered from the layer cells by conservation.
//!
//! The Lagrangian solver handles the one-phase configuration (a diffusing
//! low phase against a static high plateau) in the mass coordinate
//! `y(x) = integral_x^s (rho2 - rho)`, where the front sits at y = 0 for all
//! time and the temperature w = K(rho) obeys the plain nonlinear heat
//! equation `w_t = D(rho) (rho2 - rho)^2 w_yy` on the fixed interval
//! [0, y0], y0 = rho2 - M. No front condition enters at all: the front
//! position is reconstructed by integrating dx/dy = -1/(rho2 - rho).

use crate::fronttrack::{neumann_step, SimState};
use crate::model::{AdhesionModel, ModelError, PhaseKind};
use crate::numerics::trapezoid_uniform;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnthalpyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("not a one-phase configuration: {0}")]
    Setup(String),
}

/// Fixed-grid enthalpy state on [0, 1].
#[derive(Clone, Debug)]
pub struct EnthalpyState {
    pub model: AdhesionModel,
    pub t: f64,
    pub v: Vec<f64>,
}

impl EnthalpyState {
    pub fn new(model: AdhesionModel, v: Vec<f64>) -> Self {
        EnthalpyState { model, t: 0.0, v }
    }

    pub fn n_cells(&self) -> usize {
        self.v.len() - 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_cells() as f64
    }

    pub fn mass(&self) -> f64 {
        trapezoid_uniform(&self.v, self.dx())
    }
}

/// Stability bound of the explicit enthalpy step. The flattened temperature
/// has slope at most max(D(0), D(1)) on the stable branches (D decreases
/// toward the unstable interval from both sides) and slope zero on the flat.
pub fn enthalpy_stable_dt(model: &AdhesionModel, dx: f64, safety: f64) -> f64 {
    let sup = model.diffusivity(0.0).max(model.diffusivity(1.0));
    safety * dx * dx / (2.0 * sup)
}

/// One conservative explicit step of `rho_t = (Ktilde(rho))_xx` with Neumann
/// walls; exact trapezoid mass conservation.
pub fn enthalpy_step(state: &mut EnthalpyState, dt: f64) {
    let dx = state.dx();
    let m = state.model;
    neumann_step(&mut state.v, dx, dt, |r| m.flattened_temperature(r));
    state.t += dt;
}

/// A front recovered from the enthalpy field: the interface position and the
/// phase kind on its left.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontEstimate {
    pub position: f64,
    pub left: PhaseKind,
}

#[derive(Clone, Copy, PartialEq)]
enum NodeClass {
    Low,
    Mushy,
    High,
}

/// Recover front positions from the enthalpy field by conservation.
///
/// Nodes classify as low, high or mushy, with a margin of 2% of the jump
/// around each plateau: any value inside [rho1, rho2] is stationary for the
/// flattened temperature, so a relaxed profile parks its plateaus slightly
/// inside the band and exact thresholds would classify everything as mushy.
/// Each maximal mushy run flanked by opposite classes represents one front;
/// its position is the point where a sharp jump between the two plateau
/// values carries the same mass as the profile between the flanking nodes.
/// Runs touching the domain ends are skipped (no flank to jump to).
pub fn extract_fronts(state: &EnthalpyState) -> Vec<FrontEstimate> {
    let m = &state.model;
    let v = &state.v;
    let h = state.dx();
    let tol = 0.02 * m.jump();
    let class = move |x: f64| -> NodeClass {
        if x <= m.rho1 + tol {
            NodeClass::Low
        } else if x >= m.rho2 - tol {
            NodeClass::High
        } else {
            NodeClass::Mushy
        }
    };

    let mut fronts = Vec::new();
    let n = v.len();
    let mut i = 0;
    while i + 1 < n {
        if class(v[i]) == NodeClass::Mushy {
            i += 1;
            continue;
        }
        // find the next non-mushy node
        let mut j = i + 1;
        while j < n && class(v[j]) == NodeClass::Mushy {
            j += 1;
        }
        if j == n {
            break;
        }
        let (ci, cj) = (class(v[i]), class(v[j]));
        if ci != cj {
            let (rho_l, rho_r) = match ci {
                NodeClass::Low => (m.rho1, m.rho2),
                NodeClass::High => (m.rho2, m.rho1),
                NodeClass::Mushy => unreachable!(),
            };
            let (xl, xr) = (i as f64 * h, j as f64 * h);
            let mass = trapezoid_uniform(&v[i..=j], h);
            // rho_l (s - xl) + rho_r (xr - s) = mass
            let s = (mass + rho_l * xl - rho_r * xr) / (rho_l - rho_r);
            fronts.push(FrontEstimate {
                position: s,
                left: match ci {
                    NodeClass::Low => PhaseKind::Low,
                    _ => PhaseKind::High,
                },
            });
        }
        i = j;
    }
    fronts
}

/// One-phase solver state in the mass coordinate: temperature values `w` on
/// the uniform grid over [0, y0], with the front at y = 0 (node 0, pinned to
/// K(rho1)) and the wall at y = y0 (zero gradient).
#[derive(Clone, Debug)]
pub struct LagrangeField {
    pub model: AdhesionModel,
    pub t: f64,
    pub y0: f64,
    pub w: Vec<f64>,
}

impl LagrangeField {
    pub fn dy(&self) -> f64 {
        self.y0 / (self.w.len() - 1) as f64
    }

    /// Diffusion coefficient A(w) = D(rho) (rho2 - rho)^2 at one node.
    fn coeff(&self, w: f64) -> Result<f64, ModelError> {
        let rho = self.model.invert_temperature_low(w)?;
        let d = self.model.diffusivity(rho);
        let gap = self.model.rho2 - rho;
        Ok(d * gap * gap)
    }
}

/// Set up the mass-coordinate field from a two-phase state whose low phase
/// sits left of the single front and whose high phase is at rest on the
/// plateau. `n_cells` is the resolution of the uniform y-grid.
pub fn lagrange_transform(
    state: &SimState,
    n_cells: usize,
) -> Result<LagrangeField, EnthalpyError> {
    if state.fronts.len() != 1 || state.phases.len() != 2 {
        return Err(EnthalpyError::Setup(format!(
            "need exactly one front, got {}",
            state.fronts.len()
        )));
    }
    let (low, high) = (&state.phases[0], &state.phases[1]);
    if low.kind != PhaseKind::Low || high.kind != PhaseKind::High {
        return Err(EnthalpyError::Setup(
            "need the low phase on the left".into(),
        ));
    }
    let m = &state.model;
    if high.v.iter().any(|&v| (v - m.rho2).abs() > 1e-12) {
        return Err(EnthalpyError::Setup(
            "high phase must rest on its plateau".into(),
        ));
    }

    // y at the low-phase nodes, accumulated from the front (right end)
    let s = state.fronts[0];
    let n = low.n_cells();
    let hx = s / n as f64;
    let mut y_nodes = vec![0.0; n + 1];
    for j in (0..n).rev() {
        let seg = 0.5 * hx * ((m.rho2 - low.v[j]) + (m.rho2 - low.v[j + 1]));
        y_nodes[j] = y_nodes[j + 1] + seg;
    }
    let y0 = y_nodes[0];

    // resample w = K(rho) onto the uniform y grid; y_nodes decreases in j
    let dy = y0 / n_cells as f64;
    let mut w = vec![0.0; n_cells + 1];
    for (k, wk) in w.iter_mut().enumerate() {
        let y = dy * k as f64;
        // find the bracketing pair in the decreasing y_nodes
        let mut j = 0;
        while j + 1 < y_nodes.len() && y_nodes[j + 1] > y {
            j += 1;
        }
        let (ya, yb) = (y_nodes[j], y_nodes[(j + 1).min(n)]);
        let (wa, wb) = (
            m.temperature(low.v[j]),
            m.temperature(low.v[(j + 1).min(n)]),
        );
        *wk = if (ya - yb).abs() < 1e-300 {
            wb
        } else {
            wb + (wa - wb) * (y - yb) / (ya - yb)
        };
    }
    w[0] = m.temperature(m.rho1);
    Ok(LagrangeField {
        model: *m,
        t: state.t,
        y0,
        w,
    })
}

/// One explicit step of at most `dt_cap`; returns the step size taken. The
/// front node is a Dirichlet value, the wall node reflects.
pub fn lagrange_step(
    field: &mut LagrangeField,
    safety: f64,
    dt_cap: f64,
) -> Result<f64, EnthalpyError> {
    let n = field.w.len() - 1;
    let dy = field.dy();
    let mut coeffs = vec![0.0; n + 1];
    let mut a_max = 0.0f64;
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c = field.coeff(field.w[j])?;
        a_max = a_max.max(*c);
    }
    let dt = (safety * dy * dy / (2.0 * a_max.max(1e-12))).min(dt_cap);
    let w = &field.w;
    let mut next = w.clone();
    let r = dt / (dy * dy);
    for j in 1..n {
        next[j] += r * coeffs[j] * (w[j + 1] - 2.0 * w[j] + w[j - 1]);
    }
    next[n] += r * coeffs[n] * 2.0 * (w[n - 1] - w[n]);
    field.w = next;
    field.t += dt;
    Ok(dt)
}

/// Current front position: s = integral over [0, y0] of dy / (rho2 - rho).
pub fn reconstruct_front(field: &LagrangeField) -> Result<f64, EnthalpyError> {
    let m = &field.model;
    let mut integrand = Vec::with_capacity(field.w.len());
    for &w in &field.w {
        let rho = m.invert_temperature_low(w)?;
        integrand.push(1.0 / (m.rho2 - rho));
    }
    Ok(trapezoid_uniform(&integrand, field.dy()))
}

/// Physical profile (x, rho) recovered from the field, ordered left to
/// right; the last point is the front.
pub fn reconstruct_profile(field: &LagrangeField) -> Result<(Vec<f64>, Vec<f64>), EnthalpyError> {
    let m = &field.model;
    let n = field.w.len() - 1;
    let dy = field.dy();
    let mut rho = Vec::with_capacity(n + 1);
    for &w in &field.w {
        rho.push(m.invert_temperature_low(w)?);
    }
    // x(y) by cumulative trapezoid of dx/dy = -1/(rho2 - rho), from the front
    let s = reconstruct_front(field)?;
    let mut x = vec![s; n + 1];
    for j in 1..=n {
        let seg = 0.5 * dy * (1.0 / (m.rho2 - rho[j - 1]) + 1.0 / (m.rho2 - rho[j]));
        x[j] = x[j - 1] - seg;
    }
    x.reverse();
    rho.reverse();
    Ok((x, rho))
}
