//! Moving-mesh front tracking on rescaled phase grids.
//!
//! The domain [0, 1] is split by fronts `s_1 < ... < s_n` into n + 1 phases of
//! alternating kind. Each phase carries its density on a uniform grid in the
//! rescaled coordinate `xh = (x - s_L) / (s_R - s_L)`, so the grid deforms
//! with the fronts and the field equation picks up an advection term:
//!
//! ```text
//! v_t = (1/L^2) * (diffusion stencil in xh) + ((sdot_R - sdot_L) xh + sdot_L) / L * v_xh
//! ```
//!
//! Fronts move by the Rankine-Hugoniot condition with the densities pinned to
//! the plateau values on both sides:
//!
//! ```text
//! sdot = -( D(rho+) sigma-slope(+) - D(rho-) sigma-slope(-) ) / (rho+ - rho-)
//! ```
//!
//! State invariants maintained by [`step`]:
//! - fronts strictly increasing, strictly inside (0, 1);
//! - phase kinds alternate; front-end nodes stay exactly at the plateau;
//! - low-phase values in [0, rho_flat), high-phase values in (rho_sharp, 1].
//!
//! A violated invariant rejects the step and retries at half the step size;
//! persistent rejection surfaces as an error (the event layer reports it as
//! blow-up).

use crate::model::{AdhesionModel, PhaseKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Interior diffusion discretisation.
///
/// `RandomWalk` is the five-point conservative stencil obtained from the
/// biased random walk underlying the model, with hop rates
/// `T(+/-)_i = (1 - v_(i+/-1)) (1 - alpha v_(i-/+1)) / h^2`; it is second-order
/// consistent with `(D(v) v_x)_x`. `CenteredFlux` is the plain centered
/// stencil on the temperature, `(K(v_(j+1)) - 2 K(v_j) + K(v_(j-1))) / h^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionStencil {
    #[default]
    RandomWalk,
    CenteredFlux,
}

#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    /// Fraction of the stability limit actually taken.
    pub cfl_safety: f64,
    /// Step size below which repeated rejection is treated as failure.
    pub dt_min: f64,
    /// Hard cap on the step size.
    pub dt_max: f64,
    /// Consecutive rejections tolerated within one [`step`] call.
    pub max_rejections: usize,
    pub stencil: DiffusionStencil,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            cfl_safety: 0.8,
            dt_min: 1e-12,
            dt_max: 1e-2,
            max_rejections: 40,
            stencil: DiffusionStencil::RandomWalk,
        }
    }
}

#[derive(Debug, Error)]
pub enum FrontTrackError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(
        "step rejected {rejections} times at t = {t} (last dt = {dt:.3e}); \
         state leaves the admissible bands faster than the step can shrink"
    )]
    StepFailed { t: f64, dt: f64, rejections: usize },
}

/// One phase: its band and node values on the uniform rescaled grid
/// `xh_j = j / n_cells`, including both end nodes.
#[derive(Clone, Debug)]
pub struct PhaseGrid {
    pub kind: PhaseKind,
    pub v: Vec<f64>,
}

impl PhaseGrid {
    pub fn n_cells(&self) -> usize {
        self.v.len() - 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_cells() as f64
    }

    /// Constant-profile phase at the plateau value of its kind.
    pub fn plateau(kind: PhaseKind, model: &AdhesionModel, n_cells: usize) -> Self {
        PhaseGrid {
            kind,
            v: vec![model.plateau(kind); n_cells + 1],
        }
    }
}

/// Full front-tracking state. `phases.len() == fronts.len() + 1`; with no
/// fronts the single phase spans [0, 1] with walls on both sides (the plain
/// Neumann problem).
#[derive(Clone, Debug)]
pub struct SimState {
    pub model: AdhesionModel,
    pub t: f64,
    pub fronts: Vec<f64>,
    pub phases: Vec<PhaseGrid>,
}

/// Which end of a grid a one-sided quantity is taken at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Left,
    Right,
}

/// Second-order one-sided first derivative at a grid end. Grouped into node
/// differences so constant data gives exactly zero.
pub fn one_sided_gradient(v: &[f64], dx: f64, end: End) -> f64 {
    let n = v.len();
    assert!(n >= 3, "one-sided gradient needs at least 3 nodes");
    match end {
        End::Left => (3.0 * (v[1] - v[0]) - (v[2] - v[1])) / (2.0 * dx),
        End::Right => (3.0 * (v[n - 1] - v[n - 2]) - (v[n - 2] - v[n - 3])) / (2.0 * dx),
    }
}

/// Second-order one-sided second derivative at a grid end; exactly zero on
/// constant data for the same reason.
fn one_sided_second(v: &[f64], dx: f64, end: End) -> f64 {
    let n = v.len();
    assert!(n >= 4, "one-sided second derivative needs at least 4 nodes");
    match end {
        End::Left => (2.0 * (v[0] - v[1]) - 3.0 * (v[1] - v[2]) + (v[2] - v[3])) / (dx * dx),
        End::Right => {
            (2.0 * (v[n - 1] - v[n - 2]) - 3.0 * (v[n - 2] - v[n - 3]) + (v[n - 3] - v[n - 4]))
                / (dx * dx)
        }
    }
}

impl SimState {
    /// Physical span (x_left, x_right) of phase `i`.
    pub fn phase_span(&self, i: usize) -> (f64, f64) {
        let left = if i == 0 { 0.0 } else { self.fronts[i - 1] };
        let right = if i == self.fronts.len() {
            1.0
        } else {
            self.fronts[i]
        };
        (left, right)
    }

    pub fn phase_length(&self, i: usize) -> f64 {
        let (l, r) = self.phase_span(i);
        r - l
    }

    /// Trapezoid mass summed over phases; conserved by [`step`] up to
    /// round-off plus the O(dx^2) quadrature error of the moving ends.
    pub fn total_mass(&self) -> f64 {
        self.phases
            .iter()
            .enumerate()
            .map(|(i, p)| self.phase_length(i) * crate::numerics::trapezoid_uniform(&p.v, p.dx()))
            .sum()
    }

    /// Density at physical `x` by linear interpolation within the phase
    /// containing it. At a front the right phase wins, so the returned
    /// profile is right-continuous across jumps.
    pub fn evaluate(&self, x: f64) -> f64 {
        let i = self
            .fronts
            .iter()
            .position(|&s| x < s)
            .unwrap_or(self.fronts.len());
        let p = &self.phases[i];
        let (left, right) = self.phase_span(i);
        let u = ((x - left) / (right - left)).clamp(0.0, 1.0) * p.n_cells() as f64;
        let k = (u.floor() as usize).min(p.n_cells() - 1);
        p.v[k] + (p.v[k + 1] - p.v[k]) * (u - k as f64)
    }

    /// The profile resampled onto `n_cells + 1` uniform nodes spanning the
    /// whole domain.
    pub fn sample_uniform(&self, n_cells: usize) -> Vec<f64> {
        (0..=n_cells)
            .map(|j| self.evaluate(j as f64 / n_cells as f64))
            .collect()
    }

    /// Smallest physical cell width over all phases; the event thresholds
    /// scale with this.
    pub fn min_cell_width(&self) -> f64 {
        self.phases
            .iter()
            .enumerate()
            .map(|(i, p)| self.phase_length(i) * p.dx())
            .fold(f64::INFINITY, f64::min)
    }

    /// Structural sanity check; [`step`] assumes these hold on entry.
    pub fn validate(&self) -> Result<(), FrontTrackError> {
        let err = |m: String| Err(FrontTrackError::InvalidState(m));
        if self.phases.len() != self.fronts.len() + 1 {
            return err(format!(
                "{} phases with {} fronts",
                self.phases.len(),
                self.fronts.len()
            ));
        }
        let mut prev = 0.0;
        for (i, &s) in self.fronts.iter().enumerate() {
            if !(s > prev && s < 1.0) {
                return err(format!("front {i} at {s} breaks ordering"));
            }
            prev = s;
        }
        for (i, p) in self.phases.iter().enumerate() {
            if p.v.len() < 8 {
                return err(format!(
                    "phase {i} has {} nodes, need at least 8",
                    p.v.len()
                ));
            }
            if i > 0 && p.kind == self.phases[i - 1].kind {
                return err(format!("phases {} and {i} have equal kind", i - 1));
            }
            if let Some(&bad) = p.v.iter().find(|v| !band_ok(self.model, p.kind, **v)) {
                return err(format!(
                    "phase {i} ({:?}) carries {bad} outside its band",
                    p.kind
                ));
            }
            let plateau = self.model.plateau(p.kind);
            if i > 0 && p.v[0] != plateau {
                return err(format!(
                    "phase {i} left end {} not pinned to {plateau}",
                    p.v[0]
                ));
            }
            if i < self.fronts.len() && *p.v.last().unwrap() != plateau {
                return err(format!(
                    "phase {i} right end {} not pinned to {plateau}",
                    p.v.last().unwrap()
                ));
            }
        }
        Ok(())
    }
}

fn band_ok(model: AdhesionModel, kind: PhaseKind, v: f64) -> bool {
    if !v.is_finite() {
        return false;
    }
    match kind {
        PhaseKind::Low => (0.0..model.rho_flat).contains(&v),
        PhaseKind::High => v > model.rho_sharp && v <= 1.0,
    }
}

/// Rankine-Hugoniot velocities of all fronts, from one-sided temperature
/// slopes with the densities pinned to the plateaus.
pub fn interface_velocities(state: &SimState) -> Vec<f64> {
    let m = &state.model;
    (0..state.fronts.len())
        .map(|i| {
            let left = &state.phases[i];
            let right = &state.phases[i + 1];
            let rho_minus = m.plateau(left.kind);
            let rho_plus = m.plateau(right.kind);
            let g_minus =
                one_sided_gradient(&left.v, left.dx(), End::Right) / state.phase_length(i);
            let g_plus =
                one_sided_gradient(&right.v, right.dx(), End::Left) / state.phase_length(i + 1);
            -(m.diffusivity(rho_plus) * g_plus - m.diffusivity(rho_minus) * g_minus)
                / (rho_plus - rho_minus)
        })
        .collect()
}

/// Largest stable explicit step for the current state and front velocities:
/// the diffusive limit `(dx L)^2 / (2 max stiffness)` and the advective
/// limit `dx L / max |sdot|` over each phase, scaled by the safety factor
/// and clamped to `[dt_min, dt_max]`.
///
/// The stiffness is stencil dependent. The flux form linearizes to the
/// diffusivity D. The random-walk form's stiffest mode is the checkerboard,
/// whose linearized rate around occupancy rho is `1 - alpha rho^2`; that
/// exceeds D by `4 alpha rho (1 - rho)`, so bounding by D alone lets the
/// staggered mode grow into a saturated sawtooth.
pub fn stable_dt(state: &SimState, velocities: &[f64], ctrl: &StepControl) -> f64 {
    let m = &state.model;
    let stiffness = |v: f64| -> f64 {
        let v = v.clamp(0.0, 1.0);
        match ctrl.stencil {
            DiffusionStencil::RandomWalk => 1.0 - m.alpha * v * v,
            DiffusionStencil::CenteredFlux => m.diffusivity(v).abs(),
        }
    };
    let mut dt = f64::INFINITY;
    for (i, p) in state.phases.iter().enumerate() {
        let h = p.dx() * state.phase_length(i);
        let d_max =
            p.v.iter()
                .map(|&v| stiffness(v))
                .fold(0.0, f64::max)
                .max(1e-12);
        dt = dt.min(h * h / (2.0 * d_max));
        let sl = if i == 0 { 0.0 } else { velocities[i - 1] };
        let sr = if i == state.fronts.len() {
            0.0
        } else {
            velocities[i]
        };
        let a_max = sl.abs().max(sr.abs());
        if a_max > 0.0 {
            dt = dt.min(h / a_max);
        }
    }
    (ctrl.cfl_safety * dt).clamp(ctrl.dt_min, ctrl.dt_max)
}

/// Hop rate T+ or T- of the random-walk stencil, without the 1/h^2 factor.
#[inline]
fn hop(alpha: f64, toward: f64, away: f64) -> f64 {
    (1.0 - toward) * (1.0 - alpha * away)
}

/// Time derivative of one phase's node values, written into `out`.
///
/// `sdot_l`/`sdot_r` are the velocities of the phase's ends (zero at a wall).
/// Ends at a wall evolve with reflected ghosts; ends at a front are pinned
/// and get `out = 0`. `ghost` linearly extrapolates through a pinned end for
/// the one off-end node the five-point stencil reaches past it.
#[allow(clippy::too_many_arguments)]
fn phase_rhs(
    p: &PhaseGrid,
    model: &AdhesionModel,
    length: f64,
    sdot_l: f64,
    sdot_r: f64,
    left_is_wall: bool,
    right_is_wall: bool,
    stencil: DiffusionStencil,
    out: &mut [f64],
) {
    let v = &p.v;
    let n = v.len() - 1;
    let dx = p.dx();
    let alpha = model.alpha;
    let inv_h2 = 1.0 / (dx * dx * length * length);

    let at = |j: isize| -> f64 {
        if j >= 0 && j as usize <= n {
            return v[j as usize];
        }
        if j < 0 {
            if left_is_wall {
                v[(-j) as usize]
            } else {
                // pinned end: extrapolate the profile linearly through it
                2.0 * v[0] - v[(-j) as usize]
            }
        } else if right_is_wall {
            v[2 * n - j as usize]
        } else {
            2.0 * v[n] - v[2 * n - j as usize]
        }
    };

    let lo = if left_is_wall { 0 } else { 1 };
    let hi = if right_is_wall { n } else { n - 1 };
    if !left_is_wall {
        out[0] = 0.0;
    }
    if !right_is_wall {
        out[n] = 0.0;
    }

    for j in lo..=hi {
        let ji = j as isize;
        let (vm2, vm1, v0, vp1, vp2) = (at(ji - 2), at(ji - 1), v[j], at(ji + 1), at(ji + 2));
        let diffusion = match stencil {
            DiffusionStencil::RandomWalk => {
                (hop(alpha, v0, vm2) * vm1 + hop(alpha, v0, vp2) * vp1
                    - (hop(alpha, vp1, vm1) + hop(alpha, vm1, vp1)) * v0)
                    * inv_h2
            }
            DiffusionStencil::CenteredFlux => {
                (model.temperature(vp1) - 2.0 * model.temperature(v0) + model.temperature(vm1))
                    * inv_h2
            }
        };
        let c = ((sdot_r - sdot_l) * (j as f64 * dx) + sdot_l) / length;
        let advection = if c >= 0.0 {
            c * (vp1 - v0) / dx
        } else {
            c * (v0 - vm1) / dx
        };
        out[j] = diffusion + advection;
    }
}

/// Outcome of one accepted step.
#[derive(Clone, Debug)]
pub struct StepReport {
    pub dt: f64,
    pub rejections: usize,
    /// Front velocities used for this step.
    pub velocities: Vec<f64>,
}

/// Advance the state by one explicit Euler step at the stable step size,
/// halving on rejection. Rejection triggers on any phase value leaving its
/// band, fronts crossing each other or a wall, or non-finite values.
pub fn step(state: &mut SimState, ctrl: &StepControl) -> Result<StepReport, FrontTrackError> {
    if state
        .phases
        .iter()
        .any(|p| p.v.iter().any(|v| !v.is_finite()))
        || state.fronts.iter().any(|s| !s.is_finite())
    {
        return Err(FrontTrackError::StepFailed {
            t: state.t,
            dt: 0.0,
            rejections: 0,
        });
    }
    let velocities = interface_velocities(state);
    let mut dt = stable_dt(state, &velocities, ctrl);

    let n_ph = state.phases.len();
    let mut rhs: Vec<Vec<f64>> = Vec::with_capacity(n_ph);
    for (i, p) in state.phases.iter().enumerate() {
        let mut out = vec![0.0; p.v.len()];
        let sl = if i == 0 { 0.0 } else { velocities[i - 1] };
        let sr = if i == n_ph - 1 { 0.0 } else { velocities[i] };
        phase_rhs(
            p,
            &state.model,
            state.phase_length(i),
            sl,
            sr,
            i == 0,
            i == n_ph - 1,
            ctrl.stencil,
            &mut out,
        );
        rhs.push(out);
    }

    let mut rejections = 0usize;
    loop {
        let mut ok = true;

        let mut fronts = state.fronts.clone();
        for (s, &sd) in fronts.iter_mut().zip(&velocities) {
            *s += dt * sd;
        }
        let mut prev = 0.0;
        for &s in &fronts {
            if !(s > prev && s < 1.0) {
                ok = false;
            }
            prev = s;
        }

        let mut new_phases: Vec<PhaseGrid> = Vec::with_capacity(n_ph);
        if ok {
            'phases: for (i, p) in state.phases.iter().enumerate() {
                let mut v = p.v.clone();
                for (vj, rj) in v.iter_mut().zip(&rhs[i]) {
                    *vj += dt * rj;
                }
                // re-pin front ends exactly
                let plateau = state.model.plateau(p.kind);
                if i > 0 {
                    v[0] = plateau;
                }
                if i < n_ph - 1 {
                    let last = v.len() - 1;
                    v[last] = plateau;
                }
                if v.iter().any(|&x| !band_ok(state.model, p.kind, x)) {
                    ok = false;
                    break 'phases;
                }
                new_phases.push(PhaseGrid { kind: p.kind, v });
            }
        }

        if ok {
            state.fronts = fronts;
            state.phases = new_phases;
            state.t += dt;
            return Ok(StepReport {
                dt,
                rejections,
                velocities,
            });
        }

        rejections += 1;
        if rejections > ctrl.max_rejections || dt <= ctrl.dt_min {
            return Err(FrontTrackError::StepFailed {
                t: state.t,
                dt,
                rejections,
            });
        }
        dt *= 0.5;
    }
}

/// One conservative explicit step of the plain Neumann problem
/// `v_t = (K(v))_xx` on a fixed uniform grid, flux form with half-cell end
/// volumes: the trapezoid mass is conserved exactly. `temperature` is the
/// (possibly flattened) temperature function.
pub fn neumann_step(v: &mut [f64], dx: f64, dt: f64, temperature: impl Fn(f64) -> f64) {
    let n = v.len() - 1;
    debug_assert!(n >= 2);
    let mut flux = vec![0.0; n];
    for (j, f) in flux.iter_mut().enumerate() {
        *f = (temperature(v[j + 1]) - temperature(v[j])) / dx;
    }
    let r = dt / dx;
    v[0] += 2.0 * r * flux[0];
    for j in 1..n {
        v[j] += r * (flux[j] - flux[j - 1]);
    }
    v[n] += -2.0 * r * flux[n - 1];
}

/// First-order compatibility residuals of one front, from the one-sided
/// temperature slopes and curvatures:
///
/// ```text
/// R(side) = sigma_x(side) * (sigma_x(+) - sigma_x(-))
///           - (rho+ - rho-) * D(rho(side)) * sigma_xx(side)
/// ```
///
/// Both vanish on data that can launch a classical front-tracking solution;
/// the magnitude measures incompatibility of initial data at t = 0.
pub fn compatibility_residual(
    sigma_x_minus: f64,
    sigma_x_plus: f64,
    sigma_xx_minus: f64,
    sigma_xx_plus: f64,
    d_minus: f64,
    d_plus: f64,
    jump: f64,
) -> (f64, f64) {
    let dslope = sigma_x_plus - sigma_x_minus;
    (
        sigma_x_minus * dslope - jump * d_minus * sigma_xx_minus,
        sigma_x_plus * dslope - jump * d_plus * sigma_xx_plus,
    )
}

/// Compatibility residuals of every front in the state (left side, right
/// side), with derivatives taken one-sidedly on the physical scale.
pub fn check_compatibility(state: &SimState) -> Vec<(f64, f64)> {
    let m = &state.model;
    (0..state.fronts.len())
        .map(|i| {
            let (lp, rp) = (&state.phases[i], &state.phases[i + 1]);
            let (ll, lr) = (state.phase_length(i), state.phase_length(i + 1));
            let sig_l: Vec<f64> = lp.v.iter().map(|&v| m.temperature(v)).collect();
            let sig_r: Vec<f64> = rp.v.iter().map(|&v| m.temperature(v)).collect();
            let sx_minus = one_sided_gradient(&sig_l, lp.dx(), End::Right) / ll;
            let sx_plus = one_sided_gradient(&sig_r, rp.dx(), End::Left) / lr;
            let sxx_minus = one_sided_second(&sig_l, lp.dx(), End::Right) / (ll * ll);
            let sxx_plus = one_sided_second(&sig_r, rp.dx(), End::Left) / (lr * lr);
            compatibility_residual(
                sx_minus,
                sx_plus,
                sxx_minus,
                sxx_plus,
                m.diffusivity(m.plateau(lp.kind)),
                m.diffusivity(m.plateau(rp.kind)),
                m.plateau(rp.kind) - m.plateau(lp.kind),
            )
        })
        .collect()
}
