//! Event detection and topology surgery for the front-tracking evolution.
//!
//! Geometric events fire when a phase becomes thinner than a threshold:
//! an interior phase collapsing means its two fronts coalesce, an outermost
//! phase collapsing means its front is absorbed by the wall. Both are handled
//! by removing the degenerate phase, bridging the vacated interval with the
//! flanking plateau value and resampling the merged phase onto a fresh
//! uniform grid; the resampling is mass-exact against the bridged profile,
//! so the recorded mass defect is purely the sliver replacement.
//!
//! Detection priority within one step: blow-up (a failed step), then
//! coalescence, then boundary absorption, then steady state.

use crate::fronttrack::{
    interface_velocities, step, FrontTrackError, PhaseGrid, SimState, StepControl, StepReport,
};
use crate::numerics::trapezoid_uniform;
use serde::{Deserialize, Serialize};

/// Wall of the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wall {
    Left,
    Right,
}

/// A detected event. Front indices refer to the state at the moment of
/// detection (before the surgery that handles the event).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    /// Fronts `front` and `front + 1` merged; the phase between them was
    /// removed at `position`.
    Coalescence {
        t: f64,
        front: usize,
        position: f64,
        mass_defect: f64,
    },
    /// The outermost front reached a wall; the phase between them was
    /// absorbed.
    BoundaryHit {
        t: f64,
        front: usize,
        wall: Wall,
        mass_defect: f64,
    },
    SteadyState {
        t: f64,
        proxy: f64,
    },
    Blowup {
        t: f64,
        detail: String,
    },
}

impl Event {
    pub fn time(&self) -> f64 {
        match self {
            Event::Coalescence { t, .. }
            | Event::BoundaryHit { t, .. }
            | Event::SteadyState { t, .. }
            | Event::Blowup { t, .. } => *t,
        }
    }
}

/// Detection thresholds. Lengths are physical; the defaults scale with the
/// initial grid so that an event fires while the collapsing phase still
/// spans a couple of cells.
#[derive(Clone, Copy, Debug)]
pub struct EventThresholds {
    /// Outermost phase length at which its front is absorbed by the wall.
    pub eps_boundary: f64,
    /// Interior phase length at which its fronts coalesce.
    pub eps_collide: f64,
    /// Steady-state proxy threshold.
    pub steady_tol: f64,
    /// Time between steady-state checks (also the proxy's finite-difference
    /// interval).
    pub check_interval: f64,
}

impl EventThresholds {
    pub fn from_state(state: &SimState) -> Self {
        let eps = (2.0 * state.min_cell_width()).max(1e-3);
        EventThresholds {
            eps_boundary: eps,
            eps_collide: eps,
            steady_tol: 1e-8,
            check_interval: 0.01,
        }
    }
}

/// Geometric event scan: the thinnest violating interior phase wins, then
/// the walls. Steady state and blow-up are judged by [`run`], which has the
/// history and the step outcome.
pub fn detect(state: &SimState, thresholds: &EventThresholds) -> Option<Event> {
    let n = state.fronts.len();
    if n == 0 {
        return None;
    }
    let mut best: Option<(f64, usize)> = None;
    for p in 1..state.phases.len().saturating_sub(1) {
        let len = state.phase_length(p);
        if len <= thresholds.eps_collide && best.is_none_or(|(l, _)| len < l) {
            best = Some((len, p));
        }
    }
    if let Some((_, p)) = best {
        return Some(Event::Coalescence {
            t: state.t,
            front: p - 1,
            position: 0.5 * (state.fronts[p - 1] + state.fronts[p]),
            mass_defect: f64::NAN, // filled by the surgery
        });
    }
    if state.fronts[0] <= thresholds.eps_boundary {
        return Some(Event::BoundaryHit {
            t: state.t,
            front: 0,
            wall: Wall::Left,
            mass_defect: f64::NAN,
        });
    }
    if 1.0 - state.fronts[n - 1] <= thresholds.eps_boundary {
        return Some(Event::BoundaryHit {
            t: state.t,
            front: n - 1,
            wall: Wall::Right,
            mass_defect: f64::NAN,
        });
    }
    None
}

/// Piecewise-linear profile in physical coordinates, used to splice phases.
struct Polyline {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Polyline {
    fn from_phase(state: &SimState, i: usize) -> Self {
        let (xl, xr) = state.phase_span(i);
        let p = &state.phases[i];
        let n = p.n_cells();
        let x = (0..=n)
            .map(|j| xl + (xr - xl) * j as f64 / n as f64)
            .collect();
        Polyline { x, y: p.v.clone() }
    }

    fn push_segment(&mut self, x: f64, y: f64) {
        self.x.push(x);
        self.y.push(y);
    }

    fn append(&mut self, other: &Polyline) {
        // skip the duplicated junction point
        self.x.extend_from_slice(&other.x[1..]);
        self.y.extend_from_slice(&other.y[1..]);
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.y[0];
        }
        if x >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let k = self.x.partition_point(|&xi| xi <= x).min(n - 1);
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        let (y0, y1) = (self.y[k - 1], self.y[k]);
        if x1 == x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Exact trapezoid mass of the polyline.
    fn mass(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.y.windows(2))
            .map(|(xs, ys)| (xs[1] - xs[0]) * 0.5 * (ys[0] + ys[1]))
            .sum()
    }

    /// Resample onto `n_cells + 1` uniform nodes over [a, b], then shift the
    /// interior nodes by a constant so the trapezoid mass matches the
    /// polyline mass over [a, b] exactly.
    fn resample_conservative(&self, a: f64, b: f64, n_cells: usize) -> Vec<f64> {
        let h = (b - a) / n_cells as f64;
        let mut v: Vec<f64> = (0..=n_cells).map(|j| self.eval(a + h * j as f64)).collect();
        let target = self.mass();
        let got = (b - a) * trapezoid_uniform(&v, 1.0 / n_cells as f64);
        let correction = (target - got) / (h * (n_cells - 1) as f64);
        for vj in v.iter_mut().take(n_cells).skip(1) {
            *vj += correction;
        }
        v
    }
}

/// Merge the two fronts `front` and `front + 1`: the interior phase between
/// them is removed, the vacated interval is bridged with the flanking
/// plateau, and the two flanking phases are resampled onto one grid.
/// Returns the mass defect (mass before minus mass after).
pub fn apply_coalescence(state: &mut SimState, front: usize) -> Result<f64, FrontTrackError> {
    let p = front + 1; // phase being removed
    assert!(
        p >= 1 && p + 1 < state.phases.len(),
        "interior phase required"
    );
    let mass_before = state.total_mass();

    let plateau = state.model.plateau(state.phases[p - 1].kind);
    let (_, sr) = state.phase_span(p);
    // both flanks are pinned to `plateau` at the vacated interval's ends, so
    // bridging with one plateau segment keeps the profile continuous
    let mut spliced = Polyline::from_phase(state, p - 1);
    spliced.push_segment(sr, plateau);
    spliced.append(&Polyline::from_phase(state, p + 1));

    let (a, _) = state.phase_span(p - 1);
    let (_, b) = state.phase_span(p + 1);
    let n_new = state.phases[p - 1].n_cells() + state.phases[p + 1].n_cells();
    let mut v = spliced.resample_conservative(a, b, n_new);

    // re-pin ends that sit on surviving fronts
    let kind = state.phases[p - 1].kind;
    if p - 1 > 0 {
        v[0] = state.model.plateau(kind);
    }
    if p + 1 < state.phases.len() - 1 {
        *v.last_mut().unwrap() = state.model.plateau(kind);
    }

    state.phases.splice(p - 1..=p + 1, [PhaseGrid { kind, v }]);
    state.fronts.drain(front..=front + 1);
    state.validate()?;
    Ok(mass_before - state.total_mass())
}

/// Absorb the outermost front into the adjacent wall: the outermost phase is
/// removed and its neighbour is extended to the wall, bridged with the
/// neighbour's plateau value. Returns the mass defect.
pub fn apply_boundary_hit(state: &mut SimState, wall: Wall) -> Result<f64, FrontTrackError> {
    assert!(!state.fronts.is_empty());
    let mass_before = state.total_mass();
    let last = state.phases.len() - 1;

    let (removed, kept, front) = match wall {
        Wall::Left => (0, 1, 0),
        Wall::Right => (last, last - 1, state.fronts.len() - 1),
    };
    let kind = state.phases[kept].kind;
    let plateau = state.model.plateau(kind);
    let s = state.fronts[front];

    // the kept phase is pinned to `plateau` at the front, so one extra
    // segment to the wall bridges continuously
    let spliced = match wall {
        Wall::Left => {
            let mut p = Polyline {
                x: vec![0.0],
                y: vec![plateau],
            };
            p.push_segment(s, plateau);
            p.append(&Polyline::from_phase(state, kept));
            p
        }
        Wall::Right => {
            let mut p = Polyline::from_phase(state, kept);
            p.push_segment(1.0, plateau);
            p
        }
    };

    let n_new = state.phases[removed].n_cells() + state.phases[kept].n_cells();
    let (a, b) = match wall {
        Wall::Left => (0.0, state.phase_span(kept).1),
        Wall::Right => (state.phase_span(kept).0, 1.0),
    };
    let mut v = spliced.resample_conservative(a, b, n_new);

    // the far end may still sit on a front
    match wall {
        Wall::Left => {
            if state.fronts.len() > 1 {
                *v.last_mut().unwrap() = plateau;
            }
        }
        Wall::Right => {
            if state.fronts.len() > 1 {
                v[0] = plateau;
            }
        }
    }

    match wall {
        Wall::Left => {
            state.phases.splice(0..=1, [PhaseGrid { kind, v }]);
            state.fronts.remove(0);
        }
        Wall::Right => {
            state.phases.splice(kept..=removed, [PhaseGrid { kind, v }]);
            state.fronts.pop();
        }
    }
    state.validate()?;
    Ok(mass_before - state.total_mass())
}

/// Why a [`run`] ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ReachedTEnd,
    SteadyState,
    Blowup,
}

/// What the run loop reports to its observer.
pub enum RunRecord<'a> {
    /// An accepted step, with the state it produced.
    Step {
        state: &'a SimState,
        report: &'a StepReport,
    },
    /// An applied event, with the state after surgery (for steady state and
    /// blow-up, the unmodified state).
    Event {
        state: &'a SimState,
        event: &'a Event,
    },
}

/// Drive the state to `t_end`, detecting and applying events. The observer
/// sees every accepted step and every event in order; the returned list
/// holds the events with the stop reason.
pub fn run(
    state: &mut SimState,
    ctrl: &StepControl,
    thresholds: &EventThresholds,
    t_end: f64,
    mut observe: impl FnMut(RunRecord),
) -> (Vec<Event>, StopReason) {
    let mut events = Vec::new();
    let mut last_check: Option<(f64, Vec<f64>, Vec<Vec<f64>>)> = None;

    loop {
        // geometric events, cascading until the state is clear of thresholds
        while let Some(ev) = detect(state, thresholds) {
            let applied = match ev {
                Event::Coalescence {
                    t, front, position, ..
                } => apply_coalescence(state, front).map(|mass_defect| Event::Coalescence {
                    t,
                    front,
                    position,
                    mass_defect,
                }),
                Event::BoundaryHit { t, front, wall, .. } => {
                    apply_boundary_hit(state, wall).map(|mass_defect| Event::BoundaryHit {
                        t,
                        front,
                        wall,
                        mass_defect,
                    })
                }
                _ => unreachable!("detect only returns geometric events"),
            };
            match applied {
                Ok(ev) => {
                    observe(RunRecord::Event { state, event: &ev });
                    events.push(ev);
                    last_check = None;
                }
                Err(e) => {
                    let ev = Event::Blowup {
                        t: state.t,
                        detail: format!("surgery failed: {e}"),
                    };
                    observe(RunRecord::Event { state, event: &ev });
                    events.push(ev);
                    return (events, StopReason::Blowup);
                }
            }
        }

        // steady-state proxy: profile and front movement per unit time since
        // the last check
        if state.t
            >= last_check
                .as_ref()
                .map_or(0.0, |(t0, _, _)| t0 + thresholds.check_interval)
        {
            if let Some((t0, fronts0, values0)) = &last_check {
                let delta = state.t - t0;
                if *t0 + thresholds.check_interval <= state.t
                    && fronts0.len() == state.fronts.len()
                    && delta > 0.0
                {
                    let mut profile_sq = 0.0;
                    for (i, p) in state.phases.iter().enumerate() {
                        let dv: Vec<f64> =
                            p.v.iter()
                                .zip(&values0[i])
                                .map(|(a, b)| (a - b) * (a - b))
                                .collect();
                        profile_sq += state.phase_length(i) * trapezoid_uniform(&dv, p.dx());
                    }
                    let front_move: f64 = state
                        .fronts
                        .iter()
                        .zip(fronts0)
                        .map(|(a, b)| (a - b).abs())
                        .sum();
                    let proxy = profile_sq.sqrt() / delta + state.model.jump() * front_move / delta;
                    if proxy < thresholds.steady_tol {
                        let ev = Event::SteadyState { t: state.t, proxy };
                        observe(RunRecord::Event { state, event: &ev });
                        events.push(ev);
                        return (events, StopReason::SteadyState);
                    }
                }
            }
            last_check = Some((
                state.t,
                state.fronts.clone(),
                state.phases.iter().map(|p| p.v.clone()).collect(),
            ));
        }

        if state.t >= t_end {
            return (events, StopReason::ReachedTEnd);
        }

        // do not overshoot the horizon
        let mut ctrl_local = *ctrl;
        ctrl_local.dt_max = ctrl.dt_max.min((t_end - state.t).max(ctrl.dt_min));
        match step(state, &ctrl_local) {
            Ok(report) => observe(RunRecord::Step {
                state,
                report: &report,
            }),
            Err(e) => {
                let ev = Event::Blowup {
                    t: state.t,
                    detail: e.to_string(),
                };
                observe(RunRecord::Event { state, event: &ev });
                events.push(ev);
                return (events, StopReason::Blowup);
            }
        }
    }
}

/// Convenience wrapper when no observer is needed.
pub fn run_silent(
    state: &mut SimState,
    ctrl: &StepControl,
    thresholds: &EventThresholds,
    t_end: f64,
) -> (Vec<Event>, StopReason) {
    run(state, ctrl, thresholds, t_end, |_| {})
}

/// Front velocities as reported in diagnostics; re-exported here so callers
/// of [`run`] need only this module.
pub fn current_velocities(state: &SimState) -> Vec<f64> {
    interface_velocities(state)
}
