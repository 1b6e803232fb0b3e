//! Steady states, attractor classification and convergence diagnostics.
//!
//! The conserved total mass M decides the long-time behaviour of two-phase
//! data. Stationary solutions are piecewise plateau profiles; for a single
//! front between a low-left and high-right phase the front must sit at
//!
//! ```text
//! s* = (rho2 - M) / (rho2 - rho1)
//! ```
//!
//! which lies in (0, 1) exactly when rho1 < M < rho2. Outside that window
//! only the uniform profile remains and fronts are driven into a wall.
//! Between rho_flat and rho_sharp the uniform profile is inadmissible (it
//! would sit in the unstable band), so the single-front state is the global
//! attractor; in the conditional windows both candidates are admissible and
//! a data condition decides.

use crate::fronttrack::{one_sided_gradient, End, SimState};
use crate::model::{AdhesionModel, PhaseKind};
use crate::numerics::{linear_fit, trapezoid_uniform};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("mass {mass} outside (0, 1)")]
    MassOutOfRange { mass: f64 },
    #[error("{0}")]
    WrongTopology(String),
}

/// Front position of the low-left/high-right single-front steady state, if
/// one exists for this mass.
pub fn two_phase_steady_front(model: &AdhesionModel, mass: f64) -> Option<f64> {
    if mass > model.rho1 && mass < model.rho2 {
        Some((model.rho2 - mass) / (model.rho2 - model.rho1))
    } else {
        None
    }
}

/// Whether the uniform profile at the given mass is admissible, i.e. avoids
/// the unstable band.
pub fn uniform_steady_admissible(model: &AdhesionModel, mass: f64) -> bool {
    mass <= model.rho_flat || mass >= model.rho_sharp
}

/// A-priori bounds on the front position of any admissible low-left /
/// high-right two-phase state with total mass `mass`: band limits on the
/// phase densities pin the front into
///
/// ```text
/// (rho_sharp - M) / rho_sharp  <=  s  <=  (1 - M) / (1 - rho_flat)
/// ```
///
/// The bounds are returned raw; parts escaping [0, 1] mean the corresponding
/// wall is reachable.
pub fn front_bounds(model: &AdhesionModel, mass: f64) -> Result<(f64, f64), AnalysisError> {
    if !(0.0 < mass && mass < 1.0) {
        return Err(AnalysisError::MassOutOfRange { mass });
    }
    Ok((
        (model.rho_sharp - mass) / model.rho_sharp,
        (1.0 - mass) / (1.0 - model.rho_flat),
    ))
}

/// Mass window of the long-time attractor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum MassRegime {
    /// rho_flat < M < rho_sharp: the uniform profile is inadmissible and the
    /// single-front state attracts every admissible datum.
    GlobalSingleFront { s_star: f64 },
    /// rho1 < M <= rho_flat: the single-front state attracts data whose low
    /// phase stays below M; otherwise both it and the uniform profile are
    /// candidates.
    ConditionalLow { s_star: f64 },
    /// rho_sharp <= M < rho2, mirrored condition on the high phase.
    ConditionalHigh { s_star: f64 },
    /// M < rho1 or M > rho2: no front can survive; fronts reach a wall in
    /// finite time and the profile relaxes to the uniform state.
    UniformOnly,
    /// M equals a plateau value exactly: the steady front sits on a wall and
    /// is approached without ever being reached.
    Degenerate,
}

pub fn mass_regime(model: &AdhesionModel, mass: f64) -> Result<MassRegime, AnalysisError> {
    if !(0.0 < mass && mass < 1.0) {
        return Err(AnalysisError::MassOutOfRange { mass });
    }
    let s_star = (model.rho2 - mass) / (model.rho2 - model.rho1);
    Ok(if mass == model.rho1 || mass == model.rho2 {
        MassRegime::Degenerate
    } else if mass < model.rho1 || mass > model.rho2 {
        MassRegime::UniformOnly
    } else if mass <= model.rho_flat {
        MassRegime::ConditionalLow { s_star }
    } else if mass >= model.rho_sharp {
        MassRegime::ConditionalHigh { s_star }
    } else {
        MassRegime::GlobalSingleFront { s_star }
    })
}

/// Long-time prediction for a single-front two-phase state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "prediction", rename_all = "snake_case")]
pub enum Prediction {
    /// The front converges to `s_star` (position in the state's own
    /// orientation).
    SingleFront { s_star: f64 },
    /// The front reaches a wall in finite time; afterwards the profile
    /// relaxes to the uniform value `mass`.
    Uniform { mass: f64 },
    /// The regime is conditional and the data condition fails: both the
    /// single-front state and the uniform profile are locally attracting.
    Bistable { s_star: f64 },
    /// Marginal mass: the front approaches a wall asymptotically.
    Degenerate,
}

/// Classify a single-front state by its conserved mass and its data.
///
/// For the conditional windows the deciding condition is that the diffusing
/// side's values do not overshoot the mass: low-phase values <= M when
/// rho1 < M <= rho_flat (mirrored for the high window).
pub fn classify(state: &SimState) -> Result<Prediction, AnalysisError> {
    if state.fronts.len() != 1 {
        return Err(AnalysisError::WrongTopology(format!(
            "classification needs a single front, got {}",
            state.fronts.len()
        )));
    }
    let m = &state.model;
    let mass = state.total_mass();
    let low_left = state.phases[0].kind == PhaseKind::Low;
    // orientation-adjusted steady front: mirror x -> 1 - x for high-left
    let s_of = |s_star: f64| if low_left { s_star } else { 1.0 - s_star };

    let low_ok = state
        .phases
        .iter()
        .filter(|p| p.kind == PhaseKind::Low)
        .all(|p| p.v.iter().all(|&v| v <= mass));
    let high_ok = state
        .phases
        .iter()
        .filter(|p| p.kind == PhaseKind::High)
        .all(|p| p.v.iter().all(|&v| v >= mass));

    Ok(match mass_regime(m, mass)? {
        MassRegime::GlobalSingleFront { s_star } => Prediction::SingleFront {
            s_star: s_of(s_star),
        },
        MassRegime::ConditionalLow { s_star } => {
            if low_ok {
                Prediction::SingleFront {
                    s_star: s_of(s_star),
                }
            } else {
                Prediction::Bistable {
                    s_star: s_of(s_star),
                }
            }
        }
        MassRegime::ConditionalHigh { s_star } => {
            if high_ok {
                Prediction::SingleFront {
                    s_star: s_of(s_star),
                }
            } else {
                Prediction::Bistable {
                    s_star: s_of(s_star),
                }
            }
        }
        MassRegime::UniformOnly => Prediction::Uniform { mass },
        MassRegime::Degenerate => Prediction::Degenerate,
    })
}

/// Slowest linearised relaxation rate of a low phase of length `len` pinned
/// at one end: the quarter-wave eigenvalue of the frozen-coefficient
/// diffusion.
pub fn low_phase_rate(model: &AdhesionModel, len: f64) -> f64 {
    let k = std::f64::consts::FRAC_PI_2 / len;
    model.diffusivity(model.rho1) * k * k
}

/// Mirror of [`low_phase_rate`] for a high phase.
pub fn high_phase_rate(model: &AdhesionModel, len: f64) -> f64 {
    let k = std::f64::consts::FRAC_PI_2 / len;
    model.diffusivity(model.rho2) * k * k
}

/// Slowest relaxation rate of the uniform state on the full Neumann
/// interval.
pub fn neumann_rate(model: &AdhesionModel, mass: f64) -> f64 {
    model.diffusivity(mass) * std::f64::consts::PI.powi(2)
}

/// Lower bound on the low-phase relaxation rate over the whole evolution,
/// from the widest front excursion allowed by [`front_bounds`].
pub fn decay_floor(model: &AdhesionModel, mass: f64) -> Result<f64, AnalysisError> {
    let (_, s_max) = front_bounds(model, mass)?;
    Ok(low_phase_rate(model, s_max.min(1.0)))
}

/// Result of a log-linear fit to the tail of a decaying distance series.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DecayFit {
    pub rate: f64,
    pub amplitude: f64,
    pub r2: f64,
    /// Index range of the fitted window.
    pub window: (usize, usize),
}

/// Fit `dist ~ amplitude * exp(-rate t)` on the tail of the series: the
/// overlap of the last half of the samples with the maximal strictly
/// decreasing suffix. Returns None when fewer than 20 samples remain (the
/// series has not entered clean exponential decay) or any retained distance
/// is non-positive.
pub fn fit_decay_rate(times: &[f64], dist: &[f64]) -> Option<DecayFit> {
    assert_eq!(times.len(), dist.len());
    let n = dist.len();
    if n < 20 {
        return None;
    }
    let mut start = n - 1;
    while start > 0 && dist[start - 1] > dist[start] {
        start -= 1;
    }
    let start = start.max(n / 2);
    if n - start < 20 {
        return None;
    }
    if dist[start..].iter().any(|&d| d <= 0.0) {
        return None;
    }
    let logs: Vec<f64> = dist[start..].iter().map(|d| d.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&times[start..], &logs)?;
    Some(DecayFit {
        rate: -slope,
        amplitude: intercept.exp(),
        r2,
        window: (start, n - 1),
    })
}

/// Largest physical temperature slope over all phases: centered differences
/// in the interior plus one-sided values at the phase ends (which include
/// the slopes feeding the fronts).
pub fn sigma_sup_gradient(state: &SimState) -> f64 {
    let m = &state.model;
    let mut sup = 0.0f64;
    for (i, p) in state.phases.iter().enumerate() {
        let len = state.phase_length(i);
        let dx = p.dx();
        let sig: Vec<f64> = p.v.iter().map(|&v| m.temperature(v)).collect();
        for j in 1..sig.len() - 1 {
            sup = sup.max(((sig[j + 1] - sig[j - 1]) / (2.0 * dx)).abs() / len);
        }
        sup = sup.max(one_sided_gradient(&sig, dx, End::Left).abs() / len);
        sup = sup.max(one_sided_gradient(&sig, dx, End::Right).abs() / len);
    }
    sup
}

/// Slope-sign condition at the fronts, the structural hypothesis under which
/// the temperature gradient bound propagates: at each front the jump-weighted
/// mean of the one-sided slopes must not pull against the jump,
/// `(rho+ - rho-) (sigma_x(s+) + sigma_x(s-)) >= 0`, and the phase data must
/// not overshoot its plateau toward the unstable band.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignCondition {
    pub per_front: Vec<bool>,
    pub data_within_plateaus: bool,
    pub holds: bool,
}

pub fn gradient_sign_condition(state: &SimState) -> SignCondition {
    let m = &state.model;
    let per_front: Vec<bool> = (0..state.fronts.len())
        .map(|i| {
            let (lp, rp) = (&state.phases[i], &state.phases[i + 1]);
            let sig_l: Vec<f64> = lp.v.iter().map(|&v| m.temperature(v)).collect();
            let sig_r: Vec<f64> = rp.v.iter().map(|&v| m.temperature(v)).collect();
            let gl = one_sided_gradient(&sig_l, lp.dx(), End::Right) / state.phase_length(i);
            let gr = one_sided_gradient(&sig_r, rp.dx(), End::Left) / state.phase_length(i + 1);
            let jump = m.plateau(rp.kind) - m.plateau(lp.kind);
            jump * (gl + gr) >= 0.0
        })
        .collect();
    let data_within_plateaus = state.phases.iter().all(|p| match p.kind {
        PhaseKind::Low => p.v.iter().all(|&v| v <= m.rho1),
        PhaseKind::High => p.v.iter().all(|&v| v >= m.rho2),
    });
    SignCondition {
        holds: per_front.iter().all(|&b| b) && data_within_plateaus,
        per_front,
        data_within_plateaus,
    }
}

/// L2 deviation of phase `i` from a constant target, on the physical scale.
pub fn phase_l2_deviation(state: &SimState, i: usize, target: f64) -> f64 {
    let p = &state.phases[i];
    let sq: Vec<f64> = p.v.iter().map(|&v| (v - target) * (v - target)).collect();
    (state.phase_length(i) * trapezoid_uniform(&sq, p.dx())).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fronttrack::PhaseGrid;

    fn model() -> AdhesionModel {
        AdhesionModel::new(0.85).unwrap()
    }

    #[test]
    fn steady_front_matches_reference_values() {
        let m = model();
        let s = two_phase_steady_front(&m, 0.6).unwrap();
        assert!((s - 0.480584219105481).abs() < 1e-12, "got {s}");
        let s = two_phase_steady_front(&m, 0.3184).unwrap();
        assert!((s - 0.860768752345503).abs() < 1e-12, "got {s}");
        assert!(two_phase_steady_front(&m, 0.2).is_none());
        assert!(two_phase_steady_front(&m, 0.98).is_none());
    }

    #[test]
    fn front_bounds_match_reference_values() {
        let m = model();
        let (lo, hi) = front_bounds(&m, 0.6).unwrap();
        assert!((lo - 0.329857113691).abs() < 1e-10, "got {lo}");
        assert!((hi - 0.711746161375).abs() < 1e-10, "got {hi}");
        assert!(front_bounds(&m, 1.2).is_err());
    }

    #[test]
    fn mass_regimes_partition_the_interval() {
        let m = model();
        assert!(matches!(
            mass_regime(&m, 0.6).unwrap(),
            MassRegime::GlobalSingleFront { .. }
        ));
        assert!(matches!(
            mass_regime(&m, 0.30).unwrap(),
            MassRegime::ConditionalLow { .. }
        ));
        assert!(matches!(
            mass_regime(&m, 0.93).unwrap(),
            MassRegime::ConditionalHigh { .. }
        ));
        assert!(matches!(
            mass_regime(&m, 0.1).unwrap(),
            MassRegime::UniformOnly
        ));
        assert!(matches!(
            mass_regime(&m, 0.99).unwrap(),
            MassRegime::UniformOnly
        ));
        assert!(matches!(
            mass_regime(&m, m.rho1).unwrap(),
            MassRegime::Degenerate
        ));
    }

    fn one_front_state(m: &AdhesionModel, low: Vec<f64>, s: f64) -> SimState {
        let n_hi = 32;
        SimState {
            model: *m,
            t: 0.0,
            fronts: vec![s],
            phases: vec![
                PhaseGrid {
                    kind: PhaseKind::Low,
                    v: low,
                },
                PhaseGrid::plateau(PhaseKind::High, m, n_hi),
            ],
        }
    }

    #[test]
    fn classify_covers_the_main_cases() {
        let m = model();
        // plateau data at mass in the global window
        let state = one_front_state(&m, vec![m.rho1; 33], 0.45);
        let mass = state.total_mass();
        assert!(mass > m.rho_flat && mass < m.rho_sharp);
        match classify(&state).unwrap() {
            Prediction::SingleFront { s_star } => {
                assert!((s_star - (m.rho2 - mass) / m.jump()).abs() < 1e-12)
            }
            other => panic!("expected single front, got {other:?}"),
        }

        // conditional low window with compliant data
        let state = one_front_state(&m, vec![0.18; 33], 0.88);
        let mass = state.total_mass();
        assert!(mass > m.rho1 && mass <= m.rho_flat, "mass = {mass}");
        assert!(matches!(
            classify(&state).unwrap(),
            Prediction::SingleFront { .. }
        ));

        // same mass window, data overshooting the mass: bistable
        let mut low = vec![0.15; 33];
        for (j, l) in low.iter_mut().enumerate() {
            if (8..16).contains(&j) {
                *l = 0.40;
            }
        }
        low[32] = m.rho1;
        let state = one_front_state(&m, low, 0.88);
        let mass = state.total_mass();
        assert!(mass > m.rho1 && mass <= m.rho_flat, "mass = {mass}");
        assert!(matches!(
            classify(&state).unwrap(),
            Prediction::Bistable { .. }
        ));

        // tiny mass: uniform attractor
        let state = one_front_state(&m, vec![0.05; 33], 0.97);
        let mass = state.total_mass();
        assert!(mass < m.rho1);
        assert!(matches!(
            classify(&state).unwrap(),
            Prediction::Uniform { .. }
        ));
    }

    #[test]
    fn classify_mirrors_orientation() {
        let m = model();
        let state = SimState {
            model: m,
            t: 0.0,
            fronts: vec![0.55],
            phases: vec![
                PhaseGrid::plateau(PhaseKind::High, &m, 32),
                PhaseGrid::plateau(PhaseKind::Low, &m, 32),
            ],
        };
        let mass = state.total_mass();
        match classify(&state).unwrap() {
            Prediction::SingleFront { s_star } => {
                let want = 1.0 - (m.rho2 - mass) / m.jump();
                assert!((s_star - want).abs() < 1e-12);
            }
            other => panic!("expected single front, got {other:?}"),
        }
    }

    #[test]
    fn linearised_rates_match_reference_values() {
        let m = model();
        let s = 0.480584219105481;
        assert!((low_phase_rate(&m, s) - 4.12634244261).abs() < 1e-9);
        assert!((high_phase_rate(&m, 1.0 - s) - 0.732426779042).abs() < 1e-9);
        assert!((neumann_rate(&m, 0.2) - 4.16497305726).abs() < 1e-9);
        let floor = decay_floor(&m, 0.6).unwrap();
        assert!(floor < low_phase_rate(&m, s));
    }

    #[test]
    fn decay_fit_recovers_synthetic_exponential() {
        let times: Vec<f64> = (0..200).map(|k| 0.01 * k as f64).collect();
        let dist: Vec<f64> = times.iter().map(|t| 3e-2 * (-4.0 * t).exp()).collect();
        let fit = fit_decay_rate(&times, &dist).unwrap();
        assert!((fit.rate - 4.0).abs() < 1e-9, "rate {}", fit.rate);
        assert!(fit.r2 > 0.999999);
        assert!(fit.window.0 >= 100);
        // too-short series is rejected
        assert!(fit_decay_rate(&times[..15], &dist[..15]).is_none());
    }

    #[test]
    fn gradient_monitors_on_steady_and_sloped_states() {
        let m = model();
        let steady = SimState {
            model: m,
            t: 0.0,
            fronts: vec![0.5],
            phases: vec![
                PhaseGrid::plateau(PhaseKind::Low, &m, 32),
                PhaseGrid::plateau(PhaseKind::High, &m, 32),
            ],
        };
        assert_eq!(sigma_sup_gradient(&steady), 0.0);
        let cond = gradient_sign_condition(&steady);
        assert!(cond.holds);

        // low phase sloping down into the front: slope sum negative, jump
        // positive, condition fails
        let n = 32;
        let mut low = vec![0.0; n + 1];
        for (j, l) in low.iter_mut().enumerate() {
            let xh = j as f64 / n as f64;
            *l = m.rho1 + 0.05 * (std::f64::consts::FRAC_PI_2 * xh).cos();
        }
        low[n] = m.rho1;
        let sloped = SimState {
            model: m,
            t: 0.0,
            fronts: vec![0.5],
            phases: vec![
                PhaseGrid {
                    kind: PhaseKind::Low,
                    v: low,
                },
                PhaseGrid::plateau(PhaseKind::High, &m, n),
            ],
        };
        assert!(sigma_sup_gradient(&sloped) > 0.0);
        let cond = gradient_sign_condition(&sloped);
        assert!(!cond.per_front[0]);
        assert!(!cond.data_within_plateaus);
        assert!(!cond.holds);
    }

    #[test]
    fn phase_deviation_is_a_scaled_l2_norm() {
        let m = model();
        let state = SimState {
            model: m,
            t: 0.0,
            fronts: vec![0.5],
            phases: vec![
                PhaseGrid::plateau(PhaseKind::Low, &m, 32),
                PhaseGrid::plateau(PhaseKind::High, &m, 32),
            ],
        };
        assert_eq!(phase_l2_deviation(&state, 0, m.rho1), 0.0);
        let dev = phase_l2_deviation(&state, 0, m.rho1 + 0.02);
        assert!((dev - 0.02 * 0.5f64.sqrt()).abs() < 1e-12);
    }
}
