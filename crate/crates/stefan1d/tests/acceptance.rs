//! End-to-end acceptance checks, one test per contract item. Each test
//! prints a PASS line with its measured numbers; tolerances are fixed here
//! and nowhere else.
//!
//! Reference values are produced by independent routes (double-double
//! polynomial evaluation, an ODE shooting method, closed-form eigenvalues),
//! never by the code paths under test.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stefan1d::analysis::{
    decay_floor, front_bounds, gradient_sign_condition, high_phase_rate, low_phase_rate,
    neumann_rate, phase_l2_deviation, two_phase_steady_front,
};
use stefan1d::driver::{run_scenario, RunResult, Solver};
use stefan1d::events::{run, Event, RunRecord, StopReason, Wall};
use stefan1d::fronttrack::{interface_velocities, step, StepControl};
use stefan1d::model::{diffusivity, unstable_interval, AdhesionModel};
use stefan1d::numerics::linear_fit;
use stefan1d::scenario::{near_steady_scenario, preset, SweepConfig};
use stefan1d::{PhaseGrid, PhaseKind, SimState};

// ----- double-double helpers (polynomial oracle) ----------------------------

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let t = s - a;
    Dd {
        hi: s,
        lo: (a - (s - t)) + (b - t),
    }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    fn add_f64(self, x: f64) -> Dd {
        let s = two_sum(self.hi, x);
        let lo = s.lo + self.lo;
        let n = two_sum(s.hi, lo);
        Dd { hi: n.hi, lo: n.lo }
    }

    fn mul_f64(self, x: f64) -> Dd {
        let p = two_prod(self.hi, x);
        let lo = self.lo.mul_add(x, p.lo);
        let n = two_sum(p.hi, lo);
        Dd { hi: n.hi, lo: n.lo }
    }

    fn sub(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, -other.hi);
        let lo = s.lo + (self.lo - other.lo);
        let n = two_sum(s.hi, lo);
        Dd { hi: n.hi, lo: n.lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q0 = self.hi / d;
        let r = self.sub(two_prod(q0, d));
        let q1 = (r.hi + r.lo) / d;
        let n = two_sum(q0, q1);
        Dd { hi: n.hi, lo: n.lo }
    }

    fn sqrt(self) -> Dd {
        let s0 = self.hi.sqrt();
        let r = self.sub(two_prod(s0, s0));
        let corr = (r.hi + r.lo) / (2.0 * s0);
        let n = two_sum(s0, corr);
        Dd { hi: n.hi, lo: n.lo }
    }
}

/// D(rho) = 3 a rho^2 - 4 a rho + 1 evaluated in double-double precision.
fn diffusivity_dd(alpha: f64, rho: f64) -> f64 {
    let t = two_prod(alpha, rho).mul_f64(3.0);
    let u = t.add_f64(-4.0 * alpha);
    let w = u.mul_f64(rho);
    let d = w.add_f64(1.0);
    d.hi + d.lo
}

/// Roots of D in double-double: (2a -+ sqrt(a(4a-3))) / (3a).
fn interval_dd(alpha: f64) -> (f64, f64) {
    // 2a is exact, so 4a^2 and 3a enter as exact double-doubles
    let delta = two_prod(2.0 * alpha, 2.0 * alpha).sub(two_prod(3.0, alpha));
    let root = delta.sqrt();
    let lo = two_sum(2.0 * alpha, -root.hi).add_f64(-root.lo);
    let hi = two_sum(2.0 * alpha, root.hi).add_f64(root.lo);
    let three_alpha = 3.0 * alpha;
    let a = lo.div_f64(three_alpha);
    let b = hi.div_f64(three_alpha);
    (a.hi + a.lo, b.hi + b.lo)
}

// ----- shooting oracle for the plateau pair ---------------------------------

/// Integrates the steady-profile equation out of the lower equilibrium along
/// its unstable manifold and bisects the temperature level until the orbit
/// connects to the upper one. Uses only local closed forms.
fn shoot_plateaus(alpha: f64) -> (f64, f64) {
    let kk = |r: f64| alpha * r * r * r - 2.0 * alpha * r * r + r;
    let dd = |r: f64| 3.0 * alpha * r * r - 4.0 * alpha * r + 1.0;
    let disc = (alpha * (4.0 * alpha - 3.0)).sqrt();
    let rho_flat = (2.0 * alpha - disc) / (3.0 * alpha);
    let rho_sharp = (2.0 * alpha + disc) / (3.0 * alpha);

    let root_in = |lo: f64, hi: f64, sig: f64| -> f64 {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (kk(mid) - sig) * (kk(a) - sig) <= 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };

    // true when the orbit crosses the upper K = sig root still rising
    let overshoots = |sig: f64| -> bool {
        let r1 = root_in(1e-12, rho_flat, sig);
        let r2 = root_in(rho_sharp, 1.0 - 1e-12, sig);
        let mu = (dd(r1) / (alpha * r1 * (1.0 - r1))).sqrt();
        let h0 = 1e-8;
        let mut r = r1 + h0;
        let mut p = mu * h0;
        let f = |r: f64, p: f64| (sig - kk(r)) / (alpha * r * (r - 1.0)) + p * p / (r - 1.0);
        let dxi = 1e-4 / mu.max(1.0);
        for _ in 0..20_000_000 {
            let (k1r, k1p) = (p, f(r, p));
            let (k2r, k2p) = (
                p + 0.5 * dxi * k1p,
                f(r + 0.5 * dxi * k1r, p + 0.5 * dxi * k1p),
            );
            let (k3r, k3p) = (
                p + 0.5 * dxi * k2p,
                f(r + 0.5 * dxi * k2r, p + 0.5 * dxi * k2p),
            );
            let (k4r, k4p) = (p + dxi * k3p, f(r + dxi * k3r, p + dxi * k3p));
            r += dxi / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
            p += dxi / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            if p <= 0.0 {
                return false;
            }
            if r >= r2 {
                return true;
            }
        }
        true
    };

    let (mut lo, mut hi) = (kk(rho_sharp) + 1e-12, kk(rho_flat) - 1e-12);
    for _ in 0..52 {
        let mid = 0.5 * (lo + hi);
        if overshoots(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sig = 0.5 * (lo + hi);
    (
        root_in(1e-12, rho_flat, sig),
        root_in(rho_sharp, 1.0 - 1e-12, sig),
    )
}

// ----- shared slow run: near-steady relaxation at 200 cells per phase -------

struct NearSteadyRun {
    ts: Vec<f64>,
    fronts: Vec<f64>,
    l2_low: Vec<f64>,
    l2_high: Vec<f64>,
    s_star: f64,
    mass: f64,
    final_front: f64,
    elapsed_s: f64,
}

fn near_steady_run() -> &'static NearSteadyRun {
    static RUN: OnceLock<NearSteadyRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let started = Instant::now();
        let m = AdhesionModel::new(0.85).unwrap();
        let defaults = SweepConfig {
            name: String::new(),
            alphas: vec![0.85],
            masses: vec![],
            amplitude: 0.004,
            t_end: 2.0,
            grid: Default::default(),
            step: Default::default(),
            events: Default::default(),
            output: Default::default(),
        };
        let mut cfg =
            near_steady_scenario("relaxation_probe", &m, 0.6, 0.004, 2.0, &defaults).unwrap();
        cfg.grid.nodes_per_unit = 400;
        let mut state = cfg.build_state().unwrap();
        let ctrl = cfg.step_control();
        let thresholds = cfg.event_thresholds(&state);
        let mass = state.total_mass();
        let s_star = two_phase_steady_front(&m, mass).unwrap();

        let (mut ts, mut fronts, mut l2_low, mut l2_high) = (vec![], vec![], vec![], vec![]);
        let mut next = 0.0;
        let (events, stop) = run(&mut state, &ctrl, &thresholds, 2.0, |rec| {
            if let RunRecord::Step { state, .. } = rec {
                if state.t + 1e-12 >= next {
                    next += 1e-3;
                    ts.push(state.t);
                    fronts.push(state.fronts[0]);
                    l2_low.push(phase_l2_deviation(state, 0, state.model.rho1));
                    l2_high.push(phase_l2_deviation(state, 1, state.model.rho2));
                }
            }
        });
        assert!(events.is_empty(), "unexpected events {events:?}");
        assert!(matches!(stop, StopReason::ReachedTEnd));
        NearSteadyRun {
            ts,
            fronts,
            l2_low,
            l2_high,
            s_star,
            mass,
            final_front: state.fronts[0],
            elapsed_s: started.elapsed().as_secs_f64(),
        }
    })
}

/// Log-linear decay rate of `ys` over the time window, with its r^2.
fn fit_rate(ts: &[f64], ys: &[f64], t0: f64, t1: f64) -> (f64, f64) {
    let mut xs = Vec::new();
    let mut ls = Vec::new();
    for (t, y) in ts.iter().zip(ys) {
        if *t >= t0 && *t <= t1 && *y > 1e-14 {
            xs.push(*t);
            ls.push(y.ln());
        }
    }
    let (slope, _, r2) = linear_fit(&xs, &ls).expect("degenerate fit window");
    (-slope, r2)
}

/// Largest rise of a series above its running minimum.
fn max_rise(series: impl Iterator<Item = f64>) -> f64 {
    let mut run_min = f64::MAX;
    let mut rise = 0.0f64;
    for s in series {
        run_min = run_min.min(s);
        rise = rise.max(s - run_min);
    }
    rise
}

fn coalescence_run() -> &'static (RunResult, f64) {
    static RUN: OnceLock<(RunResult, f64)> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = preset("coalescence").unwrap();
        let eps_collide = cfg
            .event_thresholds(&cfg.build_state().unwrap())
            .eps_collide;
        (run_scenario(&cfg, Solver::FrontTrack).unwrap(), eps_collide)
    })
}

// ----- the acceptance items -------------------------------------------------

#[test]
fn constitutive_closed_forms_match_extended_precision() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut max_err_d = 0.0f64;
    for _ in 0..1_000_000 {
        let alpha: f64 = rng.gen_range(1e-6..1.0);
        let rho: f64 = rng.gen_range(0.0..1.0);
        let err = (diffusivity(rho, alpha).unwrap() - diffusivity_dd(alpha, rho)).abs();
        max_err_d = max_err_d.max(err);
    }
    let mut max_err_i = 0.0f64;
    for _ in 0..500_000 {
        let alpha: f64 = rng.gen_range(0.7501..1.0);
        let (lo, hi) = unstable_interval(alpha).unwrap();
        let (lo_dd, hi_dd) = interval_dd(alpha);
        max_err_i = max_err_i.max((lo - lo_dd).abs().max((hi - hi_dd).abs()));
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(max_err_d <= 1e-13, "diffusivity error {max_err_d:.3e}");
    assert!(
        max_err_i <= 1e-13,
        "interval endpoint error {max_err_i:.3e}"
    );
    assert!(elapsed < 5.0, "took {elapsed:.1}s");
    println!(
        "PASS constitutive closed forms: max errors {max_err_d:.2e} (diffusivity), \
         {max_err_i:.2e} (interval) in {elapsed:.2}s"
    );
}

#[test]
fn plateau_selection_matches_shooting_oracle() {
    let started = Instant::now();
    for alpha in [0.80, 0.85, 0.95] {
        let m = AdhesionModel::new(alpha).unwrap();
        assert!(
            m.rho1 < m.rho_flat && m.rho_flat < m.rho_sharp && m.rho_sharp < m.rho2,
            "ordering violated at alpha {alpha}"
        );
        let k_gap = (m.temperature(m.rho1) - m.temperature(m.rho2)).abs();
        assert!(
            k_gap <= 1e-12,
            "temperature mismatch {k_gap:.3e} at alpha {alpha}"
        );
        let (r1, r2) = shoot_plateaus(alpha);
        assert!(
            (m.rho1 - r1).abs() <= 1e-6,
            "alpha {alpha}: rho1 {} vs oracle {r1}",
            m.rho1
        );
        assert!(
            (m.rho2 - r2).abs() <= 1e-6,
            "alpha {alpha}: rho2 {} vs oracle {r2}",
            m.rho2
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "took {elapsed:.1}s");
    println!("PASS plateau selection matches the shooting oracle at 1e-6 ({elapsed:.2}s)");
}

#[test]
fn plateau_step_is_a_discrete_fixed_point() {
    let m = AdhesionModel::new(0.85).unwrap();
    let ctrl = StepControl::default();
    let mut worst_v = 0.0f64;
    let mut worst_drift = 0.0f64;
    for k in 0..100 {
        let mass = m.rho1 + 0.01 + (m.rho2 - m.rho1 - 0.02) * k as f64 / 99.0;
        let s = two_phase_steady_front(&m, mass).unwrap();
        let mut state = SimState {
            model: m,
            t: 0.0,
            fronts: vec![s],
            phases: vec![
                PhaseGrid::plateau(PhaseKind::Low, &m, 24),
                PhaseGrid::plateau(PhaseKind::High, &m, 24),
            ],
        };
        worst_v = worst_v.max(interface_velocities(&state)[0].abs());
        step(&mut state, &ctrl).unwrap();
        worst_drift = worst_drift.max((state.fronts[0] - s).abs());
        for (p, plateau) in state.phases.iter().zip([m.rho1, m.rho2]) {
            for &v in &p.v {
                worst_drift = worst_drift.max((v - plateau).abs());
            }
        }
    }
    assert!(worst_v <= 1e-12, "front velocity {worst_v:.3e}");
    assert!(worst_drift <= 1e-12, "fixed point drift {worst_drift:.3e}");
    println!(
        "PASS plateau steps over 100 masses: velocity <= {worst_v:.1e}, \
         one-step drift <= {worst_drift:.1e}"
    );
}

#[test]
fn displaced_front_relaxes_to_mass_balance_position() {
    let r = near_steady_run();
    let m = AdhesionModel::new(0.85).unwrap();

    let err = (r.final_front - r.s_star).abs();
    assert!(err <= 1e-3, "front error {err:.3e}");

    let (s_min, s_max) = front_bounds(&m, r.mass).unwrap();
    for (t, s) in r.ts.iter().zip(&r.fronts) {
        assert!(
            (s_min..=s_max).contains(s),
            "front {s} outside [{s_min:.4}, {s_max:.4}] at t = {t}"
        );
    }

    // each phase must flatten at least at its worst-excursion floor
    let (rate_low, r2_low) = fit_rate(&r.ts, &r.l2_low, 0.05, 0.55);
    let (rate_high, r2_high) = fit_rate(&r.ts, &r.l2_high, 1.0, 2.0);
    let floor_low = decay_floor(&m, r.mass).unwrap();
    let floor_high = high_phase_rate(&m, 1.0 - s_min);
    assert!(
        r2_low > 0.99 && r2_high > 0.99,
        "noisy fits {r2_low} {r2_high}"
    );
    assert!(
        rate_low >= floor_low,
        "low rate {rate_low:.3} under floor {floor_low:.3}"
    );
    assert!(
        rate_high >= floor_high,
        "high rate {rate_high:.3} under floor {floor_high:.3}"
    );
    assert!(r.elapsed_s < 60.0, "took {:.1}s", r.elapsed_s);
    println!(
        "PASS displaced front: |s(2) - s*| = {err:.2e}, bounds kept, \
         phase rates {rate_low:.3}/{rate_high:.3} over floors {floor_low:.3}/{floor_high:.3} \
         ({:.1}s)",
        r.elapsed_s
    );
}

#[test]
fn phase_tails_fit_linearized_rates() {
    let r = near_steady_run();
    let m = AdhesionModel::new(0.85).unwrap();
    let lam_low = low_phase_rate(&m, r.s_star);
    let lam_high = high_phase_rate(&m, 1.0 - r.s_star);

    let (rate_low, _) = fit_rate(&r.ts, &r.l2_low, 0.05, 0.55);
    let (rate_high, _) = fit_rate(&r.ts, &r.l2_high, 1.0, 2.0);
    let dev_low = (rate_low / lam_low - 1.0).abs();
    let dev_high = (rate_high / lam_high - 1.0).abs();
    assert!(
        dev_low <= 0.10,
        "low rate {rate_low:.4} vs {lam_low:.4} (off by {:.2}%)",
        dev_low * 100.0
    );
    assert!(
        dev_high <= 0.10,
        "high rate {rate_high:.4} vs {lam_high:.4} (off by {:.2}%)",
        dev_high * 100.0
    );
    println!(
        "PASS linearized rates: low {rate_low:.4} vs {lam_low:.4} ({:.2}%), \
         high {rate_high:.4} vs {lam_high:.4} ({:.2}%)",
        dev_low * 100.0,
        dev_high * 100.0
    );
}

#[test]
fn gradient_sup_is_non_increasing_under_refinement() {
    let mut vs = Vec::new();
    for npu in [100usize, 200] {
        let mut cfg = preset("gradient_watch").unwrap();
        cfg.grid.nodes_per_unit = npu;
        let state = cfg.build_state().unwrap();
        assert!(
            gradient_sign_condition(&state).holds,
            "preset no longer satisfies the slope-sign condition"
        );
        let result = run_scenario(&cfg, Solver::FrontTrack).unwrap();
        let v = max_rise(result.diagnostics.iter().map(|d| d.sup_sigma_x));
        let slack = 1e-6 + 10.0 / (npu * npu) as f64;
        assert!(
            v <= slack,
            "monitor rose {v:.3e} > slack {slack:.3e} at {npu} nodes"
        );
        vs.push(v);
    }
    assert!(
        vs[1] <= vs[0] / 2.0 || vs[0] <= 1e-9,
        "slack did not tighten under refinement: {vs:?}"
    );
    println!(
        "PASS gradient monitor: max rise {:.1e} at 100 nodes, {:.1e} at 200",
        vs[0], vs[1]
    );
}

#[test]
fn equal_mass_data_split_between_attractors() {
    let started = Instant::now();

    let far = run_scenario(&preset("bistable_far").unwrap(), Solver::FrontTrack).unwrap();
    let hit = far.report.events.iter().find_map(|e| match e {
        Event::BoundaryHit { t, wall, .. } => Some((*t, *wall)),
        _ => None,
    });
    let (t_hit, wall) = hit.expect("far data never reached the wall");
    assert_eq!(wall, Wall::Right);
    assert!(t_hit < far.report.t_final);
    assert!(far.report.final_fronts.is_empty());

    let near = run_scenario(&preset("bistable_near").unwrap(), Solver::FrontTrack).unwrap();
    assert!(
        near.report.events.is_empty(),
        "near data lost its front: {:?}",
        near.report.events
    );
    let s_star =
        two_phase_steady_front(&AdhesionModel::new(0.85).unwrap(), near.report.initial_mass)
            .unwrap();
    let gap = (near.report.final_fronts[0] - s_star).abs();
    assert!(
        gap <= 3e-3,
        "near front {:.6} vs s* {s_star:.6}",
        near.report.final_fronts[0]
    );

    let mass_gap = (far.report.initial_mass - near.report.initial_mass).abs();
    assert!(mass_gap <= 5e-4, "data masses differ by {mass_gap:.2e}");

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "took {elapsed:.1}s");
    println!(
        "PASS bistability: same mass {:.4}, far datum extinct at t = {t_hit:.3}, \
         near datum holds its front within {gap:.1e} ({elapsed:.1}s)",
        near.report.initial_mass
    );
}

#[test]
fn coalescence_books_balance() {
    let (result, eps_collide) = coalescence_run();
    let m = AdhesionModel::new(0.85).unwrap();

    let merges: Vec<_> = result
        .report
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Coalescence { t, mass_defect, .. } => Some((*t, *mass_defect)),
            _ => None,
        })
        .collect();
    assert_eq!(
        merges.len(),
        1,
        "expected exactly one merge, got {merges:?}"
    );
    let (_, defect) = merges[0];

    let di = &result.diagnostics;
    let k = di.iter().position(|d| d.dt.is_nan()).expect("no event row");
    let booked = di[k - 1].mass - di[k].mass;
    assert!(
        (booked - defect).abs() <= 1e-6,
        "mass drop {booked:.6e} vs recorded defect {defect:.6e}"
    );
    assert!(
        defect <= eps_collide * m.jump(),
        "defect {defect:.6e} exceeds eps * jump = {:.6e}",
        eps_collide * m.jump()
    );

    // after the merge a single Neumann phase remains; its mass is frozen
    let post_drift = max_rise(di[k..].iter().map(|d| (d.mass - di[k].mass).abs()));
    let budget = 1e-14 * result.report.n_steps as f64;
    assert!(
        post_drift <= budget,
        "post-merge drift {post_drift:.3e} > {budget:.3e}"
    );
    println!(
        "PASS coalescence audit: one merge, booked drop matches defect {defect:.3e} \
         <= eps*jump, post-merge drift {post_drift:.1e}"
    );
}

#[test]
fn enthalpy_front_shadows_tracker_and_tightens() {
    let mut gaps = Vec::new();
    for npu in [200usize, 400] {
        let mut cfg = preset("cross_check").unwrap();
        cfg.grid.nodes_per_unit = npu;
        let ft = run_scenario(&cfg, Solver::FrontTrack).unwrap();
        let en = run_scenario(&cfg, Solver::Enthalpy).unwrap();
        let n = ft.fronts.len().min(en.fronts.len());
        assert!(n > 100, "too few common samples: {n}");
        let mut gap = 0.0f64;
        for i in 0..n {
            let (a, b) = (ft.fronts[i].positions[0], en.fronts[i].positions[0]);
            assert!(a.is_finite() && b.is_finite());
            gap = gap.max((a - b).abs());
        }
        let two_cells = 2.0 / npu as f64;
        assert!(
            gap <= two_cells,
            "gap {gap:.3e} > two cells {two_cells:.3e} at {npu}"
        );
        gaps.push(gap);
    }
    let ratio = gaps[0] / gaps[1];
    assert!(
        ratio >= 1.5,
        "refinement shrank the gap only {ratio:.2}x: {gaps:?}"
    );
    println!(
        "PASS enthalpy shadowing: uniform front gaps {:.2e} -> {:.2e} ({ratio:.2}x) \
         under 2x refinement",
        gaps[0], gaps[1]
    );
}

#[test]
fn lagrange_agrees_despite_adverse_gradient() {
    let cfg = preset("one_phase").unwrap();
    let state = cfg.build_state().unwrap();
    assert!(
        !gradient_sign_condition(&state).holds,
        "scenario is meant to violate the slope-sign condition"
    );

    let ft = run_scenario(&cfg, Solver::FrontTrack).unwrap();
    let lg = run_scenario(&cfg, Solver::Lagrange).unwrap();
    assert!(matches!(lg.report.stop, StopReason::ReachedTEnd));
    assert!((lg.report.t_final - cfg.t_end).abs() < 1e-9);

    let n = ft.fronts.len().min(lg.fronts.len());
    let mut gap = 0.0f64;
    for i in 0..n {
        gap = gap.max((ft.fronts[i].positions[0] - lg.fronts[i].positions[0]).abs());
    }
    let two_cells = 2.0 / cfg.grid.nodes_per_unit as f64;
    assert!(gap <= two_cells, "front gap {gap:.3e} > {two_cells:.3e}");
    println!(
        "PASS mass-coordinate solver: ran to t_end through adverse gradients, \
         front gap {gap:.1e} <= 2 cells"
    );
}

#[test]
fn extinction_relaxes_uniformly_at_heat_rate() {
    let result = run_scenario(&preset("annihilation").unwrap(), Solver::FrontTrack).unwrap();
    let r = &result.report;
    assert!(r
        .events
        .iter()
        .any(|e| matches!(e, Event::BoundaryHit { .. })));
    assert!(r.final_fronts.is_empty());

    let di = &result.diagnostics;
    let k = di.iter().position(|d| d.dt.is_nan()).expect("no event row");
    let t_ev = di[k].t;

    let ts: Vec<f64> = di[k..].iter().map(|d| d.t).collect();
    let devs: Vec<f64> = di[k..].iter().map(|d| d.dev_uniform).collect();
    let (rate, r2) = fit_rate(&ts, &devs, t_ev + 0.25, t_ev + 1.2);
    let lam = neumann_rate(&AdhesionModel::new(0.85).unwrap(), r.final_mass);
    let dev = (rate / lam - 1.0).abs();
    assert!(r2 > 0.999, "noisy uniform decay fit: r2 = {r2}");
    assert!(
        dev <= 0.15,
        "rate {rate:.4} vs D(M) pi^2 = {lam:.4} (off by {:.2}%)",
        dev * 100.0
    );

    let post_drift = max_rise(di[k..].iter().map(|d| (d.mass - di[k].mass).abs()));
    assert!(
        post_drift <= 1e-12,
        "post-extinction mass drift {post_drift:.3e}"
    );
    println!(
        "PASS extinction continuation: uniform decay {rate:.4} vs {lam:.4} ({:.3}%), \
         mass frozen to {post_drift:.1e}",
        dev * 100.0
    );
}
