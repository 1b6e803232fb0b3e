//! Constitutive model for the adhesion-diffusion equation.
//!
//! The density-dependent diffusivity on [0, 1] is
//!
//! ```text
//! D(rho) = 3*alpha*(rho - 2/3)^2 + 1 - 4*alpha/3
//! ```
//!
//! with adhesion strength `alpha` in [0, 1]. For `alpha > 3/4` the diffusivity
//! is negative on an open interval I_alpha around 2/3 (the unstable band) and
//! the evolution is forward-backward parabolic: solutions develop jumps that
//! connect a low-density value `rho1` to a high-density value `rho2` across
//! the band. Those plateau values are selected by a higher-order regularisation
//! of the equation; here they are computed from the reduced conditions
//!
//! ```text
//! K(rho1) = K(rho2) = sigma_bar,
//! integral_{rho1}^{rho2} (sigma_bar - K(r)) / (r (1-r)^3) dr = 0,
//! ```
//!
//! where `K` (the "temperature") is the primitive of `D` with `K(0) = 0`. The
//! weighted equal-area rule is the heteroclinic-connection condition of the
//! regularised steady-state ODE, reduced by the substitution u = (rho')^2;
//! the regularisation length scale cancels. An independent shooting oracle for
//! the same connection lives in the acceptance tests.

use crate::numerics::{bisect, composite_gauss, newton_bracketed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which side of a jump a value belongs to: the low band `[0, rho_flat)` or
/// the high band `(rho_sharp, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    Low,
    High,
}

impl PhaseKind {
    pub fn opposite(self) -> PhaseKind {
        match self {
            PhaseKind::Low => PhaseKind::High,
            PhaseKind::High => PhaseKind::Low,
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{name} = {value} outside the admissible interval [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("alpha = {alpha} has no unstable interval (requires alpha > 3/4)")]
    NoUnstableInterval { alpha: f64 },
    #[error(
        "plateau solve did not converge at alpha = {alpha} \
         (temperature residual {residual_k:.3e}, equal-area residual {residual_area:.3e})"
    )]
    PlateauConvergence {
        alpha: f64,
        residual_k: f64,
        residual_area: f64,
    },
    #[error("invalid plateau override: {reason}")]
    InvalidPlateaus { reason: String },
    #[error("sigma = {sigma} lies on the flat segment; a branch hint is required")]
    MissingBranchHint { sigma: f64 },
    #[error("sigma = {sigma} outside the attainable temperature range [{lo}, {hi}]")]
    SigmaOutOfRange { sigma: f64, lo: f64, hi: f64 },
}

fn check_unit(name: &'static str, value: f64) -> Result<(), ModelError> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(ModelError::Domain {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

fn d_eval(rho: f64, alpha: f64) -> f64 {
    let t = rho - 2.0 / 3.0;
    3.0 * alpha * t * t + 1.0 - 4.0 * alpha / 3.0
}

fn k_eval(rho: f64, alpha: f64) -> f64 {
    let t = rho - 2.0 / 3.0;
    alpha * t * t * t + (1.0 - 4.0 * alpha / 3.0) * rho + 8.0 * alpha / 27.0
}

/// Diffusivity D(rho). Rejects arguments outside [0, 1].
pub fn diffusivity(rho: f64, alpha: f64) -> Result<f64, ModelError> {
    check_unit("rho", rho)?;
    check_unit("alpha", alpha)?;
    Ok(d_eval(rho, alpha))
}

/// Temperature K(rho): the primitive of the diffusivity normalised to
/// K(0) = 0. Rejects arguments outside [0, 1].
pub fn temperature(rho: f64, alpha: f64) -> Result<f64, ModelError> {
    check_unit("rho", rho)?;
    check_unit("alpha", alpha)?;
    Ok(k_eval(rho, alpha))
}

/// Open interval on which D < 0, for alpha > 3/4:
///
/// ```text
/// I_alpha = ( (2*alpha - sqrt(alpha*(4*alpha - 3))) / (3*alpha),
///             (2*alpha + sqrt(alpha*(4*alpha - 3))) / (3*alpha) )
/// ```
///
/// It always contains 2/3 and sits inside [1/3, 1].
pub fn unstable_interval(alpha: f64) -> Result<(f64, f64), ModelError> {
    check_unit("alpha", alpha)?;
    if alpha <= 0.75 {
        return Err(ModelError::NoUnstableInterval { alpha });
    }
    let root = (alpha * (4.0 * alpha - 3.0)).sqrt();
    Ok((
        (2.0 * alpha - root) / (3.0 * alpha),
        (2.0 * alpha + root) / (3.0 * alpha),
    ))
}

/// Knobs for the plateau solver. `quad_panels` is the composite-quadrature
/// resolution of the equal-area integral; the result is invariant under
/// doubling it (the integrand is smooth), which the tests assert.
#[derive(Clone, Copy, Debug)]
pub struct PlateauOptions {
    pub quad_panels: usize,
    pub max_newton_iters: usize,
}

impl Default for PlateauOptions {
    fn default() -> Self {
        PlateauOptions {
            quad_panels: 24,
            max_newton_iters: 60,
        }
    }
}

/// Result of the plateau selection: the jump endpoints and their common
/// temperature.
#[derive(Clone, Copy, Debug)]
pub struct PlateauValues {
    pub rho1: f64,
    pub rho2: f64,
    pub sigma_bar: f64,
}

/// Equal-area weight 1/(r (1-r)^3); smooth on any closed subinterval of (0, 1).
fn area_weight(r: f64) -> f64 {
    let omr = 1.0 - r;
    1.0 / (r * omr * omr * omr)
}

/// Equal-area integral and weight mass over [r1, r2], computed in the
/// variable t = ln(1/(1-r)). The weight blows up like (1-r)^-3 as r2
/// approaches 1 (it does for alpha near 1); the substitution turns that
/// boundary layer into geometric panel grading, so a modest fixed panel
/// count resolves it to machine precision.
fn equal_area_integrals(alpha: f64, sigma: f64, r1: f64, r2: f64, panels: usize) -> (f64, f64) {
    let t1 = -(1.0 - r1).ln();
    let t2 = -(1.0 - r2).ln();
    let area = composite_gauss(
        &|t: f64| {
            let omr = (-t).exp();
            let r = 1.0 - omr;
            (sigma - k_eval(r, alpha)) / (r * omr * omr)
        },
        t1,
        t2,
        panels,
    );
    let phi = composite_gauss(
        &|t: f64| {
            let omr = (-t).exp();
            1.0 / ((1.0 - omr) * omr * omr)
        },
        t1,
        t2,
        panels,
    );
    (area, phi)
}

struct PlateauSystem {
    alpha: f64,
    panels: usize,
}

impl PlateauSystem {
    /// Residual pair (K(r2) - K(r1), equal-area integral) and the weight mass
    /// Phi = integral of the weight, used by the Jacobian.
    fn residuals(&self, r1: f64, r2: f64) -> (f64, f64, f64) {
        let a = self.alpha;
        let sigma = 0.5 * (k_eval(r1, a) + k_eval(r2, a));
        let f1 = k_eval(r2, a) - k_eval(r1, a);
        let (f2, phi) = equal_area_integrals(a, sigma, r1, r2, self.panels);
        (f1, f2, phi)
    }

    /// Lower/upper roots of K = sigma on the two monotone outer branches.
    fn branch_roots(&self, sigma: f64, flat: f64, sharp: f64) -> Option<(f64, f64)> {
        let a = self.alpha;
        let r1 = bisect(&|r: f64| k_eval(r, a) - sigma, 1e-14, flat, 1e-15)?;
        let r2 = bisect(&|r: f64| k_eval(r, a) - sigma, sharp, 1.0, 1e-15)?;
        Some((r1, r2))
    }
}

fn plateau_solve(alpha: f64, opts: PlateauOptions) -> Result<PlateauValues, ModelError> {
    let (flat, sharp) = unstable_interval(alpha)?;
    let sys = PlateauSystem {
        alpha,
        panels: opts.quad_panels.max(4),
    };

    // Monotone bisection on sigma seeds (and, if need be, replaces) Newton:
    // G(sigma) = equal-area integral between the outer roots of K = sigma is
    // strictly increasing, so the bracket below is reliable.
    let sig_lo = k_eval(sharp, alpha).max(0.0) + 1e-12;
    let sig_hi = k_eval(flat, alpha).min(k_eval(1.0, alpha)) - 1e-12;
    if sig_lo >= sig_hi {
        return Err(ModelError::PlateauConvergence {
            alpha,
            residual_k: f64::NAN,
            residual_area: f64::NAN,
        });
    }
    let area_of = |sigma: f64| -> f64 {
        match sys.branch_roots(sigma, flat, sharp) {
            Some((r1, r2)) => equal_area_integrals(alpha, sigma, r1, r2, sys.panels).0,
            None => f64::NAN,
        }
    };
    let sigma0 = bisect(&area_of, sig_lo, sig_hi, 1e-13).ok_or(ModelError::PlateauConvergence {
        alpha,
        residual_k: f64::NAN,
        residual_area: f64::NAN,
    })?;
    let (mut r1, mut r2) =
        sys.branch_roots(sigma0, flat, sharp)
            .ok_or(ModelError::PlateauConvergence {
                alpha,
                residual_k: f64::NAN,
                residual_area: f64::NAN,
            })?;

    // Damped Newton polish on (rho1, rho2). At the root the Jacobian is
    // [-D(r1), D(r2); D(r1) Phi/2, D(r2) Phi/2], nondegenerate since D > 0 on
    // the outer branches.
    let (mut f1, mut f2, mut phi) = sys.residuals(r1, r2);
    for _ in 0..opts.max_newton_iters {
        if f1.abs() <= 1e-15 && f2.abs() <= 1e-14 * phi.max(1.0) {
            break;
        }
        let d1 = d_eval(r1, alpha);
        let d2 = d_eval(r2, alpha);
        let sigma = 0.5 * (k_eval(r1, alpha) + k_eval(r2, alpha));
        let j11 = -d1;
        let j12 = d2;
        let j21 = -(sigma - k_eval(r1, alpha)) * area_weight(r1) + 0.5 * d1 * phi;
        let j22 = (sigma - k_eval(r2, alpha)) * area_weight(r2) + 0.5 * d2 * phi;
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dr1 = (f1 * j22 - f2 * j12) / det;
        let dr2 = (j11 * f2 - j21 * f1) / det;
        let norm0 = f1.abs() + f2.abs();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let c1 = (r1 - lambda * dr1).clamp(1e-12, flat - 1e-12);
            let c2 = (r2 - lambda * dr2).clamp(sharp + 1e-12, 1.0 - 1e-15);
            let (g1, g2, gphi) = sys.residuals(c1, c2);
            if g1.abs() + g2.abs() < norm0 {
                r1 = c1;
                r2 = c2;
                f1 = g1;
                f2 = g2;
                phi = gphi;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    if !(f1.abs() <= 1e-13 && f2.abs() <= 1e-10 * phi.max(1.0)) {
        return Err(ModelError::PlateauConvergence {
            alpha,
            residual_k: f1,
            residual_area: f2,
        });
    }
    Ok(PlateauValues {
        rho1: r1,
        rho2: r2,
        sigma_bar: 0.5 * (k_eval(r1, alpha) + k_eval(r2, alpha)),
    })
}

/// Plateau values (rho1, rho2) and the flat temperature sigma_bar for a given
/// alpha, with default solver options.
pub fn plateau_values(alpha: f64) -> Result<PlateauValues, ModelError> {
    plateau_solve(alpha, PlateauOptions::default())
}

/// Same as [`plateau_values`] with explicit solver knobs.
pub fn plateau_values_with(alpha: f64, opts: PlateauOptions) -> Result<PlateauValues, ModelError> {
    plateau_solve(alpha, opts)
}

/// Frozen constitutive data for one value of alpha.
///
/// Invariants (enforced by the constructors):
/// - `3/4 < alpha <= 1`
/// - `0 < rho1 < rho_flat < 2/3 < rho_sharp < rho2 <= 1`
/// - `|K(rho1) - K(rho2)| <= 1e-12`
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AdhesionModel {
    pub alpha: f64,
    pub rho_flat: f64,
    pub rho_sharp: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub sigma_bar: f64,
}

impl AdhesionModel {
    /// Build the model for `alpha`, computing the plateau values.
    pub fn new(alpha: f64) -> Result<Self, ModelError> {
        let p = plateau_values(alpha)?;
        Self::with_plateaus(alpha, p.rho1, p.rho2)
    }

    /// Build the model with user-supplied plateau values. They are checked
    /// against the structural invariants only, so alternative selection rules
    /// can be explored.
    pub fn with_plateaus(alpha: f64, rho1: f64, rho2: f64) -> Result<Self, ModelError> {
        let (rho_flat, rho_sharp) = unstable_interval(alpha)?;
        let ordered = 0.0 < rho1 && rho1 < rho_flat && rho_sharp < rho2 && rho2 <= 1.0;
        if !ordered {
            return Err(ModelError::InvalidPlateaus {
                reason: format!(
                    "need 0 < rho1 < {rho_flat:.6} < {rho_sharp:.6} < rho2 <= 1, \
                     got rho1 = {rho1}, rho2 = {rho2}"
                ),
            });
        }
        let k1 = k_eval(rho1, alpha);
        let k2 = k_eval(rho2, alpha);
        if (k1 - k2).abs() > 1e-12 {
            return Err(ModelError::InvalidPlateaus {
                reason: format!(
                    "temperatures differ: K(rho1) = {k1:.17e}, K(rho2) = {k2:.17e} \
                     (|diff| = {:.3e} > 1e-12)",
                    (k1 - k2).abs()
                ),
            });
        }
        Ok(AdhesionModel {
            alpha,
            rho_flat,
            rho_sharp,
            rho1,
            rho2,
            sigma_bar: 0.5 * (k1 + k2),
        })
    }

    /// D(rho) without domain checks; callers keep rho in [0, 1].
    #[inline]
    pub fn diffusivity(&self, rho: f64) -> f64 {
        debug_assert!((-1e-12..=1.0 + 1e-12).contains(&rho), "rho = {rho}");
        d_eval(rho, self.alpha)
    }

    /// K(rho) without domain checks.
    #[inline]
    pub fn temperature(&self, rho: f64) -> f64 {
        k_eval(rho, self.alpha)
    }

    /// Jump magnitude rho2 - rho1.
    #[inline]
    pub fn jump(&self) -> f64 {
        self.rho2 - self.rho1
    }

    /// Plateau value carried by a phase of the given kind at its fronts.
    #[inline]
    pub fn plateau(&self, kind: PhaseKind) -> f64 {
        match kind {
            PhaseKind::Low => self.rho1,
            PhaseKind::High => self.rho2,
        }
    }

    /// Flattened temperature: K with its non-monotone middle replaced by the
    /// constant sigma_bar on [rho1, rho2]. Non-decreasing on [0, 1]; the
    /// min/max clamps absorb the half-ulp mismatch between K(rho1), K(rho2)
    /// and the stored midpoint sigma_bar at the seams.
    pub fn flattened_temperature(&self, rho: f64) -> f64 {
        if rho < self.rho1 {
            k_eval(rho, self.alpha).min(self.sigma_bar)
        } else if rho <= self.rho2 {
            self.sigma_bar
        } else {
            k_eval(rho, self.alpha).max(self.sigma_bar)
        }
    }

    /// Inverse of the flattened temperature. On the flat segment
    /// (`sigma == sigma_bar`) the branch hint selects rho1 or rho2; elsewhere
    /// the hint is ignored. Accepts sigma in [K(0), K(1)] = [0, 1 - alpha].
    pub fn enthalpy_inverse(&self, sigma: f64, hint: Option<PhaseKind>) -> Result<f64, ModelError> {
        let hi = k_eval(1.0, self.alpha);
        if !(-1e-14..=1.0).contains(&sigma) || sigma > hi + 1e-14 {
            return Err(ModelError::SigmaOutOfRange { sigma, lo: 0.0, hi });
        }
        if sigma == self.sigma_bar {
            return match hint {
                Some(PhaseKind::Low) => Ok(self.rho1),
                Some(PhaseKind::High) => Ok(self.rho2),
                None => Err(ModelError::MissingBranchHint { sigma }),
            };
        }
        let a = self.alpha;
        if sigma < self.sigma_bar {
            if sigma <= 0.0 {
                return Ok(0.0);
            }
            if sigma >= k_eval(self.rho1, a) {
                return Ok(self.rho1);
            }
            Ok(newton_bracketed(
                &|r: f64| k_eval(r, a) - sigma,
                &|r: f64| d_eval(r, a),
                0.0,
                self.rho1,
                1e-15,
                1e-16,
            )
            .expect("monotone branch bracket"))
        } else {
            if sigma >= hi {
                return Ok(1.0);
            }
            if sigma <= k_eval(self.rho2, a) {
                return Ok(self.rho2);
            }
            Ok(newton_bracketed(
                &|r: f64| k_eval(r, a) - sigma,
                &|r: f64| d_eval(r, a),
                self.rho2,
                1.0,
                1e-15,
                1e-16,
            )
            .expect("monotone branch bracket"))
        }
    }

    /// Inverse of K restricted to the whole increasing low branch [0, rho_flat].
    /// Unlike [`Self::enthalpy_inverse`] this resolves values above K(rho1) up
    /// to K(rho_flat), which the Lagrangian-coordinate solver needs when the
    /// low phase overshoots rho1.
    pub fn invert_temperature_low(&self, sigma: f64) -> Result<f64, ModelError> {
        let a = self.alpha;
        let hi = k_eval(self.rho_flat, a);
        if sigma < -1e-14 || sigma >= hi {
            return Err(ModelError::SigmaOutOfRange { sigma, lo: 0.0, hi });
        }
        if sigma <= 0.0 {
            return Ok(0.0);
        }
        Ok(newton_bracketed(
            &|r: f64| k_eval(r, a) - sigma,
            &|r: f64| d_eval(r, a),
            0.0,
            self.rho_flat,
            1e-15,
            1e-16,
        )
        .expect("monotone branch bracket"))
    }

    /// Equal-area residual of the stored plateaus, for diagnostics:
    /// the selection rule drives this to zero.
    pub fn equal_area_residual(&self) -> f64 {
        equal_area_integrals(self.alpha, self.sigma_bar, self.rho1, self.rho2, 48).0
    }
}
