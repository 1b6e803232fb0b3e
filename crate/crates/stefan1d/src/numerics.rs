//! Shared numerical kernels: adaptive quadrature, safeguarded root finding and
//! a log-linear least-squares fit. Everything here is plain f64, deterministic
//! and allocation-light; the physics modules build on these.

/// Nodes of the 12-point Gauss-Legendre rule on [-1, 1] (positive half; the
/// rule is symmetric). Weights paired below.
const GL12_X: [f64; 6] = [
    0.125_233_408_511_468_9,
    0.367_831_498_998_180_1,
    0.587_317_954_286_617_4,
    0.769_902_674_194_304_9,
    0.904_117_256_370_474_9,
    0.981_560_634_246_719_3,
];
const GL12_W: [f64; 6] = [
    0.249_147_045_813_402_8,
    0.233_492_536_538_354_8,
    0.203_167_426_723_065_9,
    0.160_078_328_543_346_2,
    0.106_939_325_995_318_4,
    0.047_175_336_386_511_83,
];

/// 12-point Gauss-Legendre quadrature of `f` over [a, b].
pub fn gauss12<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..6 {
        acc += GL12_W[i] * (f(mid + half * GL12_X[i]) + f(mid - half * GL12_X[i]));
    }
    acc * half
}

/// Adaptive composite Gauss quadrature: each panel is accepted when halving it
/// changes the panel value by less than its share of the tolerance. `rel_tol`
/// is measured against the accumulated integral scale (floor 1e-300 avoids a
/// zero-scale stall on antisymmetric integrands).
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn panel<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        scale: &mut f64,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gauss12(f, a, mid);
        let right = gauss12(f, mid, b);
        *scale = scale.max(left.abs() + right.abs());
        if depth >= 48 || (left + right - whole).abs() <= tol * scale.max(1e-300) {
            return left + right;
        }
        panel(f, a, mid, left, tol, depth + 1, scale)
            + panel(f, mid, b, right, tol, depth + 1, scale)
    }
    let whole = gauss12(f, a, b);
    let mut scale = whole.abs();
    panel(f, a, b, whole, rel_tol, 0, &mut scale)
}

/// Composite Gauss-Legendre with a fixed number of equal panels. Used where a
/// test wants to double the resolution knob explicitly.
pub fn composite_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| gauss12(f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}

/// Bisection on [a, b]; requires a sign change. Returns the midpoint once the
/// bracket is below `xtol` (absolute). Never fails on a valid bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> Option<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= xtol {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Newton iteration safeguarded by a bracket [lo, hi] with a known sign
/// change: steps that leave the bracket or fail to shrink the residual fall
/// back to bisection of the maintained bracket. Converges on |f| <= ftol or
/// bracket width <= xtol.
pub fn newton_bracketed<F, G>(f: &F, df: &G, lo: f64, hi: f64, xtol: f64, ftol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx.abs() <= ftol || (hi - lo).abs() <= xtol {
            return Some(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = df(x);
        let step = if d != 0.0 { fx / d } else { f64::INFINITY };
        let mut next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    Some(x)
}

/// Ordinary least squares for y = intercept + slope * x.
/// Returns (slope, intercept, r_squared). Needs at least two distinct x.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some((slope, my - slope * mx, r2))
}

/// Trapezoid rule over uniformly spaced samples with spacing `h`.
pub fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (0.5 * (values[0] + values[n - 1]) + inner)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_is_exact_on_polynomials() {
        // degree 23 is the exactness limit of a 12-point rule
        let f = |x: f64| 5.0 * x.powi(7) - 2.0 * x.powi(3) + x - 4.0;
        let exact = |x: f64| 5.0 / 8.0 * x.powi(8) - 0.5 * x.powi(4) + 0.5 * x * x - 4.0 * x;
        let got = gauss12(&f, -1.3, 2.1);
        assert!((got - (exact(2.1) - exact(-1.3))).abs() < 1e-12);
    }

    #[test]
    fn adaptive_gauss_handles_peaked_integrand() {
        // integral of 1/(1e-4 + x^2) over [-1,1] = 2*atan(100)/0.01
        let f = |x: f64| 1.0 / (1e-4 + x * x);
        let exact = 2.0 * (100.0f64).atan() / 0.01;
        let got = adaptive_gauss(&f, -1.0, 1.0, 1e-12);
        assert!(
            (got - exact).abs() / exact < 1e-11,
            "got {got}, want {exact}"
        );
    }

    #[test]
    fn bisect_and_newton_agree() {
        let f = |x: f64| x * x * x - 2.0;
        let df = |x: f64| 3.0 * x * x;
        let a = bisect(&f, 0.0, 2.0, 1e-14).unwrap();
        let b = newton_bracketed(&f, &df, 0.0, 2.0, 1e-15, 1e-15).unwrap();
        assert!((a - 2.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((b - 2.0f64.powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 - 1.25 * x).collect();
        let (slope, intercept, r2) = linear_fit(&xs, &ys).unwrap();
        assert!((slope + 1.25).abs() < 1e-12);
        assert!((intercept - 3.5).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
