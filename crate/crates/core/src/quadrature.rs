//! Scalar quadrature helpers shared by the viscosity and diagnostics modules.

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Recursion splits an interval until the classical Simpson error estimate
/// drops below the (distributed) tolerance. `tol` is an absolute tolerance
/// on the whole interval.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = simpson(lo, hi, fa, fm, fb);
    sign * adapt(f, lo, hi, fa, fm, fb, whole, tol, 48)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        // Richardson correction of the composite estimate.
        left + right + err / 15.0
    } else {
        adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Composite trapezoid weights for the (possibly non-uniform) knots `ts`.
///
/// Returns one weight per knot; `sum_k w_k f(t_k)` is the trapezoid rule.
pub fn trapezoid_weights(ts: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    for k in 0..n - 1 {
        let h = 0.5 * (ts[k + 1] - ts[k]);
        w[k] += h;
        w[k + 1] += h;
    }
    w
}
