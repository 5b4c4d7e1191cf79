//! Scalar root finding, derivatives and small fitting helpers.

use crate::error::{DlsError, Result};

/// Bracketed root with iteration count.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Bisection guarded secant on a sign-changing bracket.
///
/// The secant step is taken when it lands strictly inside the bracket and the
/// previous step shrank the bracket by at least half, otherwise we bisect.
pub fn bisect_secant<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(DlsError::NonFinite("root bracket"));
    }
    if fa.signum() == fb.signum() {
        return Err(DlsError::NoLasingSolution);
    }
    let mut last_width = b - a;
    let mut it = 0;
    while it < max_iter {
        it += 1;
        let width = b - a;
        if width <= xtol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let sec = b - fb * (b - a) / (fb - fa);
        let x = if sec > a && sec < b && width <= 0.5 * last_width * 1.000_001 {
            sec
        } else {
            mid
        };
        last_width = width;
        let fx = f(x)?;
        if !fx.is_finite() {
            return Err(DlsError::NonFinite("root iterate"));
        }
        if fx == 0.0 {
            return Ok(Root { x, fx, iterations: it });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // secant creeping from one side: force a bisection next round
        if (b - a) > 0.5 * width {
            last_width = 0.0;
        }
    }
    let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    Ok(Root { x, fx, iterations: it })
}

/// Walk outward from `x0` in doubling steps on both sides until the sign of
/// `f` differs from `f(x0)`. The side that fails (e.g. leaves the lasing
/// window) is abandoned; if both fail the first error is returned.
pub fn bracket_outward<F>(mut f: F, x0: f64, f0: f64, h0: f64, max_doublings: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut h = h0.abs().max(f64::MIN_POSITIVE);
    let mut left_ok = true;
    let mut right_ok = true;
    let mut first_err = None;
    for _ in 0..max_doublings {
        for side in [-1.0, 1.0] {
            let alive = if side < 0.0 { &mut left_ok } else { &mut right_ok };
            if !*alive {
                continue;
            }
            let x = x0 + side * h;
            match f(x) {
                Ok(v) if v.is_finite() => {
                    if v == 0.0 || v.signum() != f0.signum() {
                        return Ok(if side < 0.0 { (x, x0) } else { (x0, x) });
                    }
                }
                Ok(_) => *alive = false,
                Err(e) => {
                    first_err.get_or_insert(e);
                    *alive = false;
                }
            }
        }
        if !left_ok && !right_ok {
            break;
        }
        h *= 2.0;
    }
    Err(first_err.unwrap_or(DlsError::NoLasingSolution))
}

/// Find the knob k ≥ 0 where a decreasing response crosses `target`.
/// `f` returns `None` where the model breaks down (e.g. below threshold);
/// such knobs are treated as "past the target".
pub fn calibrate_decreasing<F>(f: F, target: f64, start: f64, rtol: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let above = |k: f64| matches!(f(k), Some(v) if v > target);
    if !above(0.0) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, start);
    while above(hi) {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return None;
        }
    }
    // stop on the response, not the knob: near a steep edge a tiny knob
    // interval can still span a large relative change in f
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match f(mid) {
            Some(v) if (v - target).abs() <= rtol * target.abs() => return Some(mid),
            Some(v) if v > target => lo = mid,
            _ => hi = mid,
        }
    }
    // prefer the side that still evaluates, then the one closer to target
    match (f(lo), f(hi)) {
        (Some(a), Some(b)) => Some(if (a - target).abs() <= (b - target).abs() { lo } else { hi }),
        (Some(_), None) => Some(lo),
        (None, Some(_)) => Some(hi),
        (None, None) => None,
    }
}

/// Central difference with one Richardson extrapolation step.
pub fn derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let h2 = 0.5 * h;
    let d2 = (f(x + h2)? - f(x - h2)?) / (2.0 * h2);
    let d = (4.0 * d2 - d1) / 3.0;
    if d.is_finite() {
        Ok(d)
    } else {
        Err(DlsError::NonFinite("derivative"))
    }
}

/// Ordinary least squares line; returns (slope, intercept, r²).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = bisect_secant(|x| Ok(x * x * x - 2.0), 0.0, 3.0, 1e-14, 200).unwrap();
        assert!((r.x - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            bisect_secant(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50),
            Err(DlsError::NoLasingSolution)
        ));
    }

    #[test]
    fn bracket_finds_nearest_side() {
        let (a, b) = bracket_outward(|x| Ok(x - 5.0), 0.0, -5.0, 1.0, 60).unwrap();
        assert!(a <= 5.0 && b >= 5.0);
        assert!(b - a <= 8.0);
    }

    #[test]
    fn bracket_gives_up_on_walls() {
        let f = |x: f64| {
            if x.abs() > 3.0 {
                Err(DlsError::BelowThreshold { margin: -1.0 })
            } else {
                Ok(1.0)
            }
        };
        assert!(matches!(bracket_outward(f, 0.0, 1.0, 1.0, 60), Err(DlsError::BelowThreshold { .. })));
    }

    #[test]
    fn calibrate_sqrt_knob() {
        let k = calibrate_decreasing(|k| Some(10.0 - k.sqrt()), 7.0, 1e-6, 1e-12).unwrap();
        assert!((k - 9.0).abs() < 1e-9);
        assert!(calibrate_decreasing(|k| Some(1.0 - k), 2.0, 1.0, 1e-9).is_none());
    }

    #[test]
    fn richardson_derivative() {
        let d = derivative(|x| Ok(x.sin()), 0.3, 1e-2).unwrap();
        assert!((d - 0.3f64.cos()).abs() < 1e-9);
    }

    #[test]
    fn fit_exact_line() {
        let xs = linspace(-1.0, 1.0, 11);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (m, c, r2) = linear_fit(&xs, &ys);
        assert!((m - 3.0).abs() < 1e-12 && (c + 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }
}
