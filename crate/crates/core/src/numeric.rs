//! Log-space root finding shared by the bound formulas.
//!
//! The bounds solved here all have the shape `x = f(x)` with `f` a power of
//! a slowly growing function of `log x`, so everything works in
//! `u = ln x`: the candidate roots are tiny in `u`-space even when `x`
//! itself is `10^2592`. The upper bracket comes from the closed form for
//! the largest real root of `x - (b log x)^D`, namely
//! `exp(-D W_{-1}(-1/(D b)))` with `W_{-1}` the lower branch of the
//! Lambert W function.

use crate::error::Error;
use crate::Result;

/// Lower branch `W_{-1}(z)` of the Lambert W function for `-1/e <= z < 0`.
///
/// Halley iteration from the asymptotic seed `ln(-z) - ln(-ln(-z))`.
pub(crate) fn lambert_w_m1(z: f64) -> Result<f64> {
    if !(-(-1.0f64).exp()..0.0).contains(&z) {
        return Err(Error::Domain(format!(
            "W_-1 defined on [-1/e, 0), got {z}"
        )));
    }
    let l1 = (-z).ln();
    let l2 = (-l1).ln();
    let mut w = l1 - l2 + l2 / l1;
    if w >= -1.0 {
        w = -1.0 - 1e-9;
    }
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - z;
        // Halley step
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        if (next - w).abs() <= 1e-14 * w.abs() {
            return Ok(next);
        }
        w = next;
    }
    Ok(w)
}

/// Largest real root of `u -> u - ln_f(u)` by bisection, where `ln_f(u)`
/// is `ln f(e^u)` for the increasing dominated function `f`.
///
/// `lo` must satisfy `lo < ln_f(lo)` and `hi` the reverse; the caller
/// supplies `hi` from a Lambert-W envelope. Returns the root in `u`-space
/// to relative accuracy `rel_tol`.
pub(crate) fn bisect_largest_root(
    ln_f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    let g = |u: f64| u - ln_f(u);
    let mut tries = 0;
    while g(hi) <= 0.0 {
        hi *= 1.5;
        tries += 1;
        if tries > 200 {
            return Err(Error::BracketFailure(
                "upper bracket never cleared the curve".into(),
            ));
        }
    }
    if g(lo) >= 0.0 {
        // walk down from the verified upper end until the region below the
        // largest crossing turns negative
        let mut probe = hi;
        loop {
            probe *= 0.97;
            if probe < 1e-9 {
                return Err(Error::BracketFailure(
                    "no region below the curve; constants misconfigured?".into(),
                ));
            }
            if g(probe) < 0.0 {
                lo = probe;
                break;
            }
        }
    }
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ln(a + b)` from `ln a >= ln b` without leaving log space.
pub(crate) fn ln_add(ln_a: f64, ln_b: f64) -> f64 {
    if ln_a < ln_b {
        return ln_add(ln_b, ln_a);
    }
    ln_a + (ln_b - ln_a).exp().ln_1p()
}
