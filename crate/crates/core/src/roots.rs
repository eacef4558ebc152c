//! Bracketed scalar root finding.

const MAX_ITER: usize = 2200;

/// Bisection on `(lo, hi)` for a function known to change sign across the
/// bracket. The endpoints are never evaluated, so poles there are fine;
/// `lo_negative` gives the sign of `f` just right of `lo`.
///
/// Stops once the bracket is narrower than `tol` or can no longer be split in
/// floating point. `tol = 0` runs to machine precision.
pub(crate) fn bisect<F>(mut lo: f64, mut hi: f64, lo_negative: bool, tol: f64, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo < hi);
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Walks away from `anchor` in direction `dir` (±1) with doubling steps until
/// `pred` holds; returns the first point where it does.
pub(crate) fn expand_until<P>(anchor: f64, dir: f64, initial: f64, mut pred: P) -> Option<f64>
where
    P: FnMut(f64) -> bool,
{
    let mut step = initial.max(f64::MIN_POSITIVE);
    for _ in 0..2100 {
        let x = anchor + dir * step;
        if !x.is_finite() {
            return None;
        }
        if pred(x) {
            return Some(x);
        }
        step *= 2.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(0.0, 2.0, true, 0.0, |x| x * x - 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bisect_ignores_pole_endpoints() {
        // tan has poles at ±π/2 and a single root at 0 in between
        let h = std::f64::consts::FRAC_PI_2;
        let r = bisect(-h, h + 0.3, true, 0.0, |x| {
            if x >= h {
                f64::NAN
            } else {
                x.tan()
            }
        });
        assert!(r.abs() < 1e-15);
    }

    #[test]
    fn bisect_respects_tolerance() {
        let r = bisect(0.0, 1.0, false, 1e-3, |x| 0.3 - x);
        assert!((r - 0.3).abs() <= 1e-3);
    }

    #[test]
    fn expand_until_doubles() {
        let x = expand_until(0.0, -1.0, 1.0, |x| x < -5.0).unwrap();
        assert_eq!(x, -8.0);
    }
}
