//! Small numeric utilities: guarded elementary functions and 1-D solvers.

use crate::error::{Error, Result};

/// Absolute slack allowed when an argument sits on the edge of a domain
/// (e.g. `sqrt` of a value that is negative only through rounding).
pub const DOMAIN_GUARD: f64 = 1e-12;

/// `sqrt` that forgives arguments in `[-DOMAIN_GUARD, 0)` by clamping them to 0.
pub fn guarded_sqrt(v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v.sqrt())
    } else if v >= -DOMAIN_GUARD {
        Ok(0.0)
    } else {
        Err(Error::Numeric(format!("sqrt of {v}")))
    }
}

/// `acos` that forgives arguments within `DOMAIN_GUARD` outside `[-1, 1]`.
pub fn guarded_acos(v: f64) -> Result<f64> {
    if (-1.0..=1.0).contains(&v) {
        Ok(v.acos())
    } else if v.abs() <= 1.0 + DOMAIN_GUARD {
        Ok(v.clamp(-1.0, 1.0).acos())
    } else {
        Err(Error::Numeric(format!("acos of {v}")))
    }
}

/// Root of a continuous function by bisection.
///
/// Requires a sign change on `[a, b]`; returns the midpoint of the final
/// bracket once it is narrower than `xtol`.
pub fn bisect(f: impl Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> Result<f64> {
    if !(xtol > 0.0) || !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::Numeric(format!("bad bisection setup [{a}, {b}]")));
    }
    let (mut lo, mut hi) = (a, b);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numeric(format!("no sign change on [{a}, {b}]")));
    }
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval no longer representable
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Minimum of a unimodal function on `[a, b]` by golden-section search.
///
/// Returns `(argmin, min)` once the bracket is narrower than `xtol`.
pub fn golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guarded_sqrt_clamps_tiny_negatives() {
        assert_eq!(guarded_sqrt(4.0).unwrap(), 2.0);
        assert_eq!(guarded_sqrt(-1e-13).unwrap(), 0.0);
        assert!(guarded_sqrt(-1e-6).is_err());
    }

    #[test]
    fn guarded_acos_clamps_at_one() {
        assert_eq!(guarded_acos(1.0 + 1e-14).unwrap(), 0.0);
        assert!((guarded_acos(-1.0).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(guarded_acos(1.1).is_err());
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn golden_min_finds_parabola_vertex() {
        let (x, v) = golden_min(|x| (x - 3.0) * (x - 3.0) + 1.0, 0.0, 10.0, 1e-10);
        // The argmin is only determined up to the rounding plateau of the
        // objective, about sqrt(eps) wide on a unit-scale parabola.
        assert!((x - 3.0).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }
}
