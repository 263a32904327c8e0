//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Root of `f` in `[a, b]` given `f(a)` and `f(b)` of opposite sign.
///
/// Bisects until the bracket is narrower than `coarse_width`, then switches
/// to Brent's method (inverse quadratic / secant steps with a bisection
/// fallback) until the step is below `tol`. Returns the point with the
/// smallest residual seen at termination.
pub fn bisect_then_brent<R: Real>(
    f: impl Fn(R) -> R,
    mut a: R,
    mut b: R,
    mut fa: R,
    mut fb: R,
    coarse_width: R,
    tol: R,
) -> Result<R> {
    if fa == R::zero() {
        return Ok(a);
    }
    if fb == R::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::invalid("bracket endpoints have the same sign"));
    }
    let two = R::lit(2.0);
    while (b - a).abs() > coarse_width {
        let m = a + (b - a) / two;
        let fm = f(m);
        if fm == R::zero() {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    Ok(brent(f, a, b, fa, fb, tol))
}

/// Brent's zeroin on a sign-change bracket.
pub fn brent<R: Real>(f: impl Fn(R) -> R, a0: R, b0: R, fa0: R, fb0: R, tol: R) -> R {
    let two = R::lit(2.0);
    let three = R::lit(3.0);
    let half = R::lit(0.5);
    let (mut a, mut b, mut fa, mut fb) = (a0, b0, fa0, fb0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * R::epsilon() * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == R::zero() {
            return b;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = R::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - R::one()));
                q = (qa - R::one()) * (r - R::one()) * (s - R::one());
            }
            if p > R::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * xm.signum()
        };
        fb = f(b);
    }
    b
}
