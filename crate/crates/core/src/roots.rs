//! Bracketing and safeguarded root finding for monotone scalar functions.

/// Expands `[lo, hi]` geometrically away from `lo` until `f` changes sign.
///
/// Returns the bracket and the function values at its ends. Panics are
/// avoided by capping the growth; callers pass functions known to change
/// sign eventually (strictly monotone with opposite-sign limits).
pub fn grow_bracket<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    max_doublings: usize,
) -> Option<(f64, f64, f64, f64)> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    for _ in 0..max_doublings {
        if sign_change(flo, fhi) {
            return Some((lo, hi, flo, fhi));
        }
        let width = hi - lo;
        if flo.abs() <= fhi.abs() {
            lo -= width;
            flo = f(lo);
        } else {
            hi += width;
            fhi = f(hi);
        }
    }
    if sign_change(flo, fhi) {
        Some((lo, hi, flo, fhi))
    } else {
        None
    }
}

fn sign_change(fa: f64, fb: f64) -> bool {
    fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0)
}

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite
/// sign. Converges to `xtol` in the argument or `ftol` in the residual.
///
/// Function values may be infinite away from the root; the bisection
/// safeguard still makes progress in that case.
pub fn brent<F: Fn(f64) -> f64>(
    f: &F,
    a0: f64,
    b0: f64,
    fa0: f64,
    fb0: f64,
    xtol: f64,
    ftol: f64,
) -> f64 {
    let (mut a, mut b, mut fa, mut fb) = (a0, b0, fa0, fb0);
    debug_assert!(sign_change(fa, fb), "brent requires a sign change");
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;

    for _ in 0..200 {
        if fb == 0.0 || fb.abs() <= ftol {
            return b;
        }
        let tol = xtol * (1.0 + b.abs());
        if (b - a).abs() <= tol {
            return b;
        }
        let mut s = if fa != fc && fb != fc && fa.is_finite() && fb.is_finite() && fc.is_finite() {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else if fa.is_finite() && fb.is_finite() && fa != fb {
            b - fb * (b - a) / (fb - fa)
        } else {
            f64::NAN
        };

        let lo = (3.0 * a + b) / 4.0;
        let within = if lo < b { s > lo && s < b } else { s > b && s < lo };
        let step_ok = if mflag {
            (s - b).abs() < 0.5 * (b - c).abs()
        } else {
            (s - b).abs() < 0.5 * d.abs()
        };
        if !s.is_finite() || !within || !step_ok {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }

        let fs = f(s);
        d = b - c;
        c = b;
        fc = fb;
        if sign_change(fa, fs) && fa != 0.0 && fs != 0.0 {
            b = s;
            fb = fs;
        } else if fs == 0.0 {
            return s;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

/// Convenience wrapper: root of a monotone `f` inside `[lo, hi]`.
pub fn solve_monotone<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, xtol: f64, ftol: f64) -> f64 {
    let fa = f(lo);
    let fb = f(hi);
    debug_assert!(
        sign_change(fa, fb),
        "no sign change on [{lo}, {hi}]: f(lo)={fa}, f(hi)={fb}"
    );
    brent(f, lo, hi, fa, fb, xtol, ftol)
}
