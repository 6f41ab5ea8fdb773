//! Numerically stable scalar special functions: the standard normal
//! pdf/cdf/survival/quantile and the Cauchy score transform
//! `f(z) = tan(pi*(Phi(z) - 1/2)) = cot(pi * Phibar(z))` with its inverse.
//!
//! All functions are pure; accuracy contracts are relative wherever a
//! quantity can underflow the absolute scale (normal tails, extreme scores).

use crate::error::Error;
use crate::roots;
use crate::Result;
use std::f64::consts::{FRAC_1_PI, PI};

/// `1/sqrt(2*pi)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.3989422804014326779399460599343818684758586311649;

/// p-values closer to an endpoint than this are scored by the reciprocal
/// asymptote `1/(pi*p)`; chosen so the tangent argument stays representable.
pub const SCORE_TAIL_THRESHOLD: f64 = 1e-14;

/// Above this `|z|` the survival function switches from the erfc form to a
/// Mills-ratio continued fraction, which keeps full relative accuracy.
const TAIL_SWITCH: f64 = 4.0;

/// Joint evaluation of the standard normal density, distribution function
/// and survival function at one abscissa.
///
/// `cdf` and `sf` are computed from a single tail quantity, so
/// `cdf(-z) == sf(z)` holds bit-for-bit and `cdf + sf` is 1 up to one
/// rounding of the complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalEval {
    pub z: f64,
    pub pdf: f64,
    pub cdf: f64,
    pub sf: f64,
}

/// Which numeric path produced a Cauchy score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreBranch {
    Central,
    UpperTail,
    LowerTail,
}

/// A Cauchy score `f(z)` together with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreValue {
    pub x: f64,
    pub branch: ScoreBranch,
}

/// Standard normal pdf, cdf and survival function.
///
/// The dominant tail quantity is relatively accurate to about `1e-14`; the
/// survival function is computed directly rather than as `1 - cdf`.
pub fn std_normal(z: f64) -> Result<NormalEval> {
    if !z.is_finite() {
        return Err(Error::domain(format!("std_normal: z = {z} is not finite")));
    }
    let tail = upper_tail(z.abs());
    let head = 1.0 - tail;
    let (cdf, sf) = if z.is_sign_negative() { (tail, head) } else { (head, tail) };
    Ok(NormalEval { z, pdf: std_normal_pdf(z), cdf, sf })
}

/// The density `phi(z)`; squares the abscissa in double-double form beyond
/// `|z| = 8` so the exponent keeps full relative accuracy.
pub fn std_normal_pdf(z: f64) -> f64 {
    let az = z.abs();
    if az <= 8.0 {
        FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
    } else {
        let hi = z * z;
        let lo = z.mul_add(z, -hi);
        FRAC_1_SQRT_2PI * (-0.5 * hi).exp() * (1.0 - 0.5 * lo)
    }
}

/// `Phibar(a)` for `a >= 0`, relatively accurate over the whole range.
pub(crate) fn upper_tail(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    if a <= TAIL_SWITCH {
        0.5 * libm::erfc(a * std::f64::consts::FRAC_1_SQRT_2)
    } else {
        // Phibar(a) = phi(a) / (a + 1/(a + 2/(a + 3/(a + ...)))), the
        // Laplace continued fraction; depth 64 is far past convergence
        // for a >= 4.
        let mut c = 0.0;
        for k in (1..=64u32).rev() {
            c = f64::from(k) / (a + c);
        }
        std_normal_pdf(a) / (a + c)
    }
}

/// Inverse standard normal cdf.
///
/// Rational initial guess (Abramowitz & Stegun 26.2.23) polished by Halley
/// iteration against the tail-accurate cdf, giving `|Phi(z) - u| <= 1e-13`
/// centrally and relative tail accuracy ~1e-15.
pub fn std_normal_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!(
            "std_normal_quantile: u = {u} outside (0, 1)"
        )));
    }
    if u == 0.5 {
        return Ok(0.0);
    }
    // 1 - u is exact for u >= 1/2 (Sterbenz), so both halves stay accurate.
    Ok(if u > 0.5 { -quantile_lower(1.0 - u) } else { quantile_lower(u) })
}

/// Quantile for `p` in `(0, 1/2)`; returns `z <= 0`.
fn quantile_lower(p: f64) -> f64 {
    let t = (-2.0 * p.ln()).sqrt();
    let num = 2.515517 + t * (0.802853 + t * 0.010328);
    let den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
    let mut z = -(t - num / den);
    for _ in 0..4 {
        let tail = upper_tail(-z);
        let pdf = std_normal_pdf(z);
        if pdf == 0.0 {
            break; // below ~1e-310 the density underflows; the guess stands
        }
        let d = (tail - p) / pdf;
        let step = 2.0 * d / (2.0 + d * z);
        z -= step;
        if step.abs() <= 1e-16 * (1.0 + z.abs()) {
            break;
        }
    }
    z
}

/// Score magnitude for a tail mass `p` in `(0, 1/2]`: `f` at `Phi^{-1}(1-p)`.
///
/// Three forms, each relatively accurate on its range: the reciprocal
/// asymptote below [`SCORE_TAIL_THRESHOLD`], `cot(pi p)` up to 1/4 (the
/// small angle is exact in relative terms), and `tan(pi(1/2 - p))` beyond,
/// where `1/2 - p` is an exact subtraction.
#[inline]
fn score_of_tail(p: f64) -> f64 {
    if p < SCORE_TAIL_THRESHOLD {
        FRAC_1_PI / p
    } else if p <= 0.25 {
        1.0 / (PI * p).tan()
    } else {
        (PI * (0.5 - p)).tan()
    }
}

/// The Cauchy score `f` of a p-value, `f = cot(pi p)` in its stable forms.
pub fn score_from_p(p: f64) -> Result<ScoreValue> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "score_from_p: p = {p} outside (0, 1)"
        )));
    }
    if p < SCORE_TAIL_THRESHOLD {
        Ok(ScoreValue { x: FRAC_1_PI / p, branch: ScoreBranch::UpperTail })
    } else if p > 1.0 - SCORE_TAIL_THRESHOLD {
        Ok(ScoreValue { x: -score_of_tail(1.0 - p), branch: ScoreBranch::LowerTail })
    } else if p <= 0.5 {
        Ok(ScoreValue { x: score_of_tail(p), branch: ScoreBranch::Central })
    } else {
        Ok(ScoreValue { x: -score_of_tail(1.0 - p), branch: ScoreBranch::Central })
    }
}

/// The score `f(z)` evaluated from the abscissa.
///
/// Equivalent to `score_from_p(Phibar(z))` but exactly odd in `z`, which the
/// Monte Carlo layer's antithetic identity relies on. Never overflows or
/// errors for `|z| <= 37`; requires finite input.
pub fn score_from_z(z: f64) -> f64 {
    debug_assert!(z.is_finite());
    let mag = score_of_tail(upper_tail(z.abs()));
    if z < 0.0 {
        -mag
    } else {
        mag
    }
}

/// Inverse of the score transform: `z` with `f(z) = x`, to relative
/// accuracy `1e-10` in `x`.
///
/// `f` is strictly increasing and odd; the root is bracketed in
/// `[0, sqrt(2 log max(|x|,3)) + 2]` (mirrored for negative `x`) and
/// located by safeguarded interpolation/bisection.
pub fn score_inverse(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("score_inverse: x = {x} is not finite")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ax = x.abs();
    let hi = (2.0 * ax.max(3.0).ln()).sqrt() + 2.0;
    let g = |z: f64| score_from_z(z) - ax;
    debug_assert!(g(hi) >= 0.0, "score_inverse bracket failed for x = {x}");
    let root = roots::solve_monotone(&g, 0.0, hi, 1e-13, 1e-11 * ax);
    Ok(if x < 0.0 { -root } else { root })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        if want == 0.0 {
            got.abs()
        } else {
            ((got - want) / want).abs()
        }
    }

    // Reference values computed with 40-digit arithmetic before the build.
    const SF_TABLE: &[(f64, f64)] = &[
        (0.5, 0.3085375387259869),
        (1.0, 0.15865525393145705),
        (1.959963984540054, 0.025000000000000012),
        (3.0, 0.0013498980316300946),
        (3.9, 4.8096344017602716e-5),
        (4.1, 2.0657506912546737e-5),
        (5.0, 2.866515718791939e-7),
        (8.0, 6.220960574271784e-16),
        (10.0, 7.619853024160525e-24),
        (20.0, 2.7536241186062337e-89),
        (37.0, 5.725571222524577e-300),
    ];

    #[test]
    fn normal_at_zero() {
        let e = std_normal(0.0).unwrap();
        assert_eq!(e.cdf, 0.5);
        assert_eq!(e.sf, 0.5);
        assert!((e.pdf - 0.3989422804014327).abs() < 1e-16);
    }

    #[test]
    fn survival_table() {
        for &(z, want) in SF_TABLE {
            let e = std_normal(z).unwrap();
            assert!(
                rel_err(e.sf, want) < 1.5e-14,
                "sf({z}) = {:e}, want {want:e}, rel {:e}",
                e.sf,
                rel_err(e.sf, want)
            );
        }
    }

    #[test]
    fn cdf_at_975_quantile() {
        let e = std_normal(1.959963984540054).unwrap();
        assert!((e.cdf - 0.975).abs() < 1e-15);
    }

    #[test]
    fn far_tail_matches_mills_ratio() {
        let e = std_normal(37.0).unwrap();
        assert!(rel_err(e.sf, e.pdf / 37.0) < 1e-3);
        // At z = 40 both the tail and the density underflow; the Mills
        // relation degenerates to an exact 0 == 0.
        let e = std_normal(40.0).unwrap();
        assert_eq!(e.sf, 0.0);
        assert_eq!(e.pdf / 40.0, 0.0);
    }

    #[test]
    fn complement_and_symmetry() {
        for &(z, _) in SF_TABLE {
            let pos = std_normal(z).unwrap();
            let neg = std_normal(-z).unwrap();
            assert!((pos.cdf + pos.sf - 1.0).abs() <= 1e-15);
            assert_eq!(pos.sf.to_bits(), neg.cdf.to_bits());
            assert_eq!(pos.pdf.to_bits(), neg.pdf.to_bits());
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(std_normal(f64::NAN).is_err());
        assert!(std_normal(f64::INFINITY).is_err());
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(-0.1).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_reference_points() {
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
        let z = std_normal_quantile(0.975).unwrap();
        assert!((z - 1.959963984540054).abs() < 1e-13, "z = {z}");
        let z = std_normal_quantile(1e-300).unwrap();
        assert!(z.is_finite());
        assert!((z - -37.0470962993612).abs() < 1e-8, "z = {z}");
        // relative tail residual
        for &u in &[1e-10, 1e-100, 1e-300] {
            let z = std_normal_quantile(u).unwrap();
            let back = std_normal(z).unwrap().cdf;
            assert!(rel_err(back, u) < 1e-10, "u={u}: back={back:e}");
        }
    }

    #[test]
    fn quantile_central_residual() {
        let mut u = 0.0005;
        while u < 1.0 {
            let z = std_normal_quantile(u).unwrap();
            let back = std_normal(z).unwrap().cdf;
            assert!((back - u).abs() < 1e-13, "u={u}: residual {:e}", back - u);
            u += 0.0007;
        }
    }

    #[test]
    fn quantile_roundtrip_in_z() {
        let mut z = -6.0;
        while z <= 6.0 {
            let u = std_normal(z).unwrap().cdf;
            let back = std_normal_quantile(u).unwrap();
            assert!((back - z).abs() < 1e-9, "z={z}: back={back}");
            z += 0.0917;
        }
    }

    #[test]
    fn score_reference_points() {
        assert_eq!(score_from_p(0.5).unwrap().x, 0.0);
        let s = score_from_p(0.25).unwrap();
        assert!((s.x - 1.0).abs() < 1e-15);
        assert_eq!(s.branch, ScoreBranch::Central);
        let s = score_from_p(1e-20).unwrap();
        assert!(rel_err(s.x, 3.1830988618379067e19) < 1e-12);
        assert_eq!(s.branch, ScoreBranch::UpperTail);
        let s = score_from_p(1.0 - 1e-15).unwrap();
        assert_eq!(s.branch, ScoreBranch::LowerTail);
        assert!(s.x < 0.0);
        assert!(score_from_p(0.0).is_err());
        assert!(score_from_p(1.0).is_err());
        assert!(score_from_p(-0.2).is_err());
        assert!(score_from_p(f64::NAN).is_err());
    }

    #[test]
    fn score_oddness() {
        let mut p = 1e-12;
        while p < 0.5 {
            let a = score_from_p(p).unwrap().x;
            let b = score_from_p(1.0 - p).unwrap().x;
            assert!(rel_err(-b, a) < 1e-12, "p = {p}: {a} vs {b}");
            p *= 1.37;
        }
    }

    #[test]
    fn score_monotonicity_on_random_pairs() {
        // 10^4 pairs from a splitmix stream
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        let mut unif = move || (next() >> 11) as f64 / (1u64 << 53) as f64;
        for _ in 0..10_000 {
            let mut p1 = unif();
            let mut p2 = unif();
            if p1 == p2 || p1 == 0.0 || p2 == 0.0 {
                continue;
            }
            if p1 > p2 {
                std::mem::swap(&mut p1, &mut p2);
            }
            let s1 = score_from_p(p1).unwrap().x;
            let s2 = score_from_p(p2).unwrap().x;
            assert!(s1 > s2, "p1={p1}, p2={p2}: {s1} <= {s2}");
        }
    }

    #[test]
    fn branch_continuity_at_the_threshold() {
        let below = score_from_p(1e-14 * (1.0 - 1e-13)).unwrap();
        let at = score_from_p(1e-14).unwrap();
        assert_eq!(below.branch, ScoreBranch::UpperTail);
        assert_eq!(at.branch, ScoreBranch::Central);
        assert!(rel_err(below.x, at.x) < 1e-10);
    }

    #[test]
    fn score_inverse_reference_points() {
        assert_eq!(score_inverse(0.0).unwrap(), 0.0);
        let x = 13.967730199244548; // f(2)
        assert!((score_inverse(x).unwrap() - 2.0).abs() < 1e-9);
        let z = score_inverse(1e6).unwrap();
        let ratio = z / (2.0 * 1e6f64.ln()).sqrt();
        assert!((0.9..=1.1).contains(&ratio), "ratio = {ratio}");
        assert!((z - 4.979763633393193).abs() < 1e-8);
        assert!(score_inverse(f64::INFINITY).is_err());
    }

    #[test]
    fn score_inverse_roundtrip() {
        let mut p = 1e-10;
        while p < 1.0 - 1e-10 {
            let x = score_from_p(p).unwrap().x;
            let z = score_inverse(x).unwrap();
            let want = -std_normal_quantile(p).unwrap(); // Phi^{-1}(1-p)
            assert!((z - want).abs() < 1e-8, "p={p}: z={z}, want={want}");
            p = if p < 0.4 { p * 2.9 } else { 1.0 - (1.0 - p) / 2.9 };
        }
    }

    #[test]
    fn score_from_z_is_exactly_odd() {
        for &z in &[0.3, 1.7, 5.2, 8.44, 14.0, 0.0] {
            let a = score_from_z(z);
            let b = score_from_z(-z);
            assert_eq!(a.to_bits(), (-b).to_bits(), "z = {z}");
        }
    }

    #[test]
    fn score_paths_agree() {
        let mut z = -8.3;
        while z <= 8.3 {
            let via_z = score_from_z(z);
            let via_p = score_from_p(std_normal(z).unwrap().sf).unwrap().x;
            assert!(
                rel_err(via_z, via_p) < 1e-8 || (via_z - via_p).abs() < 1e-12,
                "z = {z}: {via_z} vs {via_p}"
            );
            z += 0.217;
        }
    }
}
