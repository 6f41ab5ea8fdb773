//! Quadrature rules and adaptive integration.
//!
//! Nodes and weights are computed at first use from the classical
//! three-term recurrences (Newton refinement, no coefficient tables) and
//! cached. Adaptive integration bisects panels and estimates the error of
//! each panel from an embedded pair of Gauss-Legendre rules.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// A Gauss-Hermite rule: integrates `exp(-x^2) * f(x)` over the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds the n-point rule. Practical for `n <= ~250`; beyond that the
    /// unscaled Hermite recurrence overflows near the extreme nodes.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1 && n <= 260, "Gauss-Hermite size out of range");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);

        // Roots of h_n lie in (-b, b), b = sqrt(2n+1); spacing is at least
        // ~pi/(2 sqrt(2n+1)) so a quarter-spacing scan brackets every root.
        let b = (2.0 * n as f64 + 1.0).sqrt();
        let step = PI / (4.0 * b);
        let mut pos = Vec::with_capacity(n / 2 + 1);
        if n % 2 == 1 {
            pos.push(0.0);
        }
        let mut x_prev = if n % 2 == 1 { step * 0.5 } else { 0.0 };
        let mut h_prev = hermite_ortho(n, x_prev).0;
        let mut x = x_prev + step;
        while x <= b + step && pos.len() < n / 2 + n % 2 {
            let h = hermite_ortho(n, x).0;
            if h_prev != 0.0 && h_prev.signum() != h.signum() {
                pos.push(refine_root(n, x_prev, x));
            }
            x_prev = x;
            h_prev = h;
            x += step;
        }
        assert_eq!(
            pos.len(),
            n / 2 + n % 2,
            "missed Hermite roots during scan"
        );

        for &r in pos.iter().rev() {
            if r > 0.0 {
                nodes.push(-r);
            }
        }
        if n % 2 == 1 {
            nodes.push(0.0);
        }
        for &r in pos.iter() {
            if r > 0.0 {
                nodes.push(r);
            }
        }

        for &x in &nodes {
            // Gauss weight via the Christoffel function of the orthonormal
            // family: w = 1 / sum_{k<n} h_k(x)^2.
            let mut sum = 0.0;
            let mut hkm1 = 0.0_f64;
            let mut hk = PI.powf(-0.25);
            sum += hk * hk;
            for k in 0..n - 1 {
                let kf = k as f64;
                let next = x * (2.0 / (kf + 1.0)).sqrt() * hk - (kf / (kf + 1.0)).sqrt() * hkm1;
                hkm1 = hk;
                hk = next;
                sum += hk * hk;
            }
            weights.push(1.0 / sum);
        }

        GaussHermite { nodes, weights }
    }

    /// Cached shared rule.
    pub fn cached(n: usize) -> Arc<GaussHermite> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard.entry(n).or_insert_with(|| Arc::new(GaussHermite::new(n))).clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_weight_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integral of `exp(-x^2) f(x)` over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let term = w * f(x);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Expectation `E[f(V)]` for `V ~ N(0,1)` via `v = sqrt(2) x`.
    pub fn gaussian_expectation<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        const SQRT_2: f64 = std::f64::consts::SQRT_2;
        self.integrate(|x| f(SQRT_2 * x)) / PI.sqrt()
    }
}

/// Orthonormal Hermite value `(h_n(x), h_{n-1}(x))` for weight `exp(-x^2)`.
fn hermite_ortho(n: usize, x: f64) -> (f64, f64) {
    let mut hkm1 = 0.0_f64;
    let mut hk = PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * hk - (kf / (kf + 1.0)).sqrt() * hkm1;
        hkm1 = hk;
        hk = next;
    }
    (hk, hkm1)
}

fn refine_root(n: usize, lo: f64, hi: f64) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let (h, hm1) = hermite_ortho(n, x);
        let dh = (2.0 * n as f64).sqrt() * hm1;
        if dh == 0.0 {
            break;
        }
        let dx = h / dh;
        x -= dx;
        if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// Gauss-Legendre panels and adaptive bisection
// ---------------------------------------------------------------------------

fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0_f64;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn panel_rules() -> &'static ((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>)) {
    static RULES: OnceLock<((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>))> = OnceLock::new();
    RULES.get_or_init(|| (legendre_rule(20), legendre_rule(41)))
}

fn panel_pair<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let ((x20, w20), (x41, w41)) = panel_rules();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut lo = 0.0;
    for (&x, &w) in x20.iter().zip(w20) {
        lo += w * f(mid + half * x);
    }
    let mut hi = 0.0;
    for (&x, &w) in x41.iter().zip(w41) {
        hi += w * f(mid + half * x);
    }
    (half * lo, half * hi)
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Bisects until each panel's embedded error estimate fits its share of
/// `max(abs_tol, rel_tol * |I|)`, where `I` is a first-pass estimate of the
/// whole integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (_, first) = panel_pair(&f, a, b);
    let budget = abs_tol.max(rel_tol * first.abs()).max(f64::MIN_POSITIVE);
    let width = (b - a).abs();

    let mut total = 0.0;
    let mut stack = vec![(a, b)];
    let mut splits = 0usize;
    while let Some((x, y)) = stack.pop() {
        let (lo, hi) = panel_pair(&f, x, y);
        let share = budget * ((y - x).abs() / width);
        if (lo - hi).abs() <= share || (y - x).abs() <= 1e-14 * width || splits > 20_000 {
            total += hi;
        } else {
            let m = 0.5 * (x + y);
            splits += 1;
            stack.push((x, m));
            stack.push((m, y));
        }
    }
    total
}
