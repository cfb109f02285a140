//! Gauss–Legendre quadrature: fixed rules, order refinement, and adaptive
//! panel bisection.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes (in `(-1, 1)`) and weights of an `n`-point Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn rule_cache() -> &'static Mutex<HashMap<usize, Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre polynomial value and derivative at `x` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The `n`-point Gauss–Legendre rule, cached across calls.
pub fn gauss_rule(n: usize) -> Arc<GaussRule> {
    assert!(n >= 1, "quadrature order must be positive");
    if let Some(r) = rule_cache().lock().unwrap().get(&n) {
        return Arc::clone(r);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    let rule = Arc::new(GaussRule { nodes, weights });
    rule_cache().lock().unwrap().insert(n, Arc::clone(&rule));
    rule
}

/// Fixed-order integral of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, order: usize) -> f64 {
    let rule = gauss_rule(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrate `f` over `[a, b]`, doubling the order from `order0` until two
/// successive values agree to `rel_tol` (relative to the larger magnitude).
pub fn integrate_refining<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    order0: usize,
    rel_tol: f64,
) -> f64 {
    let mut order = order0.max(2);
    let mut prev = integrate(&mut f, a, b, order);
    for _ in 0..6 {
        order *= 2;
        let next = integrate(&mut f, a, b, order);
        let scale = prev.abs().max(next.abs()).max(1e-300);
        if (next - prev).abs() <= rel_tol * scale {
            return next;
        }
        prev = next;
    }
    prev
}

/// Adaptive panel-bisection integral of `f` over `[a, b]`.
///
/// Each panel is accepted when its `order` and `2·order` values agree to the
/// panel's share of `tol` (absolute).
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    order: usize,
    tol: f64,
) -> f64 {
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol.max(1e-300), 0u32)];
    while let Some((lo, hi, ptol, depth)) = stack.pop() {
        let coarse = integrate(&mut f, lo, hi, order);
        let fine = integrate(&mut f, lo, hi, order * 2);
        if (fine - coarse).abs() <= ptol || depth >= 40 {
            total += fine;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, ptol * 0.5, depth + 1));
            stack.push((mid, hi, ptol * 0.5, depth + 1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        // order n is exact through degree 2n-1
        let val = integrate(|x| x.powi(7) - 3.0 * x.powi(4) + 2.0, -1.0, 2.0, 4);
        let exact = |x: f64| x.powi(8) / 8.0 - 3.0 * x.powi(5) / 5.0 + 2.0 * x;
        assert!((val - (exact(2.0) - exact(-1.0))).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let val = integrate_adaptive(|x: f64| (-100.0 * x * x).exp(), -5.0, 5.0, 8, 1e-12);
        let exact = (std::f64::consts::PI / 100.0).sqrt();
        assert!((val - exact).abs() < 1e-10, "got {val}, want {exact}");
    }

    #[test]
    fn refining_converges_on_smooth_integrand() {
        let val = integrate_refining(f64::sin, 0.0, std::f64::consts::PI, 4, 1e-12);
        assert!((val - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nodes_symmetric_and_weights_sum_to_two() {
        for n in [1usize, 2, 5, 16, 33, 64] {
            let r = gauss_rule(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "order {n}: weight sum {s}");
            for i in 0..n {
                assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() < 1e-13);
            }
        }
    }
}
