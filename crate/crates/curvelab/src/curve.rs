//! Simple curves, their affine arclength density, positivity validation, and
//! the dyadic partition of the parameter interval by the values of
//! `ω = φ^{(d)}`.
//!
//! A curve is `γ(t) = (t, t²/2!, …, t^{d-1}/(d-1)!, φ(t))` on an interval
//! `(a, b)`; the hypotheses require `φ^{(j)} > 0` on `(a, b)` for every
//! `j = 0..=d+2`. Families are a closed registry with closed-form `j`-th
//! derivatives: numerical differentiation would be far too noisy for the
//! kernel identity checks downstream.

use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

/// Factorial as f64 (exact through 22!).
pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Closed registry of curve families.
///
/// * `Monomial { degree: N }` — `φ(t) = t^N / N!`. The case `N = d` has
///   `ω ≡ 1` and violates the strict hypothesis `φ^{(d+1)} > 0`; it is the
///   cleanest analytic oracle and is admitted only through the degenerate
///   flag on [`CurveSpec`].
/// * `Exponential` — `φ(t) = e^t`.
/// * `Flat` — `φ(t) = e^{-1/t}` on `t > 0`, with
///   `φ^{(j)}(t) = P_j(1/t) e^{-1/t}` and `P_{j+1}(x) = x²(P_j(x) - P_j'(x))`.
///   Higher derivatives change sign, so only sub-windows of `t > 0` validate.
/// * `Scaled { factor: c }` — `φ = c · φ_inner`, `c > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CurveFamily {
    Monomial { degree: u32 },
    Exponential,
    Flat,
    Scaled { factor: f64, inner: Box<CurveFamily> },
}

/// Coefficients of `P_j` for the flat family, lowest power first.
/// `P_0 = 1`, `P_{j+1}(x) = x²(P_j(x) - P_j'(x))`.
fn flat_poly(j: usize) -> Vec<f64> {
    let mut p: Vec<i128> = vec![1];
    for _ in 0..j {
        // q(x) = p(x) - p'(x), then shift by x².
        let mut q = vec![0i128; p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            q[k] += c;
            if k >= 1 {
                q[k - 1] -= c * k as i128;
            }
        }
        let mut next = vec![0i128; q.len() + 2];
        for (k, &c) in q.iter().enumerate() {
            next[k + 2] = c;
        }
        while next.last() == Some(&0) {
            next.pop();
        }
        p = next;
    }
    p.into_iter().map(|c| c as f64).collect()
}

impl CurveFamily {
    /// `φ^{(j)}(t)`.
    pub fn derivative(&self, j: usize, t: f64) -> f64 {
        match self {
            CurveFamily::Monomial { degree } => {
                let n = *degree as usize;
                if j > n {
                    0.0
                } else {
                    t.powi((n - j) as i32) / factorial(n - j)
                }
            }
            CurveFamily::Exponential => t.exp(),
            CurveFamily::Flat => {
                if t <= 0.0 {
                    return f64::NAN;
                }
                let x = 1.0 / t;
                let coeffs = flat_poly(j);
                let mut val = 0.0;
                for &c in coeffs.iter().rev() {
                    val = val * x + c;
                }
                val * (-x).exp()
            }
            CurveFamily::Scaled { factor, inner } => factor * inner.derivative(j, t),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CurveFamily::Monomial { degree } => format!("monomial({degree})"),
            CurveFamily::Exponential => "exponential".into(),
            CurveFamily::Flat => "flat".into(),
            CurveFamily::Scaled { factor, inner } => format!("scaled({factor}, {})", inner.label()),
        }
    }
}

/// A simple curve on `(a, b)` in dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub family: CurveFamily,
    pub dim: usize,
    pub a: f64,
    pub b: f64,
    /// Admit curves that fail the strict positivity validation (for example
    /// the moment curve `φ = t^d/d!`, which has `ω ≡ 1`).
    #[serde(default)]
    pub allow_degenerate: bool,
}

/// Outcome of the grid-based positivity validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub grid_size: usize,
    /// First `(derivative order, t)` where a sample was not strictly positive.
    pub first_violation: Option<(usize, f64)>,
    /// Minimum sampled value per derivative order `0..=d+2`.
    pub min_per_order: Vec<f64>,
}

impl CurveSpec {
    pub fn new(family: CurveFamily, dim: usize, a: f64, b: f64) -> Result<Self> {
        if dim < 2 {
            return Err(LabError::InvalidCurve(format!("dimension {dim} < 2")));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(LabError::InvalidCurve(format!(
                "invalid interval ({a}, {b})"
            )));
        }
        if let Some(bad) = scale_factor_invalid(&family) {
            return Err(LabError::InvalidCurve(format!(
                "scale factor must be positive and finite, got {bad}"
            )));
        }
        if let CurveFamily::Monomial { degree } = base_family(&family) {
            if (*degree as usize) < dim {
                return Err(LabError::InvalidCurve(format!(
                    "monomial degree {degree} below dimension {dim}: omega vanishes identically"
                )));
            }
        }
        Ok(CurveSpec {
            family,
            dim,
            a,
            b,
            allow_degenerate: false,
        })
    }

    pub fn with_degenerate(mut self, allow: bool) -> Self {
        self.allow_degenerate = allow;
        self
    }

    fn contains(&self, t: f64) -> bool {
        t > self.a && t < self.b
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(LabError::OutOfDomain {
                t,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// `φ^{(j)}(t)` without a domain check.
    pub fn phi_derivative(&self, j: usize, t: f64) -> f64 {
        self.family.derivative(j, t)
    }

    /// `ω(t) = φ^{(d)}(t)`.
    pub fn omega(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.omega_unchecked(t))
    }

    pub fn omega_unchecked(&self, t: f64) -> f64 {
        self.family.derivative(self.dim, t)
    }

    /// `γ(t)` as a `d`-vector.
    pub fn gamma(&self, t: f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim);
        for k in 1..self.dim {
            v.push(t.powi(k as i32) / factorial(k));
        }
        v.push(self.family.derivative(0, t));
        v
    }

    /// `γ'(t) = (1, t, t²/2!, …, t^{d-2}/(d-2)!, φ'(t))`.
    pub fn gamma_prime(&self, t: f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim);
        for k in 0..self.dim - 1 {
            v.push(t.powi(k as i32) / factorial(k));
        }
        v.push(self.family.derivative(1, t));
        v
    }

    /// Validation grid over `(a, b)`: uniform midpoints, or log-spaced towards
    /// the left endpoint when `a = 0` is a limit point of the family's domain.
    pub fn validation_grid(&self, grid_size: usize) -> Vec<f64> {
        let n = grid_size.max(2);
        let span = self.b - self.a;
        let log_spaced = self.a == 0.0;
        (0..n)
            .map(|k| {
                let u = (k as f64 + 0.5) / n as f64;
                if log_spaced {
                    // Geometric spacing from span·1e-9 up to b.
                    self.a + span * 10f64.powf(-9.0 * (1.0 - u))
                } else {
                    self.a + span * u
                }
            })
            .collect()
    }

    /// Grid-based strict positivity check of `φ^{(j)}` for `j = 0..=d+2`.
    pub fn validate(&self, grid_size: usize) -> Result<ValidationReport> {
        if grid_size < 2 {
            return Err(LabError::Precondition(format!(
                "validation grid size {grid_size} < 2"
            )));
        }
        let grid = self.validation_grid(grid_size);
        let orders = self.dim + 2;
        let mut min_per_order = vec![f64::INFINITY; orders + 1];
        let mut first_violation: Option<(usize, f64)> = None;
        for j in 0..=orders {
            for &t in &grid {
                let v = self.family.derivative(j, t);
                if !v.is_finite() {
                    return Err(LabError::NonFinite { order: j, t });
                }
                if v < min_per_order[j] {
                    min_per_order[j] = v;
                }
                if v <= 0.0 && first_violation.is_none() {
                    first_violation = Some((j, t));
                }
            }
            if first_violation.is_some() {
                break;
            }
        }
        Ok(ValidationReport {
            pass: first_violation.is_none(),
            grid_size,
            first_violation,
            min_per_order,
        })
    }

    /// Require the curve to be usable: validated on the default grid, or
    /// explicitly marked degenerate.
    pub fn require_usable(&self) -> Result<()> {
        if self.allow_degenerate {
            return Ok(());
        }
        let report = self.validate(DEFAULT_VALIDATION_GRID)?;
        match report.first_violation {
            None => Ok(()),
            Some((order, t)) => Err(LabError::NotValidated {
                order,
                t,
                value: self.family.derivative(order, t),
            }),
        }
    }
}

pub const DEFAULT_VALIDATION_GRID: usize = 1024;

/// Default relative bisection tolerance for dyadic breakpoints.
pub const DEFAULT_BISECTION_TOL: f64 = 1e-12;

/// The measure `dλ = ω(t)^{2/(d²+d)} dt` on a curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineMeasure {
    pub curve: CurveSpec,
    /// `2/(d²+d)`, stored for clarity.
    pub exponent: f64,
}

impl AffineMeasure {
    pub fn new(curve: CurveSpec) -> Self {
        let d = curve.dim as f64;
        let exponent = 2.0 / (d * d + d);
        AffineMeasure { curve, exponent }
    }

    /// Density `ω(t)^{2/(d²+d)}`.
    pub fn density(&self, t: f64) -> Result<f64> {
        let w = self.curve.omega(t)?;
        Ok(w.powf(self.exponent))
    }

    pub fn density_unchecked(&self, t: f64) -> f64 {
        self.curve.omega_unchecked(t).powf(self.exponent)
    }
}

/// The partition of `(a, b)` at the points where `ω` crosses powers of two.
///
/// Intervals are labelled by an integer level `j` with `ω ∈ [2^j, 2^{j+1})`
/// on the interior interval `I_j = [a_j, a_{j+1})`. The extreme intervals
/// absorb the endpoints: the lowest label's left breakpoint is `a` and the
/// highest label's right breakpoint is `b`. All intervals are half-open on
/// the right.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DyadicPartition {
    /// Label of the first interval.
    pub level_lo: i32,
    /// `breakpoints[i]` is the left endpoint of the interval with label
    /// `level_lo + i`; the final entry is `b`.
    pub breakpoints: Vec<f64>,
    /// Attained dyadic levels `j` (those with an interior breakpoint
    /// `ω(a_j) = 2^j`), if any.
    pub attained: Option<(i32, i32)>,
    pub tol: f64,
    pub a: f64,
    pub b: f64,
}

impl DyadicPartition {
    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Label of the last interval.
    pub fn level_hi(&self) -> i32 {
        self.level_lo + self.len() as i32 - 1
    }

    /// Interval `I_j = [a_j, a_{j+1})`.
    pub fn interval(&self, j: i32) -> Option<(f64, f64)> {
        let idx = j.checked_sub(self.level_lo)? as usize;
        if idx + 1 < self.breakpoints.len() {
            Some((self.breakpoints[idx], self.breakpoints[idx + 1]))
        } else {
            None
        }
    }

    /// Left breakpoint `a_j` of the interval with label `j`. For attained
    /// levels this satisfies `ω(a_j) = 2^j` up to the bisection tolerance.
    pub fn breakpoint(&self, j: i32) -> Option<f64> {
        let idx = j.checked_sub(self.level_lo)? as usize;
        self.breakpoints.get(idx).copied()
    }

    /// Label of the interval containing `t`.
    pub fn level_of(&self, t: f64) -> Result<i32> {
        if t < self.a || t >= self.b {
            return Err(LabError::OutOfDomain {
                t,
                a: self.a,
                b: self.b,
            });
        }
        let idx = match self
            .breakpoints
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok(self.level_lo + idx.min(self.len() - 1) as i32)
    }
}

/// Partition `(a, b)` at the parameters where `ω` equals a power of two.
///
/// Breakpoints are found by bisection of `ω(t) = 2^j` to absolute parameter
/// tolerance `tol · (b - a)`; `ω` must be strictly increasing (guaranteed for
/// validated curves).
pub fn dyadic_partition(spec: &CurveSpec, tol: f64) -> Result<DyadicPartition> {
    if tol <= 0.0 {
        return Err(LabError::Precondition(format!(
            "bisection tolerance {tol} must be positive"
        )));
    }
    spec.require_usable()?;
    let span = spec.b - spec.a;
    let eps = span * 1e-9;
    let w_lo = spec.omega_unchecked(spec.a + eps);
    let w_hi = spec.omega_unchecked(spec.b - eps);
    if !(w_lo.is_finite() && w_hi.is_finite() && w_lo > 0.0) {
        return Err(LabError::NonMonotone(format!(
            "omega not positive and finite near the endpoints (omega(a+) = {w_lo}, omega(b-) = {w_hi})"
        )));
    }
    if w_lo >= w_hi {
        return Err(LabError::NonMonotone(format!(
            "omega(a+) = {w_lo} >= omega(b-) = {w_hi}"
        )));
    }

    // Attained levels: j with w_lo < 2^j < w_hi.
    let j_min_att = (w_lo.log2().floor() as i32) + 1;
    let j_max_att = {
        let c = w_hi.log2().ceil() as i32 - 1;
        c
    };
    let attained: Vec<i32> = (j_min_att..=j_max_att)
        .filter(|&j| {
            let v = (j as f64).exp2();
            v > w_lo && v < w_hi
        })
        .collect();

    if attained.is_empty() {
        // omega stays inside one dyadic band: a single interval.
        let mid = spec.omega_unchecked(spec.a + 0.5 * span);
        let label = mid.log2().floor() as i32;
        return Ok(DyadicPartition {
            level_lo: label,
            breakpoints: vec![spec.a, spec.b],
            attained: None,
            tol,
            a: spec.a,
            b: spec.b,
        });
    }

    let abs_tol = tol * span;
    let mut breakpoints = Vec::with_capacity(attained.len() + 2);
    breakpoints.push(spec.a);
    let mut prev_root = spec.a;
    for &j in &attained {
        let target = (j as f64).exp2();
        let root = bisect_omega(spec, target, prev_root.max(spec.a + eps), spec.b - eps, abs_tol)?;
        if root <= prev_root {
            return Err(LabError::NonMonotone(format!(
                "breakpoints out of order at level {j}"
            )));
        }
        breakpoints.push(root);
        prev_root = root;
    }
    breakpoints.push(spec.b);

    Ok(DyadicPartition {
        level_lo: attained[0] - 1,
        breakpoints,
        attained: Some((attained[0], *attained.last().unwrap())),
        tol,
        a: spec.a,
        b: spec.b,
    })
}

fn bisect_omega(spec: &CurveSpec, target: f64, lo0: f64, hi0: f64, abs_tol: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = hi0;
    let f_lo = spec.omega_unchecked(lo) - target;
    let f_hi = spec.omega_unchecked(hi) - target;
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(LabError::NonMonotone(format!(
            "no sign change for omega = {target} on [{lo}, {hi}]"
        )));
    }
    let mut prev_mid = f64::NAN;
    while hi - lo > abs_tol {
        let mid = 0.5 * (lo + hi);
        if mid == prev_mid {
            break;
        }
        prev_mid = mid;
        let fm = spec.omega_unchecked(mid) - target;
        if !fm.is_finite() {
            return Err(LabError::NonFinite {
                order: spec.dim,
                t: mid,
            });
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn base_family(f: &CurveFamily) -> &CurveFamily {
    match f {
        CurveFamily::Scaled { inner, .. } => base_family(inner),
        other => other,
    }
}

fn scale_factor_invalid(f: &CurveFamily) -> Option<f64> {
    match f {
        CurveFamily::Scaled { factor, inner } => {
            if !(factor.is_finite() && *factor > 0.0) {
                Some(*factor)
            } else {
                scale_factor_invalid(inner)
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomial(n: u32, d: usize, a: f64, b: f64) -> CurveSpec {
        CurveSpec::new(CurveFamily::Monomial { degree: n }, d, a, b).unwrap()
    }

    #[test]
    fn monomial_n5_d3_validates() {
        let c = monomial(5, 3, 0.1, 2.0);
        let r = c.validate(256).unwrap();
        assert!(r.pass, "violation: {:?}", r.first_violation);
    }

    #[test]
    fn moment_curve_fails_at_order_d_plus_one() {
        let c = monomial(3, 3, 0.1, 2.0);
        let r = c.validate(256).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_violation.unwrap().0, 4);
    }

    #[test]
    fn flat_d2_wide_window_fails_but_narrow_window_passes() {
        // The fourth derivative of e^{-1/t} changes sign near t ≈ 0.129, so
        // (0.05, 0.2) is rejected while (0.05, 0.12) validates.
        let wide = CurveSpec::new(CurveFamily::Flat, 2, 0.05, 0.2).unwrap();
        let r = wide.validate(1024).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_violation.unwrap().0, 4);

        let narrow = CurveSpec::new(CurveFamily::Flat, 2, 0.05, 0.12).unwrap();
        assert!(narrow.validate(1024).unwrap().pass);
    }

    #[test]
    fn flat_poly_matches_hand_expansion() {
        // P_2 = x⁴ - 2x³, P_3 = x⁶ - 6x⁵ + 6x⁴.
        assert_eq!(flat_poly(2), vec![0.0, 0.0, 0.0, -2.0, 1.0]);
        assert_eq!(flat_poly(3), vec![0.0, 0.0, 0.0, 0.0, 6.0, -6.0, 1.0]);
    }

    #[test]
    fn omega_closed_forms() {
        let c = monomial(5, 3, 0.1, 2.0);
        assert!((c.omega(1.0).unwrap() - 0.5).abs() < 1e-15);

        let e = CurveSpec::new(CurveFamily::Exponential, 4, 0.0, 2.0).unwrap();
        assert!((e.omega(0.7).unwrap() - 0.7f64.exp()).abs() < 1e-15);

        let s = CurveSpec::new(
            CurveFamily::Scaled {
                factor: 4.0,
                inner: Box::new(CurveFamily::Exponential),
            },
            2,
            -1.0,
            1.0,
        )
        .unwrap();
        assert!((s.omega(0.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn omega_domain_error() {
        let c = monomial(5, 3, 0.1, 2.0);
        assert!(matches!(c.omega(2.5), Err(LabError::OutOfDomain { .. })));
    }

    #[test]
    fn affine_density_values() {
        // d = 2: exponent 1/3; omega = 8 at t = ln 8 on the exponential curve.
        let e2 = AffineMeasure::new(CurveSpec::new(CurveFamily::Exponential, 2, 0.0, 4.0).unwrap());
        assert!((e2.exponent - 1.0 / 3.0).abs() < 1e-15);
        assert!((e2.density(8f64.ln()).unwrap() - 2.0).abs() < 1e-12);

        // d = 3: exponent 1/6; omega = 64 at t = ln 64.
        let e3 = AffineMeasure::new(CurveSpec::new(CurveFamily::Exponential, 3, 0.0, 5.0).unwrap());
        assert!((e3.exponent - 1.0 / 6.0).abs() < 1e-15);
        assert!((e3.density(64f64.ln()).unwrap() - 2.0).abs() < 1e-12);

        // Degenerate moment-curve hook: omega ≡ 1 so the density is 1.
        let m = monomial(3, 3, 0.1, 2.0).with_degenerate(true);
        let mm = AffineMeasure::new(m);
        assert!((mm.density(1.3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partition_of_exponential_matches_closed_form() {
        let c = CurveSpec::new(CurveFamily::Exponential, 2, 0.0, 8f64.ln()).unwrap();
        let p = dyadic_partition(&c, 1e-12).unwrap();
        // omega = e^t on (0, ln 8): attained dyadic values 2 and 4, plus the
        // boundary labels; breakpoints at j·ln2.
        assert_eq!(p.attained, Some((1, 2)));
        assert_eq!(p.level_lo, 0);
        assert_eq!(p.len(), 3);
        let ln2 = std::f64::consts::LN_2;
        assert!((p.breakpoint(1).unwrap() - ln2).abs() < 1e-9);
        assert!((p.breakpoint(2).unwrap() - 2.0 * ln2).abs() < 1e-9);
        assert_eq!(p.breakpoint(0).unwrap(), 0.0);
        // Equal gaps: the doubling inequality holds with factor 1.
        let g1 = p.breakpoint(1).unwrap() - p.breakpoint(0).unwrap();
        let g2 = p.breakpoint(2).unwrap() - p.breakpoint(1).unwrap();
        assert!(g2 <= 2.0 * g1 + 4.0 * 1e-12 * 8f64.ln());
        assert_eq!(p.level_of(0.1).unwrap(), 0);
        assert_eq!(p.level_of(1.0).unwrap(), 1);
    }

    #[test]
    fn partition_single_band_is_one_interval() {
        // omega = e^t on (ln 33, ln 63) stays inside [2^5, 2^6).
        let c = CurveSpec::new(CurveFamily::Exponential, 2, 33f64.ln(), 63f64.ln()).unwrap();
        let p = dyadic_partition(&c, 1e-12).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.level_lo, 5);
        assert_eq!(p.attained, None);
    }

    #[test]
    fn partition_tiles_the_interval() {
        for (fam, d, a, b) in [
            (CurveFamily::Exponential, 3, 0.0, 5.0),
            (CurveFamily::Monomial { degree: 6 }, 3, 0.2, 3.0),
            (CurveFamily::Flat, 2, 0.05, 0.12),
        ] {
            let c = CurveSpec::new(fam, d, a, b).unwrap();
            let p = dyadic_partition(&c, 1e-12).unwrap();
            let total: f64 = (0..p.len())
                .map(|i| p.breakpoints[i + 1] - p.breakpoints[i])
                .sum();
            assert!(
                (total - (b - a)).abs() <= (p.len() as f64 + 2.0) * 1e-12 * (b - a),
                "tiling defect for {}",
                c.family.label()
            );
            // Level bands: omega within [2^j, 2^{j+1}) at interval midpoints.
            for i in 0..p.len() {
                let j = p.level_lo + i as i32;
                let mid = 0.5 * (p.breakpoints[i] + p.breakpoints[i + 1]);
                let w = c.omega_unchecked(mid);
                assert!(w >= (j as f64).exp2() * (1.0 - 1e-9) || i == 0);
                assert!(w < ((j + 1) as f64).exp2() * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn scaled_omega_is_exact_multiple() {
        let inner = CurveSpec::new(CurveFamily::Exponential, 3, 0.1, 2.0).unwrap();
        let scaled = CurveSpec::new(
            CurveFamily::Scaled {
                factor: 3.0,
                inner: Box::new(CurveFamily::Exponential),
            },
            3,
            0.1,
            2.0,
        )
        .unwrap();
        for t in [0.2, 0.9, 1.7] {
            assert_eq!(
                scaled.omega_unchecked(t),
                3.0 * inner.omega_unchecked(t),
                "scaling must be exact"
            );
        }
    }

    #[test]
    fn degenerate_flag_gates_partition() {
        let m = monomial(3, 3, 0.1, 2.0);
        assert!(matches!(
            dyadic_partition(&m, 1e-12),
            Err(LabError::NotValidated { .. })
        ));
        // Even with the flag, omega ≡ 1 is not strictly increasing, so the
        // partition still refuses it — but with the monotonicity error.
        let md = m.with_degenerate(true);
        assert!(matches!(
            dyadic_partition(&md, 1e-12),
            Err(LabError::NonMonotone(..))
        ));
    }
}
