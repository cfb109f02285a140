//! The Jacobian of the `d`-fold sum map, the nonnegative kernel `ψ` with
//! `J = ∫ ω ψ`, and the step-function lower bound for `∫ f ψ`.
//!
//! `ψ(u; t_1, …, t_d)` is defined operationally by the recursion
//!
//! ```text
//! ψ(u; t_1, t_2) = χ_[t_1, t_2](u)
//! ψ(u; t_1, …, t_d) = ∫_{t_1}^{t_2} ⋯ ∫_{t_{d-1}}^{t_d} ψ(u; s_1, …, s_{d-1}) ds
//! ```
//!
//! and evaluated two independent ways: [`psi`] walks the recursion with
//! tensor Gauss–Legendre per level (panels split at `u`, where the only
//! non-smoothness sits, so the quadrature sees piecewise-polynomial data and
//! converges at once), and [`psi_fast`] evaluates the divided-difference
//! closed form of the same kernel. Their agreement is an acceptance test,
//! not an assumption.

use crate::curve::{factorial, CurveSpec};
use crate::error::{LabError, Result};
use crate::quad::{gauss_rule, integrate, integrate_refining};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest node count accepted by the recursive evaluator.
pub const MAX_RECURSION_NODES: usize = 6;

/// Relative node gap below which divided differences are refused.
pub const CONDITIONING_GAP: f64 = 1e-10;

/// Default per-level quadrature order for the recursion.
pub const DEFAULT_QUAD_ORDER: usize = 32;

/// Ordered parameters `t_1 ≤ … ≤ t_d` inside the domain of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTuple {
    nodes: Vec<f64>,
}

impl NodeTuple {
    pub fn new(spec: &CurveSpec, nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() != spec.dim {
            return Err(LabError::InvalidNodes(format!(
                "expected {} nodes, got {}",
                spec.dim,
                nodes.len()
            )));
        }
        if nodes.windows(2).any(|w| w[1] < w[0]) {
            return Err(LabError::InvalidNodes("nodes not sorted".into()));
        }
        for &t in &nodes {
            if !(t > spec.a && t < spec.b) {
                return Err(LabError::OutOfDomain {
                    t,
                    a: spec.a,
                    b: spec.b,
                });
            }
        }
        Ok(NodeTuple { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn strictly_increasing(&self) -> bool {
        self.nodes.windows(2).all(|w| w[1] > w[0])
    }

    fn require_strict(&self) -> Result<()> {
        if self.strictly_increasing() {
            Ok(())
        } else {
            Err(LabError::InvalidNodes(
                "nodes must be strictly increasing".into(),
            ))
        }
    }
}

/// Absolute Jacobian determinant of `(t_1, …, t_d) ↦ γ(t_1) + ⋯ + γ(t_d)`;
/// column `i` is `γ'(t_i)`. Symmetric under permutations of the arguments and
/// zero exactly when two arguments coincide.
pub fn jacobian_of(spec: &CurveSpec, ts: &[f64]) -> f64 {
    let d = spec.dim;
    debug_assert_eq!(ts.len(), d);
    for i in 0..d {
        for j in i + 1..d {
            if ts[i] == ts[j] {
                return 0.0;
            }
        }
    }
    let mut m = vec![0.0f64; d * d];
    for (col, &t) in ts.iter().enumerate() {
        let g = spec.gamma_prime(t);
        for row in 0..d {
            m[row * d + col] = g[row];
        }
    }
    det_abs(&mut m, d)
}

/// `|J|` for a validated node tuple.
pub fn jacobian(spec: &CurveSpec, nodes: &NodeTuple) -> f64 {
    jacobian_of(spec, nodes.nodes())
}

fn det_abs(m: &mut [f64], d: usize) -> f64 {
    let mut det = 1.0f64;
    for k in 0..d {
        let mut piv = k;
        for r in k + 1..d {
            if m[r * d + k].abs() > m[piv * d + k].abs() {
                piv = r;
            }
        }
        if m[piv * d + k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for c in 0..d {
                m.swap(k * d + c, piv * d + c);
            }
        }
        let pivot = m[k * d + k];
        det *= pivot;
        for r in k + 1..d {
            let f = m[r * d + k] / pivot;
            if f != 0.0 {
                for c in k..d {
                    m[r * d + c] -= f * m[k * d + c];
                }
            }
        }
    }
    det.abs()
}

/// `ψ(u; t_1, …, t_d)` by the level-by-level recursion.
///
/// Each level integrates the previous kernel over the box
/// `∏ (t_i, t_{i+1})` with a tensor Gauss–Legendre rule of order
/// `quad_order`, splitting every dimension at `u`. The cost grows
/// geometrically with the node count, hence the cap of
/// [`MAX_RECURSION_NODES`].
pub fn psi(spec: &CurveSpec, nodes: &NodeTuple, u: f64, quad_order: usize) -> Result<f64> {
    let _ = spec;
    nodes.require_strict()?;
    let m = nodes.nodes().len();
    if m > MAX_RECURSION_NODES {
        return Err(LabError::KernelCapability {
            got: m,
            max: MAX_RECURSION_NODES,
        });
    }
    Ok(psi_recursion(nodes.nodes(), u, quad_order.max(2)))
}

fn psi_recursion(nodes: &[f64], u: f64, order: usize) -> f64 {
    let m = nodes.len();
    if u < nodes[0] || u > nodes[m - 1] {
        return 0.0;
    }
    match m {
        2 => 1.0,
        3 => {
            // Exact value of the bottom double integral of the indicator:
            // |{s_1 ∈ (t_1, t_2): s_1 ≤ u}| · |{s_2 ∈ (t_2, t_3): s_2 ≥ u}|.
            let left = u.clamp(nodes[0], nodes[1]) - nodes[0];
            let right = nodes[2] - u.clamp(nodes[1], nodes[2]);
            left * right
        }
        _ => {
            let mut sample = Vec::with_capacity(m - 1);
            tensor_level(nodes, u, order, 0, &mut sample)
        }
    }
}

fn tensor_level(nodes: &[f64], u: f64, order: usize, dim: usize, sample: &mut Vec<f64>) -> f64 {
    if dim == nodes.len() - 1 {
        return psi_recursion(sample, u, order);
    }
    let (lo, hi) = (nodes[dim], nodes[dim + 1]);
    let mut segments = [(lo, hi), (f64::NAN, f64::NAN)];
    let mut n_seg = 1;
    if u > lo && u < hi {
        segments[0] = (lo, u);
        segments[1] = (u, hi);
        n_seg = 2;
    }
    let rule = gauss_rule(order);
    let mut acc = 0.0;
    for &(slo, shi) in segments.iter().take(n_seg) {
        let half = 0.5 * (shi - slo);
        if half <= 0.0 {
            continue;
        }
        let mid = 0.5 * (slo + shi);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            sample.push(mid + half * x);
            acc += w * half * tensor_level(nodes, u, order, dim + 1, sample);
            sample.pop();
        }
    }
    acc
}

/// `ψ(u; t_1, …, t_d)` by the divided-difference closed form:
///
/// ```text
/// ψ(u; t) = V(t) · [t_1, …, t_d](· - u)_+^{d-2} / ((d-2)! ∏_{k=0}^{d-2} k!)
/// ```
///
/// where `V` is the Vandermonde product and `[t_1, …, t_d]` the divided
/// difference over the nodes. Calibrated against [`psi`] by the acceptance
/// suite.
pub fn psi_fast(spec: &CurveSpec, nodes: &NodeTuple, u: f64) -> Result<f64> {
    let _ = spec;
    nodes.require_strict()?;
    let t = nodes.nodes();
    let d = t.len();
    let span = t[d - 1] - t[0];
    let min_gap = t.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if min_gap < CONDITIONING_GAP * span {
        return Err(LabError::IllConditioned {
            gap: min_gap / span,
        });
    }
    Ok(psi_divided_difference(t, u))
}

pub(crate) fn psi_divided_difference(t: &[f64], u: f64) -> f64 {
    let d = t.len();
    if u < t[0] || u > t[d - 1] {
        return 0.0;
    }
    if d == 2 {
        return 1.0;
    }
    let pow = (d - 2) as i32;
    // Triangular divided-difference table of (t_i - u)_+^{d-2}.
    let mut col: Vec<f64> = t
        .iter()
        .map(|&ti| {
            let x = ti - u;
            if x > 0.0 {
                x.powi(pow)
            } else {
                0.0
            }
        })
        .collect();
    for level in 1..d {
        for i in 0..d - level {
            col[i] = (col[i + 1] - col[i]) / (t[i + level] - t[i]);
        }
    }
    let dd = col[0];
    let mut vandermonde = 1.0;
    for i in 0..d {
        for j in i + 1..d {
            vandermonde *= t[j] - t[i];
        }
    }
    let mut norm = factorial(d - 2);
    for k in 0..=d - 2 {
        norm *= factorial(k);
    }
    (vandermonde * dd / norm).max(0.0)
}

/// Which kernel evaluation backs an `∫ ω ψ` quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelPath {
    /// The level-by-level recursion (exact closed forms through `d = 3`,
    /// tensor quadrature above).
    Recursion,
    /// The divided-difference closed form.
    DividedDifference,
}

/// `|J - ∫ ω ψ| / J` with the integral by node-panelled, order-doubling
/// Gauss–Legendre. The kernel path defaults to the recursion for `d ≤ 3` and
/// to divided differences above (where the recursion is cross-validated
/// separately and far more expensive).
pub fn kernel_identity_residual(
    spec: &CurveSpec,
    nodes: &NodeTuple,
    quad_order: usize,
) -> Result<f64> {
    let path = if spec.dim <= 3 {
        KernelPath::Recursion
    } else {
        KernelPath::DividedDifference
    };
    kernel_identity_residual_with(spec, nodes, quad_order, path)
}

pub fn kernel_identity_residual_with(
    spec: &CurveSpec,
    nodes: &NodeTuple,
    quad_order: usize,
    path: KernelPath,
) -> Result<f64> {
    spec.require_usable()?;
    let j = jacobian(spec, nodes);
    if j < 1e-300 {
        return Err(LabError::DegenerateInput(format!(
            "Jacobian {j:e} below 1e-300; nodes nearly coincide"
        )));
    }
    let t = nodes.nodes();
    let order = quad_order.max(2);
    let eval = |u: f64| -> f64 {
        match path {
            KernelPath::Recursion => psi_recursion(t, u, order),
            KernelPath::DividedDifference => psi_divided_difference(t, u),
        }
    };
    // ψ(·; t) is piecewise polynomial with breakpoints exactly at the nodes,
    // so integrate gap by gap.
    let mut integral = 0.0;
    for w in t.windows(2) {
        if w[1] > w[0] {
            integral += integrate_refining(
                |u| spec.omega_unchecked(u) * eval(u),
                w[0],
                w[1],
                order,
                1e-9,
            );
        }
    }
    Ok((j - integral).abs() / j)
}

/// The step function and exponent data of the kernel lower bound: intervals
/// `(α_i, β_i) ⊂ (t_i, t_{i+1})`, coefficients `c_i ≥ 0`, a distinguished
/// index `p` (which carries exponent `d-1`), and exponents
/// `{e_i : i ≠ p} = {1, …, d-2}`.
#[derive(Debug, Clone)]
pub struct IntervalWeights {
    pub intervals: Vec<(f64, f64)>,
    pub coeffs: Vec<f64>,
    /// 0-based distinguished index.
    pub distinguished: usize,
    /// `e_i` for every `i`; the entry at `distinguished` is ignored.
    pub exponents: Vec<u32>,
}

impl IntervalWeights {
    pub fn new(
        nodes: &NodeTuple,
        intervals: Vec<(f64, f64)>,
        coeffs: Vec<f64>,
        distinguished: usize,
        exponents: Vec<u32>,
    ) -> Result<Self> {
        let t = nodes.nodes();
        let d = t.len();
        let n = d - 1;
        if intervals.len() != n || coeffs.len() != n || exponents.len() != n {
            return Err(LabError::Precondition(format!(
                "need {n} intervals/coefficients/exponents for {d} nodes"
            )));
        }
        if distinguished >= n {
            return Err(LabError::Precondition(format!(
                "distinguished index {distinguished} out of range"
            )));
        }
        for (i, &(alpha, beta)) in intervals.iter().enumerate() {
            if !(t[i] <= alpha && alpha < beta && beta <= t[i + 1]) {
                return Err(LabError::Precondition(format!(
                    "interval {i} = ({alpha}, {beta}) not inside node gap ({}, {})",
                    t[i],
                    t[i + 1]
                )));
            }
        }
        if coeffs.iter().any(|&c| c < 0.0) {
            return Err(LabError::Precondition(
                "coefficients must be nonnegative".into(),
            ));
        }
        let mut rest: Vec<u32> = exponents
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != distinguished)
            .map(|(_, &e)| e)
            .collect();
        rest.sort_unstable();
        let want: Vec<u32> = (1..=(d as u32).saturating_sub(2)).collect();
        if rest != want {
            return Err(LabError::Precondition(format!(
                "exponents off the distinguished index must be a permutation of 1..={}, got {rest:?}",
                d - 2
            )));
        }
        Ok(IntervalWeights {
            intervals,
            coeffs,
            distinguished,
            exponents,
        })
    }

    pub fn gap(&self, i: usize) -> f64 {
        self.intervals[i].1 - self.intervals[i].0
    }
}

/// `(∫ f ψ) / (c_p Δ_p^{d-1} ∏_{i≠p} Δ_i^{e_i})` for the step function
/// `f = Σ c_i χ_{(α_i, β_i)}`. The lower-bound statement is that this ratio
/// is bounded below by a positive constant depending only on `d`.
pub fn lower_bound_ratio(
    spec: &CurveSpec,
    nodes: &NodeTuple,
    weights: &IntervalWeights,
    quad_order: usize,
) -> Result<f64> {
    nodes.require_strict()?;
    let d = nodes.nodes().len();
    let p = weights.distinguished;
    let mut rhs = weights.coeffs[p] * weights.gap(p).powi(d as i32 - 1);
    for i in 0..d - 1 {
        if i != p {
            rhs *= weights.gap(i).powi(weights.exponents[i] as i32);
        }
    }
    if rhs == 0.0 {
        return Err(LabError::DegenerateInput(
            "lower-bound denominator vanishes (zero coefficient or zero gap)".into(),
        ));
    }
    let t = nodes.nodes();
    let order = quad_order.max(4);
    let mut lhs = 0.0;
    for (i, &(alpha, beta)) in weights.intervals.iter().enumerate() {
        if weights.coeffs[i] == 0.0 {
            continue;
        }
        // (α, β) sits inside one node gap, so ψ is a single polynomial piece
        // there; one panel suffices.
        let _ = spec;
        lhs += weights.coeffs[i] * integrate(|u| psi_divided_difference(t, u), alpha, beta, order);
    }
    Ok(lhs / rhs)
}

/// One randomized admissible configuration for the lower-bound sweep.
fn random_lower_bound_config(
    d: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, Vec<(f64, f64)>, Vec<f64>, usize, Vec<u32>) {
    // Sorted nodes in (0, 1) with a minimum relative gap.
    let nodes = loop {
        let mut t: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let min_gap = t.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if min_gap > 1e-3 {
            break t;
        }
    };
    let mut intervals = Vec::with_capacity(d - 1);
    for w in nodes.windows(2) {
        let g = w[1] - w[0];
        let lo = w[0] + g * (0.02 + 0.5 * rng.gen::<f64>());
        let width = g * (0.02 + 0.43 * rng.gen::<f64>());
        intervals.push((lo, (lo + width).min(w[1] - 1e-9 * g)));
    }
    let coeffs: Vec<f64> = (0..d - 1)
        .map(|_| (0.1f64.ln() + rng.gen::<f64>() * 100f64.ln()).exp())
        .collect();
    let p = rng.gen_range(0..d - 1);
    let mut pool: Vec<u32> = (1..=(d as u32 - 2)).collect();
    // Fisher-Yates.
    for i in (1..pool.len()).rev() {
        let j = rng.gen_range(0..=i);
        pool.swap(i, j);
    }
    let mut exponents = vec![0u32; d - 1];
    let mut next = 0;
    for (i, e) in exponents.iter_mut().enumerate() {
        if i != p {
            *e = pool[next];
            next += 1;
        }
    }
    (nodes, intervals, coeffs, p, exponents)
}

/// Minimum lower-bound ratio over `count` random admissible configurations.
///
/// The kernel is scale-free, so configurations live on `(0, 1)`; the sweep is
/// chunked and deterministic in `(seed, chunk)` like every estimator here.
pub fn lower_bound_min_ratio(d: usize, count: u64, seed: u64, chunk_size: u64) -> Result<f64> {
    if d < 2 {
        return Err(LabError::Precondition("need d >= 2".into()));
    }
    let spec = CurveSpec::new(
        crate::curve::CurveFamily::Monomial { degree: d as u32 },
        d,
        -0.5,
        1.5,
    )?
    .with_degenerate(true);
    let chunk_size = chunk_size.max(1);
    let n_chunks = count.div_ceil(chunk_size);
    let mins: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = crate::mc::chunk_rng(seed, c);
            let lo = c * chunk_size;
            let hi = ((c + 1) * chunk_size).min(count);
            let mut min = f64::INFINITY;
            for _ in lo..hi {
                let (nodes, intervals, coeffs, p, exps) = random_lower_bound_config(d, &mut rng);
                let tuple = NodeTuple::new(&spec, nodes).expect("nodes in range");
                let w = IntervalWeights::new(&tuple, intervals, coeffs, p, exps)
                    .expect("admissible by construction");
                let ratio = lower_bound_ratio(&spec, &tuple, &w, 16).expect("nonzero denominator");
                if ratio < min {
                    min = ratio;
                }
            }
            min
        })
        .collect();
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}
