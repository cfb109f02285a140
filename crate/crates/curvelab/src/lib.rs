//! A desk-scale numerical laboratory for curves with affine arclength measure.
//!
//! The crate implements, for dimensions `d = 2..5`, the computable objects
//! behind a uniform Fourier extension-restriction estimate on *simple* curves
//! `γ(t) = (t, t²/2!, …, t^{d-1}/(d-1)!, φ(t))`:
//!
//! * [`curve`] — built-in curve families with closed-form derivatives, the
//!   affine density `ω^{2/(d²+d)}`, positivity validation, and the dyadic
//!   partition of the parameter interval by the values of `ω = φ^{(d)}`.
//! * [`kernel`] — the Jacobian of the `d`-fold sum map, the nonnegative
//!   Peano-type kernel `ψ` with `J = ∫ ω ψ` (two independent evaluation
//!   paths), and the step-function lower bound for `∫ f ψ`.
//! * [`permutohedron`] — exact rational geometry of the convex hull of the
//!   permutations of `(1, …, r)`: membership, constructive decomposition
//!   into permutation vertices, and the block-generator families.
//! * [`sublevel`] — the gap-product functional `W`, Monte-Carlo sublevel-set
//!   measures with power-law exponent fits, and the composite block bound.
//! * [`geometry`] — the Jacobian sublevel set, its weighted slice integral,
//!   the dyadic block decomposition, and block-level estimates.
//! * [`extension`] — the extension operator `(f dλ)^` by phase-adaptive
//!   oscillatory quadrature and finite-box restriction ratios.
//! * [`runner`] — reproducible experiment orchestration with JSON reports
//!   and CSV data files.
//!
//! All Monte-Carlo estimators follow one determinism contract: a fixed
//! `(seed, chunk size)` pair produces bit-identical results for any worker
//! count. See [`mc`].

pub mod curve;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod kernel;
pub mod mc;
pub mod oracle;
pub mod permutohedron;
pub mod quad;
pub mod runner;
pub mod sublevel;

pub use error::{LabError, Result};
