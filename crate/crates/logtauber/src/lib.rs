//! Computational tools for logarithmic (harmonic) summability on `[1, ∞)`.
//!
//! The crate works with locally integrable functions `s : [1, ∞) → ℝ or ℂ`
//! described as piecewise closed-form expressions, and makes the classical
//! objects of `(L,1)` summability theory computable:
//!
//! * the logarithmic mean `τ(t) = (1/log t) ∫₁ᵗ s(x)/x dx` ([`logmean`]),
//! * statistical limits at ∞ via exceptional-set densities ([`statlimit`]),
//! * slow-decrease / slow-oscillation moduli over windows `(x, x^λ]` and
//!   Landau/Hardy integrand conditions ([`tauber`]),
//! * quantitative growth lemmas with their explicit constants `B₁ = 2/log λ`
//!   and `B₂ = (B₁/λ)(log λ + loglog x₀ + 1)` ([`lemmas`]),
//! * an empirical harness that runs the Tauberian implications over a
//!   built-in corpus of test functions ([`harness`]).
//!
//! Core numerics are generic over the codomain scalar through [`Scalar`],
//! implemented for `f64` and `Complex64`; real-only operations (slow
//! decrease, the Landau check) are typed accordingly.

// `!(a > b)` deliberately rejects NaN where `a <= b` would let it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod func;
pub mod funcspec;
pub mod harness;
pub mod lemmas;
pub mod logmean;
pub mod quad;
pub mod scalar;
pub mod statlimit;
pub mod tauber;

pub use error::Error;
pub use func::PiecewiseFn;
pub use funcspec::{Codomain, FunctionSpec, Value};
pub use scalar::Scalar;

/// Real scalar type used throughout the crate.
pub type Real = f64;
pub use num_complex::Complex64;

/// Result alias over the crate error type.
pub type Result<T> = std::result::Result<T, Error>;

/// Shared numeric policy: default tolerances, horizons and grid densities.
///
/// Every tolerance used by an acceptance-facing operation is pinned here so
/// reports can echo the exact policy they ran under.
pub mod defaults {
    /// Absolute quadrature tolerance; downstream tolerances are stated
    /// relative to this.
    pub const ABS_TOL: f64 = 1e-9;
    /// Smallest mean-curve grid point (`log t = 1` avoids the `log t → 0`
    /// amplification near `t = 1`).
    pub const T_MIN: f64 = std::f64::consts::E;
    /// Exceptional-set density below which a tail is considered null.
    pub const DECAY_THRESHOLD: f64 = 0.02;
    /// Oscillation threshold for the ordinary-limit detector.
    pub const ORDINARY_TOL: f64 = 0.02;
    /// Default `ε` ladder for density profiles (decreasing).
    pub const EPSILONS: [f64; 3] = [1.0, 0.5, 0.1];
    /// Default horizons `b` for density profiles, as natural-log exponents.
    pub const HORIZON_EXPONENTS: [f64; 4] = [4.0, 8.0, 16.0, 32.0];
    /// Grid density for modulus scans, points per unit of `log log`.
    pub const GRID_DENSITY: f64 = 200.0;
    /// Finite stand-in for `liminf_{x→∞}`: scans run over `[X, X^Λ]` with
    /// `X = e^MODULUS_X_EXP` and `Λ = MODULUS_BRACKET`.
    pub const MODULUS_X_EXP: f64 = 32.0;
    pub const MODULUS_BRACKET: f64 = 4.0;
    /// λ schedule for window searches: `1 + 2⁻ᵏ`, largest first.
    pub const LAMBDA_SCHEDULE: [f64; 8] =
        [2.0, 1.5, 1.25, 1.125, 1.0625, 1.03125, 1.015625, 1.0078125];
    /// x₀ schedule for window searches, as natural-log exponents.
    pub const X0_EXPONENTS: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    /// Window evaluations allowed before `find_window` gives up.
    pub const SEARCH_BUDGET: usize = 64;
    /// Sample count for tail detectors (per decade / per search window).
    pub const DETECTOR_SAMPLES: usize = 10_000;
    /// Cap on enumerated piece breakpoints per query range.
    pub const BREAKPOINT_CAP: usize = 10_000;
    /// Cap on mandatory quadrature splits before giving up.
    pub const QUAD_SPLIT_CAP: usize = 200_000;
    /// Level-set refinement grid, points per unit of `log x` (and minimum
    /// per piece span).
    pub const MEASURE_GRID_PER_LOG: f64 = 128.0;
    pub const MEASURE_GRID_MIN: usize = 65;
    /// Monte Carlo sample count for the measure fallback.
    pub const MC_SAMPLES: usize = 1_000_000;
    /// Slack accepted on lemma bound margins (an order above quadrature
    /// noise at `ABS_TOL`).
    pub const MARGIN_TOL: f64 = 1e-7;
    /// Slack accepted when validating an ε-window at its horizon.
    pub const WINDOW_SLACK: f64 = 1e-9;
}
