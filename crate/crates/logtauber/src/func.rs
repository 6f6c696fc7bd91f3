//! The function abstraction shared by every analysis operation.
//!
//! Downstream operations (means, level-set measures, moduli, lemma checks)
//! accept any [`PiecewiseFn`], not just parsed specs: primitives built from
//! cumulative quadrature and interpolated mean curves flow through the same
//! code paths.

use crate::defaults;
use crate::error::Error;
use crate::quad;
use crate::scalar::Scalar;
use crate::Result;

/// Largest `log x` for which `x` itself is representable as an `f64`.
pub const MAX_LOG_REPRESENTABLE: f64 = 709.0;

/// A piecewise-smooth function on `[1, ∞)` with enumerable breakpoints.
pub trait PiecewiseFn<S: Scalar>: Sync {
    fn eval(&self, x: f64) -> Result<S>;

    /// Evaluates at `x = e^у` given `u = log x`. The default materializes
    /// `x`; implementations backed by `log`/`loglog` expressions override
    /// this to stay exact (and defined) at astronomically large arguments.
    fn eval_at_log(&self, log_x: f64) -> Result<S> {
        if log_x > MAX_LOG_REPRESENTABLE {
            return Err(Error::Overflow { log_x });
        }
        self.eval(log_x.exp())
    }

    /// Ascending piece breakpoints strictly inside `(lo, hi)`, enumerated
    /// from `lo` upward, at most `cap` of them.
    fn breakpoints_within(&self, lo: f64, hi: f64, cap: usize) -> Vec<f64>;

    /// One-sided values `(left limit, right value)` at a breakpoint. The
    /// default is for continuous functions.
    fn one_sided(&self, x: f64) -> Result<(S, S)> {
        let v = self.eval(x)?;
        Ok((v, v))
    }

    /// `∫ₐᵇ f(x)/x dx` to absolute accuracy `abs_tol`, adaptively with
    /// mandatory splits at piece breakpoints. Implementations with an exact
    /// cumulative form may override.
    fn weighted_integral(&self, a: f64, b: f64, abs_tol: f64) -> Result<S> {
        weighted_integral_default(self, a, b, abs_tol)
    }

    /// Exact level-set fast path: Lebesgue measure of
    /// `{x ∈ (a,b) : |f(x) − ell| > eps}` when the implementation can
    /// produce it in closed form.
    fn level_measure_hint(&self, _ell: S, _eps: f64, _a: f64, _b: f64) -> Option<f64> {
        None
    }
}

pub(crate) fn weighted_integral_default<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<S> {
    if !(a >= 1.0 && b > a) {
        return Err(Error::Precondition(format!(
            "weighted integral needs 1 <= a < b, got a = {a}, b = {b}"
        )));
    }
    let cap = defaults::QUAD_SPLIT_CAP;
    let bps = f.breakpoints_within(a, b, cap);
    if bps.len() >= cap {
        return Err(Error::TooManyPieces { lo: a, hi: b, cap });
    }
    let splits: Vec<f64> = bps.iter().map(|&x| x.ln()).collect();
    quad::integrate_segmented(&|u| f.eval_at_log(u), a.ln(), b.ln(), &splits, abs_tol)
}

/// Plain `∫ₐᵇ f(u) du` (no kernel weight), used for primitives
/// `s(x) = ∫₁ˣ f(u) du`. Computed in `u = log x` coordinates with the
/// Jacobian `eᵘ`, so piece splits line up with the weighted machinery.
pub fn plain_integral<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<S> {
    if !(a >= 1.0 && b > a) {
        return Err(Error::Precondition(format!(
            "plain integral needs 1 <= a < b, got a = {a}, b = {b}"
        )));
    }
    let cap = defaults::QUAD_SPLIT_CAP;
    let bps = f.breakpoints_within(a, b, cap);
    if bps.len() >= cap {
        return Err(Error::TooManyPieces { lo: a, hi: b, cap });
    }
    let splits: Vec<f64> = bps.iter().map(|&x| x.ln()).collect();
    let g = |u: f64| {
        if u > MAX_LOG_REPRESENTABLE {
            return Err(Error::Overflow { log_x: u });
        }
        Ok(f.eval_at_log(u)? * u.exp())
    };
    quad::integrate_segmented(&g, a.ln(), b.ln(), &splits, abs_tol)
}

/// Ad-hoc [`PiecewiseFn`] from a log-domain closure plus known breakpoints.
/// Used for shifted/differenced integrands inside the lemma checks.
pub struct AdHocFn<S, E> {
    eval_log: E,
    breakpoints: Vec<f64>,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar, E: Fn(f64) -> Result<S> + Sync> AdHocFn<S, E> {
    /// `breakpoints` must be sorted ascending.
    pub fn new(eval_log: E, breakpoints: Vec<f64>) -> Self {
        AdHocFn {
            eval_log,
            breakpoints,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<S: Scalar, E: Fn(f64) -> Result<S> + Sync> PiecewiseFn<S> for AdHocFn<S, E> {
    fn eval(&self, x: f64) -> Result<S> {
        (self.eval_log)(x.ln())
    }
    fn eval_at_log(&self, log_x: f64) -> Result<S> {
        (self.eval_log)(log_x)
    }
    fn breakpoints_within(&self, lo: f64, hi: f64, cap: usize) -> Vec<f64> {
        self.breakpoints
            .iter()
            .copied()
            .filter(|&x| x > lo && x < hi)
            .take(cap)
            .collect()
    }
}

/// Shortest round-tripping decimal; exponential form outside a sane range.
/// Used by the DSL printer and the CSV emitters.
pub fn fmt_compact(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_finite() && v.abs() >= 1e-4 && v.abs() < 1e16 {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `n` points spaced uniformly in `log x` over `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` values of `log x` spaced uniformly in `log log x` over
/// `[log lo, log hi]` (both must exceed 1 so the double log exists).
pub fn loglog_grid_logs(log_lo: f64, log_hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2 && log_lo > 0.0 && log_hi > log_lo);
    let (a, b) = (log_lo.ln(), log_hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                log_hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_endpoints() {
        let g = log_grid(1.0, 100.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[10], 100.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn plain_integral_of_reciprocal_is_log() {
        struct Recip;
        impl PiecewiseFn<f64> for Recip {
            fn eval(&self, x: f64) -> Result<f64> {
                Ok(1.0 / x)
            }
            fn breakpoints_within(&self, _: f64, _: f64, _: usize) -> Vec<f64> {
                Vec::new()
            }
        }
        let v = plain_integral(&Recip, 1.0, std::f64::consts::E.powi(2), 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }
}
