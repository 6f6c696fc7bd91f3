//! The logarithmic mean `τ(t) = (1/log t) ∫₁ᵗ s(x)/x dx` and the cumulative
//! kernel integrals every downstream module shares.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::func::{loglog_grid_logs, PiecewiseFn};
use crate::scalar::Scalar;
use crate::Result;

/// `∫ₐᵇ s(x)/x dx` to absolute accuracy `abs_tol`, splitting at every piece
/// breakpoint inside `(a, b)`.
pub fn integrate_weighted<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<S> {
    f.weighted_integral(a, b, abs_tol)
}

/// `τ(t)`, accurate to `abs_tol` (the kernel integral is computed to
/// `abs_tol · log t`).
pub fn log_mean<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    t: f64,
    abs_tol: f64,
) -> Result<S> {
    if !(t > 1.0) {
        return Err(Error::Precondition(format!("log mean needs t > 1, got {t}")));
    }
    let log_t = t.ln();
    Ok(f.weighted_integral(1.0, t, abs_tol * log_t)? * (1.0 / log_t))
}

/// Memoized partial kernel integrals `∫₁^{bᵢ} s(x)/x dx` at increasing
/// breakpoints. Consecutive differences agree with a direct quadrature of
/// the gap to within `2 · abs_tol`.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral<S> {
    pub breakpoints: Vec<f64>,
    pub partial_values: Vec<S>,
    pub abs_tol: f64,
}

/// Builds a [`CumulativeIntegral`] over the given increasing breakpoints
/// (all `> 1`). The error budget is distributed proportionally to length in
/// `log x`, so every partial is accurate to `abs_tol · (log bᵢ / log b_last)`.
pub fn cumulative_integral<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    breakpoints: &[f64],
    abs_tol: f64,
) -> Result<CumulativeIntegral<S>> {
    if breakpoints.is_empty() {
        return Err(Error::Precondition("no breakpoints".into()));
    }
    if !breakpoints.windows(2).all(|w| w[0] < w[1]) || breakpoints[0] <= 1.0 {
        return Err(Error::Precondition(
            "breakpoints must be strictly increasing and > 1".into(),
        ));
    }
    let total_log = breakpoints.last().unwrap().ln();
    let mut bounds = Vec::with_capacity(breakpoints.len() + 1);
    bounds.push(1.0);
    bounds.extend_from_slice(breakpoints);

    // segment integrals in parallel, then a sequential prefix sum
    let segments: Vec<S> = bounds
        .par_windows(2)
        .map(|w| {
            let tol = abs_tol * ((w[1].ln() - w[0].ln()) / total_log).max(1e-6);
            f.weighted_integral(w[0], w[1], tol)
        })
        .collect::<Result<Vec<S>>>()?;

    let mut partial_values = Vec::with_capacity(segments.len());
    let mut acc = S::zero();
    for s in segments {
        acc = acc + s;
        partial_values.push(acc);
    }
    Ok(CumulativeIntegral { breakpoints: breakpoints.to_vec(), partial_values, abs_tol })
}

/// `τ` sampled on a grid uniform in `log log t`.
#[derive(Debug, Clone)]
pub struct MeanCurve<S> {
    /// Strictly increasing grid of `t` values, each `> 1`.
    pub grid: Vec<f64>,
    pub log_grid: Vec<f64>,
    pub tau: Vec<S>,
    pub abs_tol: f64,
}

/// Samples `τ` on `n_points` log-log-spaced points of `[t_min, t_max]`.
/// One pass over `[1, t_max]`: the kernel integral is accumulated through a
/// [`CumulativeIntegral`] over the grid.
pub fn mean_curve<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    t_min: f64,
    t_max: f64,
    n_points: usize,
    abs_tol: f64,
) -> Result<MeanCurve<S>> {
    if !(t_min > 1.0 && t_max > t_min) {
        return Err(Error::Precondition(format!(
            "mean curve needs 1 < t_min < t_max, got {t_min}, {t_max}"
        )));
    }
    if n_points < 2 {
        return Err(Error::Precondition("mean curve needs n_points >= 2".into()));
    }
    let log_grid = loglog_grid_logs(t_min.ln(), t_max.ln(), n_points);
    let grid: Vec<f64> = log_grid.iter().map(|&u| u.exp()).collect();
    let cum = cumulative_integral(f, &grid, abs_tol * t_max.ln())?;
    let tau: Vec<S> = cum
        .partial_values
        .iter()
        .zip(&log_grid)
        .map(|(&c, &u)| c * (1.0 / u))
        .collect();
    Ok(MeanCurve { grid, log_grid, tau, abs_tol })
}

impl<S: Scalar> MeanCurve<S> {
    /// CSV with columns `t,log_t,loglog_t,tau_re,tau_im`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        use crate::func::fmt_compact as fc;
        writeln!(w, "t,log_t,loglog_t,tau_re,tau_im")?;
        for ((&t, &u), &tau) in self.grid.iter().zip(&self.log_grid).zip(&self.tau) {
            writeln!(w, "{},{},{},{},{}", fc(t), fc(u), fc(u.ln()), fc(tau.re()), fc(tau.im()))?;
        }
        Ok(())
    }

    /// The curve as a function of `t`: piecewise linear in `log log t`,
    /// constant left of the first knot. See [`TauInterpolant`].
    pub fn interpolant(&self) -> TauInterpolant<S> {
        let knots_v: Vec<f64> = self.log_grid.iter().map(|&u| u.ln()).collect();
        // crude second-difference bound on the interpolation error
        let mut err: f64 = 0.0;
        for i in 1..self.tau.len() - 1 {
            let d = (self.tau[i - 1] - self.tau[i] * 2.0 + self.tau[i + 1]).modulus();
            err = err.max(d / 8.0);
        }
        TauInterpolant {
            knots_t: self.grid.clone(),
            knots_v,
            values: self.tau.clone(),
            interp_error_estimate: err,
        }
    }
}

/// A sampled `τ` curve regarded as a function of `t`, linear in
/// `v = log log t` between knots and extended by its endpoint values
/// outside the sampled range.
#[derive(Debug, Clone)]
pub struct TauInterpolant<S> {
    pub knots_t: Vec<f64>,
    knots_v: Vec<f64>,
    pub values: Vec<S>,
    /// Max-norm estimate of the interpolation error from second differences.
    pub interp_error_estimate: f64,
}

impl<S: Scalar> TauInterpolant<S> {
    pub fn t_max(&self) -> f64 {
        *self.knots_t.last().unwrap()
    }

    fn eval_v(&self, v: f64) -> S {
        let n = self.knots_v.len();
        if v <= self.knots_v[0] {
            return self.values[0];
        }
        if v >= self.knots_v[n - 1] {
            return self.values[n - 1];
        }
        let idx = self.knots_v.partition_point(|&k| k <= v);
        let (v0, v1) = (self.knots_v[idx - 1], self.knots_v[idx]);
        let w = (v - v0) / (v1 - v0);
        self.values[idx - 1] * (1.0 - w) + self.values[idx] * w
    }
}

impl<S: Scalar> PiecewiseFn<S> for TauInterpolant<S> {
    fn eval(&self, t: f64) -> Result<S> {
        if !(t >= 1.0) {
            return Err(Error::Precondition(format!("tau interpolant needs t >= 1, got {t}")));
        }
        if t <= self.knots_t[0] {
            return Ok(self.values[0]);
        }
        Ok(self.eval_v(t.ln().ln()))
    }

    fn eval_at_log(&self, log_t: f64) -> Result<S> {
        if log_t <= self.knots_t[0].ln() {
            return Ok(self.values[0]);
        }
        Ok(self.eval_v(log_t.ln()))
    }

    fn breakpoints_within(&self, lo: f64, hi: f64, cap: usize) -> Vec<f64> {
        self.knots_t
            .iter()
            .copied()
            .filter(|&t| t > lo && t < hi)
            .take(cap)
            .collect()
    }
}

/// Row format shared by CSV emitters elsewhere.
#[derive(Debug, Clone, Serialize)]
pub struct MeanPoint {
    pub t: f64,
    pub tau_re: f64,
    pub tau_im: f64,
}
