//! Slow-decrease and slow-oscillation moduli over windows `(x, x^λ]`,
//! ε-window search, the Landau and Hardy integrand conditions, and the
//! primitive operator `s(x) = ∫₁ˣ f(u) du`.
//!
//! `liminf`/`limsup` over `x → ∞` are not finitely computable; every
//! modulus here is a stand-in computed over a declared bracket
//! `x ∈ [X, X^Λ]` and reported together with that bracket. Scans run on
//! grids uniform in `log log x` (the natural scale of the multiplicative
//! windows), always include the exact window endpoint `t = x^λ` and every
//! reachable piece breakpoint with both one-sided values, and polish the
//! grid extremum by golden-section descent along smooth pieces.

use std::io::Write;

use serde::Serialize;

use crate::defaults;
use crate::error::Error;
use crate::func::PiecewiseFn;
use crate::funcspec::{Codomain, FunctionSpec};
use crate::scalar::Scalar;
use crate::Result;

/// Finite stand-in for `x → ∞`: scans cover `x ∈ [X, X^Λ]`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct XHorizon {
    pub x: f64,
    pub bracket: f64,
}

impl Default for XHorizon {
    fn default() -> Self {
        XHorizon { x: defaults::MODULUS_X_EXP.exp(), bracket: defaults::MODULUS_BRACKET }
    }
}

impl XHorizon {
    pub fn at(x: f64) -> Self {
        XHorizon { x, bracket: defaults::MODULUS_BRACKET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulusMode {
    /// `inf (s(t) − s(x))` — most negative drop.
    Decrease,
    /// `sup (s(t) − s(x))` — largest rise.
    Increase,
    /// `sup |s(t) − s(x)|`.
    Oscillation,
}

/// Extremal pair witnessing a modulus value; `x < t ≤ x^λ` by construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Witness {
    pub x: f64,
    pub t: f64,
    pub log_x: f64,
    pub log_t: f64,
}

/// Modulus estimates per λ with their witnesses. Values are finite-horizon
/// estimates: upper bounds on the true `inf` (lower bounds on the `sup`)
/// only up to grid resolution.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusCurve {
    pub mode: ModulusMode,
    /// As provided: decreasing toward 1.
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub x_horizon: XHorizon,
    pub witnesses: Vec<Witness>,
    pub grid_density: f64,
}

impl ModulusCurve {
    /// CSV with columns `lambda,value,witness_x,witness_t`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        use crate::func::fmt_compact as fc;
        writeln!(w, "lambda,value,witness_x,witness_t")?;
        for ((&l, &v), wit) in self.lambdas.iter().zip(&self.values).zip(&self.witnesses) {
            writeln!(w, "{},{},{},{}", fc(l), fc(v), fc(wit.x), fc(wit.t))?;
        }
        Ok(())
    }
}

/// Caps on enumerated breakpoints per scan; the extremes of spike-type
/// functions live at breakpoints, but a handful of them suffices.
const BP_CAP_X: usize = 256;
const BP_CAP_T: usize = 64;
const GOLDEN_ITERS: usize = 40;

#[derive(Clone, Copy)]
struct RawMin {
    obj: f64,
    v_x: f64,
    v_t: f64,
}

fn golden_min<G: FnMut(f64) -> Option<f64>>(mut g: G, mut a: f64, mut b: f64) -> Option<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if !(b > a) {
        return None;
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c)?;
    let mut fd = g(d)?;
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d)?;
        }
    }
    Some(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// One λ-scan: minimizes `obj(s(x), s(t))` over the window family.
/// `seeds` are `(v_x, v_t, obj)` triples from scans of smaller windows;
/// they participate in the final minimum, which makes modulus curves
/// exactly monotone across nested λ.
fn scan_window<S, F>(
    f: &F,
    lambda: f64,
    xh: &XHorizon,
    density: f64,
    obj: &(dyn Fn(S, S) -> f64 + Sync),
    seeds: &[(f64, f64, f64)],
) -> Result<RawMin>
where
    S: Scalar,
    F: PiecewiseFn<S> + ?Sized,
{
    let log_x0 = xh.x.ln();
    if !(log_x0 > 0.0) {
        return Err(Error::Precondition("modulus horizon X must exceed 1".into()));
    }
    let ln_lam = lambda.ln();
    let ln_bracket = xh.bracket.ln();
    let v_lo = log_x0.ln();
    let v_hi = v_lo + ln_bracket;

    let map_horizon = |e: Error| match e {
        Error::HorizonExhausted(_) | Error::Overflow { .. } => Error::EmptyWindow {
            x: xh.x,
            lambda,
        },
        other => other,
    };

    // x candidates: log-log grid over [X, X^Λ] plus reachable breakpoints
    // (both one-sided values)
    struct XC<SS> {
        v_x: f64,
        log_x: f64,
        s_x: SS,
    }
    let n_x = ((density * ln_bracket).ceil() as usize).max(2);
    let mut xs: Vec<XC<S>> = Vec::with_capacity(n_x + 1);
    for k in 0..=n_x {
        let v = if k == n_x { v_hi } else { v_lo + (v_hi - v_lo) * k as f64 / n_x as f64 };
        let log_x = v.exp();
        let s_x = f.eval_at_log(log_x).map_err(map_horizon)?;
        xs.push(XC { v_x: v, log_x, s_x });
    }
    let hi_x = if xh.bracket * log_x0 <= 709.0 {
        (xh.bracket * log_x0).exp()
    } else {
        f64::MAX
    };
    for bp in f.breakpoints_within(xh.x, hi_x, BP_CAP_X) {
        let (l, r) = f.one_sided(bp).map_err(map_horizon)?;
        let log_x = bp.ln();
        let v_x = log_x.ln();
        xs.push(XC { v_x, log_x, s_x: l });
        xs.push(XC { v_x, log_x, s_x: r });
    }

    let n_t = ((density * ln_lam).ceil() as usize).max(1);
    let mut best = RawMin { obj: f64::INFINITY, v_x: f64::NAN, v_t: f64::NAN };
    let consider = |m: RawMin, best: &mut RawMin| {
        if m.obj < best.obj || (m.obj == best.obj && (m.v_x, m.v_t) < (best.v_x, best.v_t)) {
            *best = m;
        }
    };

    for xc in &xs {
        let log_t_max = lambda * xc.log_x;
        // t grid on (x, x^λ], endpoint computed directly for exactness
        for k in 1..=n_t {
            let (v_t, log_t) = if k == n_t {
                (log_t_max.ln(), log_t_max)
            } else {
                let v = xc.v_x + ln_lam * k as f64 / n_t as f64;
                (v, v.exp())
            };
            if log_t <= xc.log_x {
                continue;
            }
            let s_t = f.eval_at_log(log_t).map_err(map_horizon)?;
            consider(RawMin { obj: obj(xc.s_x, s_t), v_x: xc.v_x, v_t }, &mut best);
        }
        // t breakpoints inside the window
        if xc.log_x <= 709.0 && log_t_max <= 709.0 {
            let x_val = xc.log_x.exp();
            let t_hi = log_t_max.exp();
            for bp in f.breakpoints_within(x_val, t_hi, BP_CAP_T) {
                let log_t = bp.ln();
                if log_t <= xc.log_x || log_t > log_t_max {
                    continue;
                }
                let (l, r) = f.one_sided(bp).map_err(map_horizon)?;
                for s_t in [l, r] {
                    consider(
                        RawMin { obj: obj(xc.s_x, s_t), v_x: xc.v_x, v_t: log_t.ln() },
                        &mut best,
                    );
                }
            }
        }
    }

    if !best.obj.is_finite() {
        return Err(Error::EmptyWindow { x: xh.x, lambda });
    }

    // local polish: coordinate golden-section descent in log log space over
    // a bracket of one grid step around the incumbent; probed pairs respect
    // the window constraints, so an improvement is always a valid minimum
    // (left-limit extremes at breakpoints simply cannot be improved upon by
    // continuous evaluation and survive the min below)
    let dv_x = (v_hi - v_lo) / n_x as f64;
    let dv_t = ln_lam / n_t as f64;
    let mut cur = best;
    for _ in 0..2 {
        // refine t with x fixed
        let log_x = cur.v_x.exp();
        if let Ok(s_x) = f.eval_at_log(log_x) {
            let lo = (cur.v_t - dv_t).max(cur.v_x + 1e-14);
            let hi = (cur.v_t + dv_t).min(cur.v_x + ln_lam);
            let g = |v_t: f64| -> Option<f64> {
                let log_t = v_t.exp();
                if log_t <= log_x {
                    return None;
                }
                f.eval_at_log(log_t).ok().map(|s_t| obj(s_x, s_t))
            };
            if let Some((v, o)) = golden_min(g, lo, hi) {
                if o < cur.obj {
                    cur = RawMin { obj: o, v_x: cur.v_x, v_t: v };
                }
            }
        }
        // refine x with t fixed
        let log_t = cur.v_t.exp();
        if let Ok(s_t) = f.eval_at_log(log_t) {
            let lo = (cur.v_x - dv_x).max(v_lo).max(cur.v_t - ln_lam);
            let hi = (cur.v_x + dv_x).min(v_hi).min(cur.v_t - 1e-14);
            let g = |v_x: f64| -> Option<f64> {
                f.eval_at_log(v_x.exp()).ok().map(|s_x| obj(s_x, s_t))
            };
            if let Some((v, o)) = golden_min(g, lo, hi) {
                if o < cur.obj {
                    cur = RawMin { obj: o, v_x: v, v_t: cur.v_t };
                }
            }
        }
    }
    if cur.obj < best.obj {
        best = cur;
    }

    // seeds from nested smaller windows participate directly
    for &(v_x, v_t, o) in seeds {
        if v_t - v_x <= ln_lam + 1e-15 && v_x >= v_lo - 1e-15 && v_x <= v_hi + 1e-15 {
            consider(RawMin { obj: o, v_x, v_t }, &mut best);
        }
    }
    Ok(best)
}

fn modulus_curve_impl<S, F>(
    f: &F,
    mode: ModulusMode,
    lambdas: &[f64],
    xh: &XHorizon,
    density: f64,
) -> Result<ModulusCurve>
where
    S: Scalar,
    F: PiecewiseFn<S> + ?Sized,
{
    if lambdas.is_empty() || lambdas.iter().any(|&l| l <= 1.0) {
        return Err(Error::Precondition("lambdas must all exceed 1".into()));
    }
    if !lambdas.windows(2).all(|w| w[0] > w[1]) {
        return Err(Error::Precondition("lambdas must decrease toward 1".into()));
    }
    let obj: Box<dyn Fn(S, S) -> f64 + Sync> = match mode {
        ModulusMode::Decrease => Box::new(|s_x: S, s_t: S| (s_t - s_x).re()),
        ModulusMode::Increase => Box::new(|s_x: S, s_t: S| (s_x - s_t).re()),
        ModulusMode::Oscillation => Box::new(|s_x: S, s_t: S| -(s_t - s_x).modulus()),
    };

    // smallest window first; minimizers carry into the larger windows so
    // the curve is exactly monotone across nested λ
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.reverse();
    let mut seeds: Vec<(f64, f64, f64)> = Vec::new();
    let mut raw = vec![RawMin { obj: 0.0, v_x: 0.0, v_t: 0.0 }; lambdas.len()];
    for &i in &order {
        let m = scan_window(f, lambdas[i], xh, density, obj.as_ref(), &seeds)?;
        seeds.push((m.v_x, m.v_t, m.obj));
        raw[i] = m;
    }

    let mut values = Vec::with_capacity(lambdas.len());
    let mut witnesses = Vec::with_capacity(lambdas.len());
    for (i, m) in raw.iter().enumerate() {
        let value = match mode {
            ModulusMode::Decrease => m.obj,
            ModulusMode::Increase | ModulusMode::Oscillation => -m.obj,
        };
        let log_x = m.v_x.exp();
        // clamp keeps the stored witness inside the window even after
        // rounding through the log-log coordinates
        let log_t = m.v_t.exp().min(lambdas[i] * log_x);
        values.push(value);
        witnesses.push(Witness {
            x: if log_x <= 709.0 { log_x.exp() } else { f64::INFINITY },
            t: if log_t <= 709.0 { log_t.exp() } else { f64::INFINITY },
            log_x,
            log_t,
        });
    }
    Ok(ModulusCurve {
        mode,
        lambdas: lambdas.to_vec(),
        values,
        x_horizon: *xh,
        witnesses,
        grid_density: density,
    })
}

/// Slow-decrease modulus `a(λ) = inf_{x∈[X,X^Λ]} inf_{x<t≤x^λ} (s(t)−s(x))`;
/// real-valued functions only.
pub fn slow_decrease_modulus<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    lambdas: &[f64],
    xh: &XHorizon,
    density: f64,
) -> Result<ModulusCurve> {
    modulus_curve_impl(f, ModulusMode::Decrease, lambdas, xh, density)
}

/// Symmetric counterpart: `sup (s(t) − s(x))` over the same windows.
pub fn slow_increase_modulus<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    lambdas: &[f64],
    xh: &XHorizon,
    density: f64,
) -> Result<ModulusCurve> {
    modulus_curve_impl(f, ModulusMode::Increase, lambdas, xh, density)
}

/// Slow-oscillation modulus `sup |s(t) − s(x)|`; real or complex.
pub fn slow_oscillation_modulus<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    lambdas: &[f64],
    xh: &XHorizon,
    density: f64,
) -> Result<ModulusCurve> {
    modulus_curve_impl(f, ModulusMode::Oscillation, lambdas, xh, density)
}

/// Which window family [`find_window`] searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowMode {
    Decrease,
    Oscillation,
}

/// An ε-window `(x₀, λ)`: over the checked bracket, every pair
/// `x₀ ≤ x < t ≤ x^λ` satisfied `s(t) − s(x) ≥ −ε` (decrease mode) or
/// `|s(t) − s(x)| ≤ ε` (oscillation mode), up to `WINDOW_SLACK`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlowWindow {
    pub eps: f64,
    pub x0: f64,
    pub lambda: f64,
    /// Bracket exponent Λ of the finite check `x ∈ [x₀, x₀^Λ]`.
    pub bracket: f64,
    /// Worst modulus value observed during validation.
    pub worst: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowSearch {
    pub mode: WindowMode,
    pub eps: f64,
    pub window: Option<SlowWindow>,
    pub evaluations: usize,
}

/// The claim `∀ x ≥ x₀` is probed on two brackets: near `[x₀, x₀^Λ]` and at
/// the far default stand-in `[X, X^Λ]`. A single short bracket near a small
/// `x₀` misses violations that only open up once `(λ−1) log x` gets large
/// (for `sin(log x)` every window is eventually a full period); requiring
/// both brackets keeps such windows out.
fn window_value<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    mode: WindowMode,
    x0: f64,
    lambda: f64,
    density: f64,
) -> Result<f64> {
    let mmode = match mode {
        WindowMode::Decrease => ModulusMode::Decrease,
        WindowMode::Oscillation => ModulusMode::Oscillation,
    };
    let near = modulus_curve_impl(f, mmode, &[lambda], &XHorizon::at(x0), density)?.values[0];
    let far_x = defaults::MODULUS_X_EXP.exp();
    if x0 >= far_x {
        return Ok(near);
    }
    let far = modulus_curve_impl(f, mmode, &[lambda], &XHorizon::at(far_x), density)?.values[0];
    Ok(match mode {
        WindowMode::Decrease => near.min(far),
        WindowMode::Oscillation => near.max(far),
    })
}

fn window_ok(mode: WindowMode, value: f64, eps: f64) -> bool {
    match mode {
        WindowMode::Decrease => value >= -eps - defaults::WINDOW_SLACK,
        WindowMode::Oscillation => value <= eps + defaults::WINDOW_SLACK,
    }
}

/// Searches for an ε-window: λ over the halving schedule `1 + 2⁻ᵏ`
/// (largest first) and `x₀` over an increasing schedule, accepting the
/// first pair whose finite-horizon modulus clears `−ε` (resp. `ε`).
/// Not-found is a value, reached after `budget` window evaluations.
pub fn find_window<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    eps: f64,
    mode: WindowMode,
    budget: usize,
    density: f64,
) -> Result<WindowSearch> {
    if !(eps > 0.0) {
        return Err(Error::Precondition("eps must be > 0".into()));
    }
    let mut evaluations = 0usize;
    for &lambda in &defaults::LAMBDA_SCHEDULE {
        for &k in &defaults::X0_EXPONENTS {
            if evaluations >= budget {
                return Ok(WindowSearch { mode, eps, window: None, evaluations });
            }
            let x0 = k.exp();
            evaluations += 1;
            match window_value(f, mode, x0, lambda, density) {
                Ok(value) => {
                    if window_ok(mode, value, eps) {
                        return Ok(WindowSearch {
                            mode,
                            eps,
                            window: Some(SlowWindow {
                                eps,
                                x0,
                                lambda,
                                bracket: defaults::MODULUS_BRACKET,
                                worst: value,
                            }),
                            evaluations,
                        });
                    }
                }
                // windows that outrun the available horizon simply fail
                Err(Error::EmptyWindow { .. }) => continue,
                Err(other) => return Err(other),
            }
        }
    }
    Ok(WindowSearch { mode, eps, window: None, evaluations })
}

/// Convenience dispatcher on a spec (decrease mode demands a real codomain).
pub fn find_window_spec(
    spec: &FunctionSpec,
    eps: f64,
    mode: WindowMode,
    budget: usize,
    density: f64,
) -> Result<WindowSearch> {
    match (mode, spec.codomain()) {
        (WindowMode::Decrease, Codomain::Complex) => Err(Error::CodomainMismatch),
        (WindowMode::Decrease, Codomain::Real) => {
            find_window(&spec.real_view()?, eps, mode, budget, density)
        }
        (WindowMode::Oscillation, _) => {
            find_window(&spec.complex_view(), eps, mode, budget, density)
        }
    }
}

/// Re-checks a declared window at its horizon; `Err(InvalidWindow)` when the
/// finite-horizon modulus violates the ε bound.
pub fn validate_window<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    mode: WindowMode,
    x0: f64,
    lambda: f64,
    eps: f64,
    density: f64,
) -> Result<SlowWindow> {
    if !(x0 > 1.0 && lambda > 1.0 && eps > 0.0) {
        return Err(Error::Precondition(
            "window needs x0 > 1, lambda > 1, eps > 0".into(),
        ));
    }
    let value = window_value(f, mode, x0, lambda, density)?;
    if window_ok(mode, value, eps) {
        Ok(SlowWindow { eps, x0, lambda, bracket: defaults::MODULUS_BRACKET, worst: value })
    } else {
        Err(Error::InvalidWindow { x0, lambda, eps, worst: value })
    }
}

/// Constants of the integrand conditions: `C > 0`, `x₀ ≥ 1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TauberConstant {
    pub c: f64,
    pub x0: f64,
}

impl TauberConstant {
    pub fn new(c: f64, x0: f64) -> Result<Self> {
        if !(c > 0.0 && x0 >= 1.0) {
            return Err(Error::Precondition("need C > 0 and x0 >= 1".into()));
        }
        Ok(TauberConstant { c, x0 })
    }
}

/// Which printed form of the two-sided condition to check. The `(log u)`
/// weight is the form as printed; the u-weighted variant `u (log u) |f(u)|`
/// mirrors the one-sided condition and is offered behind this switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyForm {
    Printed,
    UWeighted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub passed: bool,
    pub c: f64,
    pub x0: f64,
    pub horizon: f64,
    /// min of the weighted integrand (Landau) / max (Hardy).
    pub extremum: f64,
    pub extremum_u: f64,
}

/// Grid-plus-refinement extremum of `w(u)` over `(x0, horizon]`;
/// `minimize = true` for minima. Splits at breakpoints, evaluates both
/// one-sided values there, always includes the horizon endpoint.
fn weighted_extremum<S, F, W>(
    f: &F,
    x0: f64,
    horizon: f64,
    w: W,
    minimize: bool,
) -> Result<(f64, f64)>
where
    S: Scalar,
    F: PiecewiseFn<S> + ?Sized,
    W: Fn(f64, S) -> f64,
{
    if !(horizon > x0) {
        return Err(Error::Precondition("horizon must exceed x0".into()));
    }
    let sign = if minimize { 1.0 } else { -1.0 };
    let mut spans = vec![x0.ln()];
    for bp in f.breakpoints_within(x0, horizon, defaults::BREAKPOINT_CAP) {
        spans.push(bp.ln());
    }
    spans.push(horizon.ln());

    let mut best = f64::INFINITY;
    let mut best_u = x0;
    let consider = |val: f64, u: f64, best: &mut f64, best_u: &mut f64| {
        if val < *best || (val == *best && u < *best_u) {
            *best = val;
            *best_u = u;
        }
    };

    for win in spans.windows(2) {
        let (ulo, uhi) = (win[0], win[1]);
        if uhi <= ulo {
            continue;
        }
        let n = (((uhi - ulo) * defaults::MEASURE_GRID_PER_LOG).ceil() as usize).max(32);
        let mut span_best = f64::INFINITY;
        let mut span_best_lu = ulo;
        for k in 1..=n {
            let lu = if k == n { uhi } else { ulo + (uhi - ulo) * k as f64 / n as f64 };
            let u = lu.exp();
            let val = sign * w(u, f.eval_at_log(lu)?);
            if val < span_best {
                span_best = val;
                span_best_lu = lu;
            }
        }
        // golden polish within one grid step
        let step = (uhi - ulo) / n as f64;
        let g = |lu: f64| -> Option<f64> {
            let u = lu.exp();
            f.eval_at_log(lu).ok().map(|s| sign * w(u, s))
        };
        if let Some((lu, val)) = golden_min(
            g,
            (span_best_lu - step).max(ulo + 1e-14),
            (span_best_lu + step).min(uhi),
        ) {
            if val < span_best {
                span_best = val;
                span_best_lu = lu;
            }
        }
        consider(span_best, span_best_lu.exp(), &mut best, &mut best_u);
        // one-sided values at the interior span boundary
        if uhi < horizon.ln() {
            let bp = uhi.exp();
            let (l, r) = f.one_sided(bp)?;
            consider(sign * w(bp, l), bp, &mut best, &mut best_u);
            consider(sign * w(bp, r), bp, &mut best, &mut best_u);
        }
    }
    Ok((sign * best, best_u))
}

/// Landau one-sided condition: `u (log u) f(u) ≥ −C` at every checked
/// `u ∈ (x₀, horizon]`; real integrands only.
pub fn check_landau<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    constant: &TauberConstant,
    horizon: f64,
) -> Result<ConditionReport> {
    let (min, u) = weighted_extremum(f, constant.x0, horizon, |u, s| u * u.ln() * s, true)?;
    Ok(ConditionReport {
        condition: "landau".into(),
        passed: min >= -constant.c - 1e-9,
        c: constant.c,
        x0: constant.x0,
        horizon,
        extremum: min,
        extremum_u: u,
    })
}

/// Hardy two-sided condition: `(log u) |f(u)| ≤ C` (printed form) or
/// `u (log u) |f(u)| ≤ C` (u-weighted form) at every checked `u`.
pub fn check_hardy<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    constant: &TauberConstant,
    horizon: f64,
    form: HardyForm,
) -> Result<ConditionReport> {
    let w = move |u: f64, s: S| match form {
        HardyForm::Printed => u.ln() * s.modulus(),
        HardyForm::UWeighted => u * u.ln() * s.modulus(),
    };
    let (max, u) = weighted_extremum(f, constant.x0, horizon, w, false)?;
    Ok(ConditionReport {
        condition: match form {
            HardyForm::Printed => "hardy".into(),
            HardyForm::UWeighted => "hardy-u-weighted".into(),
        },
        passed: max <= constant.c + 1e-9,
        c: constant.c,
        x0: constant.x0,
        horizon,
        extremum: max,
        extremum_u: u,
    })
}

/// `s(x) = ∫₁ˣ f(u) du` backed by cumulative quadrature over fixed
/// checkpoints; usable wherever the analysis accepts a function. Every
/// evaluation is accurate to the tolerance it was built with.
pub struct Primitive<'a, S, F: ?Sized> {
    inner: &'a F,
    horizon: f64,
    abs_tol: f64,
    checkpoint_logs: Vec<f64>,
    values: Vec<S>,
}

/// Checkpoint spacing in `log x`.
const PRIMITIVE_STEP: f64 = 0.5;

pub fn primitive<'a, S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &'a F,
    horizon: f64,
    abs_tol: f64,
) -> Result<Primitive<'a, S, F>> {
    if !(horizon > 1.0 && horizon.is_finite()) {
        return Err(Error::Precondition("primitive horizon must be finite and > 1".into()));
    }
    let h_log = horizon.ln();
    let mut logs = vec![0.0];
    let mut u = PRIMITIVE_STEP;
    while u < h_log {
        logs.push(u);
        u += PRIMITIVE_STEP;
    }
    logs.push(h_log);
    for bp in f.breakpoints_within(1.0, horizon, defaults::BREAKPOINT_CAP) {
        logs.push(bp.ln());
    }
    logs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    logs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let seg_tol = 0.5 * abs_tol / (logs.len() as f64);
    let mut values = Vec::with_capacity(logs.len());
    let mut acc = S::zero();
    values.push(acc);
    for w in logs.windows(2) {
        let (a, b) = (w[0].exp(), w[1].exp());
        acc = acc + crate::func::plain_integral(f, a, b, seg_tol)?;
        values.push(acc);
    }
    Ok(Primitive { inner: f, horizon, abs_tol, checkpoint_logs: logs, values })
}

impl<'a, S: Scalar, F: PiecewiseFn<S> + ?Sized> Primitive<'a, S, F> {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn eval_log_inner(&self, log_x: f64) -> Result<S> {
        if log_x < 0.0 || log_x.is_nan() {
            return Err(Error::Precondition(format!(
                "primitive needs x >= 1, got log x = {log_x}"
            )));
        }
        if log_x > self.checkpoint_logs.last().unwrap() + 1e-12 {
            return Err(Error::HorizonExhausted(format!(
                "primitive built up to log x = {}, asked for {log_x}",
                self.checkpoint_logs.last().unwrap()
            )));
        }
        let idx = self
            .checkpoint_logs
            .partition_point(|&u| u <= log_x)
            .saturating_sub(1);
        let (u0, v0) = (self.checkpoint_logs[idx], self.values[idx]);
        if (log_x - u0).abs() < 1e-15 {
            return Ok(v0);
        }
        let local = crate::func::plain_integral(
            self.inner,
            u0.exp(),
            log_x.exp(),
            0.5 * self.abs_tol,
        )?;
        Ok(v0 + local)
    }
}

impl<'a, S: Scalar, F: PiecewiseFn<S> + ?Sized> PiecewiseFn<S> for Primitive<'a, S, F> {
    fn eval(&self, x: f64) -> Result<S> {
        self.eval_log_inner(x.ln())
    }
    fn eval_at_log(&self, log_x: f64) -> Result<S> {
        self.eval_log_inner(log_x)
    }
    fn breakpoints_within(&self, lo: f64, hi: f64, cap: usize) -> Vec<f64> {
        // the primitive is continuous; only kinks inherited from f remain
        self.inner.breakpoints_within(lo, hi, cap)
    }
}
