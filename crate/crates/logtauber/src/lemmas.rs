//! Numerical verification of the quantitative growth bounds with their
//! explicit constants, and the constructions behind the convergence
//! arguments: geometric chains, the `b_n` sequence, the `liminf s(x)/x`
//! bound and the four-term decomposition of `τ(t) − τ(x)`.
//!
//! All chain and window arithmetic lives in log space (`x₀^{λ^p}` overflows
//! doubles almost immediately); the identity `log(log t / log x) =
//! loglog t − loglog x` keeps those quantities exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::defaults;
use crate::error::Error;
use crate::func::PiecewiseFn;
use crate::quad;
use crate::scalar::Scalar;
use crate::tauber::{validate_window, SlowWindow, WindowMode};
use crate::Result;

/// `B₁ = 2 / log λ`.
pub fn b1_constant(lambda: f64) -> f64 {
    2.0 / lambda.ln()
}

/// `B₂ = (B₁ / λ)(log λ + loglog x₀ + 1)`.
pub fn b2_constant(lambda: f64, x0: f64) -> f64 {
    b1_constant(lambda) / lambda * (lambda.ln() + x0.ln().ln() + 1.0)
}

/// The decreasing chain `t₀ = t, t_p = t_{p−1}^{1/λ}` stopped by
/// `t_{q+1} ≤ x < t_q`, stored as `log t_p`.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricChain {
    pub lambda: f64,
    pub log_x: f64,
    /// `log t_p` for `p = 0 ..= q+1`; `log t_p = log t₀ / λ^p`.
    pub log_points: Vec<f64>,
    pub q: usize,
}

/// Builds the chain for `x < t^{1/λ}` (log-space arguments).
pub fn build_chain_logs(log_t: f64, log_x: f64, lambda: f64) -> Result<GeometricChain> {
    if !(lambda > 1.0) {
        return Err(Error::Precondition("chain needs lambda > 1".into()));
    }
    if !(log_x > 0.0) {
        return Err(Error::Precondition("chain needs x > 1".into()));
    }
    if !(log_x < log_t / lambda) {
        return Err(Error::ChainHypothesis { log_x, log_t_over_lambda: log_t / lambda });
    }
    let mut log_points = vec![log_t];
    let mut p = 1u32;
    loop {
        let lp = log_t / lambda.powi(p as i32);
        log_points.push(lp);
        if lp <= log_x {
            break;
        }
        p += 1;
        if p > 4096 {
            return Err(Error::Precondition("chain did not terminate".into()));
        }
    }
    let q = (p - 1) as usize;
    Ok(GeometricChain { lambda, log_x, log_points, q })
}

pub fn build_chain(t: f64, x: f64, lambda: f64) -> Result<GeometricChain> {
    build_chain_logs(t.ln(), x.ln(), lambda)
}

impl GeometricChain {
    /// Strict bound `q < log(log t / log x) / log λ`.
    pub fn q_bound(&self) -> f64 {
        (self.log_points[0].ln() - self.log_x.ln()) / self.lambda.ln()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let q = self.q;
        if self.log_points.len() != q + 2 {
            return Err(Error::Precondition("chain length mismatch".into()));
        }
        if !(self.log_points[q + 1] <= self.log_x && self.log_x < self.log_points[q]) {
            return Err(Error::Precondition("t_{q+1} <= x < t_q violated".into()));
        }
        if !((q as f64) < self.q_bound()) {
            return Err(Error::Precondition("q bound violated".into()));
        }
        Ok(())
    }

    /// Telescoping identity: `Σ (s(t_{p−1}) − s(t_p)) + (s(t_q) − s(x))`,
    /// algebraically equal to `s(t) − s(x)`.
    pub fn telescoping_sum<F: PiecewiseFn<f64> + ?Sized>(&self, f: &F) -> Result<f64> {
        let mut acc = 0.0;
        for p in 1..=self.q {
            acc += f.eval_at_log(self.log_points[p - 1])? - f.eval_at_log(self.log_points[p])?;
        }
        acc += f.eval_at_log(self.log_points[self.q])? - f.eval_at_log(self.log_x)?;
        Ok(acc)
    }
}

/// Report of one lemma verification. `margin` is the worst slack of the
/// checked inequality over all tested pairs (positive = satisfied with
/// room); the check passes when `margin ≥ −MARGIN_TOL`.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaBoundReport {
    pub lemma_id: u8,
    pub b1: f64,
    pub b2: f64,
    pub window: SlowWindow,
    pub margin: f64,
    pub passed: bool,
    /// Extremal `(x, t)` pair as `(log x, log t)`.
    pub worst_pair: (f64, f64),
    pub samples: usize,
    /// Largest `t` the sampling may reach.
    pub t_max: f64,
    /// All sampled pairs satisfied the gate `log λ < log(log t / log x)`.
    pub gate_ok: bool,
    /// For the pointwise lemmas: chain decomposition at the worst pair.
    pub chain: Option<GeometricChain>,
    /// For the integral lemmas: the two partial integrals split at `t^{1/λ}`
    /// for the worst `t`.
    pub split: Option<(f64, f64)>,
}

fn require_eps_one(window: &SlowWindow) -> Result<()> {
    if (window.eps - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "the growth lemmas assume the eps = 1 window, got eps = {}",
            window.eps
        )));
    }
    Ok(())
}

/// Draws `(log x, log t)` pairs with `x₀ ≤ x < t^{1/λ}`, log-log uniform:
/// `loglog x` uniform over `[loglog x₀, loglog t_max]`, then `loglog t`
/// uniform over `(loglog x + log λ, loglog t_max + log λ]`.
fn sample_pairs(
    window: &SlowWindow,
    t_max: f64,
    samples: usize,
    seed: u64,
) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln_lam = window.lambda.ln();
    let v_lo = window.x0.ln().ln();
    let v_hi = t_max.ln().ln() - 1e-9;
    let cap = t_max.ln().ln() + ln_lam;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let v_x = v_lo + (v_hi - v_lo) * rng.gen::<f64>();
        let lo_t = v_x + ln_lam;
        // u in (0, 1] keeps the pair strictly inside the hypothesis region
        let u = 1.0 - rng.gen::<f64>();
        let v_t = lo_t + (cap - lo_t) * u;
        out.push((v_x.exp(), v_t.exp()));
    }
    out
}

/// Vijayaraghavan-type bound: under the ε = 1 slow-decrease window,
/// `s(t) − s(x) ≥ −B₁ log(log t / log x)` whenever `x₀ ≤ x < t^{1/λ}`.
pub fn verify_lemma1<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    window: &SlowWindow,
    samples: usize,
    t_max: f64,
    seed: u64,
) -> Result<LemmaBoundReport> {
    require_eps_one(window)?;
    let window = validate_window(
        f,
        WindowMode::Decrease,
        window.x0,
        window.lambda,
        window.eps,
        defaults::GRID_DENSITY,
    )?;
    let b1 = b1_constant(window.lambda);
    let mut worst = f64::INFINITY;
    let mut worst_pair = (0.0, 0.0);
    let mut gate_ok = true;
    let pairs = sample_pairs(&window, t_max, samples, seed);
    for &(log_x, log_t) in &pairs {
        // log(log t / log x) computed exactly as loglog t − loglog x
        let gap = log_t.ln() - log_x.ln();
        gate_ok &= window.lambda.ln() < gap;
        let margin = f.eval_at_log(log_t)? - f.eval_at_log(log_x)? + b1 * gap;
        if margin < worst {
            worst = margin;
            worst_pair = (log_x, log_t);
        }
    }
    let chain = build_chain_logs(worst_pair.1, worst_pair.0, window.lambda)?;
    Ok(LemmaBoundReport {
        lemma_id: 1,
        b1,
        b2: b2_constant(window.lambda, window.x0),
        window,
        margin: worst,
        passed: worst >= -defaults::MARGIN_TOL,
        worst_pair,
        samples,
        t_max,
        gate_ok,
        chain: Some(chain),
        split: None,
    })
}

/// Two-sided counterpart: `|s(t) − s(x)| ≤ B₁ log(log t / log x)` under the
/// ε = 1 oscillation window.
pub fn verify_lemma2<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    window: &SlowWindow,
    samples: usize,
    t_max: f64,
    seed: u64,
) -> Result<LemmaBoundReport> {
    require_eps_one(window)?;
    let window = validate_window(
        f,
        WindowMode::Oscillation,
        window.x0,
        window.lambda,
        window.eps,
        defaults::GRID_DENSITY,
    )?;
    let b1 = b1_constant(window.lambda);
    let mut worst = f64::INFINITY;
    let mut worst_pair = (0.0, 0.0);
    let mut gate_ok = true;
    for &(log_x, log_t) in &sample_pairs(&window, t_max, samples, seed) {
        let gap = log_t.ln() - log_x.ln();
        gate_ok &= window.lambda.ln() < gap;
        let margin = b1 * gap - (f.eval_at_log(log_t)? - f.eval_at_log(log_x)?).modulus();
        if margin < worst {
            worst = margin;
            worst_pair = (log_x, log_t);
        }
    }
    let chain = build_chain_logs(worst_pair.1, worst_pair.0, window.lambda)?;
    Ok(LemmaBoundReport {
        lemma_id: 2,
        b1,
        b2: b2_constant(window.lambda, window.x0),
        window,
        margin: worst,
        passed: worst >= -defaults::MARGIN_TOL,
        worst_pair,
        samples,
        t_max,
        gate_ok,
        chain: Some(chain),
        split: None,
    })
}

fn check_lemma34_preconditions(window: &SlowWindow, t_samples: &[f64]) -> Result<()> {
    require_eps_one(window)?;
    if window.x0 <= std::f64::consts::E {
        return Err(Error::Precondition("the integral lemmas assume x0 > e".into()));
    }
    let floor = window.x0.powf(window.lambda);
    if t_samples.is_empty() || t_samples.iter().any(|&t| t <= floor) {
        return Err(Error::Precondition(format!(
            "every t sample must exceed x0^lambda = {floor}"
        )));
    }
    Ok(())
}

/// Integral of `g(x)/x` over `[a, b]` for an ad-hoc integrand given in the
/// log coordinate, split at the breakpoints of `f`. The integrand scalar
/// may differ from the scalar of `f` (lemma 4 integrates `|s(t) − s(x)|`).
fn weighted_closure_integral<S: Scalar, R: Scalar, F: PiecewiseFn<S> + ?Sized, G>(
    f: &F,
    g: G,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<R>
where
    G: Fn(f64) -> Result<R>,
{
    let splits: Vec<f64> = f
        .breakpoints_within(a, b, defaults::QUAD_SPLIT_CAP)
        .iter()
        .map(|&x| x.ln())
        .collect();
    quad::integrate_segmented(&g, a.ln(), b.ln(), &splits, abs_tol)
}

/// Averaged one-sided bound:
/// `(1/log t) ∫_{x₀}^t (s(t) − s(x))/x dx ≥ −B₂` for `t > x₀^λ`.
pub fn verify_lemma3<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    window: &SlowWindow,
    t_samples: &[f64],
) -> Result<LemmaBoundReport> {
    check_lemma34_preconditions(window, t_samples)?;
    let window = validate_window(
        f,
        WindowMode::Decrease,
        window.x0,
        window.lambda,
        window.eps,
        defaults::GRID_DENSITY,
    )?;
    let b1 = b1_constant(window.lambda);
    let b2 = b2_constant(window.lambda, window.x0);
    let mut worst = f64::INFINITY;
    let mut worst_t = t_samples[0];
    let mut worst_split = (0.0, 0.0);
    for &t in t_samples {
        let s_t = f.eval(t)?;
        let g = |u: f64| Ok(s_t - f.eval_at_log(u)?);
        let tol = defaults::ABS_TOL * t.ln();
        let t_split = (t.ln() / window.lambda).exp();
        let low: f64 = weighted_closure_integral(f, g, window.x0, t_split, 0.5 * tol)?;
        let high: f64 = weighted_closure_integral(f, g, t_split, t, 0.5 * tol)?;
        let lhs = (low + high) / t.ln();
        let margin = lhs + b2;
        if margin < worst {
            worst = margin;
            worst_t = t;
            worst_split = (low, high);
        }
    }
    Ok(LemmaBoundReport {
        lemma_id: 3,
        b1,
        b2,
        window,
        margin: worst,
        passed: worst >= -defaults::MARGIN_TOL,
        worst_pair: (worst_t.ln(), worst_t.ln()),
        samples: t_samples.len(),
        t_max: t_samples.iter().cloned().fold(0.0, f64::max),
        gate_ok: true,
        chain: None,
        split: Some(worst_split),
    })
}

/// Two-sided counterpart:
/// `(1/log t) ∫_{x₀}^t |s(t) − s(x)|/x dx ≤ B₂` for `t > x₀^λ`.
pub fn verify_lemma4<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    window: &SlowWindow,
    t_samples: &[f64],
) -> Result<LemmaBoundReport> {
    check_lemma34_preconditions(window, t_samples)?;
    let window = validate_window(
        f,
        WindowMode::Oscillation,
        window.x0,
        window.lambda,
        window.eps,
        defaults::GRID_DENSITY,
    )?;
    let b1 = b1_constant(window.lambda);
    let b2 = b2_constant(window.lambda, window.x0);
    let mut worst = f64::INFINITY;
    let mut worst_t = t_samples[0];
    let mut worst_split = (0.0, 0.0);
    for &t in t_samples {
        let s_t = f.eval(t)?;
        let g = |u: f64| Ok((s_t - f.eval_at_log(u)?).modulus());
        let tol = defaults::ABS_TOL * t.ln();
        let t_split = (t.ln() / window.lambda).exp();
        let low: f64 = weighted_closure_integral(f, g, window.x0, t_split, 0.5 * tol)?;
        let high: f64 = weighted_closure_integral(f, g, t_split, t, 0.5 * tol)?;
        let lhs = (low + high) / t.ln();
        let margin = b2 - lhs;
        if margin < worst {
            worst = margin;
            worst_t = t;
            worst_split = (low, high);
        }
    }
    Ok(LemmaBoundReport {
        lemma_id: 4,
        b1,
        b2,
        window,
        margin: worst,
        passed: worst >= -defaults::MARGIN_TOL,
        worst_pair: (worst_t.ln(), worst_t.ln()),
        samples: t_samples.len(),
        t_max: t_samples.iter().cloned().fold(0.0, f64::max),
        gate_ok: true,
        chain: None,
        split: Some(worst_split),
    })
}

/// Step record of the `b_n` construction. Case (i) found the next point
/// inside `(b^{√λ}, b^λ)`; case (ii) had to jump past `b^λ` and records the
/// excluded-measure lower bound under both normalizations (by `b_n`, in log
/// form, and by the window's right endpoint `b_n^λ`).
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum StepCase {
    WithinWindow,
    Beyond { log_excluded_over_bn: f64, excluded_over_right: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct BnSequence {
    /// `log b_n`, strictly increasing. (The values themselves overflow f64
    /// after a few dozen steps.)
    pub log_b: Vec<f64>,
    /// Largest 1-based `n` whose step was case (ii); 0 when none was.
    pub n0: usize,
    pub eps: f64,
    pub lambda: f64,
    pub x0: f64,
    pub ell: f64,
    pub case_log: Vec<StepCase>,
    pub horizon_exhausted: bool,
}

/// Materializes the proof's `b_n` sequence: points where `|s(b_n) − ℓ| ≤ ε`,
/// each found inside `(b_n^{√λ}, b_n^λ)` when possible (case i) and past
/// `b_n^λ` otherwise (case ii). Callers supply `ℓ` backed by
/// statistical-limit evidence and `(x₀, λ)` from a verified window.
pub fn construct_bn<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    ell: f64,
    eps: f64,
    lambda: f64,
    x0: f64,
    max_n: usize,
    log_horizon: f64,
) -> Result<BnSequence> {
    if !(eps > 0.0 && lambda > 1.0 && x0 > 1.0) {
        return Err(Error::Precondition("need eps > 0, lambda > 1, x0 > 1".into()));
    }
    if !(log_horizon > x0.ln() * lambda) {
        return Err(Error::Precondition("horizon too small for even one window".into()));
    }
    let k = defaults::DETECTOR_SAMPLES;
    let fits = |log_b: f64| -> Result<bool> {
        Ok((f.eval_at_log(log_b)? - ell).abs() <= eps)
    };

    // b1: smallest grid point >= x0 that fits
    let mut log_b = Vec::new();
    {
        let (lo, hi) = (x0.ln(), log_horizon);
        let mut found = None;
        for i in 0..=k {
            let l = lo + (hi - lo) * i as f64 / k as f64;
            if fits(l)? {
                found = Some(l);
                break;
            }
        }
        log_b.push(found.ok_or(Error::NoB1Found)?);
    }

    let sqrt_lam = lambda.sqrt();
    let mut case_log = Vec::new();
    let mut horizon_exhausted = false;
    while log_b.len() < max_n {
        let l = *log_b.last().unwrap();
        let (w_lo, w_hi) = (sqrt_lam * l, lambda * l);
        if w_hi >= log_horizon {
            horizon_exhausted = true;
            break;
        }
        // case (i): search the open window (b^sqrt(lambda), b^lambda)
        let mut next = None;
        for i in 1..k {
            let cand = w_lo + (w_hi - w_lo) * i as f64 / k as f64;
            if fits(cand)? {
                next = Some((cand, StepCase::WithinWindow));
                break;
            }
        }
        // case (ii): jump to [b^lambda, horizon]
        if next.is_none() {
            let excluded = (lambda - 1.0) * l + (-((lambda - sqrt_lam) * l)).exp().ln_1p();
            let over_right = -(-((lambda - sqrt_lam) * l)).exp().ln_1p();
            for i in 0..=k {
                let cand = w_hi + (log_horizon - w_hi) * i as f64 / k as f64;
                if fits(cand)? {
                    next = Some((
                        cand,
                        StepCase::Beyond {
                            log_excluded_over_bn: excluded,
                            excluded_over_right: over_right,
                        },
                    ));
                    break;
                }
            }
        }
        match next {
            Some((cand, case)) => {
                case_log.push(case);
                log_b.push(cand);
            }
            None => {
                horizon_exhausted = true;
                break;
            }
        }
    }

    let n0 = case_log
        .iter()
        .enumerate()
        .rev()
        .find_map(|(i, c)| matches!(c, StepCase::Beyond { .. }).then_some(i + 1))
        .unwrap_or(0);
    Ok(BnSequence {
        log_b,
        n0,
        eps,
        lambda,
        x0,
        ell,
        case_log,
        horizon_exhausted,
    })
}

impl BnSequence {
    /// Checks the defining inequalities of the sequence against `f`.
    pub fn check_invariants<F: PiecewiseFn<f64> + ?Sized>(&self, f: &F) -> Result<()> {
        let sqrt_lam = self.lambda.sqrt();
        for (i, &l) in self.log_b.iter().enumerate() {
            let dev = (f.eval_at_log(l)? - self.ell).abs();
            if dev > self.eps + 1e-12 {
                return Err(Error::Precondition(format!(
                    "|s(b_{}) - ell| = {dev} > eps",
                    i + 1
                )));
            }
        }
        for w in self.log_b.windows(2) {
            if !(w[1] > sqrt_lam * w[0]) {
                return Err(Error::Precondition("b_{n+1} > b_n^sqrt(lambda) violated".into()));
            }
        }
        for (i, w) in self.log_b.windows(2).enumerate() {
            let n = i + 1;
            if n > self.n0 && !(w[1] < self.lambda * w[0]) {
                return Err(Error::Precondition(format!(
                    "b_{} < b_{}^lambda violated past n0 = {}",
                    n + 1,
                    n,
                    self.n0
                )));
            }
        }
        Ok(())
    }
}

/// Four-term decomposition of `τ(t) − τ(x)` around a base point `x₀`.
#[derive(Debug, Clone)]
pub struct JDecomposition<S> {
    pub x: f64,
    pub t: f64,
    pub x0: f64,
    pub j1: S,
    pub j2: S,
    pub j3: S,
    pub j4: S,
    pub total: S,
    /// `|J₁+J₂+J₃+J₄ − (τ(t) − τ(x))|` — an algebraic identity, so this is
    /// pure quadrature noise.
    pub defect: f64,
}

pub fn j_decomposition<S: Scalar, F: PiecewiseFn<S> + ?Sized>(
    f: &F,
    x: f64,
    t: f64,
    x0: f64,
    abs_tol: f64,
) -> Result<JDecomposition<S>> {
    if !(x0 > std::f64::consts::E && x0 <= x && x < t) {
        return Err(Error::Precondition(format!(
            "j-decomposition needs e < x0 <= x < t, got x0 = {x0}, x = {x}, t = {t}"
        )));
    }
    let (lx, lt, l0) = (x.ln(), t.ln(), x0.ln());
    let delta = 1.0 / lx - 1.0 / lt;
    let s_x = f.eval(x)?;

    let j1 = s_x * (delta * l0);
    let int_tol = abs_tol / delta.max(1e-300);
    let j2 = -(f.weighted_integral(1.0, x0, int_tol.min(1e6))?) * delta;
    let j3 = if x > x0 {
        let g = |u: f64| Ok(s_x - f.eval_at_log(u)?);
        weighted_closure_integral(f, g, x0, x, int_tol.min(1e6))? * delta
    } else {
        S::zero()
    };
    let j4 = {
        let g = |u: f64| Ok(f.eval_at_log(u)? - s_x);
        weighted_closure_integral(f, g, x, t, abs_tol * lt)? * (1.0 / lt)
    };
    let total = crate::logmean::log_mean(f, t, abs_tol)? - crate::logmean::log_mean(f, x, abs_tol)?;
    let defect = (j1 + j2 + j3 + j4 - total).modulus();
    Ok(JDecomposition { x, t, x0, j1, j2, j3, j4, total, defect })
}

/// Probe report for `liminf s(x)/x ≥ 0` along `x = x₀^{λ^p}`.
#[derive(Debug, Clone, Serialize)]
pub struct LiminfReport {
    /// `(p, log x_p, s(x_p)/x_p, proof lower bound (s(x₀) − p)/x_p)`.
    pub rows: Vec<(u32, f64, f64, f64)>,
    pub passed: bool,
    /// Probes beyond this were skipped to keep `x_p` representable.
    pub p_cap: u32,
}

/// Verifies the chain bound `s(x₀^{λ^p}) ≥ s(x₀) − p` under the ε = 1
/// window and that `s(x)/x` trends up toward `≥ 0` along the probes.
pub fn check_liminf_s_over_x<F: PiecewiseFn<f64> + ?Sized>(
    f: &F,
    window: &SlowWindow,
    probe_ps: &[u32],
) -> Result<LiminfReport> {
    require_eps_one(window)?;
    let window = validate_window(
        f,
        WindowMode::Decrease,
        window.x0,
        window.lambda,
        window.eps,
        defaults::GRID_DENSITY,
    )?;
    let s_x0 = f.eval(window.x0)?;
    let max_log = 300.0 * std::f64::consts::LN_10; // keep x_p <= 1e300
    let mut rows = Vec::new();
    let mut passed = true;
    let mut p_cap = 0;
    for &p in probe_ps {
        let log_xp = window.lambda.powi(p as i32) * window.x0.ln();
        if log_xp > max_log {
            break;
        }
        p_cap = p;
        let xp = log_xp.exp();
        let ratio = f.eval_at_log(log_xp)? / xp;
        let bound = (s_x0 - p as f64) / xp;
        passed &= ratio >= bound - 1e-12 * (1.0 + bound.abs());
        rows.push((p, log_xp, ratio, bound));
    }
    if let Some(last) = rows.last() {
        passed &= last.2 >= -1e-6;
    }
    Ok(LiminfReport { rows, passed, p_cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults::{ABS_TOL, GRID_DENSITY, MARGIN_TOL};
    use crate::funcspec::corpus::find_named;
    use crate::funcspec::{Expr, FunctionSpec, Interval};
    use crate::tauber::validate_window;
    use std::f64::consts::E;

    fn window(f: &FunctionSpec, mode: WindowMode, x0: f64, lambda: f64) -> SlowWindow {
        match mode {
            WindowMode::Decrease => validate_window(
                &f.real_view().unwrap(),
                mode,
                x0,
                lambda,
                1.0,
                GRID_DENSITY,
            )
            .unwrap(),
            WindowMode::Oscillation => validate_window(
                &f.complex_view(),
                mode,
                x0,
                lambda,
                1.0,
                GRID_DENSITY,
            )
            .unwrap(),
        }
    }

    #[test]
    fn chain_example_by_hand() {
        // t = e^16, x = e^2, lambda = 2: exponents 16, 8, 4, 2 and q = 2
        let c = build_chain(16f64.exp(), E * E, 2.0).unwrap();
        assert_eq!(c.q, 2);
        let expected = [16.0, 8.0, 4.0, 2.0];
        for (got, want) in c.log_points.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        c.check_invariants().unwrap();
        assert!((c.q_bound() - 3.0).abs() < 1e-12, "q bound should be 3");
        assert!((c.q as f64) < c.q_bound());
    }

    #[test]
    fn chain_near_the_hypothesis_boundary() {
        // x = e, lambda = 2, t = e^4.1: log points 4.1, 2.05, 1.025, 0.5125
        let c = build_chain(4.1f64.exp(), E, 2.0).unwrap();
        assert_eq!(c.q, 2);
        c.check_invariants().unwrap();
    }

    #[test]
    fn chain_rejects_the_boundary_case() {
        // x = t^(1/lambda) exactly violates the strict hypothesis
        let t = 9f64.exp();
        let x = 4.5f64.exp();
        assert!(matches!(build_chain(t, x, 2.0), Err(Error::ChainHypothesis { .. })));
    }

    #[test]
    fn telescoping_reproduces_the_difference() {
        let l1 = find_named("L1").unwrap();
        let view = l1.real_view().unwrap();
        let c = build_chain(20f64.exp(), E.powi(2), 2.0).unwrap();
        let tele = c.telescoping_sum(&view).unwrap();
        let direct = view.eval_at_log(20.0).unwrap() - view.eval_at_log(2.0).unwrap();
        assert!((tele - direct).abs() <= 1e-10, "{tele} vs {direct}");
    }

    #[test]
    fn lemma1_on_the_extremal_drop() {
        let l2 = find_named("L2").unwrap();
        let view = l2.real_view().unwrap();
        let w = window(&l2, WindowMode::Decrease, E * E, 2.0);
        let r = verify_lemma1(&view, &w, 2000, (3f64.exp()).exp(), 11).unwrap();
        assert!(r.passed, "worst margin {}", r.margin);
        assert!(r.gate_ok);
        // closed form: margin = (B1 - 1/log 2) * gap with gap > log 2
        assert!(r.margin > 1.0, "L2 margin should be at least (1/log2)·log2 = 1");
        assert_eq!(r.b1.to_bits(), b1_constant(2.0).to_bits());
    }

    #[test]
    fn lemma1_trivial_cases() {
        for name in ["L1", "C1"] {
            let s = find_named(name).unwrap();
            let view = s.real_view().unwrap();
            let w = window(&s, WindowMode::Decrease, E * E, 2.0);
            let r = verify_lemma1(&view, &w, 500, (3f64.exp()).exp(), 5).unwrap();
            assert!(r.passed, "{name} worst margin {}", r.margin);
            assert!(r.margin >= 0.0, "{name} margin should be nonnegative");
        }
    }

    #[test]
    fn lemma2_on_oscillating_members() {
        // window lambda = e: per-window oscillation <= 1, B1 = 2
        for name in ["O1", "C1", "L1"] {
            let s = find_named(name).unwrap();
            let w = window(&s, WindowMode::Oscillation, E * E, E);
            let r =
                verify_lemma2(&s.complex_view(), &w, 2000, (3f64.exp()).exp(), 23).unwrap();
            assert!(r.passed, "{name} worst margin {}", r.margin);
        }
    }

    #[test]
    fn lemma3_examples() {
        let t_samples: Vec<f64> = (3..=8).map(|k| ((k * 4) as f64).exp()).collect();

        let l1 = find_named("L1").unwrap();
        let w = window(&l1, WindowMode::Decrease, E * E, 2.0);
        let r = verify_lemma3(&l1.real_view().unwrap(), &w, &t_samples).unwrap();
        assert!(r.passed);
        assert!(r.margin >= b2_constant(2.0, E * E) - MARGIN_TOL, "L1 integrand >= 0");

        let l2 = find_named("L2").unwrap();
        let w = window(&l2, WindowMode::Decrease, E * E, 2.0);
        let r = verify_lemma3(&l2.real_view().unwrap(), &w, &t_samples).unwrap();
        assert!(r.passed, "L2 margin {}", r.margin);
        // closed form via integration by parts: LHS -> -1/log 2 as t grows,
        // well above -B2
        let (low, high) = r.split.unwrap();
        assert!(low < 0.0 && high < 0.0);
    }

    #[test]
    fn lemma3_refuses_invalid_windows() {
        let s1 = find_named("S1").unwrap();
        let w = SlowWindow { eps: 1.0, x0: E * E, lambda: 2.0, bracket: 4.0, worst: 0.0 };
        let err = verify_lemma3(&s1.real_view().unwrap(), &w, &[20f64.exp()]).unwrap_err();
        assert!(matches!(err, Error::InvalidWindow { .. }), "got {err:?}");
    }

    #[test]
    fn lemma4_examples() {
        let t_samples: Vec<f64> = (3..=8).map(|k| ((k * 4) as f64).exp()).collect();
        for name in ["C1", "O1", "L1"] {
            let s = find_named(name).unwrap();
            let w = window(&s, WindowMode::Oscillation, E * E, E);
            let r = verify_lemma4(&s.complex_view(), &w, &t_samples).unwrap();
            assert!(r.passed, "{name} margin {}", r.margin);
        }
    }

    #[test]
    fn lemma2_pass_implies_lemma4_pass() {
        // L2 oscillates by log λ / log 2 per window, so its eps = 1 window
        // needs λ <= 2; the others take λ = e
        let t_samples: Vec<f64> = (2..=6).map(|k| ((k * 5) as f64).exp()).collect();
        for (name, lambda) in [("C1", E), ("O1", E), ("L1", E), ("L2", 2.0)] {
            let s = find_named(name).unwrap();
            let w = window(&s, WindowMode::Oscillation, E * E, lambda);
            let r2 = verify_lemma2(&s.complex_view(), &w, 500, (3f64.exp()).exp(), 7).unwrap();
            if r2.passed {
                let r4 = verify_lemma4(&s.complex_view(), &w, &t_samples).unwrap();
                assert!(r4.passed, "{name}: lemma 2 passed but lemma 4 failed");
            }
        }
    }

    #[test]
    fn bn_for_constant_walks_the_window_floor() {
        let c1 = find_named("C1").unwrap();
        let view = c1.real_view().unwrap();
        let seq = construct_bn(&view, 3.5, 0.5, 2.0, E, 12, 5000.0).unwrap();
        assert_eq!(seq.n0, 0, "constant: every step is case (i)");
        seq.check_invariants(&view).unwrap();
        // each b_{n+1} is the first grid point past b_n^sqrt(lambda)
        let sq = 2f64.sqrt();
        for w in seq.log_b.windows(2) {
            let step = (2.0 - sq) * w[0] / defaults::DETECTOR_SAMPLES as f64;
            assert!(w[1] <= sq * w[0] + 2.0 * step, "jumped farther than one grid step");
        }
    }

    #[test]
    fn bn_for_spikes_avoids_the_spike_set() {
        let s2 = FunctionSpec::square_spikes("S2");
        let view = s2.real_view().unwrap();
        let seq = construct_bn(&view, 0.0, 0.5, 2.0, E, 10, 600.0).unwrap();
        assert!(seq.log_b.len() >= 8);
        seq.check_invariants(&view).unwrap();
        assert!(
            seq.case_log.iter().all(|c| matches!(c, StepCase::WithinWindow)),
            "spike gaps dominate every window"
        );
    }

    #[test]
    fn bn_for_v1_grows_past_the_accuracy_floor() {
        let v1 = find_named("V1").unwrap();
        let view = v1.real_view().unwrap();
        let seq = construct_bn(&view, 2.0, 0.1, 2.0, 8f64.exp(), 24, 2e4).unwrap();
        seq.check_invariants(&view).unwrap();
        assert!(seq.log_b[0] >= 10.0 - 1e-9, "|1/log x| <= 0.1 needs log x >= 10");
        assert!(seq.log_b.len() >= 20);
    }

    #[test]
    fn j_identity_near_coincident_points() {
        let v1 = find_named("V1").unwrap();
        let view = v1.real_view().unwrap();
        let x = 10f64.exp();
        let j = j_decomposition(&view, x, x * (1.0 + 1e-9), E.powi(2), ABS_TOL).unwrap();
        assert!(j.total.abs() <= 1e-6, "tau difference should vanish, got {:?}", j.total);
        assert!(j.defect <= 5.0 * ABS_TOL);
    }

    #[test]
    fn j_terms_cancel_for_constants() {
        let c1 = find_named("C1").unwrap();
        let view = c1.real_view().unwrap();
        let (x, t, x0) = (8f64.exp(), 12f64.exp(), E.powi(2));
        let j = j_decomposition(&view, x, t, x0, ABS_TOL).unwrap();
        let delta = 1.0 / x.ln() - 1.0 / t.ln();
        assert!((j.j1 - 3.5 * delta * x0.ln()).abs() <= 1e-12);
        assert!((j.j2 + 3.5 * delta * x0.ln()).abs() <= 2.0 * ABS_TOL);
        assert!(j.j3.abs() <= 2.0 * ABS_TOL && j.j4.abs() <= 2.0 * ABS_TOL);
        assert!(j.total.abs() <= 2.0 * ABS_TOL);
    }

    #[test]
    fn j_identity_for_loglog() {
        let l1 = find_named("L1").unwrap();
        let view = l1.real_view().unwrap();
        let j = j_decomposition(&view, 16f64.exp(), 20f64.exp(), E.powi(2), ABS_TOL).unwrap();
        assert!(j.defect <= 5.0 * ABS_TOL, "defect {}", j.defect);
    }

    #[test]
    fn constants_recompute_bit_for_bit() {
        let l2 = find_named("L2").unwrap();
        let w = window(&l2, WindowMode::Decrease, E * E, 2.0);
        let r = verify_lemma1(&l2.real_view().unwrap(), &w, 200, (3f64.exp()).exp(), 3).unwrap();
        assert_eq!(r.b1.to_bits(), (2.0f64 / 2.0f64.ln()).to_bits());
        assert_eq!(
            r.b2.to_bits(),
            (b1_constant(2.0) / 2.0 * (2.0f64.ln() + (E * E).ln().ln() + 1.0)).to_bits()
        );
    }

    #[test]
    fn liminf_probes() {
        // s = -loglog x: ratios tend to 0 from below
        let neg = FunctionSpec::from_real_pieces(
            "negll",
            vec![(Interval::new(1.0, f64::INFINITY), Expr::neg(Expr::loglog(Expr::x())))],
        )
        .unwrap();
        let view = neg.real_view().unwrap();
        let w = window(&neg, WindowMode::Decrease, E * E, 2.0);
        let r = check_liminf_s_over_x(&view, &w, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(r.passed, "rows: {:?}", r.rows);
        assert!(r.rows.last().unwrap().2 < 0.0, "-loglog/x approaches 0 from below");

        let c1 = find_named("C1").unwrap();
        let w = window(&c1, WindowMode::Decrease, E * E, 2.0);
        let r = check_liminf_s_over_x(&c1.real_view().unwrap(), &w, &[1, 2, 3]).unwrap();
        assert!(r.passed);
        assert!(r.rows.iter().all(|row| row.2 >= 0.0));

        let l2 = find_named("L2").unwrap();
        let w = window(&l2, WindowMode::Decrease, E * E, 2.0);
        let r = check_liminf_s_over_x(&l2.real_view().unwrap(), &w, &[1, 2, 4, 6]).unwrap();
        assert!(r.passed);
    }
}
