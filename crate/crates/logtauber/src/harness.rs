//! End-to-end empirical checks of the Tauberian implications over the
//! corpus, and machine checks of the corpus classification tags.
//!
//! Each theorem case assembles hypothesis evidence (ε-windows plus the
//! appropriate limit detector) and conclusion evidence (the ordinary limit
//! of `s`), then classifies the combination. Verdicts are three-valued by
//! design: finite horizons cannot certify asymptotics, so the suite
//! distinguishes "theorem exercised" (pass) from "hypothesis absent by
//! design" (consistent control) from "detector resolution exhausted"
//! (inconclusive). A genuine counterexample — hypothesis verified while the
//! conclusion detector reports *no* limit — would indicate a bug and makes
//! the suite exit nonzero.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::defaults;
use crate::error::Error;
use crate::func::PiecewiseFn;
use crate::funcspec::{builtin_corpus, Classification, Codomain, FunctionSpec};
use crate::logmean::{mean_curve, TauInterpolant};
use crate::scalar::Scalar;
use crate::statlimit::{
    default_horizons, detect_ordinary_limit, detect_statistical_limit, LimitVerdict, VerdictKind,
};
use crate::tauber::{find_window, WindowMode, WindowSearch};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, PartialOrd, Ord)]
pub enum TheoremId {
    A,
    B,
    T1,
    T2,
    T3,
    T4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] =
        [TheoremId::A, TheoremId::B, TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4];

    /// A, 1 and 3 speak about real-valued functions (slow decrease).
    pub fn requires_real(self) -> bool {
        matches!(self, TheoremId::A | TheoremId::T1 | TheoremId::T3)
    }

    pub fn window_mode(self) -> WindowMode {
        if self.requires_real() {
            WindowMode::Decrease
        } else {
            WindowMode::Oscillation
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::A => "A",
            TheoremId::B => "B",
            TheoremId::T1 => "1",
            TheoremId::T2 => "2",
            TheoremId::T3 => "3",
            TheoremId::T4 => "4",
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        match s {
            "A" | "a" => Some(TheoremId::A),
            "B" | "b" => Some(TheoremId::B),
            "1" => Some(TheoremId::T1),
            "2" => Some(TheoremId::T2),
            "3" => Some(TheoremId::T3),
            "4" => Some(TheoremId::T4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Hypothesis verified and the conclusion holds at the same limit.
    Pass,
    /// Hypothesis fails by design; nothing to contradict.
    ConsistentControl,
    /// A detector could not resolve the case at this horizon.
    Inconclusive,
    /// Hypothesis verified but the conclusion detector found no limit —
    /// impossible unless the artifact is broken.
    Counterexample,
    /// Real-only theorem on a complex-valued function.
    NotApplicable,
}

/// Erased detector verdict for reports.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictSummary {
    pub kind: VerdictKind,
    pub ell: Option<(f64, f64)>,
    pub oscillation: Option<f64>,
    /// Density at the largest horizon, per ε.
    pub tail_densities: Option<Vec<f64>>,
}

impl VerdictSummary {
    fn from_verdict<S: Scalar>(v: &LimitVerdict<S>) -> Self {
        VerdictSummary {
            kind: v.kind,
            ell: v.ell.map(|l| (l.re(), l.im())),
            oscillation: v.evidence.oscillation,
            tail_densities: if v.evidence.densities.is_empty() {
                None
            } else {
                Some(v.evidence.densities.iter().map(|row| *row.last().unwrap()).collect())
            },
        }
    }

    fn not_run() -> Self {
        VerdictSummary { kind: VerdictKind::Inconclusive, ell: None, oscillation: None, tail_densities: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCase {
    pub theorem: TheoremId,
    pub spec_name: String,
    pub horizon: f64,
    pub outcome: Outcome,
    pub windows: Vec<WindowSearch>,
    pub hypothesis_limit: VerdictSummary,
    pub conclusion: VerdictSummary,
    /// `|ℓ_hypothesis − ℓ_conclusion|` when both limits were detected.
    pub ell_distance: Option<f64>,
    pub agreement_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    /// Largest horizon `b`; detectors run on `e^4, e^8, …` up to it.
    pub horizon: f64,
    pub abs_tol: f64,
    pub epsilons: Vec<f64>,
    pub window_epsilons: Vec<f64>,
    pub decay_threshold: f64,
    pub ordinary_tol: f64,
    pub grid_density: f64,
    pub window_budget: usize,
    pub curve_points: usize,
}

impl SuiteConfig {
    pub fn at_horizon(horizon: f64) -> Self {
        SuiteConfig {
            horizon,
            abs_tol: defaults::ABS_TOL,
            epsilons: defaults::EPSILONS.to_vec(),
            window_epsilons: defaults::EPSILONS.to_vec(),
            decay_threshold: defaults::DECAY_THRESHOLD,
            ordinary_tol: defaults::ORDINARY_TOL,
            grid_density: defaults::GRID_DENSITY,
            window_budget: defaults::SEARCH_BUDGET,
            curve_points: 513,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon >= 16f64.exp()) {
            return Err(Error::Config("suite horizon must be at least e^16".into()));
        }
        for (what, v) in [
            ("abs_tol", self.abs_tol),
            ("decay_threshold", self.decay_threshold),
            ("ordinary_tol", self.ordinary_tol),
            ("grid_density", self.grid_density),
        ] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{what} must be positive")));
            }
        }
        if self.epsilons.is_empty() || self.window_epsilons.is_empty() {
            return Err(Error::Config("epsilon ladders must be nonempty".into()));
        }
        Ok(())
    }

    fn agreement_tol(&self) -> f64 {
        2.0 * (self.ordinary_tol + self.ordinary_tol)
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig::at_horizon(32f64.exp())
    }
}

/// Everything the six theorem cases of one spec share.
struct SpecAnalysis {
    windows_decrease: Option<Vec<WindowSearch>>,
    windows_oscillation: Vec<WindowSearch>,
    tau_ordinary: VerdictSummary,
    tau_statistical: VerdictSummary,
    s_statistical: VerdictSummary,
    s_ordinary: VerdictSummary,
}

fn analyze_typed<S: Scalar, F: PiecewiseFn<S>>(
    view: &F,
    real: bool,
    cfg: &SuiteConfig,
) -> Result<SpecAnalysis> {
    let horizons = default_horizons(cfg.horizon);
    let curve = mean_curve(view, defaults::T_MIN, cfg.horizon, cfg.curve_points, cfg.abs_tol)?;
    let interp: TauInterpolant<S> = curve.interpolant();

    let tau_ordinary = detect_ordinary_limit(&interp, &horizons, cfg.ordinary_tol)?;
    let tau_statistical =
        detect_statistical_limit(&interp, &horizons, &cfg.epsilons, cfg.decay_threshold)?;
    let s_statistical =
        detect_statistical_limit(view, &horizons, &cfg.epsilons, cfg.decay_threshold)?;
    let s_ordinary = detect_ordinary_limit(view, &horizons, cfg.ordinary_tol)?;

    let search_all = |mode: WindowMode| -> Result<Vec<WindowSearch>> {
        cfg.window_epsilons
            .iter()
            .map(|&eps| find_window(view, eps, mode, cfg.window_budget, cfg.grid_density))
            .collect()
    };
    let windows_oscillation = search_all(WindowMode::Oscillation)?;
    let windows_decrease = if real { Some(search_all(WindowMode::Decrease)?) } else { None };

    Ok(SpecAnalysis {
        windows_decrease,
        windows_oscillation,
        tau_ordinary: VerdictSummary::from_verdict(&tau_ordinary),
        tau_statistical: VerdictSummary::from_verdict(&tau_statistical),
        s_statistical: VerdictSummary::from_verdict(&s_statistical),
        s_ordinary: VerdictSummary::from_verdict(&s_ordinary),
    })
}

fn analyze(spec: &FunctionSpec, cfg: &SuiteConfig) -> Result<SpecAnalysis> {
    match spec.codomain() {
        Codomain::Real => analyze_typed::<f64, _>(&spec.real_view()?, true, cfg),
        Codomain::Complex => analyze_typed::<Complex64, _>(&spec.complex_view(), false, cfg),
    }
}

fn ell_distance(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(((x.0 - y.0).powi(2) + (x.1 - y.1).powi(2)).sqrt()),
        _ => None,
    }
}

fn assemble_case(
    id: TheoremId,
    spec: &FunctionSpec,
    analysis: &SpecAnalysis,
    cfg: &SuiteConfig,
) -> TheoremCase {
    let windows = match id.window_mode() {
        WindowMode::Decrease => analysis.windows_decrease.clone().unwrap_or_default(),
        WindowMode::Oscillation => analysis.windows_oscillation.clone(),
    };
    let hypothesis_limit = match id {
        TheoremId::A | TheoremId::B => analysis.tau_ordinary.clone(),
        TheoremId::T1 | TheoremId::T2 => analysis.s_statistical.clone(),
        TheoremId::T3 | TheoremId::T4 => analysis.tau_statistical.clone(),
    };
    let conclusion = analysis.s_ordinary.clone();

    let window_fail = windows.iter().any(|w| w.window.is_none());
    let limit_ok = match id {
        TheoremId::A | TheoremId::B => hypothesis_limit.kind == VerdictKind::Ordinary,
        _ => matches!(hypothesis_limit.kind, VerdictKind::Statistical | VerdictKind::Ordinary),
    };
    let limit_fail = hypothesis_limit.kind == VerdictKind::None;

    let dist = ell_distance(hypothesis_limit.ell, conclusion.ell);
    let agreement_tol = cfg.agreement_tol();

    let outcome = if window_fail || limit_fail {
        Outcome::ConsistentControl
    } else if !limit_ok {
        Outcome::Inconclusive
    } else {
        match conclusion.kind {
            VerdictKind::Ordinary => match dist {
                Some(d) if d <= agreement_tol => Outcome::Pass,
                // both limits detected but the detectors disagree beyond
                // their combined resolution: the horizon is too short
                _ => Outcome::Inconclusive,
            },
            VerdictKind::None => Outcome::Counterexample,
            _ => Outcome::Inconclusive,
        }
    };

    TheoremCase {
        theorem: id,
        spec_name: spec.name().to_string(),
        horizon: cfg.horizon,
        outcome,
        windows,
        hypothesis_limit,
        conclusion,
        ell_distance: dist,
        agreement_tol,
    }
}

/// Runs one theorem on one spec.
pub fn run_theorem(id: TheoremId, spec: &FunctionSpec, cfg: &SuiteConfig) -> Result<TheoremCase> {
    cfg.validate()?;
    if id.requires_real() && spec.codomain() == Codomain::Complex {
        return Ok(TheoremCase {
            theorem: id,
            spec_name: spec.name().to_string(),
            horizon: cfg.horizon,
            outcome: Outcome::NotApplicable,
            windows: Vec::new(),
            hypothesis_limit: VerdictSummary::not_run(),
            conclusion: VerdictSummary::not_run(),
            ell_distance: None,
            agreement_tol: cfg.agreement_tol(),
        });
    }
    let analysis = analyze(spec, cfg)?;
    Ok(assemble_case(id, spec, &analysis, cfg))
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub consistent_control: usize,
    pub inconclusive: usize,
    pub counterexample: usize,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub cases: Vec<TheoremCase>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn has_counterexample(&self) -> bool {
        self.summary.counterexample > 0
    }
}

/// Runs every applicable theorem × spec combination. Analyses run in a work
/// pool, one task per spec; the report is assembled in deterministic
/// (theorem, spec) order.
pub fn run_suite(specs: &[FunctionSpec], cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let analyses: Vec<(usize, SpecAnalysis)> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| analyze(spec, cfg).map(|a| (i, a)))
        .collect::<Result<Vec<_>>>()?;

    let mut cases = Vec::new();
    for id in TheoremId::ALL {
        for (i, analysis) in &analyses {
            let spec = &specs[*i];
            if id.requires_real() && spec.codomain() == Codomain::Complex {
                continue; // marked not applicable; skipped from the report
            }
            cases.push(assemble_case(id, spec, analysis, cfg));
        }
    }
    let mut summary = Summary::default();
    for c in &cases {
        match c.outcome {
            Outcome::Pass => summary.pass += 1,
            Outcome::ConsistentControl => summary.consistent_control += 1,
            Outcome::Inconclusive => summary.inconclusive += 1,
            Outcome::Counterexample => summary.counterexample += 1,
            Outcome::NotApplicable => summary.not_applicable += 1,
        }
    }
    Ok(SuiteReport { config: cfg.clone(), cases, summary })
}

/// Machine check of one corpus classification tag set.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationCheck {
    pub name: String,
    /// `None` when the property does not apply (complex codomain).
    pub decrease_ok: Option<bool>,
    pub oscillation_ok: bool,
    pub summable_ok: bool,
    pub statistical_ok: bool,
    pub ordinary_ok: bool,
}

impl ClassificationCheck {
    pub fn all_ok(&self) -> bool {
        self.decrease_ok.unwrap_or(true)
            && self.oscillation_ok
            && self.summable_ok
            && self.statistical_ok
            && self.ordinary_ok
    }
}

const CLASSIFY_ELL_TOL: f64 = 0.05;

fn check_one_classification(
    spec: &FunctionSpec,
    tags: &Classification,
) -> Result<ClassificationCheck> {
    let window_eps = [1.0, 0.5, 0.1];
    let all_windows = |mode: WindowMode| -> Result<bool> {
        for eps in window_eps {
            let found = match spec.codomain() {
                Codomain::Real => find_window(
                    &spec.real_view()?,
                    eps,
                    mode,
                    defaults::SEARCH_BUDGET,
                    defaults::GRID_DENSITY,
                )?,
                Codomain::Complex => find_window(
                    &spec.complex_view(),
                    eps,
                    mode,
                    defaults::SEARCH_BUDGET,
                    defaults::GRID_DENSITY,
                )?,
            };
            if found.window.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let decrease_ok = match tags.slowly_decreasing {
        None => None,
        Some(expected) => Some(all_windows(WindowMode::Decrease)? == expected),
    };
    let oscillation_ok = all_windows(WindowMode::Oscillation)? == tags.slowly_oscillating;

    // (L,1) summability: tail of the tau curve at a deep horizon, judged
    // over the last half unit of loglog t (a fixed t-decade shrinks to
    // nothing on the loglog scale and would eventually miss slow drifts)
    let deep = 256f64.exp();
    let summable_ok = {
        let (tail_osc, tail_mid_re, tail_mid_im) = match spec.codomain() {
            Codomain::Real => {
                let mc = mean_curve(
                    &spec.real_view()?,
                    defaults::T_MIN,
                    deep,
                    513,
                    defaults::ABS_TOL,
                )?;
                tail_box(&mc.log_grid, &mc.tau.iter().map(|&v| (v, 0.0)).collect::<Vec<_>>())
            }
            Codomain::Complex => {
                let mc = mean_curve(
                    &spec.complex_view(),
                    defaults::T_MIN,
                    deep,
                    513,
                    defaults::ABS_TOL,
                )?;
                tail_box(&mc.log_grid, &mc.tau.iter().map(|&v| (v.re, v.im)).collect::<Vec<_>>())
            }
        };
        match tags.l1_limit {
            Some((re, im)) => {
                tail_osc < defaults::ORDINARY_TOL
                    && ((tail_mid_re - re).powi(2) + (tail_mid_im - im).powi(2)).sqrt()
                        <= CLASSIFY_ELL_TOL
            }
            None => tail_osc >= defaults::ORDINARY_TOL,
        }
    };

    let horizons = default_horizons(32f64.exp());
    let stat = match spec.codomain() {
        Codomain::Real => VerdictSummary::from_verdict(&detect_statistical_limit(
            &spec.real_view()?,
            &horizons,
            &defaults::EPSILONS,
            defaults::DECAY_THRESHOLD,
        )?),
        Codomain::Complex => VerdictSummary::from_verdict(&detect_statistical_limit(
            &spec.complex_view(),
            &horizons,
            &defaults::EPSILONS,
            defaults::DECAY_THRESHOLD,
        )?),
    };
    let statistical_ok = match tags.statistical_limit {
        Some(ell) => {
            matches!(stat.kind, VerdictKind::Statistical | VerdictKind::Ordinary)
                && ell_distance(stat.ell, Some(ell)).unwrap() <= CLASSIFY_ELL_TOL
        }
        None => !matches!(stat.kind, VerdictKind::Statistical | VerdictKind::Ordinary),
    };

    // judged at the default horizon: a t-decade at much deeper horizons
    // covers almost no loglog scale and stops resolving slow oscillations
    let ord = match spec.codomain() {
        Codomain::Real => VerdictSummary::from_verdict(&detect_ordinary_limit(
            &spec.real_view()?,
            &horizons,
            defaults::ORDINARY_TOL,
        )?),
        Codomain::Complex => VerdictSummary::from_verdict(&detect_ordinary_limit(
            &spec.complex_view(),
            &horizons,
            defaults::ORDINARY_TOL,
        )?),
    };
    let ordinary_ok = match tags.ordinary_limit {
        Some(ell) => {
            ord.kind == VerdictKind::Ordinary
                && ell_distance(ord.ell, Some(ell)).unwrap() <= CLASSIFY_ELL_TOL
        }
        None => ord.kind != VerdictKind::Ordinary,
    };

    Ok(ClassificationCheck {
        name: spec.name().to_string(),
        decrease_ok,
        oscillation_ok,
        summable_ok,
        statistical_ok,
        ordinary_ok,
    })
}

fn tail_box(log_grid: &[f64], tau: &[(f64, f64)]) -> (f64, f64, f64) {
    let v_max = log_grid.last().unwrap().ln();
    let (mut re_lo, mut re_hi) = (f64::MAX, f64::MIN);
    let (mut im_lo, mut im_hi) = (f64::MAX, f64::MIN);
    for (&u, &(re, im)) in log_grid.iter().zip(tau) {
        if u.ln() >= v_max - 0.5 {
            re_lo = re_lo.min(re);
            re_hi = re_hi.max(re);
            im_lo = im_lo.min(im);
            im_hi = im_hi.max(im);
        }
    }
    let osc = ((re_hi - re_lo).powi(2) + (im_hi - im_lo).powi(2)).sqrt();
    (osc, 0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))
}

/// Checks every builtin corpus tag against computed evidence. The tags are
/// expectations, not assertions: this is where they get earned.
pub fn check_classifications() -> Result<Vec<ClassificationCheck>> {
    builtin_corpus()
        .par_iter()
        .map(|e| check_one_classification(&e.spec, &e.classification))
        .collect()
}
