//! Test functions `s : [1, ∞) → ℝ or ℂ` as piecewise closed-form
//! expressions, plus the built-in corpus.
//!
//! A spec is either an explicit ordered list of half-open pieces covering
//! `[1, ∞)` or a procedural piece source (the square-spike family, whose
//! pieces are enumerated lazily). Typed views ([`SpecView`]) adapt a spec to
//! the [`PiecewiseFn`] abstraction for a chosen codomain scalar; requesting
//! a real view of a complex spec fails, which keeps complex functions out
//! of the real-only operations.

pub mod corpus;
pub mod expr;
pub mod parse;
pub mod spikes;

use std::fmt;
use std::marker::PhantomData;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::func::PiecewiseFn;
use crate::scalar::Scalar;
use crate::Result;

pub use corpus::{builtin_corpus, integrand_corpus, Classification, CorpusEntry};
pub use expr::{EvalPoint, Expr};
pub use parse::{parse_expr, parse_spec};

/// Half-open interval `[lo, hi)`; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_infinite() {
            write!(f, "[{}, inf)", expr::fmt_f64(self.lo))
        } else {
            write!(f, "[{}, {})", expr::fmt_f64(self.lo), expr::fmt_f64(self.hi))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Codomain {
    Real,
    Complex,
}

/// Untyped evaluation result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(Complex64),
}

impl Value {
    pub fn re(&self) -> f64 {
        match self {
            Value::Real(v) => *v,
            Value::Complex(v) => v.re,
        }
    }
    pub fn im(&self) -> f64 {
        match self {
            Value::Real(_) => 0.0,
            Value::Complex(v) => v.im,
        }
    }
    pub fn modulus(&self) -> f64 {
        match self {
            Value::Real(v) => v.abs(),
            Value::Complex(v) => v.norm(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum PieceExpr {
    Real(Expr),
    Complex { re: Expr, im: Expr },
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub interval: Interval,
    pub expr: PieceExpr,
}

#[derive(Debug, Clone)]
enum PieceSet {
    Explicit(Vec<Piece>),
    SquareSpikes,
}

/// A locally integrable function on `[1, ∞)` with a name.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    name: String,
    codomain: Codomain,
    pieces: PieceSet,
    /// Sorted interior jump/kink points of explicit specs: piece boundaries
    /// plus indicator edges. Empty for procedural sets.
    jumps: Vec<f64>,
}

/// Probes per piece used for the parse-time domain check.
const DOMAIN_PROBES: usize = 64;
/// Horizon up to which unbounded pieces are probed.
const PROBE_CAP: f64 = 1e12;

impl FunctionSpec {
    pub fn parse(name: &str, source: &str) -> Result<Self> {
        parse::parse_spec(name, source)
    }

    pub fn from_real_pieces(name: &str, pieces: Vec<(Interval, Expr)>) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(interval, e)| Piece { interval, expr: PieceExpr::Real(e) })
            .collect();
        Self::build(name, Codomain::Real, pieces)
    }

    /// Complex codomain as a pair of real expressions per piece.
    pub fn from_complex_pieces(name: &str, pieces: Vec<(Interval, Expr, Expr)>) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(interval, re, im)| Piece { interval, expr: PieceExpr::Complex { re, im } })
            .collect();
        Self::build(name, Codomain::Complex, pieces)
    }

    /// The square-spike family: `1` on `[n², n²+1)` for integer `n ≥ 2`,
    /// `0` elsewhere, with lazily enumerated pieces.
    pub fn square_spikes(name: &str) -> Self {
        FunctionSpec {
            name: name.to_string(),
            codomain: Codomain::Real,
            pieces: PieceSet::SquareSpikes,
            jumps: Vec::new(),
        }
    }

    fn build(name: &str, codomain: Codomain, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::PieceLayout("a spec needs at least one piece".into()));
        }
        if pieces[0].interval.lo != 1.0 {
            return Err(Error::PieceLayout(format!(
                "the first piece must start at 1, found {}",
                pieces[0].interval.lo
            )));
        }
        for w in pieces.windows(2) {
            let (a, b) = (w[0].interval, w[1].interval);
            if a.hi > b.lo {
                return Err(Error::PieceLayout(format!("pieces {a} and {b} overlap")));
            }
            if a.hi < b.lo {
                return Err(Error::PieceLayout(format!("gap between pieces {a} and {b}")));
            }
        }
        let last = pieces.last().unwrap().interval;
        if !last.hi.is_infinite() {
            return Err(Error::PieceLayout(format!(
                "the last piece {last} must be unbounded"
            )));
        }
        let mut jumps: Vec<f64> = pieces.iter().skip(1).map(|p| p.interval.lo).collect();
        for p in &pieces {
            for e in piece_exprs(&p.expr) {
                collect_indicator_edges(e, &mut jumps);
            }
        }
        jumps.retain(|&x| x > 1.0 && x.is_finite());
        jumps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        jumps.dedup();

        let spec = FunctionSpec { name: name.to_string(), codomain, pieces: PieceSet::Explicit(pieces), jumps };
        spec.probe_domains()?;
        Ok(spec)
    }

    /// Evaluates every piece on a deterministic interior grid; any failure
    /// is reported as a parse-time domain error. This catches expressions
    /// like `log(x - 2)` declared on a piece where the argument goes
    /// non-positive, without false alarms from conservative range analysis.
    fn probe_domains(&self) -> Result<()> {
        let PieceSet::Explicit(pieces) = &self.pieces else { return Ok(()) };
        for p in pieces {
            let lo = p.interval.lo;
            let hi = if p.interval.hi.is_finite() {
                p.interval.hi
            } else {
                (lo * 2.0).max(PROBE_CAP)
            };
            let (ulo, uhi) = (lo.ln(), hi.ln());
            for k in 0..DOMAIN_PROBES {
                let u = ulo + (uhi - ulo) * (k as f64 + 0.5) / DOMAIN_PROBES as f64;
                let x = u.exp();
                if !p.interval.contains(x) && !(p.interval.hi.is_infinite() && x >= lo) {
                    continue;
                }
                for e in piece_exprs(&p.expr) {
                    e.eval(EvalPoint::at(x)).map_err(|err| match err {
                        Error::Domain { what, .. } => Error::Domain { what, x },
                        other => other,
                    })?;
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    /// Number of explicit pieces; `None` for procedural piece sets.
    pub fn piece_count(&self) -> Option<usize> {
        match &self.pieces {
            PieceSet::Explicit(p) => Some(p.len()),
            PieceSet::SquareSpikes => None,
        }
    }

    fn piece_at(&self, x: f64) -> Result<&Piece> {
        let PieceSet::Explicit(pieces) = &self.pieces else {
            return Err(Error::Precondition("procedural piece set".into()));
        };
        if !(x >= 1.0) || !x.is_finite() {
            return Err(Error::Precondition(format!(
                "evaluation point must satisfy 1 <= x < inf, got {x}"
            )));
        }
        let idx = pieces.partition_point(|p| p.interval.lo <= x);
        let piece = &pieces[idx - 1];
        debug_assert!(piece.interval.contains(x));
        Ok(piece)
    }

    pub fn evaluate(&self, x: f64) -> Result<Value> {
        self.evaluate_point(EvalPoint::at(x))
    }

    pub fn evaluate_at_log(&self, log_x: f64) -> Result<Value> {
        self.evaluate_point(EvalPoint::at_log(log_x))
    }

    fn evaluate_point(&self, p: EvalPoint) -> Result<Value> {
        if p.log_x < 0.0 || p.log_x.is_nan() {
            return Err(Error::Precondition(format!(
                "evaluation point must satisfy x >= 1, got log x = {}",
                p.log_x
            )));
        }
        match &self.pieces {
            PieceSet::SquareSpikes => {
                let x = p.x.ok_or(Error::Overflow { log_x: p.log_x })?;
                Ok(Value::Real(spikes::eval(x)))
            }
            PieceSet::Explicit(_) => {
                // piece lookup works on x when representable; beyond that the
                // last (unbounded) piece necessarily applies
                let piece = match p.x {
                    Some(x) => self.piece_at(x)?,
                    None => match &self.pieces {
                        PieceSet::Explicit(pieces) => pieces.last().unwrap(),
                        _ => unreachable!(),
                    },
                };
                match &piece.expr {
                    PieceExpr::Real(e) => Ok(Value::Real(e.eval(p)?)),
                    PieceExpr::Complex { re, im } => {
                        Ok(Value::Complex(Complex64::new(re.eval(p)?, im.eval(p)?)))
                    }
                }
            }
        }
    }

    /// DSL text that parses back to an identically evaluating spec.
    /// Procedural and complex specs have no DSL form.
    pub fn to_dsl(&self) -> Result<String> {
        let PieceSet::Explicit(pieces) = &self.pieces else {
            return Err(Error::Unprintable(self.name.clone()));
        };
        let mut out = String::new();
        for (i, p) in pieces.iter().enumerate() {
            let PieceExpr::Real(e) = &p.expr else {
                return Err(Error::Unprintable(self.name.clone()));
            };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("piece {}: {};", p.interval, e));
        }
        Ok(out)
    }

    /// Typed view implementing [`PiecewiseFn`] for the scalar `S`.
    pub fn view<S: Scalar>(&self) -> Result<SpecView<'_, S>> {
        if S::CODOMAIN == Codomain::Real && self.codomain == Codomain::Complex {
            return Err(Error::CodomainMismatch);
        }
        Ok(SpecView { spec: self, _marker: PhantomData })
    }

    pub fn real_view(&self) -> Result<SpecView<'_, f64>> {
        self.view::<f64>()
    }

    pub fn complex_view(&self) -> SpecView<'_, Complex64> {
        self.view::<Complex64>().expect("complex view is always valid")
    }

    pub fn to_json(&self) -> String {
        let json = match &self.pieces {
            PieceSet::SquareSpikes => SpecJson {
                name: self.name.clone(),
                codomain: self.codomain,
                generator: Some("square_spikes".into()),
                pieces: Vec::new(),
            },
            PieceSet::Explicit(pieces) => SpecJson {
                name: self.name.clone(),
                codomain: self.codomain,
                generator: None,
                pieces: pieces
                    .iter()
                    .map(|p| {
                        let (expr, im_expr) = match &p.expr {
                            PieceExpr::Real(e) => (e.to_string(), None),
                            PieceExpr::Complex { re, im } => {
                                (re.to_string(), Some(im.to_string()))
                            }
                        };
                        PieceJson {
                            lo: p.interval.lo,
                            hi: if p.interval.hi.is_finite() { Some(p.interval.hi) } else { None },
                            expr,
                            im_expr,
                        }
                    })
                    .collect(),
            },
        };
        serde_json::to_string_pretty(&json).expect("spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: SpecJson =
            serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))?;
        if let Some(gen) = &json.generator {
            if gen == "square_spikes" {
                return Ok(FunctionSpec::square_spikes(&json.name));
            }
            return Err(Error::Serialize(format!("unknown generator '{gen}'")));
        }
        match json.codomain {
            Codomain::Real => {
                let pieces = json
                    .pieces
                    .iter()
                    .map(|p| {
                        Ok((Interval::new(p.lo, p.hi.unwrap_or(f64::INFINITY)), parse_expr(&p.expr)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FunctionSpec::from_real_pieces(&json.name, pieces)
            }
            Codomain::Complex => {
                let pieces = json
                    .pieces
                    .iter()
                    .map(|p| {
                        let re = parse_expr(&p.expr)?;
                        let im = match &p.im_expr {
                            Some(s) => parse_expr(s)?,
                            None => Expr::c(0.0),
                        };
                        Ok((Interval::new(p.lo, p.hi.unwrap_or(f64::INFINITY)), re, im))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FunctionSpec::from_complex_pieces(&json.name, pieces)
            }
        }
    }

    fn breakpoints_impl(&self, lo: f64, hi: f64, cap: usize) -> Vec<f64> {
        match &self.pieces {
            PieceSet::Explicit(_) => self
                .jumps
                .iter()
                .copied()
                .filter(|&x| x > lo && x < hi)
                .take(cap)
                .collect(),
            PieceSet::SquareSpikes => spikes::breakpoints_within(lo, hi, cap),
        }
    }

    /// One-sided values at `x`: the left limit comes from the piece ending
    /// at `x` (its expression extends continuously to the closed endpoint).
    fn one_sided_impl(&self, x: f64) -> Result<(Value, Value)> {
        match &self.pieces {
            PieceSet::SquareSpikes => {
                let (l, r) = spikes::one_sided(x);
                Ok((Value::Real(l), Value::Real(r)))
            }
            PieceSet::Explicit(pieces) => {
                let right = self.evaluate(x)?;
                let idx = pieces.partition_point(|p| p.interval.lo < x);
                let left = if idx > 0 && idx < pieces.len() && pieces[idx].interval.lo == x {
                    let prev = &pieces[idx - 1];
                    eval_piece(prev, EvalPoint::at(x))
                        .or_else(|_| eval_piece(prev, EvalPoint::at(x * (1.0 - 5e-13))))?
                } else {
                    right
                };
                Ok((left, right))
            }
        }
    }

    fn is_spikes(&self) -> bool {
        matches!(self.pieces, PieceSet::SquareSpikes)
    }
}

fn eval_piece(p: &Piece, at: EvalPoint) -> Result<Value> {
    match &p.expr {
        PieceExpr::Real(e) => Ok(Value::Real(e.eval(at)?)),
        PieceExpr::Complex { re, im } => {
            Ok(Value::Complex(Complex64::new(re.eval(at)?, im.eval(at)?)))
        }
    }
}

fn piece_exprs(pe: &PieceExpr) -> Vec<&Expr> {
    match pe {
        PieceExpr::Real(e) => vec![e],
        PieceExpr::Complex { re, im } => vec![re, im],
    }
}

fn collect_indicator_edges(e: &Expr, out: &mut Vec<f64>) {
    use Expr::*;
    match e {
        Indicator(iv) => {
            out.push(iv.lo);
            out.push(iv.hi);
        }
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
            collect_indicator_edges(a, out);
            collect_indicator_edges(b, out);
        }
        Neg(a) | Sin(a) | Cos(a) | Exp(a) | Log(a) | LogLog(a) | Abs(a) => {
            collect_indicator_edges(a, out);
        }
        Const(_) | Var => {}
    }
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    name: String,
    codomain: Codomain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pieces: Vec<PieceJson>,
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    lo: f64,
    /// `null` encodes an unbounded piece.
    hi: Option<f64>,
    expr: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im_expr: Option<String>,
}

/// Typed adapter of a [`FunctionSpec`] to [`PiecewiseFn<S>`].
pub struct SpecView<'a, S> {
    spec: &'a FunctionSpec,
    _marker: PhantomData<S>,
}

impl<'a, S: Scalar> SpecView<'a, S> {
    pub fn spec(&self) -> &'a FunctionSpec {
        self.spec
    }

    fn value_to_scalar(v: Value) -> S {
        match v {
            Value::Real(r) => S::from_re(r),
            Value::Complex(c) => S::from_re_im(c.re, c.im),
        }
    }
}

impl<'a, S: Scalar> PiecewiseFn<S> for SpecView<'a, S> {
    fn eval(&self, x: f64) -> Result<S> {
        Ok(Self::value_to_scalar(self.spec.evaluate(x)?))
    }

    fn eval_at_log(&self, log_x: f64) -> Result<S> {
        Ok(Self::value_to_scalar(self.spec.evaluate_at_log(log_x)?))
    }

    fn breakpoints_within(&self, lo: f64, hi: f64, cap: usize) -> Vec<f64> {
        self.spec.breakpoints_impl(lo, hi, cap)
    }

    fn one_sided(&self, x: f64) -> Result<(S, S)> {
        let (l, r) = self.spec.one_sided_impl(x)?;
        Ok((Self::value_to_scalar(l), Self::value_to_scalar(r)))
    }

    fn weighted_integral(&self, a: f64, b: f64, abs_tol: f64) -> Result<S> {
        if self.spec.is_spikes() {
            return Ok(S::from_re(spikes::weighted_integral(a, b)));
        }
        crate::func::weighted_integral_default(self, a, b, abs_tol)
    }

    fn level_measure_hint(&self, ell: S, eps: f64, a: f64, b: f64) -> Option<f64> {
        if self.spec.is_spikes() {
            let d1 = (S::from_re(1.0) - ell).modulus();
            let d0 = ell.modulus();
            return Some(spikes::level_measure(d1, d0, eps, a, b));
        }
        None
    }
}
