//! Expression AST over the variable `x` and its evaluator.
//!
//! Evaluation carries both `x` and `log x` so that `log(x)` and `loglog(x)`
//! chains stay exact (and defined) when `x` itself would overflow an `f64`;
//! the variable node materializes `x` only when actually reached.

use std::fmt;

use crate::error::Error;
use crate::func::MAX_LOG_REPRESENTABLE;
use crate::funcspec::Interval;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    LogLog(Box<Expr>),
    Abs(Box<Expr>),
    Indicator(Interval),
}

/// Evaluation point: `log_x` is authoritative, `x` is present only while it
/// is representable.
#[derive(Debug, Clone, Copy)]
pub struct EvalPoint {
    pub x: Option<f64>,
    pub log_x: f64,
}

impl EvalPoint {
    pub fn at(x: f64) -> Self {
        EvalPoint { x: Some(x), log_x: x.ln() }
    }

    pub fn at_log(log_x: f64) -> Self {
        let x = if log_x <= MAX_LOG_REPRESENTABLE {
            Some(log_x.exp())
        } else {
            None
        };
        EvalPoint { x, log_x }
    }

    fn var(&self) -> Result<f64> {
        self.x.ok_or(Error::Overflow { log_x: self.log_x })
    }
}

impl Expr {
    pub fn eval(&self, p: EvalPoint) -> Result<f64> {
        let v = self.eval_inner(p)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { x: p.x.unwrap_or(f64::INFINITY) })
        }
    }

    fn eval_inner(&self, p: EvalPoint) -> Result<f64> {
        use Expr::*;
        Ok(match self {
            Const(c) => *c,
            Var => p.var()?,
            Add(a, b) => a.eval_inner(p)? + b.eval_inner(p)?,
            Sub(a, b) => a.eval_inner(p)? - b.eval_inner(p)?,
            Mul(a, b) => a.eval_inner(p)? * b.eval_inner(p)?,
            Div(a, b) => {
                let den = b.eval_inner(p)?;
                if den == 0.0 {
                    return Err(Error::Domain {
                        what: "division by zero".into(),
                        x: p.x.unwrap_or(f64::NAN),
                    });
                }
                a.eval_inner(p)? / den
            }
            Pow(a, b) => {
                let base = a.eval_inner(p)?;
                let exp = b.eval_inner(p)?;
                let v = base.powf(exp);
                if v.is_nan() {
                    return Err(Error::Domain {
                        what: format!("{base}^{exp} is undefined"),
                        x: p.x.unwrap_or(f64::NAN),
                    });
                }
                v
            }
            Neg(a) => -a.eval_inner(p)?,
            Sin(a) => a.eval_inner(p)?.sin(),
            Cos(a) => a.eval_inner(p)?.cos(),
            Exp(a) => a.eval_inner(p)?.exp(),
            Log(a) => match a.as_ref() {
                // log(x) reads the log coordinate directly: exact at any scale
                Var => p.log_x,
                inner => {
                    let v = inner.eval_inner(p)?;
                    if v <= 0.0 {
                        return Err(Error::Domain {
                            what: format!("log of non-positive value {v}"),
                            x: p.x.unwrap_or(f64::NAN),
                        });
                    }
                    v.ln()
                }
            },
            LogLog(a) => match a.as_ref() {
                Var => {
                    if p.log_x <= 0.0 {
                        return Err(Error::Domain {
                            what: "loglog undefined for x <= 1".into(),
                            x: p.x.unwrap_or(f64::NAN),
                        });
                    }
                    p.log_x.ln()
                }
                inner => {
                    let v = inner.eval_inner(p)?;
                    if v <= 1.0 {
                        return Err(Error::Domain {
                            what: format!("loglog of value {v} <= 1"),
                            x: p.x.unwrap_or(f64::NAN),
                        });
                    }
                    v.ln().ln()
                }
            },
            Abs(a) => a.eval_inner(p)?.abs(),
            Indicator(iv) => {
                if iv.contains(p.var()?) {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    pub fn contains_var(&self) -> bool {
        use Expr::*;
        match self {
            Const(_) => false,
            Var | Indicator(_) => true,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.contains_var() || b.contains_var()
            }
            Neg(a) | Sin(a) | Cos(a) | Exp(a) | Log(a) | LogLog(a) | Abs(a) => a.contains_var(),
        }
    }

    /// Value of a constant expression (no `x`, no indicators).
    pub fn eval_const(&self) -> Result<f64> {
        if self.contains_var() {
            return Err(Error::Precondition(
                "expected a constant expression, found the variable x".into(),
            ));
        }
        // the evaluation point is irrelevant for constant expressions
        self.eval(EvalPoint::at(2.0))
    }

    fn precedence(&self) -> u8 {
        use Expr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            Pow(..) => 4,
            Const(c) if *c < 0.0 => 3,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        use Expr::*;
        let prec = self.precedence();
        let needs = prec < parent || (prec == parent && right && matches!(self, Add(..) | Sub(..) | Mul(..) | Div(..)));
        if needs {
            write!(f, "(")?;
        }
        match self {
            Const(c) => write!(f, "{}", fmt_f64(*c))?,
            Var => write!(f, "x")?,
            Add(a, b) => {
                a.fmt_prec(f, 1, false)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 1, true)?;
            }
            Sub(a, b) => {
                a.fmt_prec(f, 1, false)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2, true)?;
            }
            Mul(a, b) => {
                a.fmt_prec(f, 2, false)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 2, true)?;
            }
            Div(a, b) => {
                a.fmt_prec(f, 2, false)?;
                write!(f, " / ")?;
                b.fmt_prec(f, 3, true)?;
            }
            Pow(a, b) => {
                a.fmt_prec(f, 5, false)?;
                write!(f, "^")?;
                b.fmt_prec(f, 4, true)?;
            }
            Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3, true)?;
            }
            Sin(a) => write_call(f, "sin", a)?,
            Cos(a) => write_call(f, "cos", a)?,
            Exp(a) => write_call(f, "exp", a)?,
            Log(a) => write_call(f, "log", a)?,
            LogLog(a) => write_call(f, "loglog", a)?,
            Abs(a) => write_call(f, "abs", a)?,
            Indicator(iv) => write!(f, "indicator({iv})")?,
        }
        if needs {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, arg: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    arg.fmt_prec(f, 0, false)?;
    write!(f, ")")
}

pub(crate) use crate::func::fmt_compact as fmt_f64;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, false)
    }
}

// convenience constructors, used by the corpus and tests
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }
    pub fn x() -> Expr {
        Expr::Var
    }
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }
    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }
    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }
    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }
    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }
    pub fn log(a: Expr) -> Expr {
        Expr::Log(Box::new(a))
    }
    pub fn loglog(a: Expr) -> Expr {
        Expr::LogLog(Box::new(a))
    }
    pub fn abs(a: Expr) -> Expr {
        Expr::Abs(Box::new(a))
    }
}
