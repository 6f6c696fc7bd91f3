//! Built-in corpus of test functions and their expected classifications.
//!
//! The members are chosen so that every combination of properties that the
//! summability theory distinguishes is represented: ordinary convergence,
//! purely statistical convergence, `(L,1)` summability without convergence,
//! slow oscillation without summability, and drifts that are slowly
//! oscillating but diverge. The tags below are expectations; the harness
//! checks them against computed evidence rather than asserting them by fiat.

use std::f64::consts::{E, LN_2};

use serde::Serialize;

use crate::funcspec::expr::Expr;
use crate::funcspec::{FunctionSpec, Interval};

/// Expected analytic classification of a corpus member.
///
/// `slowly_decreasing` is `None` for complex-valued members (the notion is
/// real-only). Limits are `(re, im)` pairs; `None` means the limit does not
/// exist.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Classification {
    pub slowly_decreasing: Option<bool>,
    pub slowly_oscillating: bool,
    /// `ℓ` with `τ(t) → ℓ`, when the function is `(L,1)`-summable.
    pub l1_limit: Option<(f64, f64)>,
    pub statistical_limit: Option<(f64, f64)>,
    pub ordinary_limit: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub spec: FunctionSpec,
    pub classification: Classification,
}

fn unbounded() -> Interval {
    Interval::new(1.0, f64::INFINITY)
}

fn real(l: f64) -> Option<(f64, f64)> {
    Some((l, 0.0))
}

/// The corpus: `C1` constant, `S1 = sin(log x)`, `S2` square spikes,
/// `L1 = loglog x`, `L2 = -loglog x / log 2`, `O1 = sin(loglog x)`,
/// `V1 = 2 + 1/log x` past `e`, and a complex analogue `X1` of `V1`.
#[allow(clippy::vec_init_then_push)]
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();

    out.push(CorpusEntry {
        spec: FunctionSpec::from_real_pieces("C1", vec![(unbounded(), Expr::c(3.5))]).unwrap(),
        classification: Classification {
            slowly_decreasing: Some(true),
            slowly_oscillating: true,
            l1_limit: real(3.5),
            statistical_limit: real(3.5),
            ordinary_limit: real(3.5),
        },
    });

    out.push(CorpusEntry {
        spec: FunctionSpec::from_real_pieces(
            "S1",
            vec![(unbounded(), Expr::sin(Expr::log(Expr::x())))],
        )
        .unwrap(),
        classification: Classification {
            slowly_decreasing: Some(false),
            slowly_oscillating: false,
            l1_limit: real(0.0),
            statistical_limit: None,
            ordinary_limit: None,
        },
    });

    out.push(CorpusEntry {
        spec: FunctionSpec::square_spikes("S2"),
        classification: Classification {
            slowly_decreasing: Some(false),
            slowly_oscillating: false,
            l1_limit: real(0.0),
            statistical_limit: real(0.0),
            ordinary_limit: None,
        },
    });

    out.push(CorpusEntry {
        spec: FunctionSpec::from_real_pieces(
            "L1",
            vec![(unbounded(), Expr::loglog(Expr::x()))],
        )
        .unwrap(),
        classification: Classification {
            slowly_decreasing: Some(true),
            slowly_oscillating: true,
            l1_limit: None,
            statistical_limit: None,
            ordinary_limit: None,
        },
    });

    // drop over any window (x, x^2] is exactly -1: extremal for the
    // eps = 1 slow-decrease window at lambda = 2
    out.push(CorpusEntry {
        spec: FunctionSpec::from_real_pieces(
            "L2",
            vec![(
                unbounded(),
                Expr::div(Expr::neg(Expr::loglog(Expr::x())), Expr::c(LN_2)),
            )],
        )
        .unwrap(),
        classification: Classification {
            slowly_decreasing: Some(true),
            slowly_oscillating: true,
            l1_limit: None,
            statistical_limit: None,
            ordinary_limit: None,
        },
    });

    out.push(CorpusEntry {
        spec: FunctionSpec::from_real_pieces(
            "O1",
            vec![(unbounded(), Expr::sin(Expr::loglog(Expr::x())))],
        )
        .unwrap(),
        classification: Classification {
            slowly_decreasing: Some(true),
            slowly_oscillating: true,
            l1_limit: None,
            statistical_limit: None,
            ordinary_limit: None,
        },
    });

    out.push(CorpusEntry {
        spec: FunctionSpec::from_real_pieces(
            "V1",
            vec![
                (Interval::new(1.0, E), Expr::c(2.0)),
                (
                    Interval::new(E, f64::INFINITY),
                    Expr::add(Expr::c(2.0), Expr::div(Expr::c(1.0), Expr::log(Expr::x()))),
                ),
            ],
        )
        .unwrap(),
        classification: Classification {
            slowly_decreasing: Some(true),
            slowly_oscillating: true,
            l1_limit: real(2.0),
            statistical_limit: real(2.0),
            ordinary_limit: real(2.0),
        },
    });

    // complex member: converges to 2 along a shrinking spiral (the 1/log²
    // decay keeps the tail inside detector resolution at desk horizons)
    out.push(CorpusEntry {
        spec: FunctionSpec::from_complex_pieces(
            "X1",
            vec![
                (Interval::new(1.0, E), Expr::c(2.0), Expr::c(0.0)),
                (
                    Interval::new(E, f64::INFINITY),
                    Expr::add(
                        Expr::c(2.0),
                        Expr::div(
                            Expr::cos(Expr::log(Expr::x())),
                            Expr::pow(Expr::log(Expr::x()), Expr::c(2.0)),
                        ),
                    ),
                    Expr::div(
                        Expr::sin(Expr::log(Expr::x())),
                        Expr::pow(Expr::log(Expr::x()), Expr::c(2.0)),
                    ),
                ),
            ],
        )
        .unwrap(),
        classification: Classification {
            slowly_decreasing: None,
            slowly_oscillating: true,
            l1_limit: real(2.0),
            statistical_limit: real(2.0),
            ordinary_limit: real(2.0),
        },
    });

    out
}

/// Integrands `f` for the Landau/Hardy condition checks and the primitive
/// sufficiency exercises (`s(x) = ∫₁ˣ f`).
pub fn integrand_corpus() -> Vec<FunctionSpec> {
    let gated = |name: &str, e: Expr| {
        FunctionSpec::from_real_pieces(
            name,
            vec![(Interval::new(1.0, E), Expr::c(0.0)), (Interval::new(E, f64::INFINITY), e)],
        )
        .unwrap()
    };
    vec![
        // u (log u) f = 1: passes Landau with any C >= -1 side, primitive is loglog
        gated(
            "F1",
            Expr::div(Expr::c(1.0), Expr::mul(Expr::x(), Expr::log(Expr::x()))),
        ),
        // u (log u) f = -log u: fails Landau at every fixed C
        FunctionSpec::from_real_pieces(
            "F2",
            vec![(unbounded(), Expr::div(Expr::c(-1.0), Expr::x()))],
        )
        .unwrap(),
        FunctionSpec::from_real_pieces("F3", vec![(unbounded(), Expr::c(0.0))]).unwrap(),
        // (log u) f = 1: passes the printed Hardy form at C = 1
        gated("F4", Expr::div(Expr::c(1.0), Expr::log(Expr::x()))),
        // u (log u) |f| = |cos log u| <= 1: passes the u-weighted Hardy form
        gated(
            "F5",
            Expr::div(
                Expr::cos(Expr::log(Expr::x())),
                Expr::mul(Expr::x(), Expr::log(Expr::x())),
            ),
        ),
    ]
}

/// Looks up a function by name across both corpora.
pub fn find_named(name: &str) -> Option<FunctionSpec> {
    builtin_corpus()
        .into_iter()
        .map(|e| e.spec)
        .chain(integrand_corpus())
        .find(|s| s.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_has_the_expected_members() {
        let names: Vec<String> =
            builtin_corpus().iter().map(|e| e.spec.name().to_string()).collect();
        for expected in ["C1", "S1", "S2", "L1", "L2", "O1", "V1"] {
            assert!(names.contains(&expected.to_string()), "missing {expected}");
        }
    }

    #[test]
    fn s2_is_tagged_with_statistical_limit_zero() {
        let e = builtin_corpus().into_iter().find(|e| e.spec.name() == "S2").unwrap();
        assert_eq!(e.classification.statistical_limit, Some((0.0, 0.0)));
        assert_eq!(e.classification.ordinary_limit, None);
    }

    #[test]
    fn s1_is_tagged_summable_to_zero() {
        let e = builtin_corpus().into_iter().find(|e| e.spec.name() == "S1").unwrap();
        assert_eq!(e.classification.l1_limit, Some((0.0, 0.0)));
        assert!(!e.classification.slowly_oscillating);
    }

    #[test]
    fn c1_has_every_property() {
        let e = builtin_corpus().into_iter().find(|e| e.spec.name() == "C1").unwrap();
        let c = e.classification;
        assert_eq!(c.slowly_decreasing, Some(true));
        assert!(c.slowly_oscillating);
        assert_eq!(c.l1_limit, Some((3.5, 0.0)));
        assert_eq!(c.statistical_limit, Some((3.5, 0.0)));
        assert_eq!(c.ordinary_limit, Some((3.5, 0.0)));
    }

    #[test]
    fn l2_drop_over_doubling_window_is_exactly_minus_one() {
        let l2 = find_named("L2").unwrap();
        for &x in &[10.0, 1e4, 1e8] {
            let t = x * x;
            let drop = l2.evaluate(t).unwrap().re() - l2.evaluate(x).unwrap().re();
            assert!((drop + 1.0).abs() < 1e-12, "drop at x = {x}: {drop}");
        }
    }
}
