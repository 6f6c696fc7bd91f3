//! Cross-module properties: DSL round-trips, piecewise totality, chain
//! identities under random inputs, suite stability across horizons, and the
//! machine check of the corpus classification tags.

use proptest::prelude::*;

use logtauber::funcspec::{builtin_corpus, parse_expr, Expr, FunctionSpec, Interval};
use logtauber::harness::{check_classifications, run_suite, Outcome, SuiteConfig, TheoremId};
use logtauber::lemmas::build_chain_logs;
use logtauber::PiecewiseFn;

/// Expressions that are total on `[1, ∞)`: no pow, no bare log/loglog of
/// arbitrary subtrees, divisions by constants only.
fn total_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-10.0..10.0f64).prop_map(Expr::c),
        Just(Expr::x()),
        Just(Expr::log(Expr::x())),
        Just(Expr::loglog(Expr::add(Expr::x(), Expr::c(0.5)))),
        (1.0..100.0f64, 0.5..50.0f64)
            .prop_map(|(a, w)| Expr::Indicator(Interval::new(a, a + w))),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), 0.5..4.0f64).prop_map(|(a, c)| Expr::div(a, Expr::c(c))),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(Expr::abs),
            inner.clone().prop_map(Expr::neg),
            inner
                .clone()
                .prop_map(|a| Expr::log(Expr::add(Expr::abs(a), Expr::c(2.0)))),
        ]
    })
}

fn sample_points() -> Vec<f64> {
    // 1000 log-spaced points of [1, 1e9]
    (0..1000)
        .map(|k| (9.0 * std::f64::consts::LN_10 * k as f64 / 999.0).exp())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dsl_round_trip_is_evaluation_exact(expr in total_expr()) {
        let printed = expr.to_string();
        let reparsed = parse_expr(&printed).unwrap_or_else(|e| {
            panic!("printed form failed to parse: '{printed}': {e}")
        });
        for x in sample_points() {
            let p = logtauber::funcspec::EvalPoint::at(x);
            let a = expr.eval(p).unwrap();
            let b = reparsed.eval(p).unwrap();
            prop_assert_eq!(
                a.to_bits(), b.to_bits(),
                "round-trip mismatch at x = {}: {} vs {} for '{}'", x, a, b, printed
            );
        }
    }

    #[test]
    fn piecewise_totality(raw in proptest::collection::vec(1.0001..1e9f64, 1..6)) {
        let mut cuts = raw;
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let mut pieces = Vec::new();
        let mut lo = 1.0;
        for (i, &c) in cuts.iter().enumerate() {
            pieces.push((Interval::new(lo, c), Expr::c(i as f64)));
            lo = c;
        }
        pieces.push((Interval::new(lo, f64::INFINITY), Expr::c(cuts.len() as f64)));
        let spec = FunctionSpec::from_real_pieces("steps", pieces).unwrap();
        for x in sample_points() {
            let expected = cuts.iter().filter(|&&c| c <= x).count() as f64;
            let got = spec.evaluate(x).unwrap().re();
            prop_assert_eq!(got, expected, "x = {} in the wrong piece", x);
        }
    }

    #[test]
    fn chain_invariants_under_random_inputs(
        log_x in 0.5..30.0f64,
        lambda in 1.01..4.0f64,
        factor in 1.001..10.0f64,
    ) {
        let log_t = lambda * log_x * factor;
        let chain = build_chain_logs(log_t, log_x, lambda).unwrap();
        chain.check_invariants().unwrap();
        // telescoping is an algebraic identity for any evaluable function
        let s1 = builtin_corpus().into_iter().find(|e| e.spec.name() == "S1").unwrap().spec;
        let view = s1.real_view().unwrap();
        let tele = chain.telescoping_sum(&view).unwrap();
        let direct = view.eval_at_log(log_t).unwrap() - view.eval_at_log(log_x).unwrap();
        prop_assert!(
            (tele - direct).abs() <= 1e-10,
            "telescoping {} vs direct {}", tele, direct
        );
    }
}

#[test]
fn corpus_classifications_are_machine_checked() {
    let checks = check_classifications().unwrap();
    assert_eq!(checks.len(), builtin_corpus().len());
    for c in &checks {
        assert!(
            c.all_ok(),
            "classification tags disagree with computed evidence for {}: {c:?}",
            c.name
        );
    }
}

#[test]
fn suite_is_stable_when_horizons_are_halved() {
    let specs: Vec<FunctionSpec> = builtin_corpus().into_iter().map(|e| e.spec).collect();
    let full = run_suite(&specs, &SuiteConfig::at_horizon(32f64.exp())).unwrap();
    let halved = run_suite(&specs, &SuiteConfig::at_horizon(16f64.exp())).unwrap();
    assert_eq!(halved.summary.counterexample, 0);
    let outcome = |report: &logtauber::harness::SuiteReport, thm: TheoremId, name: &str| {
        report
            .cases
            .iter()
            .find(|c| c.theorem == thm && c.spec_name == name)
            .map(|c| c.outcome)
    };
    for c in &full.cases {
        if c.outcome == Outcome::Pass {
            let h = outcome(&halved, c.theorem, &c.spec_name).unwrap();
            assert_ne!(
                h,
                Outcome::Counterexample,
                "{} on {} flipped from pass to counterexample when halved",
                c.theorem.label(),
                c.spec_name
            );
        }
    }
}
