//! Property tests for the series grammar: printing and re-parsing is the
//! identity, for both randomly generated ASTs and normalized specs.

use proptest::prelude::*;
use trigsum::dsl::{
    classify, parse, spec_to_expr, Expr, IndexSet, SeriesSpec, SignMode, Trig,
};

fn arb_trig() -> impl Strategy<Value = Trig> {
    prop_oneof![Just(Trig::Sin), Just(Trig::Cos)]
}

fn arb_sign() -> impl Strategy<Value = SignMode> {
    prop_oneof![Just(SignMode::Plain), Just(SignMode::Alternating)]
}

fn arb_index() -> impl Strategy<Value = IndexSet> {
    prop_oneof![Just(IndexSet::AllPositive), Just(IndexSet::OddViaShift)]
}

prop_compose! {
    fn arb_spec()(trig in arb_trig(), power in 1u32..=8, sign in arb_sign(), index in arb_index())
        -> SeriesSpec
    {
        SeriesSpec::new(trig, power, sign, index)
    }
}

/// Random well-formed body expressions (not necessarily classifiable).
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::X),
        Just(Expr::Var("n".to_string())),
        (1i64..50).prop_map(Expr::Int),
        Just(Expr::AltSign("n".to_string())),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 1i64..8).prop_map(|(a, p)| Expr::Pow(Box::new(a), p)),
            inner.clone().prop_map(|a| Expr::Sin(Box::new(a))),
            inner.prop_map(|a| Expr::Cos(Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_sums_reparse_to_the_same_ast(body in arb_expr(), lo in 0i64..2) {
        let expr = Expr::Sum { var: "n".to_string(), lo, body: Box::new(body) };
        let text = expr.to_string();
        let reparsed = parse(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        prop_assert_eq!(reparsed, expr);
    }

    #[test]
    fn canonical_text_of_any_spec_classifies_back(spec in arb_spec()) {
        let text = spec_to_expr(&spec).to_string();
        let reparsed = parse(&text).unwrap();
        let reclassified = classify(&reparsed).unwrap();
        prop_assert_eq!(reclassified, spec);
    }

    #[test]
    fn classification_never_panics_on_random_sums(body in arb_expr(), lo in 0i64..2) {
        let expr = Expr::Sum { var: "n".to_string(), lo, body: Box::new(body) };
        let _ = classify(&expr); // Ok or a structured error, never a panic
    }

    #[test]
    fn parser_never_panics_on_arbitrary_bytes(s in "\\PC{0,60}") {
        let _ = parse(&s);
    }
}
