use asyncflow::model::{parse_model, Expr, ModelDocument, ModelSource};
use asyncflow::report::VerdictReport;
use asyncflow::{parse_schedule, print_schedule};
use asyncflow_core::oracle::property_catalogue;
use asyncflow_core::{decide, FireVector, Limits, Schedule, StateVector, TimeGrid, TransitionFunction};
use proptest::prelude::*;

fn arb_expr(n: u8) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![any::<bool>().prop_map(Expr::Const), (1..=n).prop_map(Expr::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Xor(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn arb_expr_model() -> impl Strategy<Value = String> {
    (1u8..=3).prop_flat_map(|n| {
        prop::collection::vec(arb_expr(n), n as usize).prop_map(move |exprs| {
            let mut text = format!("n = {n}\n");
            for (i, e) in exprs.iter().enumerate() {
                text.push_str(&format!("y{} = {e}\n", i + 1));
            }
            text
        })
    })
}

fn table_text(phi: &TransitionFunction) -> String {
    let mut text = format!("n={}\n", phi.arity());
    for mu in phi.states() {
        text.push_str(&format!("{mu} -> {}\n", phi.apply(mu).unwrap()));
    }
    text
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn expression_models_round_trip(text in arb_expr_model()) {
        let doc = parse_model(&text).unwrap();
        let again = parse_model(&doc.to_string()).unwrap();
        prop_assert_eq!(&again, &doc);
        // Printing must not change the tree shape either.
        let ModelSource::Expressions(exprs) = &doc.source else { unreachable!() };
        prop_assert_eq!(&again.source, &ModelSource::Expressions(exprs.clone()));
        let table = parse_model(&table_text(&doc.function)).unwrap();
        prop_assert_eq!(table.function, doc.function);
    }

    #[test]
    fn table_models_round_trip(n in 1u8..=3, seed in any::<u64>()) {
        let total = 1u64 << (n as u32 * (1 << n));
        let phi = TransitionFunction::from_index(n, seed % total).unwrap();
        let doc = ModelDocument::from_function(Some("t".into()), phi);
        prop_assert_eq!(parse_model(&doc.to_string()).unwrap(), doc);
    }

    #[test]
    fn schedules_round_trip(
        n in 1u8..=3,
        prefix in prop::collection::vec(0u32..8, 0..5),
        period in prop::collection::vec(0u32..8, 0..4),
        times in prop::collection::vec(0.001f64..10.0, 0..5),
    ) {
        let mask = (1u32 << n) - 1;
        let fv = |b: &u32| FireVector::new(n, b & mask).unwrap();
        let mut period: Vec<FireVector> = period.iter().map(fv).collect();
        period.push(FireVector::ones(n));
        let s = Schedule::new(n, prefix.iter().map(fv).collect(), period).unwrap();
        let mut acc = -1.0;
        let times: Vec<f64> = times.iter().map(|g| { acc += g; acc }).collect();
        let grid = TimeGrid::explicit(times).unwrap();
        let text = print_schedule(&s, &grid);
        prop_assert_eq!(parse_schedule(&text, Some(n)).unwrap(), (s, grid));
    }
}

#[test]
fn equivalent_forms_are_bit_identical() {
    let expr = parse_model("n=2\ny1 = !x2 | (x1 & x2)\ny2 = !x1 | (x1 & x2)\n").unwrap();
    let rows = parse_model("n=2\n00 -> 11\n10 -> 10\n01 -> 01\n11 -> 11\n").unwrap();
    assert_eq!(expr.function, rows.function);
}

#[test]
fn every_report_round_trips_and_replays() {
    let limits = Limits::default();
    let catalogue = property_catalogue(2);
    let mut witnessed = 0;
    for index in (0..256).step_by(5) {
        let phi = TransitionFunction::from_index(2, index).unwrap();
        for p in &catalogue {
            let v = decide(&phi, p, &limits).unwrap();
            let r = VerdictReport::new("sweep", 2, p, "decider", &v);
            let back: VerdictReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            assert_eq!(back, r);
            assert_eq!(&back.property().unwrap(), p);
            let v2 = back.verdict().unwrap();
            assert_eq!(v2, v);
            if let Some(w) = v2.witness {
                assert!(w.replays(&phi), "{p} on {:?}", phi.table());
                witnessed += w.schedule.is_some() as usize;
            }
        }
    }
    assert!(witnessed > 1000);
}

#[test]
fn bit_orientation() {
    let mu: StateVector = "10".parse().unwrap();
    assert!(mu.get(1) && !mu.get(2));
    let doc = parse_model("n=2\ny1 = 1\ny2 = 0\n").unwrap();
    assert_eq!(doc.function.apply("00".parse().unwrap()).unwrap().to_string(), "10");
}
