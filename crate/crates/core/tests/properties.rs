//! Property tests: print/parse round-trips, symbolic derivatives against
//! finite differences, interval enclosure soundness, and order-witness
//! invariants.

use monochaos::expr::{diff, interval_eval, parse, Expr, Func, IntervalBox};
use monochaos::order::VectorOrder;
use proptest::prelude::*;
use std::collections::BTreeMap;

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

fn var_list() -> Vec<String> {
    VAR_NAMES.iter().map(|s| s.to_string()).collect()
}

fn param_bindings() -> BTreeMap<String, f64> {
    let mut map = BTreeMap::new();
    map.insert("sigma".to_string(), 1.5);
    map
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-3.0..3.0f64).prop_map(Expr::Number),
        (0usize..3).prop_map(|i| Expr::Var {
            name: VAR_NAMES[i].to_string(),
            index: i,
        }),
        Just(Expr::Param {
            name: "sigma".to_string(),
            value: 1.5,
        }),
    ];
    leaf.prop_recursive(4, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), -3..4i32).prop_map(|(e, n)| Expr::Pow(Box::new(e), n)),
            (
                inner,
                prop_oneof![
                    Just(Func::Exp),
                    Just(Func::Log),
                    Just(Func::Sin),
                    Just(Func::Cos),
                    Just(Func::Sqrt),
                    Just(Func::Abs),
                ]
            )
                .prop_map(|(e, f)| Expr::Func(f, Box::new(e))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Printing and re-parsing reproduces the tree structurally.
    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let text = e.to_string();
        let back = parse(&text, &var_list(), &param_bindings())
            .unwrap_or_else(|err| panic!("`{text}` failed to re-parse: {err}"));
        prop_assert_eq!(back, e);
    }

    /// Symbolic derivatives agree with central finite differences where
    /// the finite-difference oracle itself is stable.
    #[test]
    fn derivative_matches_finite_differences(
        e in arb_expr(),
        var in 0usize..3,
        coords in proptest::array::uniform3(-2.0..2.0f64),
    ) {
        let point = coords.to_vec();
        let d = diff(&e, var);
        let Ok(symbolic) = d.eval(&point) else { return Ok(()); };
        prop_assume!(symbolic.is_finite() && symbolic.abs() < 1e6);
        let h = 1e-6;
        let fd_at = |step: f64| -> Option<f64> {
            let mut plus = point.clone();
            plus[var] += step;
            let mut minus = point.clone();
            minus[var] -= step;
            match (e.eval(&plus), e.eval(&minus)) {
                (Ok(a), Ok(b)) => Some((a - b) / (2.0 * step)),
                _ => None,
            }
        };
        let (Some(fd), Some(fd_half)) = (fd_at(h), fd_at(h / 2.0)) else { return Ok(()); };
        prop_assume!(fd.is_finite() && fd_half.is_finite());
        // Two step sizes agreeing certify the oracle away from kinks and
        // violent curvature.
        prop_assume!((fd - fd_half).abs() <= 5e-6 * (1.0 + symbolic.abs()));
        let rel = (symbolic - fd).abs() / (1.0 + symbolic.abs());
        prop_assert!(rel <= 1e-5, "symbolic {symbolic} vs fd {fd} for {e}");
    }

    /// Every sampled point value lies inside the interval enclosure.
    #[test]
    fn interval_enclosure_is_sound(
        e in arb_expr(),
        lows in proptest::array::uniform3(-2.0..1.5f64),
        widths in proptest::array::uniform3(0.01..1.0f64),
        seed in any::<u64>(),
    ) {
        let bounds: Vec<(f64, f64)> = lows
            .iter()
            .zip(&widths)
            .map(|(&lo, &w)| (lo, lo + w))
            .collect();
        let bx = IntervalBox::from_bounds(&bounds);
        let Ok(range) = interval_eval(&e, &bx) else { return Ok(()); };
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let p: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
            if let Ok(v) = e.eval(&p) {
                prop_assert!(
                    v >= range.lo && v <= range.hi,
                    "{e} at {p:?} gives {v} outside [{}, {}]",
                    range.lo,
                    range.hi
                );
            }
        }
    }

    /// Strong-order witnesses verify their own invariants at any center
    /// and radius.
    #[test]
    fn order_witness_invariant(
        dim in 1usize..5,
        center in proptest::collection::vec(-100.0..100.0f64, 4),
        radius_exp in -9.0..2.0f64,
    ) {
        let order = VectorOrder::new(dim);
        let x = &center[..dim];
        let radius = 10f64.powf(radius_exp);
        let witness = order.strong_order_witness(x, radius);
        prop_assert!(witness.verify(&order));
    }
}
