use divbound_core::inequalities::{
    bhattacharyya_relation, hellinger_td_bound, js_td_bound, triangular_discrimination,
};
use divbound_core::oracle::sedrakyan_check;
use divbound_core::{
    catalog, f_divergence, inverse_g, make_binary, symmetrized_divergence, theorem1_bound,
    theorem2_s, BinaryFunction, DiscreteDist, MomentSpec,
};
use proptest::prelude::*;

fn masses(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("zero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.iter().map(|x| x / s).collect())
    })
}

fn pair() -> impl Strategy<Value = (DiscreteDist, DiscreteDist)> {
    (2usize..=8).prop_flat_map(|n| (masses(n), masses(n))).prop_map(|(p, q)| {
        (
            DiscreteDist::from_masses(p).unwrap(),
            DiscreteDist::from_masses(q).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn divergences_are_nonnegative_and_vanish_on_the_diagonal((p, q) in pair()) {
        for gen in catalog() {
            let d = f_divergence(&gen, &p, &q).unwrap();
            prop_assert!(d >= -1e-12, "{gen}: {d}");
            prop_assert!(f_divergence(&gen, &p, &p).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn symmetrized_is_symmetric((p, q) in pair()) {
        for gen in catalog() {
            let a = symmetrized_divergence(&gen, &p, &q).unwrap();
            let b = symmetrized_divergence(&gen, &q, &p).unwrap();
            if a.is_finite() {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            } else {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn binary_bound_holds((p, q) in pair()) {
        let d = triangular_discrimination(&p, &q).unwrap();
        for gen in catalog() {
            let bd = make_binary(gen);
            let lhs = symmetrized_divergence(&gen, &p, &q).unwrap();
            let rhs = theorem1_bound(&bd, d).unwrap().bound_value;
            prop_assert!(lhs >= rhs - 1e-10, "{gen}: {lhs} < {rhs}");
        }
    }

    #[test]
    fn derived_inequalities_hold((p, q) in pair()) {
        let h = hellinger_td_bound(&p, &q).unwrap();
        let j = js_td_bound(&p, &q).unwrap();
        let b = bhattacharyya_relation(&p, &q).unwrap();
        prop_assert!(h.holds(1e-10) && h.improvement >= -1e-10);
        prop_assert!(j.holds(1e-10) && j.improvement >= -1e-10);
        prop_assert!(b.holds(1e-12));
    }

    #[test]
    fn inverse_round_trips(x in 0.0f64..0.99) {
        for gen in catalog() {
            let bd = make_binary(gen);
            let target = bd.g(x);
            let t = inverse_g(&bd, target).unwrap();
            prop_assert!((bd.g(t) - target).abs() < 1e-10);
        }
    }

    #[test]
    fn s_is_translation_invariant(
        mp in -5.0f64..5.0, mq in -5.0f64..5.0,
        sp in 0.0f64..3.0, sq in 0.0f64..3.0, c in -10.0f64..10.0,
    ) {
        let spec = MomentSpec::new(mp, sp, mq, sq).unwrap();
        let s = theorem2_s(&spec);
        prop_assert!((0.0..=1.0).contains(&s));
        let moved = theorem2_s(&spec.shifted(c).unwrap());
        prop_assert!((s - moved).abs() < 1e-12);
    }

    #[test]
    fn sedrakyan_holds(
        u in prop::collection::vec(-3.0f64..3.0, 1..6),
        scale in prop::collection::vec(0.1f64..3.0, 6),
    ) {
        let v: Vec<f64> = scale[..u.len()].to_vec();
        prop_assert!(sedrakyan_check(&u, &v).unwrap().holds);
    }

    #[test]
    fn translation_preserves_divergence((p, q) in pair(), c in -4.0f64..4.0) {
        let (pt, qt) = (p.translated(c).unwrap(), q.translated(c).unwrap());
        for gen in catalog() {
            let a = f_divergence(&gen, &p, &q).unwrap();
            let b = f_divergence(&gen, &pt, &qt).unwrap();
            prop_assert!(a == b || (a - b).abs() < 1e-14);
        }
    }
}
