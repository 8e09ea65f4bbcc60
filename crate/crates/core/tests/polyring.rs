use markovlab::geometry::{lobatto_nodes, real_roots};
use markovlab::polyring::{parse_poly, MultiPoly, VarietyRelation};
use markovlab::presets;
use markovlab::verify::{check_ring_case, random_ring_case, ring_property_suite, RingReport};
use proptest::prelude::*;

fn poly_strategy(nvars: usize, max_deg: u32, range: f64) -> impl Strategy<Value = MultiPoly<f64>> {
    prop::collection::vec((prop::collection::vec(0u32..=max_deg, nvars), -range..range), 0..8).prop_map(move |terms| {
        let t = terms.into_iter().map(|(mut e, c)| {
            // keep the total degree within max_deg
            while e.iter().sum::<u32>() > max_deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (e, c)
        });
        MultiPoly::from_terms(nvars, t)
    })
}

fn int_poly_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly<f64>> {
    prop::collection::vec((prop::collection::vec(0u32..=max_deg, nvars), -9i32..=9), 0..6)
        .prop_map(move |terms| MultiPoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, c as f64))))
}

/// Points of the circle-and-line variety above Lobatto nodes in x.
fn circle_points() -> Vec<Vec<f64>> {
    let rel = presets::circle_and_line();
    let mut out = Vec::new();
    for x in lobatto_nodes(-1.0, 1.0, 67) {
        let q: Vec<f64> = rel.q().iter().map(|qi| qi.eval(&[x, 0.0])).collect();
        for y in real_roots(&q) {
            out.push(vec![x, y]);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in poly_strategy(3, 8, 1.0),
        b in poly_strategy(3, 8, 1.0),
        p in prop::collection::vec(-1.2f64..1.2, 3),
    ) {
        let scale = (1.0 + a.abs_eval(&p)) * (1.0 + b.abs_eval(&p));
        let prod = (&a * &b).eval(&p);
        prop_assert!((prod - a.eval(&p) * b.eval(&p)).abs() <= 1e-12 * scale);
        let sum = (&a + &b).eval(&p);
        prop_assert!((sum - a.eval(&p) - b.eval(&p)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn product_rule(a in poly_strategy(2, 6, 1.0), b in poly_strategy(2, 6, 1.0), p in prop::collection::vec(-1.0f64..1.0, 2)) {
        for alpha in [[1u32, 0], [0, 1]] {
            let lhs = (&a * &b).differentiate(&alpha).unwrap().eval(&p);
            let rhs = a.differentiate(&alpha).unwrap().eval(&p) * b.eval(&p)
                + a.eval(&p) * b.differentiate(&alpha).unwrap().eval(&p);
            let scale = 1.0 + 20.0 * (1.0 + a.abs_eval(&p)) * (1.0 + b.abs_eval(&p));
            prop_assert!((lhs - rhs).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn text_round_trip(p in int_poly_strategy(3, 6)) {
        let back = parse_poly(&p.to_string(), Some(3)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn reduction_is_sound_on_the_variety(p in poly_strategy(2, 8, 1.0)) {
        let rel = presets::circle_and_line();
        let nf = rel.reduce(&p).unwrap();
        prop_assert!(nf.reassemble().degree_in(1) < 3);
        for pt in circle_points() {
            let v = p.eval(&pt);
            prop_assert!((v - nf.eval(&pt)).abs() <= 1e-9 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn cube_root_reduction_is_sound(p in poly_strategy(2, 8, 1.0), x in -1.0f64..1.0) {
        let rel = presets::cube_root_curve();
        let pt = [x, (1.0 - x * x).cbrt()];
        let nf = rel.reduce(&p).unwrap();
        let v = p.eval(&pt);
        prop_assert!((v - nf.eval(&pt)).abs() <= 1e-9 * (1.0 + v.abs()));
    }

    #[test]
    fn idempotence_and_extraction(p in poly_strategy(2, 8, 1.0)) {
        let rel = presets::circle_and_line();
        let nf = rel.reduce(&p).unwrap();
        let r = nf.reassemble();
        prop_assert_eq!(&rel.reduce(&r).unwrap(), &nf);
        prop_assert_eq!(rel.extract_coefficients(&r).unwrap(), rel.collect_coefficients(&r).unwrap());
    }

    #[test]
    fn homomorphism_with_integer_coefficients(a in int_poly_strategy(2, 6), b in int_poly_strategy(2, 6)) {
        let rel = presets::circle_and_line();
        let direct = rel.reduce(&(&a * &b)).unwrap();
        let ra = rel.reduce(&a).unwrap().reassemble();
        let rb = rel.reduce(&b).unwrap().reassemble();
        prop_assert_eq!(rel.reduce(&(&ra * &rb)).unwrap(), direct);
    }

    #[test]
    fn seeded_random_relations(seed in any::<u64>(), index in 0u64..1000) {
        let mut report = RingReport::default();
        check_ring_case(&random_ring_case(seed, index), index, &mut report).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }
}

#[test]
fn thousand_case_suite() {
    let r = ring_property_suite(1000, 7).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.cases, 1000);
    // most random relations have real points to test against
    assert!(r.points > 2000, "{}", r.points);
}

#[test]
fn random_cases_are_reproducible() {
    let a = random_ring_case(3, 17);
    let b = random_ring_case(3, 17);
    assert_eq!(a.relation, b.relation);
    assert_eq!(a.p, b.p);
    assert_ne!(random_ring_case(3, 18).p, a.p);
}

#[test]
fn general_relation_soundness() {
    // x3^3 = (x1 - x2) x3^2 + x1 x2 over a handful of points
    let q0 = parse_poly("x1*x2", Some(3)).unwrap();
    let q2 = parse_poly("x1 - x2", Some(3)).unwrap();
    let rel = VarietyRelation::new(3, 3, vec![q0, MultiPoly::zero(3), q2]).unwrap();
    let p = parse_poly("x3^7 - 2*x1*x3^4 + x2^3*x3^3 + 5", Some(3)).unwrap();
    let nf = rel.reduce(&p).unwrap();
    for (x1, x2) in [(0.3, -0.2), (1.1, 0.4), (-0.7, -0.9)] {
        let q: Vec<f64> = rel.q().iter().map(|qi| qi.eval(&[x1, x2, 0.0])).collect();
        for x3 in real_roots(&q) {
            let pt = [x1, x2, x3];
            assert!(rel.residual(&pt).abs() < 1e-12);
            assert!((p.eval(&pt) - nf.eval(&pt)).abs() <= 1e-9 * (1.0 + p.eval(&pt).abs()));
        }
    }
}
