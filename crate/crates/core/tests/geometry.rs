use markovlab::geometry::*;
use markovlab::polyring::{parse_poly, MultiPoly};
use markovlab::{presets, Error};
use proptest::prelude::*;

fn interval(density: usize) -> SampleSet {
    SampleSet::from_boxes(vec![BoxDomain(vec![[-1.0, 1.0]])], density).unwrap()
}

fn chebyshev(n: usize) -> MultiPoly<f64> {
    let x = MultiPoly::var(1, 0);
    let mut prev = MultiPoly::constant(1, 1.0);
    let mut cur = x.clone();
    for _ in 1..n {
        let next = &(&x * &cur).scale(2.0) - &prev;
        prev = cur;
        cur = next;
    }
    if n == 0 {
        prev
    } else {
        cur
    }
}

#[test]
fn three_branches_sample_cleanly() {
    let rel = presets::circle_and_line();
    let e = presets::circle_and_line_set(256).unwrap();
    assert!(e.len() >= 512, "{}", e.len());
    assert_eq!(e.provenance(), Provenance::OnVariety);
    let worst = e.points().iter().map(|p| rel.residual(p).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-10, "{worst:e}");
    // the three branches meet at x = ±1 and those copies are merged
    assert_eq!(e.len(), 3 * 256 - 4);
}

#[test]
fn cube_root_branch_matches_closed_form() {
    let e = presets::cube_root_set(128).unwrap();
    for p in e.points() {
        assert!((p[1] - (1.0 - p[0] * p[0]).cbrt()).abs() <= 1e-12);
        assert!((0.25..=0.5).contains(&p[0].abs()));
    }
}

#[test]
fn empty_or_undefined_domains_are_rejected() {
    let rel = presets::circle_and_line();
    let mut spec = presets::circle_and_line_branches();
    spec.boxes.clear();
    assert!(matches!(sample_variety_set(&rel, &spec, 64), Err(Error::EmptySet(_))));

    let mut spec = presets::circle_and_line_branches();
    spec.boxes = vec![BoxDomain(vec![[-1.0, 1.0]]), BoxDomain(vec![[0.5, 1.5]])];
    match sample_variety_set(&rel, &spec, 64) {
        Err(Error::BranchUndefined { box_index, branch, .. }) => {
            assert_eq!(box_index, 1);
            assert_eq!(branch, 1);
        }
        other => panic!("{other:?}"),
    }
    let spec = presets::circle_and_line_branches();
    assert!(sample_variety_set(&rel, &spec, 63).is_err());
}

#[test]
fn numeric_branch_matches_catalogue() {
    let q = parse_poly("1 - x1^2", Some(2)).unwrap();
    let rel = presets::cubic_family(2, 2, q).unwrap();
    let numeric = presets::cubic_family_set(&rel, vec![BoxDomain(vec![[-1.0, 1.0]])], 64).unwrap();
    let catalogue = sample_variety_set(&rel, &presets::circle_and_line_branches(), 64).unwrap();
    assert_eq!(numeric.len(), catalogue.len());
    for (a, b) in numeric.points().iter().zip(catalogue.points()) {
        assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-7, "{a:?} {b:?}");
    }
}

#[test]
fn projections() {
    let e = presets::circle_and_line_set(128).unwrap();
    let pi = project_pi(&e, 2).unwrap();
    assert_eq!(pi.provenance(), Provenance::Projection);
    let nodes = lobatto_nodes(-1.0, 1.0, 128);
    assert_eq!(pi.len(), nodes.len());
    for (p, x) in pi.points().iter().zip(&nodes) {
        assert_eq!(p[0], *x);
    }
    assert!(matches!(project_pi(&pi, 1), Err(Error::IllegalProjection(_))));

    let c = presets::cube_root_set(64).unwrap();
    let pc = project_pi(&c, 2).unwrap();
    assert_eq!(pc.len(), 128);
    assert!(pc.points().iter().all(|p| (0.25..=0.5).contains(&p[0].abs())));

    let single = SampleSet::from_points(vec![vec![0.3, 0.7]]).unwrap();
    assert_eq!(project_pi(&single, 1).unwrap().points(), &[vec![0.7]]);
}

#[test]
fn inflation_stays_within_radius() {
    let origin = SampleSet::from_points(vec![vec![0.0, 0.0, 0.0]]).unwrap();
    let ball = inflate_set(&origin, 1.0, 500, 7).unwrap();
    assert_eq!(ball.provenance(), Provenance::Inflated);
    assert!(ball.points().iter().all(|p| p.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-15));

    let e = presets::circle_and_line_set(64).unwrap();
    let en = inflate_set(&e, 1.0 / 16.0, 8, 1).unwrap();
    assert!(en.len() > e.len());
    for p in en.points() {
        let d = e
            .points()
            .iter()
            .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!(d <= 1.0 / 16.0 + 1e-15);
    }

    let tiny = inflate_set(&e, 1e-9, 4, 3).unwrap();
    let p = parse_poly("x1^3*x2 - 2*x2^2 + x1", Some(2)).unwrap();
    let (a, b) = (sup_norm(&p, &e).value, sup_norm(&p, &tiny).value);
    assert!((a - b).abs() <= 1e-7, "{a} {b}");
}

#[test]
fn sup_norm_examples() {
    let e = interval(256);
    let x = MultiPoly::<f64>::var(1, 0);
    let s = sup_norm(&x, &e);
    assert_eq!(s.value, 1.0);
    assert_eq!(s.index, 0); // tie between ±1 goes to the lower index
    let bump = parse_poly("1 - x1^2", Some(1)).unwrap();
    let odd = interval(257);
    assert_eq!(sup_norm(&bump, &odd).value, 1.0);
    assert!(1.0 - sup_norm(&bump, &e).value < 1e-4);
    assert!((sup_norm(&chebyshev(8), &e).value - 1.0).abs() <= 1e-6);
}

#[test]
fn refinement_certifies_low_degree_only() {
    let e = interval(256);
    let c = refine_check(&MultiPoly::constant(1, 3.0), &e).unwrap();
    assert_eq!(c.relative_change, 0.0);
    let p5 = parse_poly("x1^5 - 0.3*x1^4 + 0.1*x1 - 0.05", Some(1)).unwrap();
    let c = refine_check(&p5, &e).unwrap();
    assert!(c.relative_change <= 1e-4 && c.certified);

    // degree 50, peaking at the origin, which is not a coarse node
    let peaked = &parse_poly("1 - x1^2", Some(1)).unwrap() * &chebyshev(48);
    assert_eq!(peaked.degree(), 50);
    let c = refine_check(&peaked, &interval(64)).unwrap();
    assert!(c.relative_change > 1e-2 && !c.certified, "{c:?}");
    assert!(c.fine >= c.coarse);

    let on_curve = presets::circle_and_line_set(64).unwrap();
    let p = parse_poly("x1^2*x2 + x2^2", Some(2)).unwrap();
    assert!(refine_check(&p, &on_curve).unwrap().certified);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_norm_monotone_under_inclusion(coeffs in prop::collection::vec(-1.0f64..1.0, 1..8), keep in 1usize..100) {
        let p = MultiPoly::from_terms(1, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], *c)));
        let e = interval(100);
        let sub = SampleSet::from_points(e.points()[..keep].to_vec()).unwrap();
        prop_assert!(sup_norm(&p, &sub).value <= sup_norm(&p, &e).value);
    }

    #[test]
    fn bump_is_a_cutoff(y in -3.0f64..3.0, eps in 0.01f64..1.0) {
        let k = interval(64);
        let h = BumpFunction::new(k.clone(), eps).unwrap();
        let v = h.eval(&[y]);
        prop_assert!((0.0..=1.0).contains(&v));
        let dist = (y.abs() - 1.0).max(0.0);
        if dist > eps { prop_assert_eq!(v, 0.0); }
        if y.abs() <= 1.0 && h.distance(&[y]) <= eps / 4.0 { prop_assert_eq!(v, 1.0); }
        for p in k.points() { prop_assert_eq!(h.eval(p), 1.0); }
    }

    #[test]
    fn inflation_radius_invariant(r in 1e-6f64..0.5, seed in 0u64..1000) {
        let e = presets::cube_root_set(64).unwrap();
        let en = inflate_set(&e, r, 2, seed).unwrap();
        for p in en.points() {
            let near = e.points().iter().any(|q| ((p[0]-q[0]).powi(2) + (p[1]-q[1]).powi(2)).sqrt() <= r * (1.0 + 1e-12));
            prop_assert!(near);
        }
    }
}
