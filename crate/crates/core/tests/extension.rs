use markovlab::approx::{counterexample_poly, ApproxSeries, Target};
use markovlab::extension::*;
use markovlab::geometry::{BoxDomain, SampleSet};
use markovlab::polyring::{parse_poly, MultiPoly};
use markovlab::{presets, Dd, Scalar};

fn exp_series(lmax: usize) -> ApproxSeries<Dd> {
    let rel = presets::circle_and_line();
    let e = presets::circle_and_line_set(64).unwrap();
    ApproxSeries::for_target(Target::ExpXTimesY, &rel, &e, lmax).unwrap()
}

#[test]
fn exponential_extension() {
    let s = exp_series(12);
    let e = s.set.clone();
    let model = build_extension(&s, 3, 12).unwrap();
    let d12 = s.errors()[12];
    let on_e = e
        .points()
        .iter()
        .map(|p| (evaluate_extension(&model, p) - p[0].exp() * p[1]).abs())
        .fold(0.0, f64::max);
    assert!(on_e <= d12 + 1e-8, "{on_e:e} vs {d12:e}");
    for p in e.points() {
        let gap = model.eval_exact(p) - model.projection_value(p);
        assert!(gap.as_f64().abs() <= 1e-8);
    }

    // bumps all vanish once the x-distance to [-1, 1] exceeds 1
    for x in [-3.0, 2.01, 2.5, 10.0] {
        for y in [-2.0, -0.3, 0.0, 1.7] {
            let p = [x, y];
            let v = evaluate_extension(&model, &p);
            assert!((v - model.base_value(&p).as_f64()).abs() <= 1e-12);
        }
    }
    let mid = evaluate_extension(&model, &[1.0 + 0.3f64.powi(3), 0.5]);
    assert!(mid.is_finite());

    assert_eq!(model.telescoping_defect(), 0.0);

    let s8 = build_extension(&s, 3, 8).unwrap();
    let a = derivative_seminorm(&s8, &e, 1).unwrap();
    let b = derivative_seminorm(&model, &e, 1).unwrap();
    assert!(a.skipped.is_empty() && b.skipped.is_empty());
    assert!((a.value - b.value).abs() <= 0.05 * b.value, "{} {}", a.value, b.value);
    // d/dx (e^x y) peaks near the top of the circle
    assert!(b.value > 1.0 && b.value < 3.0, "{}", b.value);

    for l in 1..=12 {
        let c = increment_check(&model, &e, &e, l).unwrap();
        assert!(c.holds, "{c:?}");
    }
}

#[test]
fn family_polynomial_is_its_own_extension() {
    let rel = presets::circle_and_line();
    let e = presets::circle_and_line_set(64).unwrap();
    let p = parse_poly("x1^2*x2 - 0.5*x2^2 + x1 - 0.25", Some(2)).unwrap();
    let values: Vec<f64> = e.points().iter().map(|q| p.eval(q)).collect();
    let s = ApproxSeries::build(values, &rel, &e, 6).unwrap();
    let model = build_extension(&s, 2, 6).unwrap();
    for step in &model.steps()[2..] {
        for g in step {
            assert!(g.max_abs_coefficient() <= 1e-8, "{g}");
        }
    }
    for q in e.points() {
        assert!((evaluate_extension(&model, q) - p.eval(q)).abs() <= 1e-8);
    }

    let zero = build_extension(&s, 2, 0).unwrap();
    let p0 = s.projections[0].normal_form.clone();
    for q in [[0.3, 0.4], [5.0, -1.0], [1.0, 0.0]] {
        assert_eq!(evaluate_extension(&zero, &q), p0.eval(&q));
    }
    assert!(build_extension(&s, 2, 7).is_err());
    assert!(build_extension(&s, 0, 3).is_err());
}

#[test]
fn linear_model_differences() {
    let rel = presets::circle_and_line();
    let e = presets::circle_and_line_set(64).unwrap();
    let p = parse_poly("2*x1 - 3*x2 + 0.5", Some(2)).unwrap();
    let values: Vec<f64> = e.points().iter().map(|q| p.eval(q)).collect();
    let s = ApproxSeries::build(values, &rel, &e, 3).unwrap();
    let model = build_extension(&s, 2, 3).unwrap();
    let k = presets::circle_and_line_set(64).unwrap();
    let s0 = derivative_seminorm(&model, &k, 0).unwrap();
    let sup = k.points().iter().map(|q| p.eval(q).abs()).fold(0.0, f64::max);
    assert!((s0.value - sup).abs() <= 1e-8);
    let s1 = derivative_seminorm(&model, &k, 1).unwrap();
    assert!((s1.value - sup.max(3.0)).abs() <= 1e-6, "{}", s1.value);
    // second differences of a linear function only see rounding
    let inner = SampleSet::from_points(vec![vec![0.1, 0.2], vec![-0.7, 0.0]]).unwrap();
    let s2 = derivative_seminorm(&model, &inner, 2).unwrap();
    let s1i = derivative_seminorm(&model, &inner, 1).unwrap();
    assert_eq!(s2.value, s1i.value);
    assert!(derivative_seminorm(&model, &k, 3).is_err());
}

#[test]
fn determining_verdicts() {
    let e = presets::circle_and_line_set(64).unwrap();
    let zero: Vec<(usize, MultiPoly<f64>)> = (0..6).map(|l| (l, MultiPoly::zero(2))).collect();
    let rows = determining_diagnostic(&zero, &e, &[vec![1, 0], vec![0, 1]]).unwrap();
    assert!(rows.iter().all(|r| r.tends_to_zero));

    let rel = presets::circle_and_line();
    let s = ApproxSeries::<f64>::for_target(Target::Zero, &rel, &e, 3).unwrap();
    assert!(determining_from_series(&s, &[vec![1, 0]]).unwrap()[0].tends_to_zero);
    let s = ApproxSeries::<f64>::for_target(Target::XkPowD, &rel, &e, 3).unwrap();
    assert!(determining_from_series(&s, &[vec![1, 0]]).is_err());

    // scaled Chebyshev polynomials on the interval: Markov growth l^2 loses to 2^-l
    let line = SampleSet::from_boxes(vec![BoxDomain(vec![[-1.0, 1.0]])], 128).unwrap();
    let x = MultiPoly::<f64>::var(1, 0);
    let mut t = vec![MultiPoly::constant(1, 1.0), x.clone()];
    for j in 2..=30 {
        let next = &(&x * &t[j - 1]).scale(2.0) - &t[j - 2];
        t.push(next);
    }
    let seq: Vec<(usize, MultiPoly<f64>)> = (1..=30).map(|l| (l, t[l].scale(0.5f64.powi(l as i32)))).collect();
    let rows = determining_diagnostic(&seq, &line, &[vec![1]]).unwrap();
    assert!(rows[0].tends_to_zero);

    // the cube-root family: D_y P_n = 1 while P_n -> 0 on E
    let c = presets::cube_root_set(64).unwrap();
    let seq: Vec<(usize, MultiPoly<f64>)> = (1..=30).map(|n| (n, counterexample_poly(n).unwrap())).collect();
    let rows = determining_diagnostic(&seq, &c, &[vec![0, 1]]).unwrap();
    assert!(!rows[0].tends_to_zero);
    assert!(rows[0].norms.iter().all(|&(_, v)| v == 1.0));
}

#[test]
fn grid_export() {
    let s = exp_series(3);
    let model = build_extension(&s, 2, 3).unwrap();
    let mut buf = Vec::new();
    write_grid_csv(&model, &BoxDomain(vec![[-2.0, 2.0], [-1.5, 1.5]]), 5, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,value");
    assert_eq!(lines.len(), 26);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
    assert_eq!(default_exponent(1.97), 3);
    assert_eq!(default_exponent(2.0), 3);
}
