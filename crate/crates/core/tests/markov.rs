use markovlab::chebysolve::{Basis, Grading, PolySpace};
use markovlab::geometry::{BoxDomain, SampleSet};
use markovlab::markov::*;
use markovlab::polyring::MultiPoly;
use markovlab::presets;

fn interval(density: usize) -> SampleSet {
    SampleSet::from_boxes(vec![BoxDomain(vec![[-1.0, 1.0]])], density).unwrap()
}

fn line_basis(e: &SampleSet, n: usize) -> Basis<f64> {
    Basis::new(PolySpace::full(1, e.points()).unwrap(), Grading::TotalDegree(n))
}

#[test]
fn classical_degree_five() {
    let e = interval(256);
    let f = markov_factor(&line_basis(&e, 5), &e, &[1]).unwrap();
    assert!((f.value - 25.0).abs() <= 0.25, "{}", f.value);
    // extremal derivative sits at an endpoint
    assert_eq!(e.points()[f.point][0].abs(), 1.0);
}

#[test]
fn pruning_matches_exhaustive_search() {
    let e = presets::circle_and_line_set(64).unwrap();
    let space = PolySpace::on_variety(2, 1, 3, e.points()).unwrap();
    for (n, alpha) in [(3, [1u32, 0]), (4, [0, 1]), (5, [1, 1])] {
        let basis = Basis::new(space.clone(), Grading::TotalDegree(n));
        let fast = markov_factor(&basis, &e, &alpha).unwrap();
        let slow = markov_factor_exhaustive(&basis, &e, &alpha).unwrap();
        assert!((fast.value - slow.value).abs() <= 1e-9 * slow.value, "{} {}", fast.value, slow.value);
        assert!(fast.solves < slow.solves, "{} vs {}", fast.solves, slow.solves);
    }
}

#[test]
fn circle_and_line_bounds() {
    let rel = presets::circle_and_line();
    let e = presets::circle_and_line_set(128).unwrap();
    let amb = Ambient::Variety(&rel);
    let levels: Vec<usize> = (1..=8).collect();
    let report = MarkovReport::build(&amb, &e, GradingKind::TotalDegree, &levels, &[vec![1, 0], vec![0, 1]]).unwrap();
    let dx = check_fmarkov_bound(&report, &[1, 0], 6.0, 2.0, BoundForm::Single).unwrap();
    let dy = check_fmarkov_bound(&report, &[0, 1], 2.0, 2.0, BoundForm::Single).unwrap();
    assert!(dx.holds, "{}", dx.worst_ratio);
    assert!(dy.holds, "{}", dy.worst_ratio);
    let tiny = check_fmarkov_bound(&report, &[1, 0], 0.01, 0.1, BoundForm::PerOrder).unwrap();
    assert!(!tiny.holds && tiny.worst.is_some());
}

#[test]
fn exponent_fits() {
    let exact: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, (n * n) as f64)).collect();
    let f = fit_exponent(&exact, 1).unwrap();
    assert!((f.m - 2.0).abs() < 1e-12 && (f.big_m - 1.0).abs() < 1e-12 && f.residual <= 1e-12);
    let pow: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, 3.0 * (n as f64).powf(1.5))).collect();
    let f = fit_exponent(&pow, 1).unwrap();
    assert!((f.m - 1.5).abs() < 1e-9 && (f.big_m - 3.0).abs() < 1e-9);
    assert!(fit_exponent(&exact[..3], 1).is_err());

    let e = interval(256);
    let levels: Vec<usize> = (2..=10).collect();
    let report = MarkovReport::build(&Ambient::Full, &e, GradingKind::TotalDegree, &levels, &[vec![1]]).unwrap();
    let m = report.fits[0].1.m;
    assert!((1.9..=2.1).contains(&m), "{m}");
}

#[test]
fn growth_off_the_interval() {
    let e = interval(256);
    for n in [4usize, 8] {
        let basis = line_basis(&e, n);
        let f = markov_factor(&basis, &e, &[1]).unwrap();
        let w = f.witness_poly(&basis).unwrap();
        let ok = growth_property_check(&basis, &e, n, 2.0, 5.0, &[w.clone()], 100, DEFAULT_SEED).unwrap();
        assert!(ok.holds, "{}", ok.worst_value);
        let tight = growth_property_check(&basis, &e, n, 30.0, 1.0 + 1e-6, &[w.clone()], 100, DEFAULT_SEED).unwrap();
        assert!(tight.holds, "{}", tight.worst_value);
        let bad = growth_property_check(&basis, &e, n, 0.5, 1.0, &[w], 0, DEFAULT_SEED).unwrap();
        assert!(!bad.holds);
        assert!(bad.worst_point[0].abs() > 0.9);
    }
}

#[test]
fn coefficient_table() {
    let rel = presets::circle_and_line();
    let e = presets::circle_and_line_set(129).unwrap();
    let y2 = MultiPoly::var(2, 1).pow(2);
    let t = lemma_coeff_bound_check(&rel, &e, &[(2, vec![y2, MultiPoly::zero(2)])], 2.0).unwrap();
    // ||G_2|| = 1, 2! = 2, ||y^2||_E = 1, n^{m(d-1)} = 16
    assert_eq!(t.len(), 3);
    assert_eq!(t[0].ratio, 0.0);
    assert_eq!(t[1].ratio, 0.0);
    assert!((t[2].ratio - 2.0 / 16.0).abs() < 1e-15);
}

#[test]
fn random_polynomials_never_beat_the_lp() {
    let e = presets::circle_and_line_set(64).unwrap();
    let space = PolySpace::on_variety(2, 1, 3, e.points()).unwrap();
    let basis = Basis::new(space, Grading::TotalDegree(5));
    for alpha in [[1u32, 0], [0, 1]] {
        let f = markov_factor(&basis, &e, &alpha).unwrap();
        for c in random_coefficients(500, basis.len(), DEFAULT_SEED) {
            let p = basis.combine(&c).unwrap();
            let dp = p.differentiate(&alpha).unwrap();
            let num = e.points().iter().map(|x| dp.eval(x).abs()).fold(0.0, f64::max);
            let den = e.points().iter().map(|x| p.eval(x).abs()).fold(0.0, f64::max);
            assert!(num / den <= f.value + 1e-7);
        }
    }
}

#[test]
fn factor_is_basis_independent() {
    let e = presets::circle_and_line_set(64).unwrap();
    let space = PolySpace::on_variety(2, 1, 3, e.points()).unwrap();
    let wide = space.clone().with_frame(vec![-3.0], vec![2.0]).unwrap();
    let a = markov_factor(&Basis::new(space, Grading::TotalDegree(5)), &e, &[1, 0]).unwrap();
    let b = markov_factor(&Basis::new(wide, Grading::TotalDegree(5)), &e, &[1, 0]).unwrap();
    assert!((a.value - b.value).abs() <= 1e-8 * a.value, "{} {}", a.value, b.value);
}
