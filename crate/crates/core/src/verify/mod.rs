//! The end-to-end acceptance checks, one function per criterion.

mod ring;

pub use ring::{check_ring_case, random_ring_case, ring_property_suite, RingCase, RingReport, SOUNDNESS_TOLERANCE};

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use crate::approx::{
    counterexample_decay, gauss_2f1, rapid_decrease_diagnostic, tail_closed_form, tail_direct, ApproxSeries, Target,
    Verdict,
};
use crate::error::{Error, Result};
use crate::extension::{build_extension, derivative_seminorm, evaluate_extension};
use crate::geometry::{BoxDomain, SampleSet};
use crate::markov::{
    check_fmarkov_bound, fit_exponent, lemma_coeff_bound_check, log_log_slope, markov_factor, random_coefficients,
    random_spot_check, Ambient, BoundForm, GradingKind, MarkovReport, DEFAULT_SEED,
};
use crate::polyring::MultiPoly;
use crate::presets;
use crate::scalar::Dd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, title: "classical Markov factor on [-1, 1] matches n^2" },
    Criterion { id: 2, title: "circle-and-line factors within 6n^2 and 2n^2" },
    Criterion { id: 3, title: "circle-and-line exponent fit and bound (M=6, m=2)" },
    Criterion { id: 4, title: "Gauss summation 2F1(1, 2/3+k; 2+k; 1) = 3(1+k)" },
    Criterion { id: 5, title: "cube-root tail: closed form vs direct sum" },
    Criterion { id: 6, title: "cube-root counterexample decay and n^10 refutation" },
    Criterion { id: 7, title: "normal-form coefficient bounds show no growth" },
    Criterion { id: 8, title: "reduction and ring properties on 1000 random cases" },
    Criterion { id: 9, title: "smooth extension of exp(x)*y" },
    Criterion { id: 10, title: "rapid decrease of exp(x)*y approximation errors" },
];

/// Deliberate faults for checking that the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Claims the constant 0.6 in place of 6 for the x-derivative bound.
    MarkovConstant,
}

impl Fault {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "markov-constant" => Ok(Fault::MarkovConstant),
            _ => Err(Error::invalid(format!("unknown fault {name:?}; expected markov-constant"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    /// `[PASS] 4 title: detail`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion.id,
            self.criterion.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Density of the circle-and-line set in the factor criteria.
pub const CIRCLE_DENSITY: usize = 128;
/// Density of the circle-and-line set in the approximation criteria.
pub const APPROX_DENSITY: usize = 64;
/// Random polynomials per factor in the spot checks.
pub const SPOT_CHECKS: usize = 1000;

/// Shared intermediate results; each is computed on first use.
pub struct Verifier {
    fault: Option<Fault>,
    circle: OnceLock<Result<SampleSet>>,
    report: OnceLock<Result<MarkovReport>>,
    exp_series: OnceLock<Result<ApproxSeries<Dd>>>,
}

fn shared<T>(cell: &OnceLock<Result<T>>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(init).as_ref().map_err(|e| Error::Consistency(format!("shared input failed: {e}")))
}

type Outcome = Result<(bool, String)>;

impl Verifier {
    pub fn new(fault: Option<Fault>) -> Self {
        Verifier {
            fault,
            circle: OnceLock::new(),
            report: OnceLock::new(),
            exp_series: OnceLock::new(),
        }
    }

    fn circle(&self) -> Result<&SampleSet> {
        shared(&self.circle, || presets::circle_and_line_set(CIRCLE_DENSITY))
    }

    fn report(&self) -> Result<&MarkovReport> {
        let e = self.circle()?;
        shared(&self.report, || {
            let rel = presets::circle_and_line();
            let levels: Vec<usize> = (1..=10).collect();
            MarkovReport::build(&Ambient::Variety(&rel), e, GradingKind::TotalDegree, &levels, &[vec![1, 0], vec![0, 1]])
        })
    }

    fn exp_series(&self) -> Result<&ApproxSeries<Dd>> {
        shared(&self.exp_series, || {
            let e = presets::circle_and_line_set(APPROX_DENSITY)?;
            ApproxSeries::for_target(Target::ExpXTimesY, &presets::circle_and_line(), &e, 16)
        })
    }

    fn x_constant(&self) -> f64 {
        match self.fault {
            Some(Fault::MarkovConstant) => 0.6,
            None => 6.0,
        }
    }

    pub fn run(&self, id: u8) -> CriterionResult {
        let criterion = CRITERIA[(id - 1) as usize];
        let start = Instant::now();
        let outcome = match id {
            1 => self.classical_markov(),
            2 => self.circle_bounds(),
            3 => self.circle_exponent(),
            4 => gauss_identity(),
            5 => tail_identity(),
            6 => counterexample(),
            7 => self.coefficient_bounds(),
            8 => ring_suite(),
            9 => self.extension(),
            10 => self.rapid_decrease(),
            _ => unreachable!(),
        };
        let elapsed = start.elapsed();
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        let budget = match id {
            1 => Some(30.0),
            2 => Some(180.0),
            6 => Some(60.0),
            _ => None,
        };
        let (passed, detail) = match budget {
            Some(b) if elapsed.as_secs_f64() > b => (false, format!("{detail}; over the {b}s budget")),
            _ => (passed, detail),
        };
        CriterionResult {
            criterion,
            passed,
            detail,
            elapsed,
        }
    }

    /// Runs every criterion in order, handing each result to `each` as it
    /// completes.
    pub fn run_all(&self, mut each: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
        CRITERIA
            .iter()
            .map(|c| {
                let r = self.run(c.id);
                each(&r);
                r
            })
            .collect()
    }

    fn classical_markov(&self) -> Outcome {
        let line = SampleSet::from_boxes(vec![BoxDomain(vec![[-1.0, 1.0]])], 256)?;
        let mut worst: f64 = 0.0;
        for n in 3..=10usize {
            let (basis, _) = Ambient::Full.basis(&line, GradingKind::TotalDegree, n)?;
            let f = markov_factor(&basis, &line, &[1])?;
            let n2 = (n * n) as f64;
            worst = worst.max((f.value - n2).abs() / n2);
        }
        Ok((worst <= 0.01, format!("max relative deviation from n^2 over n=3..10: {worst:.2e}")))
    }

    fn circle_bounds(&self) -> Outcome {
        let report = self.report()?;
        let e = self.circle()?;
        let x = check_fmarkov_bound(report, &[1, 0], self.x_constant(), 2.0, BoundForm::Single)?;
        let y = check_fmarkov_bound(report, &[0, 1], 2.0, 2.0, BoundForm::Single)?;
        let rel = presets::circle_and_line();
        let ambient = Ambient::Variety(&rel);
        let mut exceeded = 0;
        let mut worst_gap = f64::NEG_INFINITY;
        for n in 1..=10usize {
            let (basis, _) = ambient.basis(e, GradingKind::TotalDegree, n)?;
            for (j, alpha) in [[1u32, 0], [0, 1]].iter().enumerate() {
                let row = report.series(alpha).into_iter().find(|r| r.level == n).expect("computed");
                let s = random_spot_check(&basis, e, alpha, row.factor, SPOT_CHECKS, DEFAULT_SEED ^ (n as u64 * 2 + j as u64))?;
                worst_gap = worst_gap.max(s.worst_ratio - s.factor);
                exceeded += usize::from(!s.holds);
            }
        }
        let passed = x.holds && y.holds && exceeded == 0;
        Ok((
            passed,
            format!(
                "(1,0) worst factor/({}n^2) = {:.4}, (0,1) worst factor/(2n^2) = {:.4}, \
                 {SPOT_CHECKS} random polynomials per factor: max(ratio - factor) = {worst_gap:.2e}",
                self.x_constant(),
                x.worst_ratio,
                y.worst_ratio
            ),
        ))
    }

    fn circle_exponent(&self) -> Outcome {
        let report = self.report()?;
        let pts: Vec<(f64, f64)> = report
            .series(&[1, 0])
            .iter()
            .filter(|r| r.n >= 4)
            .map(|r| (r.n as f64, r.factor))
            .collect();
        let fit = fit_exponent(&pts, 1)?;
        let bound = check_fmarkov_bound(report, &[1, 0], self.x_constant(), 2.0, BoundForm::Single)?;
        let in_range = (1.0..=2.2).contains(&fit.m);
        Ok((
            in_range && bound.holds,
            format!(
                "fitted m = {:.4} over n=4..10 (needs [1.0, 2.2]), bound with M={} m=2 holds: {}",
                fit.m,
                self.x_constant(),
                bound.holds
            ),
        ))
    }

    fn coefficient_bounds(&self) -> Outcome {
        let report = self.report()?;
        let e = self.circle()?;
        let rel = presets::circle_and_line();
        let ambient = Ambient::Variety(&rel);
        let mut by_degree = Vec::new();
        for n in 1..=10usize {
            let (basis, _) = ambient.basis(e, GradingKind::TotalDegree, n)?;
            let mut polys: Vec<MultiPoly<f64>> = report
                .rows
                .iter()
                .filter(|r| r.level == n)
                .map(|r| basis.combine(&r.witness))
                .collect::<Result<_>>()?;
            for c in random_coefficients(100, basis.len(), DEFAULT_SEED ^ n as u64) {
                polys.push(basis.combine(&c)?);
            }
            by_degree.push((n, polys));
        }
        let table = lemma_coeff_bound_check(&rel, e, &by_degree, 2.0)?;
        let per_n: Vec<(f64, f64)> = (1..=10usize)
            .map(|n| {
                let r = table.iter().filter(|t| t.n == n).map(|t| t.ratio).fold(0.0, f64::max);
                (n as f64, r)
            })
            .collect();
        let max = per_n.iter().map(|p| p.1).fold(0.0, f64::max);
        let slope = log_log_slope(&per_n[5..])?;
        Ok((
            max.is_finite() && slope <= 0.05,
            format!("max ratio {max:.4e}, log-log slope over n=6..10: {slope:.3} (needs <= 0.05)"),
        ))
    }

    fn extension(&self) -> Outcome {
        let s = self.exp_series()?;
        let e = &s.set;
        let model = build_extension(s, 3, 12)?;
        let d12 = s.errors()[12];
        let on_e = e
            .points()
            .iter()
            .map(|p| (evaluate_extension(&model, p) - p[0].exp() * p[1]).abs())
            .fold(0.0, f64::max);
        let mut local = 0.0f64;
        for x in [-4.0, -2.5, 2.01, 3.0, 6.0] {
            for y in [-2.0, -0.5, 0.0, 0.75, 2.0] {
                let p = [x, y];
                let base = crate::scalar::Scalar::as_f64(model.base_value(&p));
                local = local.max((evaluate_extension(&model, &p) - base).abs());
            }
        }
        let defect = model.telescoping_defect();
        let s8 = derivative_seminorm(&build_extension(s, 3, 8)?, e, 1)?;
        let s12 = derivative_seminorm(&model, e, 1)?;
        let drift = (s8.value - s12.value).abs() / s12.value;
        let passed = on_e <= d12 + 1e-8 && local <= 1e-12 && defect == 0.0 && drift <= 0.05;
        Ok((
            passed,
            format!(
                "on E {on_e:.2e} vs d_12 {d12:.2e}, off-support {local:.1e}, telescoping {defect:.1e}, \
                 nu=1 seminorm L=8 {:.4} vs L=12 {:.4}",
                s8.value, s12.value
            ),
        ))
    }

    fn rapid_decrease(&self) -> Outcome {
        let s = self.exp_series()?;
        let diag = rapid_decrease_diagnostic(s, &[1, 2, 4])?;
        let verdicts: Vec<String> = diag.rungs.iter().map(|r| format!("r={}: {:?}", r.r, r.verdict)).collect();
        let d = s.errors();
        Ok((
            diag.rungs.iter().all(|r| r.verdict == Verdict::DecreasingTail),
            format!("d_16 = {:.2e}; {}", d[16], verdicts.join(", ")),
        ))
    }
}

fn gauss_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let kf = k as f64;
        let v = gauss_2f1(1.0, 2.0 / 3.0 + kf, 2.0 + kf, 1.0)?;
        worst = worst.max((v - 3.0 * (1.0 + kf)).abs() / (3.0 * (1.0 + kf)));
    }
    Ok((worst <= 1e-10, format!("max relative error over k=0..20: {worst:.2e}")))
}

fn tail_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [5, 10, 20] {
        for x in [0.25, 1.0 / 3.0, 0.5] {
            let a = tail_closed_form(n, x)?;
            let b = tail_direct(n, x);
            worst = worst.max((a - b).abs() / b.abs());
        }
    }
    Ok((worst <= 1e-9, format!("max relative disagreement: {worst:.2e}")))
}

fn counterexample() -> Outcome {
    let e = presets::cube_root_set(CIRCLE_DENSITY)?;
    let rows = counterexample_decay(60, &e)?;
    let w: Vec<_> = rows.iter().filter(|r| r.n >= 20).collect();
    let decreasing = w.windows(2).all(|p| p[1].scaled < p[0].scaled);
    let outside: Vec<usize> = w
        .iter()
        .filter(|r| !(-1.525..=-1.25).contains(&r.log_rate))
        .map(|r| r.n)
        .collect();
    let refutes = w.iter().all(|r| r.markov_ratio >= (r.n as f64).powi(10));
    let band = if outside.is_empty() {
        "log||P_n||/n within [-1.525, -1.25]".to_string()
    } else {
        format!(
            "log||P_n||/n outside [-1.525, -1.25] for n={}..{} (at n=20: {:.4})",
            outside[0],
            outside[outside.len() - 1],
            w[0].log_rate
        )
    };
    Ok((
        decreasing && outside.is_empty() && refutes,
        format!("n^10||P_n|| strictly decreasing: {decreasing}; {band}; ratio >= n^10: {refutes}"),
    ))
}

fn ring_suite() -> Outcome {
    let r = ring_property_suite(1000, DEFAULT_SEED)?;
    Ok((
        r.passed(),
        format!(
            "{} cases, {} points, worst soundness {:.1e}; failures: soundness {}, idempotence {}, homomorphism {}, extraction {}{}",
            r.cases,
            r.points,
            r.worst_soundness,
            r.soundness_failures,
            r.idempotence_failures,
            r.homomorphism_failures,
            r.extraction_failures,
            r.first_failure.map_or(String::new(), |f| format!(" (first: {f})"))
        ),
    ))
}
