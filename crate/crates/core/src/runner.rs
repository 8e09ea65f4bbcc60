//! Executes a scenario's blocks in order and writes their artifacts.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::approx::{
    counterexample_decay, counterexample_poly, rapid_decrease_diagnostic, seminorm_delta, ApproxSeries, DecayRow,
    Verdict, MIN_WINDOW,
};
use crate::error::{Error, Result};
use crate::extension::{
    build_extension, default_exponent, derivative_seminorm, determining_diagnostic, determining_from_series,
    evaluate_extension, increment_check, write_grid_csv, DeterminingRow,
};
use crate::geometry::{refine_check, BoxDomain, SampleSet};
use crate::markov::{
    check_fmarkov_bound, random_spot_check, Ambient, BoundCheck, BoundForm, GradingKind, MarkovReport, SpotCheck,
};
use crate::polyring::MultiPoly;
use crate::scalar::{Dd, Scalar};
use crate::scenario::{ApproxBlock, DeterminingSource, ExtensionBlock, Precision, Scenario};
use crate::approx::Target;

/// A failed run: the block that failed (if past configuration) and why.
#[derive(Debug)]
pub struct RunError {
    pub block: Option<&'static str>,
    pub error: Error,
}

impl RunError {
    /// 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self.error {
            Error::Config { .. } => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.block {
            Some(b) => write!(f, "block {b} failed: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(error: Error) -> Self {
        RunError { block: None, error }
    }
}

trait InBlock<T> {
    fn block(self, name: &'static str) -> std::result::Result<T, RunError>;
}

impl<T> InBlock<T> for Result<T> {
    fn block(self, name: &'static str) -> std::result::Result<T, RunError> {
        self.map_err(|error| RunError { block: Some(name), error })
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub artifacts: Vec<PathBuf>,
    pub summary: Vec<String>,
}

struct Output {
    dir: PathBuf,
    artifacts: Vec<PathBuf>,
    lines: Vec<String>,
}

impl Output {
    fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        body(&mut w)?;
        w.flush()?;
        self.artifacts.push(path);
        Ok(())
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn alpha_tag(alpha: &[u32]) -> String {
    alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";")
}

fn alpha_text(alpha: &[u32]) -> String {
    format!("({})", alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
}

/// Runs every block of `scenario`, writing artifacts under `out` (or the
/// scenario's own output directory, or `./out`).
pub fn run_scenario(scenario: &Scenario, out: Option<&Path>) -> std::result::Result<RunOutcome, RunError> {
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| scenario.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(Error::from).block("output")?;
    let mut o = Output {
        dir: dir.clone(),
        artifacts: Vec::new(),
        lines: Vec::new(),
    };
    o.line(format!("scenario {}", scenario.name));
    if let Some(p) = &scenario.preset {
        o.line(format!("preset {p}"));
    }
    o.line(format!("relation {}", scenario.relation));

    let e = scenario.sample().block("sampling")?;
    o.write("e.csv", |w| e.write_csv(w)).block("sampling")?;
    o.line(format!("sampled {} points (density {})", e.len(), scenario.density));

    let mut m_hat = None;
    if let Some(m) = &scenario.markov {
        m_hat = markov_block(scenario, m, &e, &mut o).block("markov")?;
    }
    if let Some(a) = &scenario.approx {
        match a.precision {
            Precision::Double => approx_block::<f64>(scenario, a, &e, m_hat, &mut o)?,
            Precision::DoubleDouble => approx_block::<Dd>(scenario, a, &e, m_hat, &mut o)?,
        }
    }
    if let Some(c) = &scenario.counterexample {
        counterexample_block(c.nmax, &e, &mut o).block("counterexample")?;
    }
    if let Some(d) = &scenario.determining {
        determining_block(scenario, d, &e, &mut o).block("determining")?;
    }

    let lines = o.lines.clone();
    o.write("summary.txt", |w| {
        for l in &lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    })
    .block("output")?;
    Ok(RunOutcome {
        out_dir: dir,
        artifacts: o.artifacts,
        summary: o.lines,
    })
}

#[derive(Serialize)]
struct MarkovJson<'a> {
    scenario: &'a str,
    report: &'a MarkovReport,
    bound_checks: Vec<(Vec<u32>, f64, f64, &'a BoundCheck)>,
    spot_checks: &'a [(usize, Vec<u32>, SpotCheck)],
}

/// Returns the largest fitted exponent.
fn markov_block(sc: &Scenario, m: &crate::scenario::MarkovBlock, e: &SampleSet, o: &mut Output) -> Result<Option<f64>> {
    let levels: Vec<usize> = (m.lmin..=m.lmax).collect();
    let ambient = Ambient::Variety(&sc.relation);
    let report = MarkovReport::build(&ambient, e, m.grading, &levels, &m.alphas)?;

    let checks = m
        .bounds
        .iter()
        .map(|b| check_fmarkov_bound(&report, &b.alpha, b.big_m, b.m, b.form))
        .collect::<Result<Vec<_>>>()?;

    let mut spots = Vec::new();
    if m.random > 0 {
        for &level in &levels {
            let (basis, _) = ambient.basis(e, m.grading, level)?;
            for (j, alpha) in m.alphas.iter().enumerate() {
                let row = report.series(alpha).into_iter().find(|r| r.level == level).expect("computed");
                let seed = sc.seed ^ ((level as u64) << 16) ^ j as u64;
                spots.push((level, alpha.clone(), random_spot_check(&basis, e, alpha, row.factor, m.random, seed)?));
            }
        }
    }

    o.write("markov.csv", |w| {
        writeln!(w, "level,n,alpha,factor,bound,ratio,certified")?;
        for alpha in &m.alphas {
            let claim = m.bounds.iter().find(|b| &b.alpha == alpha);
            let order = alpha.iter().sum::<u32>();
            for r in report.series(alpha) {
                write!(w, "{},{},{},{:.16e}", r.level, r.n, alpha_tag(alpha), r.factor)?;
                match claim {
                    Some(b) if r.n > 0 => {
                        let bound = b.form.bound(b.big_m, b.m, order, r.n);
                        write!(w, ",{:.16e},{:.16e}", bound, r.factor / bound)?;
                    }
                    _ => write!(w, ",,")?,
                }
                writeln!(w, ",{}", r.certified)?;
            }
        }
        Ok(())
    })?;
    let json = MarkovJson {
        scenario: &sc.name,
        report: &report,
        bound_checks: m
            .bounds
            .iter()
            .zip(&checks)
            .map(|(b, c)| (b.alpha.clone(), b.big_m, b.m, c))
            .collect(),
        spot_checks: &spots,
    };
    o.write("markov.json", |w| {
        serde_json::to_writer_pretty(&mut *w, &json).map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    })?;

    let all_certified = report.rows.iter().all(|r| r.certified);
    o.line(format!(
        "markov: {} factors over levels {}..={} ({}), all certified: {}",
        report.rows.len(),
        m.lmin,
        m.lmax,
        match m.grading {
            GradingKind::TotalDegree => "total-degree",
            GradingKind::YDegree => "y-degree",
        },
        yes(all_certified)
    ));
    for (alpha, fit) in &report.fits {
        o.line(format!(
            "markov fit alpha={}: m = {:.4}, M = {:.4}, residual {:.3e}",
            alpha_text(alpha),
            fit.m,
            fit.big_m,
            fit.residual
        ));
    }
    for (b, c) in m.bounds.iter().zip(&checks) {
        let at = c.worst.as_ref().map_or(String::new(), |r| format!(" at n={}", r.n));
        o.line(format!(
            "markov bound alpha={}: factor <= {}{} n^({}|alpha|): holds: {} (worst ratio {:.4}{at})",
            alpha_text(&b.alpha),
            b.big_m,
            match b.form {
                BoundForm::Single => "",
                BoundForm::PerOrder => "^|alpha|",
            },
            b.m,
            yes(c.holds),
            c.worst_ratio
        ));
    }
    if !spots.is_empty() {
        let failed = spots.iter().filter(|s| !s.2.holds).count();
        o.line(format!(
            "markov random checks: {} polynomials per factor, exceeding the LP factor: {failed}",
            m.random
        ));
    }
    Ok(report.fits.iter().map(|(_, f)| f.m).reduce(f64::max))
}

fn approx_block<T: Scalar>(
    sc: &Scenario,
    a: &ApproxBlock,
    e: &SampleSet,
    m_hat: Option<f64>,
    o: &mut Output,
) -> std::result::Result<(), RunError> {
    let series = ApproxSeries::<T>::for_target(a.target, &sc.relation, e, a.lmax).block("approx")?;
    o.write("approx.csv", |w| series.write_csv(&a.ladder, w)).block("approx")?;
    o.write("coefficients.txt", |w| series.write_coefficients(w)).block("approx")?;
    let d = series.errors();
    o.line(format!(
        "approx {}: ||f||_E = {:.6e}, d_0 = {:.6e}, d_{} = {:.6e}, all certified: {}",
        a.target.name(),
        series.sup.as_f64(),
        d[0],
        a.lmax,
        d[a.lmax],
        yes(series.certified())
    ));
    for nu in -1..=2 {
        let s = seminorm_delta(&series, nu).block("approx")?;
        let note = if s.stale { " (at window edge)" } else { "" };
        o.line(format!("approx delta_{nu} = {:.6e}{note}", s.value));
    }
    if a.lmax + 1 >= MIN_WINDOW {
        let diag = rapid_decrease_diagnostic(&series, &a.ladder).block("approx")?;
        for rung in &diag.rungs {
            o.line(format!(
                "approx decay r={}: max l^r d_l = {:.6e}, verdict {}",
                rung.r,
                rung.max,
                match rung.verdict {
                    Verdict::DecreasingTail => "decreasing-tail",
                    Verdict::Inconclusive => "inconclusive",
                    Verdict::Growing => "growing",
                }
            ));
        }
    } else {
        o.line(format!("approx decay: window 0..={} shorter than {MIN_WINDOW}, no verdict", a.lmax));
    }
    if let Some(x) = &sc.extension {
        extension_block(sc, x, &series, a.target, m_hat, o).block("extension")?;
    }
    Ok(())
}

fn extension_block<T: Scalar>(
    sc: &Scenario,
    x: &ExtensionBlock,
    series: &ApproxSeries<T>,
    target: Target,
    m_hat: Option<f64>,
    o: &mut Output,
) -> Result<()> {
    let r = match (x.r, m_hat) {
        (Some(r), _) => r,
        (None, Some(m)) => default_exponent(m),
        (None, None) => return Err(Error::invalid("no exponent given and no Markov fit to derive one")),
    };
    let model = build_extension(series, r, x.level)?;
    let e = &series.set;
    let d_l = series.errors()[x.level];
    let on_e = e
        .points()
        .iter()
        .map(|p| (evaluate_extension(&model, p) - target.eval::<f64>(&sc.relation, p)).abs())
        .fold(0.0, f64::max);
    let checks = (1..=x.level)
        .map(|l| increment_check(&model, e, e, l))
        .collect::<Result<Vec<_>>>()?;
    let bumps = model.bumps().to_vec();
    o.write("extension.csv", |w| {
        writeln!(w, "l,epsilon,increment,bound,holds")?;
        for (c, b) in checks.iter().zip(&bumps) {
            writeln!(w, "{},{:.16e},{:.16e},{:.16e},{}", c.l, b.epsilon(), c.measured, c.bound, c.holds)?;
        }
        Ok(())
    })?;
    o.line(format!(
        "extension r={r} L={}: max |f~ - f| on E = {:.6e} (d_L = {:.6e}), within d_L + 1e-8: {}",
        x.level,
        on_e,
        d_l,
        yes(on_e <= d_l + 1e-8)
    ));
    o.line(format!("extension telescoping defect: {:.3e}", model.telescoping_defect()));
    for nu in 0..=2 {
        let s = derivative_seminorm(&model, e, nu)?;
        o.line(format!(
            "extension seminorm nu={nu}: {:.6e} (alpha {}, {} points skipped)",
            s.value,
            alpha_text(&s.alpha),
            s.skipped.len()
        ));
    }
    o.line(format!(
        "extension increments within bound: {}/{}",
        checks.iter().filter(|c| c.holds).count(),
        checks.len()
    ));
    if let Some(g) = &x.grid {
        let grid = BoxDomain(g.bounds.clone());
        o.write("extension_grid.csv", |w| write_grid_csv(&model, &grid, g.count, w))?;
    }
    Ok(())
}

fn counterexample_block(nmax: usize, e: &SampleSet, o: &mut Output) -> Result<()> {
    let rows: Vec<DecayRow> = counterexample_decay(nmax, e)?;
    let certified = rows
        .iter()
        .map(|r| refine_check(&counterexample_poly(r.n)?, e).map(|c| c.certified))
        .collect::<Result<Vec<bool>>>()?;
    o.write("counterexample.csv", |w| {
        writeln!(w, "n,norm,x,n^10*norm,log_norm_over_n,markov_ratio,certified")?;
        for (r, c) in rows.iter().zip(&certified) {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{c}",
                r.n, r.norm, r.x, r.scaled, r.log_rate, r.markov_ratio
            )?;
        }
        Ok(())
    })?;
    let tail: Vec<&DecayRow> = rows.iter().filter(|r| r.n >= 20).collect();
    if tail.is_empty() {
        o.line(format!("counterexample: nmax = {nmax} below 20, no refutation window"));
        return Ok(());
    }
    let decreasing = tail.windows(2).all(|w| w[1].scaled < w[0].scaled);
    let refutes = tail.iter().all(|r| r.markov_ratio >= (r.n as f64).powi(10));
    let last = tail[tail.len() - 1];
    o.line(format!(
        "counterexample: n^10 ||P_n||_E strictly decreasing on 20..={nmax}: {}",
        yes(decreasing)
    ));
    o.line(format!(
        "counterexample: log ||P_n||_E / n at n={} is {:.6} (-ln 4 = {:.6})",
        last.n,
        last.log_rate,
        -(4f64.ln())
    ));
    o.line(format!(
        "counterexample: ||D_y P_n||_E / ||P_n||_E >= n^10 for all n in 20..={nmax}: {} ({})",
        yes(refutes),
        if refutes { "no Markov exponent fits this set" } else { "refutation not reached" }
    ));
    Ok(())
}

fn determining_block(
    sc: &Scenario,
    d: &crate::scenario::DeterminingBlock,
    e: &SampleSet,
    o: &mut Output,
) -> Result<()> {
    let (rows, polys): (Vec<DeterminingRow>, Vec<(usize, MultiPoly<f64>)>) = match d.source {
        DeterminingSource::Projections => {
            let s = ApproxSeries::<f64>::for_target(Target::Zero, &sc.relation, e, d.lmax)?;
            let polys = s.projections.iter().map(|p| (p.l, p.normal_form.reassemble())).collect();
            (determining_from_series(&s, &d.alphas)?, polys)
        }
        DeterminingSource::Counterexample => {
            let polys = (1..=d.lmax.max(1))
                .map(|n| Ok((n, counterexample_poly(n)?)))
                .collect::<Result<Vec<_>>>()?;
            (determining_diagnostic(&polys, e, &d.alphas)?, polys)
        }
    };
    o.write("determining.csv", |w| {
        writeln!(w, "alpha,l,norm,certified")?;
        for row in &rows {
            for ((l, v), (_, p)) in row.norms.iter().zip(&polys) {
                let c = refine_check(&p.differentiate(&row.alpha)?, e)?.certified;
                writeln!(w, "{},{l},{v:.16e},{c}", alpha_tag(&row.alpha))?;
            }
        }
        Ok(())
    })?;
    for row in &rows {
        o.line(format!(
            "determining alpha={}: sup norms tend to zero: {}",
            alpha_text(&row.alpha),
            yes(row.tends_to_zero)
        ));
    }
    Ok(())
}
