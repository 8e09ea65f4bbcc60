//! Metric projections onto `P_l(y) ⊗ P_{d-1}(x_k)`, the seminorms built from
//! their errors, and finite-window decay verdicts.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebysolve::{minimax_fit, Basis, Grading, PolySpace};
use crate::error::{Error, Result};
use crate::geometry::{refine_check, SampleSet};
use crate::polyring::{NormalForm, VarietyRelation};
use crate::scalar::Scalar;

/// Built-in target functions, by CLI name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// `exp(y_1) x_k`, with `y_1` the first coordinate other than `x_k`.
    ExpXTimesY,
    /// `x_k^d`.
    XkPowD,
    Zero,
}

impl Target {
    pub const NAMES: [&'static str; 3] = ["exp-x-times-y", "xk-pow-d", "zero"];

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "exp-x-times-y" => Ok(Target::ExpXTimesY),
            "xk-pow-d" => Ok(Target::XkPowD),
            "zero" => Ok(Target::Zero),
            _ => Err(Error::invalid(format!(
                "unknown target {name:?}; expected one of {}",
                Target::NAMES.join(", ")
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::ExpXTimesY => Target::NAMES[0],
            Target::XkPowD => Target::NAMES[1],
            Target::Zero => Target::NAMES[2],
        }
    }

    pub fn eval<T: Scalar>(self, rel: &VarietyRelation<f64>, point: &[f64]) -> T {
        let k = rel.var();
        match self {
            Target::ExpXTimesY => {
                let y1 = if k == 0 { 1 } else { 0 };
                T::of(point[y1]).exp() * T::of(point[k])
            }
            Target::XkPowD => T::of(point[k]).powi(rel.d() as u32),
            Target::Zero => T::zero(),
        }
    }

    pub fn values<T: Scalar>(self, rel: &VarietyRelation<f64>, e: &SampleSet) -> Vec<T> {
        e.points().iter().map(|p| self.eval(rel, p)).collect()
    }
}

/// A best uniform approximation of degree `l` in `y`.
#[derive(Clone, Debug)]
pub struct Projection<T> {
    pub l: usize,
    pub normal_form: NormalForm<T>,
    /// Coefficients in the Chebyshev basis of the space.
    pub coefficients: Vec<T>,
    /// `dist_E(f, P_l(y) ⊗ P_{d-1}(x_k))`.
    pub error: T,
    /// Whether the projection's sup norm survives grid refinement.
    pub certified: bool,
}

/// Best approximation of the value table from `P_l(y) ⊗ P_{d-1}(x_k)`.
pub fn metric_projection<T: Scalar>(
    values: &[T],
    rel: &VarietyRelation<f64>,
    e: &SampleSet,
    l: usize,
) -> Result<Projection<T>> {
    let space = PolySpace::on_variety(rel.nvars(), rel.var(), rel.d(), e.points())?;
    let basis = Basis::<T>::new(space, Grading::YDegree(l));
    let rows = basis.matrix(e.points());
    let fit = minimax_fit(values, &rows)?;
    let poly = basis.combine(&fit.coefficients)?;
    let normal_form = rel.cast::<T>().collect_coefficients(&poly)?;
    let certified = refine_check(&poly, e)?.certified;
    Ok(Projection {
        l,
        normal_form,
        coefficients: fit.coefficients,
        error: fit.error,
        certified,
    })
}

/// Projections of one target for `l = 0..=lmax`.
#[derive(Clone, Debug)]
pub struct ApproxSeries<T> {
    pub relation: VarietyRelation<f64>,
    pub set: SampleSet,
    pub values: Vec<T>,
    /// `||f||_E`.
    pub sup: T,
    pub projections: Vec<Projection<T>>,
}

impl<T: Scalar> ApproxSeries<T> {
    pub fn build(values: Vec<T>, rel: &VarietyRelation<f64>, e: &SampleSet, lmax: usize) -> Result<Self> {
        if values.len() != e.len() {
            return Err(Error::DimensionMismatch {
                expected: e.len(),
                found: values.len(),
            });
        }
        let projections = (0..=lmax)
            .into_par_iter()
            .map(|l| metric_projection(&values, rel, e, l))
            .collect::<Result<Vec<_>>>()?;
        let sup = values.iter().fold(T::zero(), |a, v| Scalar::max(a, v.abs()));
        // nested spaces: errors may only grow by LP round-off
        let slack = T::of(1e-9) * Scalar::max(sup, T::one()) + T::lp_tolerance();
        for w in projections.windows(2) {
            if w[1].error > w[0].error + slack {
                return Err(Error::Consistency(format!(
                    "projection error rose from {} at l = {} to {} at l = {}",
                    w[0].error, w[0].l, w[1].error, w[1].l
                )));
            }
        }
        Ok(ApproxSeries {
            relation: rel.clone(),
            set: e.clone(),
            values,
            sup,
            projections,
        })
    }

    pub fn for_target(target: Target, rel: &VarietyRelation<f64>, e: &SampleSet, lmax: usize) -> Result<Self> {
        ApproxSeries::build(target.values(rel, e), rel, e, lmax)
    }

    pub fn lmax(&self) -> usize {
        self.projections.len() - 1
    }

    /// `d_0, d_1, ...` as `f64`.
    pub fn errors(&self) -> Vec<f64> {
        self.projections.iter().map(|p| p.error.as_f64()).collect()
    }

    pub fn certified(&self) -> bool {
        self.projections.iter().all(|p| p.certified)
    }

    /// Columns `l, d_l, certified`, then `l^r d_l` for each `r`.
    pub fn write_csv<W: Write>(&self, ladder: &[u32], mut out: W) -> Result<()> {
        write!(out, "l,d_l,certified")?;
        for r in ladder {
            write!(out, ",l^{r}*d_l")?;
        }
        writeln!(out)?;
        for p in &self.projections {
            let d = p.error.as_f64();
            write!(out, "{},{:.16e},{}", p.l, d, p.certified)?;
            for &r in ladder {
                write!(out, ",{:.16e}", (p.l as f64).powi(r as i32) * d)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// `G_{l,i}` in the polynomial text format, one line per pair.
    pub fn write_coefficients<W: Write>(&self, mut out: W) -> Result<()> {
        for p in &self.projections {
            for (i, g) in p.normal_form.coefficients().iter().enumerate() {
                writeln!(out, "G[{},{}] = {}", p.l, i, g.cast::<f64>())?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seminorm {
    pub value: f64,
    /// Degree attaining the sup, `None` for `nu = -1`.
    pub at: Option<usize>,
    /// The sup sits at the right edge of the window.
    pub stale: bool,
}

/// `delta_nu(f) = sup_l l^nu d_l` over the computed window; `delta_{-1}` is
/// `||f||_E` and `delta_0` is `d_0`.
pub fn seminorm_delta<T: Scalar>(series: &ApproxSeries<T>, nu: i32) -> Result<Seminorm> {
    match nu {
        n if n < -1 => Err(Error::invalid(format!("seminorm order {nu} below -1"))),
        -1 => Ok(Seminorm {
            value: series.sup.as_f64(),
            at: None,
            stale: false,
        }),
        0 => Ok(Seminorm {
            value: series.projections[0].error.as_f64(),
            at: Some(0),
            stale: false,
        }),
        _ => {
            let (at, value) = series
                .projections
                .iter()
                .map(|p| (p.l, (p.l as f64).powi(nu) * p.error.as_f64()))
                .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            Ok(Seminorm {
                value,
                at: Some(at),
                stale: value > 0.0 && at == series.lmax(),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DecreasingTail,
    Inconclusive,
    Growing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayRung {
    pub r: u32,
    /// `l^r d_l` over the window.
    pub scaled: Vec<f64>,
    pub max: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayDiagnostic {
    pub ls: Vec<usize>,
    pub rungs: Vec<DecayRung>,
    /// Grid certification of the underlying errors, when known.
    pub certified: Option<bool>,
}

pub const MIN_WINDOW: usize = 12;

/// Verdicts from the last `ceil(w/3)` values of `l^r d_l`: strictly
/// decreasing, strictly increasing, or neither.
pub fn decay_diagnostic(ls: &[usize], d: &[f64], ladder: &[u32]) -> Result<DecayDiagnostic> {
    if ls.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: ls.len(),
            found: d.len(),
        });
    }
    if ls.len() < MIN_WINDOW {
        return Err(Error::invalid(format!("window of {} values, need {MIN_WINDOW}", ls.len())));
    }
    let tail = ls.len().div_ceil(3);
    let rungs = ladder
        .iter()
        .map(|&r| {
            let scaled: Vec<f64> = ls.iter().zip(d).map(|(&l, &v)| (l as f64).powi(r as i32) * v).collect();
            let last = &scaled[scaled.len() - tail..];
            let verdict = if last.windows(2).all(|w| w[1] < w[0]) {
                Verdict::DecreasingTail
            } else if last.windows(2).all(|w| w[1] > w[0]) {
                Verdict::Growing
            } else {
                Verdict::Inconclusive
            };
            DecayRung {
                r,
                max: scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                scaled,
                verdict,
            }
        })
        .collect();
    Ok(DecayDiagnostic {
        ls: ls.to_vec(),
        rungs,
        certified: None,
    })
}

/// [`decay_diagnostic`] over the whole window of a series.
pub fn rapid_decrease_diagnostic<T: Scalar>(series: &ApproxSeries<T>, ladder: &[u32]) -> Result<DecayDiagnostic> {
    let ls: Vec<usize> = series.projections.iter().map(|p| p.l).collect();
    let mut diag = decay_diagnostic(&ls, &series.errors(), ladder)?;
    diag.certified = Some(series.certified());
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_sequences() {
        let ls: Vec<usize> = (1..=16).collect();
        let geo: Vec<f64> = ls.iter().map(|&l| 0.5f64.powi(l as i32)).collect();
        let diag = decay_diagnostic(&ls, &geo, &[1, 2, 4, 8, 10]).unwrap();
        // 2^-l beats l^10 only from l = 15 on
        for rung in &diag.rungs[..3] {
            assert_eq!(rung.verdict, Verdict::DecreasingTail, "r = {}", rung.r);
        }
        let long: Vec<usize> = (1..=90).collect();
        let geo: Vec<f64> = long.iter().map(|&l| 0.5f64.powi(l as i32)).collect();
        let diag = decay_diagnostic(&long, &geo, &[1, 2, 4, 8, 10]).unwrap();
        assert!(diag.rungs.iter().all(|r| r.verdict == Verdict::DecreasingTail));

        let harmonic: Vec<f64> = ls.iter().map(|&l| 1.0 / l as f64).collect();
        let diag = decay_diagnostic(&ls, &harmonic, &[1, 2, 4]).unwrap();
        assert_eq!(diag.rungs[0].verdict, Verdict::Inconclusive);
        assert_eq!(diag.rungs[1].verdict, Verdict::Growing);
        assert_eq!(diag.rungs[2].verdict, Verdict::Growing);

        assert!(decay_diagnostic(&ls[..11], &harmonic[..11], &[1]).is_err());
    }

    #[test]
    fn target_names_round_trip() {
        for name in Target::NAMES {
            assert_eq!(Target::from_name(name).unwrap().name(), name);
        }
        assert!(Target::from_name("sin").is_err());
    }
}
