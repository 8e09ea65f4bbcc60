//! Factor tables over a degree ladder, exponent fits and bound checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebysolve::{Basis, Grading, PolySpace};
use crate::error::{Error, Result};
use crate::geometry::{inflate_set, project_pi, refine_check, sup_norm, SampleSet};
use crate::markov::factor::{markov_factor, MarkovFactor};
use crate::polyring::{MultiPoly, VarietyRelation};

/// Seed for every randomized check unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// How a degree bound selects the polynomial space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradingKind {
    /// `y-degree <= l` with every x_k power; reported degree `l + d - 1`.
    YDegree,
    /// Total degree of the representative `<= n`.
    TotalDegree,
}

/// Where the factors are computed.
#[derive(Clone, Debug)]
pub enum Ambient<'a> {
    /// The family `P(y) ⊗ P_{d-1}(x_k)` on a hypersurface.
    Variety(&'a VarietyRelation<f64>),
    /// All polynomials, no relation.
    Full,
}

impl Ambient<'_> {
    pub fn space(&self, e: &SampleSet) -> Result<PolySpace> {
        match self {
            Ambient::Variety(rel) => PolySpace::on_variety(rel.nvars(), rel.var(), rel.d(), e.points()),
            Ambient::Full => PolySpace::full(e.dim(), e.points()),
        }
    }

    fn fiber_degree(&self) -> usize {
        match self {
            Ambient::Variety(rel) => rel.d(),
            Ambient::Full => 1,
        }
    }

    /// The basis for a ladder entry, and the degree reported for it.
    pub fn basis(&self, e: &SampleSet, kind: GradingKind, level: usize) -> Result<(Basis<f64>, usize)> {
        let space = self.space(e)?;
        Ok(match kind {
            GradingKind::YDegree => (
                Basis::new(space, Grading::YDegree(level)),
                level + self.fiber_degree() - 1,
            ),
            GradingKind::TotalDegree => (Basis::new(space, Grading::TotalDegree(level)), level),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovRow {
    /// Ladder entry (`l` or `n` depending on the grading).
    pub level: usize,
    /// Degree used in bounds.
    pub n: usize,
    pub alpha: Vec<u32>,
    pub factor: f64,
    pub point: Vec<f64>,
    pub witness: Vec<f64>,
    pub witness_poly: String,
    pub refine_change: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovReport {
    pub grading: GradingKind,
    pub rows: Vec<MarkovRow>,
    pub fits: Vec<(Vec<u32>, ExponentFit)>,
}

impl MarkovReport {
    /// Computes every `(level, alpha)` factor. Fails if a factor drops as
    /// the level grows, since the spaces are nested.
    pub fn build(
        ambient: &Ambient<'_>,
        e: &SampleSet,
        grading: GradingKind,
        levels: &[usize],
        alphas: &[Vec<u32>],
    ) -> Result<MarkovReport> {
        let jobs: Vec<(usize, &Vec<u32>)> = levels
            .iter()
            .flat_map(|&l| alphas.iter().map(move |a| (l, a)))
            .collect();
        let rows: Vec<MarkovRow> = jobs
            .par_iter()
            .map(|&(level, alpha)| {
                let (basis, n) = ambient.basis(e, grading, level)?;
                let f: MarkovFactor = markov_factor(&basis, e, alpha)?;
                let poly = f.witness_poly(&basis)?;
                let refine = match e.refined() {
                    Ok(_) => Some(refine_check(&poly, e)?),
                    Err(_) => None,
                };
                Ok(MarkovRow {
                    level,
                    n,
                    alpha: alpha.clone(),
                    factor: f.value,
                    point: e.points()[f.point].clone(),
                    witness: f.witness.clone(),
                    witness_poly: poly.to_string(),
                    refine_change: refine.as_ref().map_or(f64::NAN, |r| r.relative_change),
                    certified: refine.map_or(false, |r| r.certified),
                })
            })
            .collect::<Result<_>>()?;

        for alpha in alphas {
            let mut series: Vec<&MarkovRow> = rows.iter().filter(|r| &r.alpha == alpha).collect();
            series.sort_by_key(|r| r.level);
            for w in series.windows(2) {
                if w[1].factor < w[0].factor - 1e-9 * w[0].factor.max(1.0) {
                    return Err(Error::Consistency(format!(
                        "factor for alpha {alpha:?} fell from {} at level {} to {} at level {}",
                        w[0].factor, w[0].level, w[1].factor, w[1].level
                    )));
                }
            }
        }
        let fits = alphas
            .iter()
            .filter_map(|alpha| {
                let pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| &r.alpha == alpha && r.n >= 1 && r.factor > 0.0)
                    .map(|r| (r.n as f64, r.factor))
                    .collect();
                let order = alpha.iter().sum::<u32>();
                fit_exponent(&pts, order).ok().map(|f| (alpha.clone(), f))
            })
            .collect();
        Ok(MarkovReport { grading, rows, fits })
    }

    pub fn series(&self, alpha: &[u32]) -> Vec<&MarkovRow> {
        let mut s: Vec<&MarkovRow> = self.rows.iter().filter(|r| r.alpha == alpha).collect();
        s.sort_by_key(|r| r.level);
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    /// Fitted exponent `m`.
    pub m: f64,
    /// Fitted constant `M`.
    pub big_m: f64,
    /// Largest absolute deviation of `log M(n)` from the fitted line.
    pub residual: f64,
}

/// Least-squares fit of `log M(n) = log M + m |alpha| log n`.
pub fn fit_exponent(points: &[(f64, f64)], order: u32) -> Result<ExponentFit> {
    if points.len() < 4 {
        return Err(Error::invalid(format!("need at least 4 degrees, got {}", points.len())));
    }
    if order == 0 {
        return Err(Error::invalid("derivative order must be positive"));
    }
    if points.iter().any(|&(n, v)| !(n > 0.0) || !(v > 0.0)) {
        return Err(Error::invalid("degrees and factors must be positive"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys)?;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        m: slope / order as f64,
        big_m: intercept.exp(),
        residual,
    })
}

/// Slope and intercept of the least-squares line.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("degrees must not all coincide"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Which constant form the bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundForm {
    /// `M^{|alpha|} n^{m |alpha|}`.
    PerOrder,
    /// `M n^{m |alpha|}`.
    Single,
}

impl BoundForm {
    pub fn bound(self, big_m: f64, m: f64, order: u32, n: usize) -> f64 {
        let k = order as f64;
        let c = match self {
            BoundForm::PerOrder => big_m.powf(k),
            BoundForm::Single => big_m,
        };
        c * (n as f64).powf(m * k)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundCheck {
    pub holds: bool,
    /// Largest `factor / bound`.
    pub worst_ratio: f64,
    pub worst: Option<MarkovRow>,
}

/// Checks `factor <= bound(n)` for every row of `alpha` with `n >= 1`.
pub fn check_fmarkov_bound(report: &MarkovReport, alpha: &[u32], big_m: f64, m: f64, form: BoundForm) -> Result<BoundCheck> {
    if !(big_m > 0.0) || !(m > 0.0) {
        return Err(Error::invalid("M and m must be positive"));
    }
    let order = alpha.iter().sum::<u32>();
    let mut worst_ratio = 0.0;
    let mut worst = None;
    for row in report.series(alpha) {
        if row.n == 0 {
            // only constants: the derivative vanishes
            continue;
        }
        let ratio = row.factor / form.bound(big_m, m, order, row.n);
        if worst.is_none() || ratio > worst_ratio {
            worst_ratio = ratio;
            worst = Some(row.clone());
        }
    }
    Ok(BoundCheck {
        holds: worst_ratio <= 1.0,
        worst_ratio,
        worst,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub holds: bool,
    /// Largest `|P| / ||P||_E` found on the inflated set.
    pub worst_value: f64,
    pub worst_point: Vec<f64>,
    pub radius: f64,
    pub polynomials: usize,
}

/// Random coefficient vectors in `[-1, 1]`, deterministic in `seed`.
pub fn random_coefficients(count: usize, len: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect()
}

/// Samples `E_n` with radius `n^{-r}` and checks `|P| <= M ||P||_E` on it
/// for the given polynomials plus `random` random members of the basis.
#[allow(clippy::too_many_arguments)]
pub fn growth_property_check(
    basis: &Basis<f64>,
    e: &SampleSet,
    n: usize,
    r: f64,
    big_m: f64,
    extremal: &[MultiPoly<f64>],
    random: usize,
    seed: u64,
) -> Result<GrowthCheck> {
    if !(r > 0.0) || !(big_m > 0.0) {
        return Err(Error::invalid("r and M must be positive"));
    }
    let radius = (n.max(1) as f64).powf(-r);
    let en = inflate_set(e, radius, 4, seed)?;
    let mut polys: Vec<MultiPoly<f64>> = extremal.to_vec();
    for c in random_coefficients(random, basis.len(), seed ^ 0x9e37) {
        polys.push(basis.combine(&c)?);
    }
    let mut worst_value = 0.0;
    let mut worst_point = Vec::new();
    for p in &polys {
        let norm = sup_norm(p, e).value;
        if norm == 0.0 {
            continue;
        }
        let s = sup_norm(p, &en);
        let v = s.value / norm;
        if v > worst_value {
            worst_value = v;
            worst_point = s.point;
        }
    }
    Ok(GrowthCheck {
        holds: worst_value <= big_m,
        worst_value,
        worst_point,
        radius,
        polynomials: polys.len(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientBoundRow {
    pub i: usize,
    pub n: usize,
    /// Max over the polynomials of `||G_i||_{pi(E)} i! / (n^{m(d-1)} ||P||_E)`.
    pub ratio: f64,
}

/// For each degree `n` and polynomial list, the largest normalized size of
/// every coefficient `G_i` on the projected set. Zero polynomials are skipped.
pub fn lemma_coeff_bound_check(
    rel: &VarietyRelation<f64>,
    e: &SampleSet,
    by_degree: &[(usize, Vec<MultiPoly<f64>>)],
    m: f64,
) -> Result<Vec<CoefficientBoundRow>> {
    let d = rel.d();
    let pi = project_pi(e, rel.k())?;
    let mut table = Vec::new();
    for (n, polys) in by_degree {
        let scale = (*n.max(&1) as f64).powf(m * (d - 1) as f64);
        let mut best = vec![0.0f64; d];
        for p in polys {
            let norm = sup_norm(p, e).value;
            if p.is_zero() || norm == 0.0 {
                continue;
            }
            let nf = rel.extract_coefficients(p)?;
            for (i, gi) in nf.coefficients().iter().enumerate() {
                let g = gi.remove_var(rel.var())?;
                let size = sup_norm(&g, &pi).value;
                let ratio = size * factorial(i) / (scale * norm);
                best[i] = best[i].max(ratio);
            }
        }
        for (i, ratio) in best.into_iter().enumerate() {
            table.push(CoefficientBoundRow { i, n: *n, ratio });
        }
    }
    Ok(table)
}

fn factorial(i: usize) -> f64 {
    (1..=i).map(|k| k as f64).product()
}

/// Slope of `log value` against `log n`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    least_squares(&xs, &ys).map(|(s, _)| s)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpotCheck {
    pub polynomials: usize,
    /// Largest `||D^alpha P||_E / ||P||_E` over the random polynomials.
    pub worst_ratio: f64,
    pub factor: f64,
    /// `worst_ratio <= factor + 1e-7`.
    pub holds: bool,
}

/// Random members of `basis` never beat the LP factor.
pub fn random_spot_check(
    basis: &Basis<f64>,
    e: &SampleSet,
    alpha: &[u32],
    factor: f64,
    count: usize,
    seed: u64,
) -> Result<SpotCheck> {
    let derivs = basis.derivatives(alpha)?;
    let rows = basis.matrix(e.points());
    let drows: Vec<Vec<f64>> = e
        .points()
        .iter()
        .map(|x| derivs.iter().map(|q| q.eval(x)).collect())
        .collect();
    let dot = |row: &[f64], c: &[f64]| row.iter().zip(c).map(|(a, b)| a * b).sum::<f64>().abs();
    let worst_ratio = random_coefficients(count, basis.len(), seed)
        .par_iter()
        .map(|c| {
            let den = rows.iter().map(|r| dot(r, c)).fold(0.0, f64::max);
            let num = drows.iter().map(|r| dot(r, c)).fold(0.0, f64::max);
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        })
        .reduce(|| 0.0, f64::max);
    Ok(SpotCheck {
        polynomials: count,
        worst_ratio,
        factor,
        holds: worst_ratio <= factor + 1e-7,
    })
}
