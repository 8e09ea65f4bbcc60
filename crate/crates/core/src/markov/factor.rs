//! Exact discrete Markov factors `sup ||D^a P||_E / ||P||_E` over a
//! polynomial space.

use serde::{Deserialize, Serialize};

use crate::chebysolve::{functional_max, Basis, SupportBound};
use crate::error::{Error, Result};
use crate::geometry::SampleSet;
use crate::polyring::MultiPoly;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovFactor {
    pub value: f64,
    /// Sample point where the derivative of the extremal polynomial peaks.
    pub point: usize,
    /// Coefficients of an extremal polynomial in the basis.
    pub witness: Vec<f64>,
    /// Number of linear programs solved.
    pub solves: usize,
}

impl MarkovFactor {
    pub fn witness_poly(&self, basis: &Basis<f64>) -> Result<MultiPoly<f64>> {
        basis.combine(&self.witness)
    }
}

/// Values of `D^alpha B_b` at every point, one row per point.
pub fn derivative_rows(basis: &Basis<f64>, e: &SampleSet, alpha: &[u32]) -> Result<Vec<Vec<f64>>> {
    if alpha.len() != basis.space().nvars() {
        return Err(Error::DimensionMismatch {
            expected: basis.space().nvars(),
            found: alpha.len(),
        });
    }
    let derivs = basis.derivatives(alpha)?;
    Ok(e.points()
        .iter()
        .map(|p| derivs.iter().map(|d| d.eval(p)).collect())
        .collect())
}

fn check_alpha(alpha: &[u32]) -> Result<()> {
    if alpha.iter().sum::<u32>() == 0 {
        return Err(Error::invalid("derivative order |alpha| must be at least 1"));
    }
    Ok(())
}

/// Max over the sample points `x*` of the LP value
/// `sup { |D^alpha P(x*)| : ||P||_E <= 1 }`.
///
/// Points are visited best-first by an upper bound obtained from the active
/// sets of earlier solves and skipped once the bound cannot beat the
/// current maximum, so the result equals the exhaustive maximum.
pub fn markov_factor(basis: &Basis<f64>, e: &SampleSet, alpha: &[u32]) -> Result<MarkovFactor> {
    check_alpha(alpha)?;
    let rows = basis.matrix(e.points());
    let g = derivative_rows(basis, e, alpha)?;
    let p = g.len();

    let mut upper = vec![f64::INFINITY; p];
    let mut solved = vec![false; p];
    let mut best = MarkovFactor {
        value: 0.0,
        point: 0,
        witness: vec![0.0; basis.len()],
        solves: 0,
    };
    let mut have_best = false;
    // start at the largest derivative row
    let mut next = (0..p)
        .max_by(|&a, &b| norm1(&g[a]).total_cmp(&norm1(&g[b])).then(b.cmp(&a)))
        .expect("non-empty set");
    loop {
        let fm = functional_max(&g[next], &rows)?;
        solved[next] = true;
        best.solves += 1;
        if !have_best || fm.value > best.value {
            best.value = fm.value;
            best.point = next;
            best.witness = fm.witness.clone();
            have_best = true;
        }
        if let Some(bound) = SupportBound::new(&rows, &fm.support) {
            for (j, gj) in g.iter().enumerate() {
                if !solved[j] {
                    upper[j] = upper[j].min(bound.upper_bound(gj));
                }
            }
        }
        let margin = 1e-9 * best.value.max(1.0);
        let candidate = (0..p)
            .filter(|&j| !solved[j] && upper[j] > best.value + margin)
            .max_by(|&a, &b| upper[a].total_cmp(&upper[b]).then(b.cmp(&a)));
        match candidate {
            Some(j) => next = j,
            None => break,
        }
    }
    // report the point where the witness's derivative is largest
    let peak = g
        .iter()
        .enumerate()
        .map(|(j, gj)| (j, dot(gj, &best.witness).abs()))
        .fold((best.point, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    best.point = peak.0;
    Ok(best)
}

/// The same maximum by solving the LP at every point.
pub fn markov_factor_exhaustive(basis: &Basis<f64>, e: &SampleSet, alpha: &[u32]) -> Result<MarkovFactor> {
    check_alpha(alpha)?;
    let rows = basis.matrix(e.points());
    let g = derivative_rows(basis, e, alpha)?;
    let mut best: Option<MarkovFactor> = None;
    for (j, gj) in g.iter().enumerate() {
        let fm = functional_max(gj, &rows)?;
        if best.as_ref().map_or(true, |b| fm.value > b.value) {
            best = Some(MarkovFactor {
                value: fm.value,
                point: j,
                witness: fm.witness,
                solves: 0,
            });
        }
    }
    let mut best = best.expect("non-empty set");
    best.solves = g.len();
    Ok(best)
}

fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
