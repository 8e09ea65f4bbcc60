//! Whether derivatives of approximants of a function vanishing on `E` tend
//! to zero on `E`.

use serde::{Deserialize, Serialize};

use crate::approx::ApproxSeries;
use crate::error::{Error, Result};
use crate::geometry::SampleSet;
use crate::polyring::MultiPoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeterminingRow {
    pub alpha: Vec<u32>,
    /// `(l, ||D^alpha P_l||_E)`.
    pub norms: Vec<(usize, f64)>,
    pub tends_to_zero: bool,
}

/// For each `alpha`, the sequence `||D^alpha P_l||_E`. It tends to zero when
/// its last third is strictly decreasing and its final value is below
/// `1e-4` times its first; an identically zero sequence also counts.
pub fn determining_diagnostic<T: Scalar>(
    polys: &[(usize, MultiPoly<T>)],
    e: &SampleSet,
    alphas: &[Vec<u32>],
) -> Result<Vec<DeterminingRow>> {
    if polys.is_empty() {
        return Err(Error::invalid("empty polynomial sequence"));
    }
    alphas
        .iter()
        .map(|alpha| {
            let norms = polys
                .iter()
                .map(|(l, p)| {
                    let dp = p.differentiate(alpha)?;
                    let s = e.points().iter().map(|x| dp.eval_f64(x).as_f64().abs()).fold(0.0, f64::max);
                    Ok((*l, s))
                })
                .collect::<Result<Vec<_>>>()?;
            let v: Vec<f64> = norms.iter().map(|n| n.1).collect();
            let tends_to_zero = if v.iter().all(|&x| x == 0.0) {
                true
            } else {
                let tail = &v[v.len() - v.len().div_ceil(3)..];
                tail.windows(2).all(|w| w[1] < w[0]) && v[v.len() - 1] < 1e-4 * v[0]
            };
            Ok(DeterminingRow {
                alpha: alpha.clone(),
                norms,
                tends_to_zero,
            })
        })
        .collect()
}

/// [`determining_diagnostic`] on the metric projections of a series whose
/// target vanishes on the sample set.
pub fn determining_from_series<T: Scalar>(series: &ApproxSeries<T>, alphas: &[Vec<u32>]) -> Result<Vec<DeterminingRow>> {
    if series.sup.as_f64() > 1e-9 {
        return Err(Error::invalid(format!(
            "target does not vanish on the set (sup {:e})",
            series.sup.as_f64()
        )));
    }
    let polys: Vec<(usize, MultiPoly<T>)> = series
        .projections
        .iter()
        .map(|p| (p.l, p.normal_form.reassemble()))
        .collect();
    determining_diagnostic(&polys, &series.set, alphas)
}
