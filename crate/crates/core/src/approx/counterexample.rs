//! The family `P_n = y - sum_{k<=n} c_k x^{2k}` on the cube-root curve,
//! where `sum_k c_k x^{2k}` is the binomial series of `(1 - x^2)^{1/3}`.

use serde::{Deserialize, Serialize};

use super::special::{gauss_2f1, ln_gamma, GAMMA_NEG_THIRD};
use crate::error::{Error, Result};
use crate::geometry::SampleSet;
use crate::polyring::MultiPoly;

pub const MAX_ORDER: usize = 200;
/// Extra terms in the direct tail sum.
pub const DIRECT_TERMS: usize = 500;
/// Relative agreement demanded between the direct and closed-form tails.
pub const TAIL_AGREEMENT: f64 = 1e-9;

/// `c_0, ..., c_n` from `c_{k+1} = c_k (k - 1/3) / (k + 1)`.
pub fn series_coefficients(n: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n + 1);
    let mut ck = 1.0;
    for k in 0..=n {
        c.push(ck);
        ck *= (k as f64 - 1.0 / 3.0) / (k as f64 + 1.0);
    }
    c
}

/// `P_n(x, y)` in the variables `(x, y)`.
pub fn counterexample_poly(n: usize) -> Result<MultiPoly<f64>> {
    if n > MAX_ORDER {
        return Err(Error::invalid(format!("order {n} above {MAX_ORDER}")));
    }
    let terms = series_coefficients(n)
        .into_iter()
        .enumerate()
        .map(|(k, c)| (vec![2 * k as u32, 0], -c))
        .chain(std::iter::once((vec![0, 1], 1.0)));
    Ok(MultiPoly::from_terms(2, terms))
}

/// `sum_{k=n+1}^{n+DIRECT_TERMS} c_k x^{2k}`.
pub fn tail_direct(n: usize, x: f64) -> f64 {
    let x2 = x * x;
    let c = series_coefficients(n + 1)[n + 1];
    let mut term = c * x2.powi(n as i32 + 1);
    let mut sum = 0.0;
    for k in n + 1..n + 1 + DIRECT_TERMS {
        sum += term;
        term *= (k as f64 - 1.0 / 3.0) / (k as f64 + 1.0) * x2;
    }
    sum
}

/// The same tail as `x^{2n+2} Γ(n+2/3) F(1, n+2/3; n+2; x^2) / (Γ(-1/3) Γ(n+2))`.
pub fn tail_closed_form(n: usize, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::invalid(format!("|x| = {} must be below 1", x.abs())));
    }
    if n > MAX_ORDER {
        return Err(Error::invalid(format!("order {n} above {MAX_ORDER}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let ratio = (ln_gamma(nf + 2.0 / 3.0) - ln_gamma(nf + 2.0)).exp();
    let f = gauss_2f1(1.0, nf + 2.0 / 3.0, nf + 2.0, x * x)?;
    Ok((x * x).powi(n as i32 + 1) * ratio * f / GAMMA_NEG_THIRD)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CounterexampleNorm {
    pub n: usize,
    /// `||P_n||_E` from the closed form.
    pub value: f64,
    /// The same norm by direct summation.
    pub direct: f64,
    /// x-coordinate where the sup is attained.
    pub x: f64,
}

/// Membership slack for points of the cube-root curve.
const CURVE_TOL: f64 = 1e-10;

/// `||P_n||_E = sup_E |tail_n(x)|`, since `y = (1 - x^2)^{1/3}` on `E`.
pub fn counterexample_norm(n: usize, e: &SampleSet) -> Result<CounterexampleNorm> {
    if e.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: e.dim(),
        });
    }
    let mut best = CounterexampleNorm {
        n,
        value: 0.0,
        direct: 0.0,
        x: 0.0,
    };
    for p in e.points() {
        let (x, y) = (p[0], p[1]);
        if (y * y * y - (1.0 - x * x)).abs() > CURVE_TOL {
            return Err(Error::invalid(format!("point {p:?} is not on y^3 = 1 - x^2")));
        }
        let closed = tail_closed_form(n, x)?;
        let direct = tail_direct(n, x);
        if (closed - direct).abs() > TAIL_AGREEMENT * direct.abs() {
            return Err(Error::Consistency(format!(
                "tail at n = {n}, x = {x}: closed form {closed:e} vs direct {direct:e}"
            )));
        }
        if closed.abs() > best.value {
            best.value = closed.abs();
            best.direct = direct.abs();
            best.x = x;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    pub norm: f64,
    pub x: f64,
    /// `n^10 ||P_n||_E`.
    pub scaled: f64,
    /// `ln ||P_n||_E / n`.
    pub log_rate: f64,
    /// `||D_y P_n||_E / ||P_n||_E`.
    pub markov_ratio: f64,
}

/// One row per `n` in `1..=nmax`.
pub fn counterexample_decay(nmax: usize, e: &SampleSet) -> Result<Vec<DecayRow>> {
    (1..=nmax)
        .map(|n| {
            let norm = counterexample_norm(n, e)?;
            let dy = counterexample_poly(n)?.differentiate(&[0, 1])?;
            let dy_norm = e.points().iter().map(|p| dy.eval(p).abs()).fold(0.0, f64::max);
            let nf = n as f64;
            Ok(DecayRow {
                n,
                norm: norm.value,
                x: norm.x,
                scaled: nf.powi(10) * norm.value,
                log_rate: norm.value.ln() / nf,
                markov_ratio: dy_norm / norm.value,
            })
        })
        .collect()
}
