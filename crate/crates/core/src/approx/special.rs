//! Gamma, Pochhammer and Gauss hypergeometric functions in double precision.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Γ(-1/3)`, from a 40-digit evaluation.
pub const GAMMA_NEG_THIRD: f64 = -4.062_353_818_279_201_3;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, reflected below 1/2).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) Γ(1 - x) = π / sin(πx), positive for 0 < x < 1/2
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// `Γ(x)` for any real `x` that is not a pole; `NaN` at poles.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// Rising factorial `(q)_n`.
pub fn pochhammer(q: f64, n: usize) -> Result<f64> {
    if n > 500 {
        return Err(Error::invalid(format!("pochhammer order {n} above 500")));
    }
    let mut p = 1.0;
    for j in 0..n {
        p *= q + j as f64;
        if !p.is_finite() {
            return Err(Error::Overflow(format!("({q})_{n} overflows; use log_pochhammer")));
        }
    }
    Ok(p)
}

/// `ln |(q)_n|` and the sign of `(q)_n`; the sign is 0 when a factor vanishes.
pub fn log_pochhammer(q: f64, n: usize) -> (f64, f64) {
    let mut log = 0.0;
    let mut sign = 1.0;
    for j in 0..n {
        let f = q + j as f64;
        if f == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        if f < 0.0 {
            sign = -sign;
        }
        log += f.abs().ln();
    }
    (log, sign)
}

/// Partial sums stop once a term drops below this fraction of the sum.
const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 100_000;

/// `₂F₁(a, b; c; z)` for `|z| <= 1`; at `z = 1` through Gauss's closed form.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c == c.floor() {
        return Err(Error::invalid(format!("c = {c} is a nonpositive integer")));
    }
    if !(z.abs() <= 1.0) {
        return Err(Error::invalid(format!("|z| = {} outside the unit disc", z.abs())));
    }
    if z == 1.0 {
        let s = c - a - b;
        if s <= 0.0 {
            return Err(Error::invalid(format!("series diverges at z = 1 (c - a - b = {s})")));
        }
        return Ok(gamma_quotient(&[c, s], &[c - a, c - b]));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.abs() < SERIES_REL_TOL * sum.abs() || term == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// `prod Γ(num) / prod Γ(den)`, through logarithms where the arguments are
/// positive; the reciprocal of `Γ` at a pole is zero.
pub fn gamma_quotient(num: &[f64], den: &[f64]) -> f64 {
    let mut log = 0.0;
    let mut sign = 1.0;
    for (args, s) in [(num, 1.0), (den, -1.0)] {
        for &x in args {
            if x > 0.0 {
                log += s * ln_gamma(x);
            } else if x == x.floor() {
                if s < 0.0 {
                    return 0.0;
                }
                return f64::NAN;
            } else {
                let g = gamma(x);
                if g < 0.0 {
                    sign = -sign;
                }
                log += s * g.abs().ln();
            }
        }
    }
    sign * log.exp()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaRatioRow {
    pub n: u64,
    /// `Γ(n + α) / (Γ(n) n^α)`.
    pub ratio: f64,
    /// `2 |α| (|α| + 1) / n`, asserted for `n >= 50`.
    pub envelope: f64,
    pub within: bool,
}

/// `Γ(n + α) / (Γ(n) n^α)` for each `n`, with the coarse `O(1/n)` envelope.
pub fn gamma_ratio_limit_check(alpha: f64, ns: &[u64]) -> Result<Vec<GammaRatioRow>> {
    if !(alpha > -1.0 && alpha < 5.0) {
        return Err(Error::invalid(format!("alpha = {alpha} outside (-1, 5)")));
    }
    ns.iter()
        .map(|&n| {
            if n == 0 || n > 10_000 {
                return Err(Error::invalid(format!("n = {n} outside 1..=10000")));
            }
            let nf = n as f64;
            let ratio = if alpha == alpha.floor() {
                // exact product (n)(n+1)...(n+α-1) / n^α
                (0..alpha as u64).map(|j| (nf + j as f64) / nf).product()
            } else {
                (ln_gamma(nf + alpha) - ln_gamma(nf) - alpha * nf.ln()).exp()
            };
            let envelope = 2.0 * alpha.abs() * (alpha.abs() + 1.0) / nf;
            let within = n < 50 || (ratio - 1.0).abs() <= envelope;
            Ok(GammaRatioRow {
                n,
                ratio,
                envelope,
                within,
            })
        })
        .collect()
}
