//! Smooth extension of a function on `E` by gluing its metric projections
//! with bump functions:
//!
//! `f~ = sum_i G_{0,i}(y) x_k^i + sum_{l>=1} h_l(y) sum_i (G_{l,i} - G_{l-1,i})(y) x_k^i`,
//!
//! where `h_l` equals one near `pi(E)` and vanishes outside its
//! `1/l^r`-neighbourhood.

mod determining;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use determining::{determining_diagnostic, determining_from_series, DeterminingRow};

use crate::approx::ApproxSeries;
use crate::error::{Error, Result};
use crate::geometry::{lobatto_nodes, project_pi, BoxDomain, BumpFunction, SampleSet};
use crate::polyring::{MultiPoly, VarietyRelation};
use crate::scalar::Scalar;

/// Finite-difference step for derivative seminorms.
pub const FD_STEP: f64 = 1e-5;

/// Partial sum of the extension series through degree `L`.
#[derive(Clone, Debug)]
pub struct ExtensionModel<T> {
    relation: VarietyRelation<f64>,
    r: u32,
    /// `G_{0,i}`.
    base: Vec<MultiPoly<T>>,
    /// `G_{l,i} - G_{l-1,i}` for `l = 1..=L`.
    steps: Vec<Vec<MultiPoly<T>>>,
    bumps: Vec<BumpFunction>,
    /// `G_{L,i}` as computed by the projection.
    last: Vec<MultiPoly<T>>,
}

/// `r = ceil(m) + 1` for a fitted Markov exponent `m`.
pub fn default_exponent(m_hat: f64) -> u32 {
    m_hat.max(0.0).ceil() as u32 + 1
}

pub fn build_extension<T: Scalar>(series: &ApproxSeries<T>, r: u32, level: usize) -> Result<ExtensionModel<T>> {
    if r < 1 {
        return Err(Error::invalid("bump exponent r must be at least 1"));
    }
    if level > series.lmax() {
        return Err(Error::invalid(format!(
            "extension degree {level} beyond the series window 0..={}",
            series.lmax()
        )));
    }
    let rel = &series.relation;
    let pi_e = project_pi(&series.set, rel.k())?;
    let g = |l: usize| series.projections[l].normal_form.coefficients().to_vec();
    let mut steps = Vec::with_capacity(level);
    let mut bumps = Vec::with_capacity(level);
    for l in 1..=level {
        let (cur, prev) = (g(l), g(l - 1));
        steps.push(cur.iter().zip(&prev).map(|(a, b)| a - b).collect());
        bumps.push(BumpFunction::new(pi_e.clone(), (l as f64).powi(-(r as i32)))?);
    }
    Ok(ExtensionModel {
        relation: rel.clone(),
        r,
        base: g(0),
        steps,
        bumps,
        last: g(level),
    })
}

impl<T: Scalar> ExtensionModel<T> {
    pub fn level(&self) -> usize {
        self.steps.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn relation(&self) -> &VarietyRelation<f64> {
        &self.relation
    }

    pub fn bumps(&self) -> &[BumpFunction] {
        &self.bumps
    }

    pub fn base(&self) -> &[MultiPoly<T>] {
        &self.base
    }

    pub fn steps(&self) -> &[Vec<MultiPoly<T>>] {
        &self.steps
    }

    fn y_of(&self, point: &[f64]) -> Vec<f64> {
        let k = self.relation.var();
        point.iter().enumerate().filter(|(v, _)| *v != k).map(|(_, c)| *c).collect()
    }

    fn fiber_sum(&self, g: &[MultiPoly<T>], point: &[f64]) -> T {
        let xk = T::of(point[self.relation.var()]);
        g.iter().rev().fold(T::zero(), |acc, gi| acc * xk + gi.eval_f64(point))
    }

    /// `f~(point)` at the working precision.
    pub fn eval_exact(&self, point: &[f64]) -> T {
        let y = self.y_of(point);
        let mut v = self.fiber_sum(&self.base, point);
        for (step, h) in self.steps.iter().zip(&self.bumps) {
            let w = h.eval(&y);
            if w != 0.0 {
                v += T::of(w) * self.fiber_sum(step, point);
            }
        }
        v
    }

    /// `sum_{l=1}^{level} h_l (G_l - G_{l-1})` at one level only.
    pub fn increment(&self, l: usize, point: &[f64]) -> T {
        let w = self.bumps[l - 1].eval(&self.y_of(point));
        if w == 0.0 {
            return T::zero();
        }
        T::of(w) * self.fiber_sum(&self.steps[l - 1], point)
    }

    /// `P_0` reassembled, the value wherever every bump vanishes.
    pub fn base_value(&self, point: &[f64]) -> T {
        self.fiber_sum(&self.base, point)
    }

    /// `P_L` as computed by the projection.
    pub fn projection_value(&self, point: &[f64]) -> T {
        self.fiber_sum(&self.last, point)
    }

    /// `G_0 + sum_l (G_l - G_{l-1})`, i.e. the series with every bump set to 1.
    pub fn telescoped(&self) -> Vec<MultiPoly<T>> {
        self.steps
            .iter()
            .fold(self.base.clone(), |acc, step| acc.iter().zip(step).map(|(a, b)| a + b).collect())
    }

    /// Largest coefficient gap between the telescoped sum and `G_{L,i}`,
    /// after rounding both to `f64`.
    pub fn telescoping_defect(&self) -> f64 {
        let tele = self.telescoped();
        let mut worst = 0.0f64;
        for (a, b) in tele.iter().zip(&self.last) {
            let diff = &a.cast::<f64>() - &b.cast::<f64>();
            worst = worst.max(diff.max_abs_coefficient());
        }
        worst
    }
}

/// `f~` at a point, rounded to `f64`.
pub fn evaluate_extension<T: Scalar>(model: &ExtensionModel<T>, point: &[f64]) -> f64 {
    model.eval_exact(point).as_f64()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivativeSeminorm {
    /// `max_{|alpha| <= nu} sup_K |D^alpha f~|`.
    pub value: f64,
    pub alpha: Vec<u32>,
    pub point: usize,
    /// Points where a step could not be taken.
    pub skipped: Vec<usize>,
}

/// Multi-indices of order `1..=nu` in `n` variables.
fn orders(n: usize, nu: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut a = vec![0; n];
        a[i] = 1;
        out.push(a);
    }
    if nu >= 2 {
        for i in 0..n {
            for j in i..n {
                let mut a = vec![0; n];
                a[i] += 1;
                a[j] += 1;
                out.push(a);
            }
        }
    }
    out
}

/// Central differences with the realized steps `x + h - x` and `x - (x - h)`.
fn finite_difference<T: Scalar>(model: &ExtensionModel<T>, x: &[f64], alpha: &[u32]) -> Option<f64> {
    let f = |p: &[f64]| model.eval_exact(p);
    let steps = |i: usize| -> Option<(f64, f64)> {
        let hp = (x[i] + FD_STEP) - x[i];
        let hm = x[i] - (x[i] - FD_STEP);
        (hp > 0.0 && hm > 0.0).then_some((hp, hm))
    };
    let shifted = |moves: &[(usize, f64)]| {
        let mut p = x.to_vec();
        for &(i, s) in moves {
            p[i] += s;
        }
        p
    };
    let idx: Vec<usize> = alpha.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat(i).take(a as usize)).collect();
    let v = match idx.as_slice() {
        [i] => {
            let (hp, hm) = steps(*i)?;
            (f(&shifted(&[(*i, FD_STEP)])) - f(&shifted(&[(*i, -FD_STEP)]))) / T::of(hp + hm)
        }
        [i, j] if i == j => {
            let (hp, hm) = steps(*i)?;
            let f0 = f(x);
            let up = (f(&shifted(&[(*i, FD_STEP)])) - f0) / T::of(hp);
            let down = (f0 - f(&shifted(&[(*i, -FD_STEP)]))) / T::of(hm);
            T::of(2.0) * (up - down) / T::of(hp + hm)
        }
        [i, j] => {
            let (ip, im) = steps(*i)?;
            let (jp, jm) = steps(*j)?;
            let h = FD_STEP;
            let num = f(&shifted(&[(*i, h), (*j, h)])) - f(&shifted(&[(*i, h), (*j, -h)]))
                - f(&shifted(&[(*i, -h), (*j, h)]))
                + f(&shifted(&[(*i, -h), (*j, -h)]));
            num / T::of((ip + im) * (jp + jm))
        }
        _ => return None,
    };
    let v = v.as_f64();
    v.is_finite().then_some(v)
}

/// `|f~|^nu_K` by finite differences, `nu <= 2`.
pub fn derivative_seminorm<T: Scalar>(model: &ExtensionModel<T>, k: &SampleSet, nu: u32) -> Result<DerivativeSeminorm> {
    if nu > 2 {
        return Err(Error::invalid(format!("seminorm order {nu} above 2")));
    }
    let n = model.relation.nvars();
    if k.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: k.dim(),
        });
    }
    let alphas = if nu == 0 { Vec::new() } else { orders(n, nu) };
    let mut best = DerivativeSeminorm {
        value: 0.0,
        alpha: vec![0; n],
        point: 0,
        skipped: Vec::new(),
    };
    for (j, x) in k.points().iter().enumerate() {
        let v0 = evaluate_extension(model, x).abs();
        if v0 > best.value {
            best.value = v0;
            best.alpha = vec![0; n];
            best.point = j;
        }
        let mut skipped = false;
        for a in &alphas {
            match finite_difference(model, x, a) {
                Some(v) if v.abs() > best.value => {
                    best.value = v.abs();
                    best.alpha = a.clone();
                    best.point = j;
                }
                Some(_) => {}
                None => skipped = true,
            }
        }
        if skipped {
            best.skipped.push(j);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IncrementCheck {
    pub l: usize,
    /// `sup_K |f~_l - f~_{l-1}|`.
    pub measured: f64,
    /// `d * max_i sup_K |x_k|^i * max_i sup_{pi(E)} |G_{l,i} - G_{l-1,i}|`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares the size of the `l`-th term on `K` with the bound driven by the
/// coefficient differences on the projected sample set.
pub fn increment_check<T: Scalar>(model: &ExtensionModel<T>, series_set: &SampleSet, k: &SampleSet, l: usize) -> Result<IncrementCheck> {
    if l == 0 || l > model.level() {
        return Err(Error::invalid(format!("level {l} outside 1..={}", model.level())));
    }
    let rel = &model.relation;
    let var = rel.var();
    let pi_e = project_pi(series_set, rel.k())?;
    let measured = k.points().iter().map(|p| model.increment(l, p).as_f64().abs()).fold(0.0, f64::max);
    let d = rel.d();
    let xk_pow = k
        .points()
        .iter()
        .map(|p| (0..d).map(|i| p[var].abs().powi(i as i32)).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let g_sup = model.steps[l - 1]
        .iter()
        .map(|g| {
            let g = g.remove_var(var).map(|p| p.cast::<f64>());
            g.map(|g| pi_e.points().iter().map(|y| g.eval(y).abs()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let bound = d as f64 * xk_pow * g_sup;
    Ok(IncrementCheck {
        l,
        measured,
        bound,
        holds: measured <= bound * (1.0 + 1e-12) + 1e-300,
    })
}

/// Values of `f~` on a tensor grid with `count` Chebyshev–Lobatto nodes
/// per axis of the box, as CSV `x1,...,xN,value`.
pub fn write_grid_csv<T: Scalar, W: Write>(model: &ExtensionModel<T>, grid: &BoxDomain, count: usize, mut out: W) -> Result<()> {
    let n = model.relation.nvars();
    if grid.0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: grid.0.len(),
        });
    }
    if count < 2 {
        return Err(Error::invalid("grid needs at least 2 nodes per axis"));
    }
    let axes: Vec<Vec<f64>> = grid.0.iter().map(|&[a, b]| lobatto_nodes(a, b, count)).collect();
    let header: Vec<String> = (1..=n).map(|v| format!("x{v}")).collect();
    writeln!(out, "{},value", header.join(","))?;
    let mut idx = vec![0usize; n];
    loop {
        let p: Vec<f64> = idx.iter().zip(&axes).map(|(&i, ax)| ax[i]).collect();
        for c in &p {
            write!(out, "{c:.16e},")?;
        }
        writeln!(out, "{:.16e}", evaluate_extension(model, &p))?;
        let mut a = 0;
        loop {
            if a == n {
                return Ok(());
            }
            idx[a] += 1;
            if idx[a] < count {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}
