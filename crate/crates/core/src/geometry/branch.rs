//! Fibers of the hypersurface over boxes in y-space.

use nalgebra::{Complex, DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{MultiPoly, VarietyRelation};

/// One entry of the branch catalogue. Polynomials are in the ambient
/// variables and must not involve the distinguished one.
#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    /// `x_k = 0`.
    Zero,
    /// `x_k = sign * sqrt(q(y))`, `sign = ±1`.
    Sqrt { radicand: MultiPoly<f64>, sign: f64 },
    /// `x_k = cbrt(q(y))`.
    CubeRoot { radicand: MultiPoly<f64> },
    /// Every real root of the fiber polynomial, found numerically.
    Numeric,
}

impl Branch {
    pub fn tag(&self) -> &'static str {
        match self {
            Branch::Zero => "zero",
            Branch::Sqrt { sign, .. } if *sign < 0.0 => "neg-sqrt",
            Branch::Sqrt { .. } => "sqrt",
            Branch::CubeRoot { .. } => "cbrt",
            Branch::Numeric => "numeric",
        }
    }
}

/// An axis-aligned box in y-space, one `[lo, hi]` per y-variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain(pub Vec<[f64; 2]>);

#[derive(Clone, Debug, PartialEq)]
pub struct BranchSpec {
    pub branches: Vec<Branch>,
    pub boxes: Vec<BoxDomain>,
}

/// Radicands within this of zero count as zero.
const RADICAND_SLACK: f64 = 1e-12;

impl BranchSpec {
    pub fn new(branches: Vec<Branch>, boxes: Vec<BoxDomain>) -> Self {
        BranchSpec { branches, boxes }
    }

    /// x_k values of `branch` above the ambient point `y_point` (whose
    /// x_k coordinate is ignored).
    pub(crate) fn fiber_values(
        &self,
        branch: usize,
        rel: &VarietyRelation<f64>,
        y_point: &[f64],
    ) -> std::result::Result<Vec<f64>, String> {
        match &self.branches[branch] {
            Branch::Zero => Ok(vec![0.0]),
            Branch::Sqrt { radicand, sign } => {
                let q = radicand.eval(y_point);
                if q < -RADICAND_SLACK {
                    return Err(format!("negative radicand {q:e}"));
                }
                Ok(vec![sign * q.max(0.0).sqrt()])
            }
            Branch::CubeRoot { radicand } => Ok(vec![radicand.eval(y_point).cbrt()]),
            Branch::Numeric => {
                let q: Vec<f64> = rel.q().iter().map(|qi| qi.eval(y_point)).collect();
                Ok(real_roots(&q))
            }
        }
    }
}

/// Real roots of the monic polynomial `x^d - sum_i c_i x^i`, where `c` is
/// given lowest power first, from companion-matrix eigenvalues polished by
/// Newton's method.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let d = c.len();
    if d == 0 {
        return Vec::new();
    }
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for (i, &ci) in c.iter().enumerate() {
        comp[(i, d - 1)] = ci;
    }
    let poly = |x: f64| {
        let mut v = 1.0;
        let mut dv = 0.0;
        for i in (0..d).rev() {
            dv = dv * x + v;
            v = v * x - c[i];
        }
        (v, dv)
    };
    let scale = 1.0 + c.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut roots: Vec<f64> = Vec::new();
    let eigenvalues = match Schur::try_new(comp, 1e-15, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => durand_kerner(c),
    };
    for z in eigenvalues {
        if z.im.abs() > 1e-6 * scale {
            continue;
        }
        let mut x = z.re;
        let mut r = poly(x).0.abs();
        for _ in 0..8 {
            let (v, dv) = poly(x);
            if dv == 0.0 {
                break;
            }
            let next = x - v / dv;
            let rn = poly(next).0.abs();
            if rn < r {
                x = next;
                r = rn;
            } else {
                break;
            }
        }
        roots.push(x);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * scale);
    roots
}

/// Simultaneous root iteration, used when the QR iteration on the
/// companion matrix does not converge (e.g. a nilpotent companion).
fn durand_kerner(c: &[f64]) -> Vec<Complex<f64>> {
    let d = c.len();
    let eval = |z: Complex<f64>| {
        let mut v = Complex::new(1.0, 0.0);
        for i in (0..d).rev() {
            v = v * z - c[i];
        }
        v
    };
    let radius = 1.0 + c.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..d).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..500 {
        for i in 0..d {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() > 0.0 {
                let step = eval(z[i]) / denom;
                z[i] -= step;
            }
        }
    }
    z
}

/// Chebyshev–Lobatto nodes on `[a, b]`, endpoints included; computed in
/// the symmetric sine form so mirrored nodes are exact negatives.
pub fn lobatto_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let m = (n - 1) as f64;
    (0..n)
        .map(|j| {
            if j == 0 {
                a
            } else if j == n - 1 {
                b
            } else {
                let t = (std::f64::consts::PI * (2.0 * j as f64 - m) / (2.0 * m)).sin();
                mid + half * t
            }
        })
        .collect()
}

/// Tensor grid of Lobatto nodes over a box.
pub(crate) fn box_grid(domain: &BoxDomain, n: usize) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = domain.0.iter().map(|&[a, b]| lobatto_nodes(a, b, n)).collect();
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

pub(crate) fn validate_boxes(boxes: &[BoxDomain], dim: usize) -> Result<()> {
    if boxes.is_empty() {
        return Err(Error::EmptySet("parameter domain has no boxes".into()));
    }
    for (i, b) in boxes.iter().enumerate() {
        if b.0.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.0.len(),
            });
        }
        if b.0.iter().any(|&[lo, hi]| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::EmptySet(format!("box {i} is empty or unbounded")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lobatto_endpoints_and_symmetry() {
        let x = lobatto_nodes(-1.0, 1.0, 9);
        assert_eq!(x[0], -1.0);
        assert_eq!(x[8], 1.0);
        assert_eq!(x[4], 0.0);
        for j in 0..9 {
            assert_eq!(x[j], -x[8 - j]);
            let expect = -(std::f64::consts::PI * j as f64 / 8.0).cos();
            assert!((x[j] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn companion_roots() {
        // x^3 = 4x: roots -2, 0, 2
        let r = real_roots(&[0.0, 4.0, 0.0]);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        // x^2 = -1: none
        assert!(real_roots(&[-1.0, 0.0]).is_empty());
        // triple root at zero collapses to one
        let t = real_roots(&[0.0, 0.0, 0.0]);
        assert_eq!(t.len(), 1);
        assert!(t[0].abs() < 1e-4);
    }

    #[test]
    fn grid_is_tensor() {
        let g = box_grid(&BoxDomain(vec![[0.0, 1.0], [2.0, 3.0]]), 3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], vec![0.0, 2.0]);
        assert_eq!(g[8], vec![1.0, 3.0]);
    }
}
