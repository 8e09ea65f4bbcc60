//! Polynomial spaces `P_l(y) ⊗ P_{d-1}(x_k)` with tensor Chebyshev y-parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::MultiPoly;
use crate::scalar::Scalar;

/// Which elements a degree bound admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    /// y-degree `<= l`, every x_k power `0..d`.
    YDegree(usize),
    /// `y-degree + x_k power <= n`.
    TotalDegree(usize),
}

/// The ambient coordinates and the affine frame of the Chebyshev y-parts.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySpace {
    nvars: usize,
    /// Distinguished variable (0-based) and relation degree.
    fiber: Option<(usize, usize)>,
    y_vars: Vec<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl PolySpace {
    /// Space on a hypersurface with distinguished variable `var` (0-based).
    /// The frame is the bounding box of the points' y-coordinates.
    pub fn on_variety(nvars: usize, var: usize, d: usize, points: &[Vec<f64>]) -> Result<Self> {
        if var >= nvars || d < 1 {
            return Err(Error::invalid("distinguished variable out of range"));
        }
        let y_vars: Vec<usize> = (0..nvars).filter(|&v| v != var).collect();
        let (lo, hi) = bounding_box(&y_vars, points)?;
        Ok(PolySpace {
            nvars,
            fiber: Some((var, d)),
            y_vars,
            lo,
            hi,
        })
    }

    /// All polynomials in `nvars` variables, no relation.
    pub fn full(nvars: usize, points: &[Vec<f64>]) -> Result<Self> {
        let y_vars: Vec<usize> = (0..nvars).collect();
        let (lo, hi) = bounding_box(&y_vars, points)?;
        Ok(PolySpace {
            nvars,
            fiber: None,
            y_vars,
            lo,
            hi,
        })
    }

    /// Replaces the frame, e.g. to compare two bases spanning the same space.
    pub fn with_frame(mut self, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != self.y_vars.len() || hi.len() != self.y_vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.y_vars.len(),
                found: lo.len().min(hi.len()),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::invalid("frame needs lo < hi on every axis"));
        }
        self.lo = lo;
        self.hi = hi;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn fiber(&self) -> Option<(usize, usize)> {
        self.fiber
    }

    pub fn y_vars(&self) -> &[usize] {
        &self.y_vars
    }

    pub fn frame(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    fn fiber_degree(&self) -> usize {
        self.fiber.map_or(1, |(_, d)| d)
    }
}

fn bounding_box(y_vars: &[usize], points: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    if points.is_empty() {
        return Err(Error::EmptySet("cannot frame a basis on no points".into()));
    }
    let mut lo = vec![f64::INFINITY; y_vars.len()];
    let mut hi = vec![f64::NEG_INFINITY; y_vars.len()];
    for p in points {
        for (a, &v) in y_vars.iter().enumerate() {
            let c = *p.get(v).ok_or(Error::DimensionMismatch {
                expected: v + 1,
                found: p.len(),
            })?;
            lo[a] = lo[a].min(c);
            hi[a] = hi[a].max(c);
        }
    }
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        if *b - *a < 1e-12 {
            let mid = 0.5 * (*a + *b);
            *a = mid - 1.0;
            *b = mid + 1.0;
        }
    }
    Ok((lo, hi))
}

/// Tag of one basis element: Chebyshev degrees per y-variable and x_k power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTag {
    pub y_degrees: Vec<u32>,
    pub xk_power: u32,
}

impl ElementTag {
    pub fn y_degree(&self) -> u32 {
        self.y_degrees.iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.y_degree() + self.xk_power
    }
}

#[derive(Clone, Debug)]
pub struct Basis<T> {
    space: PolySpace,
    grading: Grading,
    tags: Vec<ElementTag>,
    polys: Vec<MultiPoly<T>>,
    /// Affine map of each y-axis onto `[-1, 1]`: `u = s*y + t`.
    maps: Vec<(T, T)>,
    max_cheb: u32,
}

impl<T: Scalar> Basis<T> {
    pub fn new(space: PolySpace, grading: Grading) -> Self {
        let d = space.fiber_degree() as u32;
        let m = space.y_vars.len();
        let mut tags = Vec::new();
        let y_bound = match grading {
            Grading::YDegree(l) => l as u32,
            Grading::TotalDegree(n) => n as u32,
        };
        for total in 0..=y_bound {
            for y_degrees in compositions(total, m) {
                for i in 0..d {
                    let ok = match grading {
                        Grading::YDegree(_) => true,
                        Grading::TotalDegree(n) => total + i <= n as u32,
                    };
                    if ok {
                        tags.push(ElementTag {
                            y_degrees: y_degrees.clone(),
                            xk_power: i,
                        });
                    }
                }
            }
        }
        let maps: Vec<(T, T)> = space
            .lo
            .iter()
            .zip(&space.hi)
            .map(|(&a, &b)| {
                let w = T::of(b) - T::of(a);
                (T::of(2.0) / w, -(T::of(a) + T::of(b)) / w)
            })
            .collect();
        let max_cheb = tags.iter().flat_map(|t| t.y_degrees.iter().copied()).max().unwrap_or(0);

        // Chebyshev polynomials of each mapped y-variable as ambient polynomials
        let n = space.nvars;
        let cheb: Vec<Vec<MultiPoly<T>>> = space
            .y_vars
            .iter()
            .zip(&maps)
            .map(|(&v, &(s, t))| {
                let u = &MultiPoly::var(n, v).scale(s) + &MultiPoly::constant(n, t);
                let mut seq = vec![MultiPoly::constant(n, T::one())];
                if max_cheb >= 1 {
                    seq.push(u.clone());
                }
                let two_u = u.scale(T::of(2.0));
                for j in 2..=max_cheb as usize {
                    let next = &(&two_u * &seq[j - 1]) - &seq[j - 2];
                    seq.push(next);
                }
                seq
            })
            .collect();
        let polys = tags
            .iter()
            .map(|tag| {
                let mut p = MultiPoly::constant(n, T::one());
                for (a, &deg) in tag.y_degrees.iter().enumerate() {
                    if deg > 0 {
                        p = &p * &cheb[a][deg as usize];
                    }
                }
                match space.fiber {
                    Some((var, _)) if tag.xk_power > 0 => p.shift(var, tag.xk_power),
                    _ => p,
                }
            })
            .collect();
        Basis {
            space,
            grading,
            tags,
            polys,
            maps,
            max_cheb,
        }
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn space(&self) -> &PolySpace {
        &self.space
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn tags(&self) -> &[ElementTag] {
        &self.tags
    }

    pub fn polys(&self) -> &[MultiPoly<T>] {
        &self.polys
    }

    /// Largest total degree among the elements.
    pub fn total_degree(&self) -> u32 {
        self.tags.iter().map(ElementTag::total_degree).max().unwrap_or(0)
    }

    /// Values of every element at `point`, by three-term recurrence.
    pub fn eval_row(&self, point: &[f64]) -> Vec<T> {
        let cheb: Vec<Vec<T>> = self
            .space
            .y_vars
            .iter()
            .zip(&self.maps)
            .map(|(&v, &(s, t))| {
                let u = s * T::of(point[v]) + t;
                let mut seq = Vec::with_capacity(self.max_cheb as usize + 1);
                seq.push(T::one());
                if self.max_cheb >= 1 {
                    seq.push(u);
                }
                for j in 2..=self.max_cheb as usize {
                    let next = T::of(2.0) * u * seq[j - 1] - seq[j - 2];
                    seq.push(next);
                }
                seq
            })
            .collect();
        let xk = self.space.fiber.map(|(var, _)| T::of(point[var]));
        self.tags
            .iter()
            .map(|tag| {
                let mut v = T::one();
                for (a, &deg) in tag.y_degrees.iter().enumerate() {
                    v *= cheb[a][deg as usize];
                }
                if let Some(x) = xk {
                    v *= x.powi(tag.xk_power);
                }
                v
            })
            .collect()
    }

    /// Design matrix, one row per point.
    pub fn matrix(&self, points: &[Vec<f64>]) -> Vec<Vec<T>> {
        points.iter().map(|p| self.eval_row(p)).collect()
    }

    /// `D^alpha` of every element.
    pub fn derivatives(&self, alpha: &[u32]) -> Result<Vec<MultiPoly<T>>> {
        self.polys.iter().map(|p| p.differentiate(alpha)).collect()
    }

    /// `sum_b c_b B_b` as an ambient polynomial.
    pub fn combine(&self, coeffs: &[T]) -> Result<MultiPoly<T>> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coeffs.len(),
            });
        }
        let mut out = MultiPoly::zero(self.space.nvars);
        for (p, &c) in self.polys.iter().zip(coeffs) {
            if c != T::zero() {
                out = &out + &p.scale(c);
            }
        }
        Ok(out)
    }
}

/// All vectors of `m` nonnegative integers summing to `total`.
fn compositions(total: u32, m: usize) -> Vec<Vec<u32>> {
    if m == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if m == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, m - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|j| vec![-(std::f64::consts::PI * j as f64 / (n - 1) as f64).cos()])
            .collect()
    }

    #[test]
    fn sizes_match_gradings() {
        let pts = vec![vec![-1.0, -1.0], vec![1.0, 1.0]];
        let space = PolySpace::on_variety(2, 1, 3, &pts).unwrap();
        let by_y = Basis::<f64>::new(space.clone(), Grading::YDegree(4));
        assert_eq!(by_y.len(), 5 * 3);
        assert_eq!(by_y.total_degree(), 6);
        let by_total = Basis::<f64>::new(space, Grading::TotalDegree(4));
        // (5 + 4 + 3) elements for x_k powers 0, 1, 2
        assert_eq!(by_total.len(), 12);
        assert_eq!(by_total.total_degree(), 4);

        let plane = PolySpace::full(2, &pts).unwrap();
        assert_eq!(Basis::<f64>::new(plane, Grading::TotalDegree(3)).len(), 10);
    }

    #[test]
    fn recurrence_matches_expanded_polynomials() {
        let pts = vec![vec![0.25, -1.0], vec![0.5, 2.0]];
        let space = PolySpace::on_variety(2, 1, 3, &pts).unwrap();
        let basis = Basis::<f64>::new(space, Grading::YDegree(7));
        for x in [0.25, 0.3, 0.41, 0.5] {
            let pt = [x, 0.7];
            let row = basis.eval_row(&pt);
            for (b, p) in row.iter().zip(basis.polys()) {
                assert!((b - p.eval(&pt)).abs() < 1e-9, "{b} vs {}", p.eval(&pt));
            }
        }
    }

    #[test]
    fn chebyshev_is_bounded_on_frame() {
        let pts = line(65);
        let basis = Basis::<f64>::new(PolySpace::full(1, &pts).unwrap(), Grading::TotalDegree(8));
        for p in &pts {
            for v in basis.eval_row(p) {
                assert!(v.abs() <= 1.0 + 1e-12);
            }
        }
        // T_8(1) = 1, T_8'(1) = 64
        let d = basis.derivatives(&[1]).unwrap();
        assert!((d[8].eval(&[1.0]) - 64.0).abs() < 1e-9);
    }

    #[test]
    fn combine_reproduces_values() {
        let pts = line(9);
        let basis = Basis::<f64>::new(PolySpace::full(1, &pts).unwrap(), Grading::TotalDegree(3));
        let c = [0.5, -1.0, 0.25, 2.0];
        let p = basis.combine(&c).unwrap();
        for pt in &pts {
            let row = basis.eval_row(pt);
            let direct: f64 = row.iter().zip(&c).map(|(a, b)| a * b).sum();
            assert!((p.eval(pt) - direct).abs() < 1e-12);
        }
        assert!(basis.combine(&c[..2]).is_err());
    }
}
