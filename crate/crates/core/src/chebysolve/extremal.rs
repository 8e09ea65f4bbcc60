//! The two extremal problems on a finite point set, both solved through
//! their LP duals so that the row count is the basis size rather than the
//! number of sample points.

use serde::{Deserialize, Serialize};

use crate::chebysolve::simplex::{solve_lp, LpProblem, LpStatus, Relation, Sense};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Best uniform approximation on the points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimaxFit<T> {
    pub coefficients: Vec<T>,
    /// `max_j |f_j - (A c)_j|`, recomputed from the coefficients.
    pub error: T,
    /// Optimal value reported by the LP.
    pub lp_value: T,
    /// Points where the residual reaches `±error` (within `1e-7`).
    pub extremal: Vec<usize>,
    pub equioscillates: bool,
}

/// `sup { g·c : |A c| <= 1 }` and a maximizer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionalMax<T> {
    pub value: T,
    pub witness: Vec<T>,
    /// Points whose constraints are active at the optimal vertex, one per
    /// basis element when the basis is nondegenerate on the points.
    pub support: Vec<usize>,
}

fn check_rows<T>(rows: &[Vec<T>], width: usize) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptySet("no sample points".into()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != width) {
        return Err(Error::DimensionMismatch {
            expected: width,
            found: r.len(),
        });
    }
    Ok(())
}

/// Minimizes `max_j |values_j - sum_b c_b rows[j][b]|`.
pub fn minimax_fit<T: Scalar>(values: &[T], rows: &[Vec<T>]) -> Result<MinimaxFit<T>> {
    let p = rows.len();
    if values.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: values.len(),
        });
    }
    let m = rows.first().map_or(0, Vec::len);
    check_rows(rows, m)?;
    if let Some(j) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("target value at point {j}")));
    }

    // max f·w  s.t.  ||w||_1 <= 1,  A^T w = 0,  w = u - v
    let mut objective = Vec::with_capacity(2 * p);
    objective.extend(values.iter().map(|f| -*f));
    objective.extend(values.iter().copied());
    let mut lp = LpProblem::new(Sense::Minimize, objective);
    lp.add_constraint(vec![T::one(); 2 * p], Relation::Le, T::one());
    for b in 0..m {
        let mut coeffs = Vec::with_capacity(2 * p);
        coeffs.extend(rows.iter().map(|r| r[b]));
        coeffs.extend(rows.iter().map(|r| -r[b]));
        lp.add_constraint(coeffs, Relation::Eq, T::zero());
    }
    let sol = solve_lp(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(sol.status));
    }
    let coefficients: Vec<T> = sol.duals[1..].iter().map(|y| -*y).collect();
    let residuals: Vec<T> = rows
        .iter()
        .zip(values)
        .map(|(r, f)| *f - dot(r, &coefficients))
        .collect();
    let error = residuals.iter().fold(T::zero(), |a, r| Scalar::max(a, r.abs()));
    let slack = T::of(1e-7) * Scalar::max(T::one(), error);
    let extremal: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| r.abs() >= error - slack)
        .map(|(j, _)| j)
        .collect();
    let has_pos = extremal.iter().any(|&j| residuals[j] > T::zero());
    let has_neg = extremal.iter().any(|&j| residuals[j] < T::zero());
    let equioscillates = error <= slack || (extremal.len() >= 2 && has_pos && has_neg);
    Ok(MinimaxFit {
        coefficients,
        error,
        lp_value: -sol.objective,
        extremal,
        equioscillates,
    })
}

/// Maximizes the linear functional `g` over `{c : |A c|_inf <= 1}`.
///
/// The feasible set is symmetric, so `g` and `-g` have the same optimum and
/// the returned value is also the maximum of `|g·c|`.
pub fn functional_max<T: Scalar>(functional: &[T], rows: &[Vec<T>]) -> Result<FunctionalMax<T>> {
    let m = functional.len();
    check_rows(rows, m)?;
    if functional.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("functional".into()));
    }
    let p = rows.len();
    // min ||w||_1  s.t.  A^T w = g
    let mut lp = LpProblem::new(Sense::Minimize, vec![T::one(); 2 * p]);
    for (b, &g) in functional.iter().enumerate() {
        let mut coeffs = Vec::with_capacity(2 * p);
        coeffs.extend(rows.iter().map(|r| r[b]));
        coeffs.extend(rows.iter().map(|r| -r[b]));
        lp.add_constraint(coeffs, Relation::Eq, g);
    }
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::DegenerateBasis(null_direction(functional, rows))),
        s => return Err(Error::Lp(s)),
    }
    let mut support: Vec<usize> = sol.basic_vars.iter().map(|&v| v % p).collect();
    support.sort_unstable();
    support.dedup();
    Ok(FunctionalMax {
        value: sol.objective,
        witness: sol.duals,
        support,
    })
}

/// Index of the first basis element whose column is numerically zero, or the
/// first element the functional touches when the null space is subtler.
fn null_direction<T: Scalar>(functional: &[T], rows: &[Vec<T>]) -> usize {
    let tol = T::lp_tolerance();
    (0..functional.len())
        .find(|&b| rows.iter().all(|r| r[b].abs() <= tol))
        .or_else(|| functional.iter().position(|g| g.abs() > tol))
        .unwrap_or(0)
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

/// Solves `A_S^T λ = g` for every later `g`, given the support points `S`.
/// `||λ||_1` bounds the functional maximum from above.
#[derive(Clone, Debug)]
pub struct SupportBound<T> {
    /// Inverse of `A_S^T`, row-major.
    inverse: Vec<Vec<T>>,
}

impl<T: Scalar> SupportBound<T> {
    /// `None` if the support does not give a square nonsingular system.
    pub fn new(rows: &[Vec<T>], support: &[usize]) -> Option<Self> {
        let m = rows.first()?.len();
        if support.len() != m {
            return None;
        }
        // M = A_S^T: M[b][s] = rows[support[s]][b]
        let mut a: Vec<Vec<T>> = (0..m)
            .map(|b| {
                let mut row: Vec<T> = support.iter().map(|&s| rows[s][b]).collect();
                row.extend((0..m).map(|c| if c == b { T::one() } else { T::zero() }));
                row
            })
            .collect();
        let scale = a
            .iter()
            .flat_map(|r| r[..m].iter())
            .fold(T::zero(), |acc, v| Scalar::max(acc, v.abs()));
        for col in 0..m {
            let piv = (col..m).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())?;
            if a[piv][col].abs() <= T::of(1e-12) * scale {
                return None;
            }
            a.swap(col, piv);
            let inv = T::one() / a[col][col];
            for v in a[col].iter_mut() {
                *v *= inv;
            }
            let prow = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != col && row[col] != T::zero() {
                    let f = row[col];
                    for (v, pv) in row.iter_mut().zip(&prow) {
                        *v -= f * *pv;
                    }
                }
            }
        }
        Some(SupportBound {
            inverse: a.into_iter().map(|r| r[m..].to_vec()).collect(),
        })
    }

    pub fn upper_bound(&self, functional: &[T]) -> T {
        self.inverse
            .iter()
            .map(|row| dot(row, functional).abs())
            .sum()
    }
}
