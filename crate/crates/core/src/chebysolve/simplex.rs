//! Dense revised primal simplex with a two-phase start.
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots the solver
//! falls back to Bland's smallest-index rule, which cannot cycle, and stays
//! there until a pivot makes progress again.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `None` on either side means unbounded in that direction.
#[derive(Clone, Copy, Debug)]
pub struct VarBound<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

#[derive(Clone, Debug)]
pub struct LpProblem<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub bounds: Vec<VarBound<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivot cap reached without a verdict.
    IterationLimit,
    /// Inconsistent dimensions or non-finite data.
    Malformed,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub objective: T,
    pub x: Vec<T>,
    /// Sensitivity of the optimum to each constraint's right-hand side.
    pub duals: Vec<T>,
    /// Original variables that are basic at the final vertex.
    pub basic_vars: Vec<usize>,
    pub iterations: usize,
}

impl<T: Scalar> LpProblem<T> {
    /// All variables default to `x >= 0`.
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        LpProblem {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![
                VarBound {
                    lower: Some(T::zero()),
                    upper: None,
                };
                n
            ],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.bounds[var] = VarBound { lower, upper };
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, None, None)
    }

    fn well_formed(&self) -> bool {
        let n = self.num_vars();
        self.bounds.len() == n
            && self.objective.iter().all(|c| c.is_finite())
            && self
                .constraints
                .iter()
                .all(|c| c.coeffs.len() == n && c.rhs.is_finite() && c.coeffs.iter().all(|a| a.is_finite()))
            && self.bounds.iter().all(|b| {
                b.lower.map_or(true, |l| l.is_finite())
                    && b.upper.map_or(true, |u| u.is_finite())
                    && match (b.lower, b.upper) {
                        (Some(l), Some(u)) => l <= u,
                        _ => true,
                    }
            })
    }
}

impl<T: Scalar> fmt::Display for LpProblem<T> {
    /// Plain-text tableau dump.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        let mut line = String::new();
        for c in &self.objective {
            write!(line, " {:>12.5e}", c.as_f64())?;
        }
        writeln!(f, "{sense:>4} |{line}")?;
        for con in &self.constraints {
            line.clear();
            for a in &con.coeffs {
                write!(line, " {:>12.5e}", a.as_f64())?;
            }
            let rel = match con.relation {
                Relation::Le => "<=",
                Relation::Eq => "==",
                Relation::Ge => ">=",
            };
            writeln!(f, "     |{line} {rel} {:.5e}", con.rhs.as_f64())?;
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let lo = b.lower.map_or("-inf".to_string(), |l| format!("{:.5e}", l.as_f64()));
            let hi = b.upper.map_or("+inf".to_string(), |u| format!("{:.5e}", u.as_f64()));
            writeln!(f, "  x{j}: [{lo}, {hi}]")?;
        }
        Ok(())
    }
}

/// How a standard-form column maps back: `x_orig += sign * x_col`.
#[derive(Clone, Copy)]
struct ColumnMap<T> {
    orig: usize,
    sign: T,
}

struct StandardForm<T> {
    /// Column-major `m x n`.
    cols: Vec<Vec<T>>,
    cost: Vec<T>,
    rhs: Vec<T>,
    /// Structural columns precede slack columns.
    map: Vec<Option<ColumnMap<T>>>,
    /// Row index of a `+1` slack usable as an initial basic variable.
    slack_for_row: Vec<Option<usize>>,
    row_flipped: Vec<bool>,
    offsets: Vec<T>,
}

fn standardize<T: Scalar>(p: &LpProblem<T>) -> StandardForm<T> {
    let n0 = p.num_vars();
    let mut map = Vec::new();
    let mut offsets = vec![T::zero(); n0];
    // per original var: list of (col, sign)
    let mut cols_of: Vec<Vec<(usize, T)>> = vec![Vec::new(); n0];
    let mut extra_rows: Vec<(usize, T)> = Vec::new(); // (col, bound) for x' <= bound
    for (j, b) in p.bounds.iter().enumerate() {
        match (b.lower, b.upper) {
            (Some(l), u) => {
                offsets[j] = l;
                cols_of[j].push((map.len(), T::one()));
                if let Some(u) = u {
                    extra_rows.push((map.len(), u - l));
                }
                map.push(Some(ColumnMap { orig: j, sign: T::one() }));
            }
            (None, Some(u)) => {
                offsets[j] = u;
                cols_of[j].push((map.len(), -T::one()));
                map.push(Some(ColumnMap { orig: j, sign: -T::one() }));
            }
            (None, None) => {
                cols_of[j].push((map.len(), T::one()));
                map.push(Some(ColumnMap { orig: j, sign: T::one() }));
                cols_of[j].push((map.len(), -T::one()));
                map.push(Some(ColumnMap { orig: j, sign: -T::one() }));
            }
        }
    }
    let n_struct = map.len();
    let m = p.constraints.len() + extra_rows.len();
    let mut cols = vec![vec![T::zero(); m]; n_struct];
    let mut rhs = vec![T::zero(); m];
    let mut slack_for_row = vec![None; m];
    let mut row_flipped = vec![false; m];
    let mut slack_cols: Vec<Vec<T>> = Vec::new();

    for (r, con) in p.constraints.iter().enumerate() {
        let mut b = con.rhs;
        for (j, &a) in con.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            b -= a * offsets[j];
            for &(c, s) in &cols_of[j] {
                cols[c][r] = a * s;
            }
        }
        rhs[r] = b;
        let slack_sign = match con.relation {
            Relation::Le => Some(T::one()),
            Relation::Ge => Some(-T::one()),
            Relation::Eq => None,
        };
        if let Some(s) = slack_sign {
            let mut col = vec![T::zero(); m];
            col[r] = s;
            slack_cols.push(col);
        }
    }
    for (i, &(c, bound)) in extra_rows.iter().enumerate() {
        let r = p.constraints.len() + i;
        cols[c][r] = T::one();
        rhs[r] = bound;
        let mut col = vec![T::zero(); m];
        col[r] = T::one();
        slack_cols.push(col);
    }
    for col in slack_cols {
        cols.push(col);
        map.push(None);
    }
    // make rhs nonnegative
    for r in 0..m {
        if rhs[r] < T::zero() {
            rhs[r] = -rhs[r];
            row_flipped[r] = true;
            for col in cols.iter_mut() {
                col[r] = -col[r];
            }
        }
    }
    for (c, col) in cols.iter().enumerate().skip(n_struct) {
        let r = col.iter().position(|v| *v != T::zero()).expect("slack column");
        if col[r] == T::one() {
            slack_for_row[r] = Some(c);
        }
    }
    let sign = match p.sense {
        Sense::Minimize => T::one(),
        Sense::Maximize => -T::one(),
    };
    let mut cost = vec![T::zero(); cols.len()];
    for (c, entry) in map.iter().enumerate() {
        if let Some(cm) = entry {
            cost[c] = sign * p.objective[cm.orig] * cm.sign;
        }
    }
    StandardForm {
        cols,
        cost,
        rhs,
        map,
        slack_for_row,
        row_flipped,
        offsets,
    }
}

/// Knobs for the engine. Defaults follow the scalar's tolerance.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    pub tolerance: T,
    /// Smallest admissible pivot element in the ratio test.
    pub pivot_tolerance: T,
    /// Pivot cap is `iteration_factor * (rows + cols)`.
    pub iteration_factor: usize,
    /// Print the problem to stderr before solving.
    pub dump_tableau: bool,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        SolverOptions {
            tolerance: T::lp_tolerance(),
            pivot_tolerance: T::pivot_tolerance(),
            iteration_factor: 50,
            dump_tableau: std::env::var_os("MARKOVLAB_DUMP_LP").is_some(),
        }
    }
}

pub fn solve_lp<T: Scalar>(problem: &LpProblem<T>) -> LpSolution<T> {
    solve_lp_with(problem, &SolverOptions::default())
}

pub fn solve_lp_with<T: Scalar>(problem: &LpProblem<T>, opts: &SolverOptions<T>) -> LpSolution<T> {
    let n0 = problem.num_vars();
    let failed = |status, iterations| LpSolution {
        status,
        objective: T::zero(),
        x: vec![T::zero(); n0],
        duals: vec![T::zero(); problem.constraints.len()],
        basic_vars: Vec::new(),
        iterations,
    };
    if !problem.well_formed() {
        return failed(LpStatus::Malformed, 0);
    }
    if opts.dump_tableau {
        eprintln!("{problem}");
    }
    let sf = standardize(problem);
    let mut engine = Engine::new(&sf, opts);
    let status = engine.run();
    if status != LpStatus::Optimal {
        return failed(status, engine.iterations);
    }

    let mut x = sf.offsets.clone();
    for (r, &col) in engine.basis.iter().enumerate() {
        if let Some(Some(cm)) = sf.map.get(col) {
            x[cm.orig] += cm.sign * engine.xb[r];
        }
    }
    let y = engine.prices(&sf.cost);
    let sense_sign = match problem.sense {
        Sense::Minimize => T::one(),
        Sense::Maximize => -T::one(),
    };
    let duals = (0..problem.constraints.len())
        .map(|r| {
            let flip = if sf.row_flipped[r] { -T::one() } else { T::one() };
            y[r] * flip * sense_sign
        })
        .collect();
    let objective = problem
        .objective
        .iter()
        .zip(&x)
        .fold(T::zero(), |acc, (c, v)| acc + *c * *v);
    let mut basic_vars: Vec<usize> = engine
        .basis
        .iter()
        .filter_map(|&c| sf.map.get(c).copied().flatten().map(|cm| cm.orig))
        .collect();
    basic_vars.sort_unstable();
    basic_vars.dedup();
    LpSolution {
        status,
        objective,
        x,
        duals,
        basic_vars,
        iterations: engine.iterations,
    }
}

struct Engine<'a, T> {
    sf: &'a StandardForm<T>,
    m: usize,
    n: usize,
    /// Columns `n..n+m` are artificials (identity columns).
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<T>>,
    xb: Vec<T>,
    tol: T,
    pivot_tol: T,
    iterations: usize,
    max_iterations: usize,
    since_refactor: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted { degenerate: bool },
}

impl<'a, T: Scalar> Engine<'a, T> {
    fn new(sf: &'a StandardForm<T>, opts: &SolverOptions<T>) -> Self {
        let m = sf.rhs.len();
        let n = sf.cols.len();
        let mut basis = Vec::with_capacity(m);
        let mut is_basic = vec![false; n + m];
        for r in 0..m {
            let c = sf.slack_for_row[r].unwrap_or(n + r);
            basis.push(c);
            is_basic[c] = true;
        }
        let mut binv = vec![vec![T::zero(); m]; m];
        for (r, row) in binv.iter_mut().enumerate() {
            row[r] = T::one();
        }
        Engine {
            sf,
            m,
            n,
            basis,
            is_basic,
            binv,
            xb: sf.rhs.clone(),
            tol: opts.tolerance,
            pivot_tol: opts.pivot_tolerance,
            iterations: 0,
            max_iterations: opts.iteration_factor * (m + n).max(1),
            since_refactor: 0,
        }
    }

    fn column(&self, c: usize) -> Vec<T> {
        if c < self.n {
            self.sf.cols[c].clone()
        } else {
            let mut e = vec![T::zero(); self.m];
            e[c - self.n] = T::one();
            e
        }
    }

    fn cost_of(&self, costs: &[T], c: usize) -> T {
        costs.get(c).copied().unwrap_or_else(T::zero)
    }

    /// Simplex multipliers `c_B^T B^{-1}`.
    fn prices(&self, costs: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.m];
        for (r, &c) in self.basis.iter().enumerate() {
            let cb = self.cost_of(costs, c);
            if cb == T::zero() {
                continue;
            }
            for (yi, b) in y.iter_mut().zip(&self.binv[r]) {
                *yi += cb * *b;
            }
        }
        y
    }

    fn ftran(&self, col: &[T]) -> Vec<T> {
        self.binv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(col)
                    .fold(T::zero(), |acc, (a, b)| if *b == T::zero() { acc } else { acc + *a * *b })
            })
            .collect()
    }

    fn run(&mut self) -> LpStatus {
        let needs_phase_one = self.basis.iter().any(|&c| c >= self.n);
        if needs_phase_one {
            let mut phase1 = vec![T::zero(); self.n + self.m];
            for v in phase1.iter_mut().skip(self.n) {
                *v = T::one();
            }
            let scale = self.sf.rhs.iter().fold(T::one(), |a, b| Scalar::max(a, b.abs()));
            // artificials that start at zero need no phase-one pivots
            if self.infeasibility() > self.tol * scale {
                match self.optimize(&phase1) {
                    Some(LpStatus::Optimal) => {}
                    Some(s) => return s,
                    None => return LpStatus::IterationLimit,
                }
                if self.infeasibility() > self.tol * scale {
                    return LpStatus::Infeasible;
                }
            }
            self.drive_out_artificials();
        }
        let mut costs = self.sf.cost.clone();
        costs.resize(self.n + self.m, T::zero());
        match self.optimize(&costs) {
            Some(s) => s,
            None => LpStatus::IterationLimit,
        }
    }

    fn infeasibility(&self) -> T {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(c, _)| **c >= self.n)
            .map(|(_, v)| v.abs())
            .sum()
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.n {
                continue;
            }
            let mut best: Option<(usize, T)> = None;
            for c in 0..self.n {
                if self.is_basic[c] {
                    continue;
                }
                let v = self.binv[r]
                    .iter()
                    .zip(&self.sf.cols[c])
                    .fold(T::zero(), |acc, (a, b)| acc + *a * *b);
                if v.abs() > self.pivot_tol && best.map_or(true, |(_, bv)| v.abs() > bv.abs()) {
                    best = Some((c, v));
                }
            }
            if let Some((c, _)) = best {
                let alpha = self.ftran(&self.column(c));
                self.pivot(r, c, &alpha);
            }
            // otherwise the row is redundant and its artificial stays at zero
        }
    }

    /// Returns `None` when the pivot cap is hit.
    fn optimize(&mut self, costs: &[T]) -> Option<LpStatus> {
        let mut degenerate_run = 0usize;
        let bland_after = 2 * self.m + 10;
        loop {
            if self.iterations >= self.max_iterations {
                return None;
            }
            let bland = degenerate_run > bland_after;
            match self.step(costs, bland) {
                Step::Optimal => return Some(LpStatus::Optimal),
                Step::Unbounded => return Some(LpStatus::Unbounded),
                Step::Pivoted { degenerate } => {
                    self.iterations += 1;
                    degenerate_run = if degenerate { degenerate_run + 1 } else { 0 };
                }
            }
        }
    }

    fn step(&mut self, costs: &[T], bland: bool) -> Step {
        let y = self.prices(costs);
        let mut entering: Option<(usize, T)> = None;
        for c in 0..self.n {
            if self.is_basic[c] {
                continue;
            }
            let col = &self.sf.cols[c];
            let mut d = costs[c];
            for (yi, a) in y.iter().zip(col) {
                if *a != T::zero() {
                    d -= *yi * *a;
                }
            }
            if d < -self.tol {
                if bland {
                    entering = Some((c, d));
                    break;
                }
                if entering.map_or(true, |(_, best)| d < best) {
                    entering = Some((c, d));
                }
            }
        }
        let Some((q, _)) = entering else {
            return Step::Optimal;
        };
        let alpha = self.ftran(&self.sf.cols[q]);
        let mut leave: Option<(usize, T)> = None;
        for r in 0..self.m {
            if alpha[r] > self.pivot_tol {
                let ratio = Scalar::max(self.xb[r], T::zero()) / alpha[r];
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        if ratio < lratio - self.tol {
                            true
                        } else if ratio <= lratio + self.tol {
                            if bland {
                                self.basis[r] < self.basis[lr]
                            } else {
                                // prefer evicting artificials, then larger pivots
                                let art_r = self.basis[r] >= self.n;
                                let art_l = self.basis[lr] >= self.n;
                                (art_r && !art_l) || (art_r == art_l && alpha[r] > alpha[lr])
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, ratio)) = leave else {
            return Step::Unbounded;
        };
        self.pivot(r, q, &alpha);
        Step::Pivoted {
            degenerate: ratio <= self.tol,
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[T]) {
        let piv = alpha[r];
        let theta = self.xb[r] / piv;
        for i in 0..self.m {
            if i != r && alpha[i] != T::zero() {
                self.xb[i] -= theta * alpha[i];
            }
        }
        self.xb[r] = theta;
        let pivot_row: Vec<T> = self.binv[r].iter().map(|v| *v / piv).collect();
        for i in 0..self.m {
            if i == r || alpha[i] == T::zero() {
                continue;
            }
            let f = alpha[i];
            for (b, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                *b -= f * *p;
            }
        }
        self.binv[r] = pivot_row;
        let old = self.basis[r];
        self.is_basic[old] = false;
        self.is_basic[q] = true;
        self.basis[r] = q;
        self.since_refactor += 1;
        if self.since_refactor >= 64 {
            self.refactor();
        }
    }

    /// Rebuilds `B^{-1}` and `x_B` from scratch (Gauss-Jordan, partial pivoting).
    fn refactor(&mut self) {
        let m = self.m;
        let mut a: Vec<Vec<T>> = vec![vec![T::zero(); 2 * m]; m];
        for (j, &c) in self.basis.iter().enumerate() {
            let col = self.column(c);
            for i in 0..m {
                a[i][j] = col[i];
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[m + i] = T::one();
        }
        for col in 0..m {
            let p = (col..m)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
                .unwrap();
            if a[p][col].abs() <= T::zero() {
                // singular: keep the product-form inverse
                self.since_refactor = 0;
                return;
            }
            a.swap(col, p);
            let inv = T::one() / a[col][col];
            for v in a[col].iter_mut() {
                *v *= inv;
            }
            let pivot_row = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == col || row[col] == T::zero() {
                    continue;
                }
                let f = row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * *pv;
                }
            }
        }
        // a = [I | B^{-1}] with rows permuted back to basis order already
        for i in 0..m {
            self.binv[i] = a[i][m..].to_vec();
        }
        self.xb = self.ftran(&self.sf.rhs);
        self.since_refactor = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_upper_bound() {
        // max x s.t. x <= 3
        let mut p = LpProblem::<f64>::new(Sense::Maximize, vec![1.0]);
        p.add_constraint(vec![1.0], Relation::Le, 3.0);
        let s = solve_lp(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_corner() {
        // max x+y s.t. x+y <= 1, x,y >= 0
        let mut p = LpProblem::<f64>::new(Sense::Maximize, vec![1.0, 1.0]);
        p.add_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        let s = solve_lp(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min |x - 2| style: min t s.t. t >= x - 2, t >= 2 - x, x free, x = 5
        let mut p = LpProblem::<f64>::new(Sense::Minimize, vec![1.0, 0.0]);
        p.set_free(1);
        p.add_constraint(vec![1.0, -1.0], Relation::Ge, -2.0);
        p.add_constraint(vec![1.0, 1.0], Relation::Ge, 2.0);
        p.add_constraint(vec![0.0, 1.0], Relation::Eq, 5.0);
        let s = solve_lp(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.x[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut p = LpProblem::<f64>::new(Sense::Maximize, vec![1.0]);
        p.add_constraint(vec![1.0], Relation::Le, 1.0);
        p.add_constraint(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(solve_lp(&p).status, LpStatus::Infeasible);

        let mut q = LpProblem::<f64>::new(Sense::Maximize, vec![1.0, 1.0]);
        q.add_constraint(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&q).status, LpStatus::Unbounded);
    }

    #[test]
    fn bounded_variables() {
        // max x + 2y with -1 <= x <= 4, y <= 1 (y free below), x + y <= 4
        let mut p = LpProblem::<f64>::new(Sense::Maximize, vec![1.0, 2.0]);
        p.set_bounds(0, Some(-1.0), Some(4.0));
        p.set_bounds(1, None, Some(1.0));
        p.add_constraint(vec![1.0, 1.0], Relation::Le, 4.0);
        let s = solve_lp(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 5.0).abs() < 1e-12, "{:?}", s);
        assert!((s.x[0] - 3.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_input_reports_status() {
        let mut p = LpProblem::<f64>::new(Sense::Minimize, vec![1.0, 1.0]);
        p.add_constraint(vec![1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&p).status, LpStatus::Malformed);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance under Dantzig's rule.
        let mut p = LpProblem::<f64>::new(Sense::Minimize, vec![-0.75, 150.0, -0.02, 6.0]);
        p.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        p.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        p.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let s = solve_lp(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-9, "{}", s.objective);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut p = LpProblem::<f64>::new(Sense::Maximize, vec![1.0, 1.0, 1.0]);
        p.add_constraint(vec![1.0, 2.0, 1.0], Relation::Le, 4.0);
        p.add_constraint(vec![3.0, 1.0, 1.0], Relation::Le, 5.0);
        let opts = SolverOptions {
            iteration_factor: 0,
            ..SolverOptions::default()
        };
        assert_eq!(solve_lp_with(&p, &opts).status, LpStatus::IterationLimit);
    }

    #[test]
    fn tableau_dump_is_plain_text() {
        let mut p = LpProblem::<f64>::new(Sense::Maximize, vec![1.0]);
        p.add_constraint(vec![1.0], Relation::Le, 3.0);
        let text = p.to_string();
        assert!(text.starts_with(" max |"));
        assert!(text.contains("<= 3.00000e0"));
    }
}
