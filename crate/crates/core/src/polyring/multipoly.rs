use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficients with absolute value below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-300;

/// Exponent vector ordered graded-lexicographically with `x_1 < ... < x_N`:
/// total degree first, then the exponent of the highest variable decides.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial in `nvars` real variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<T> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

fn negligible<T: Scalar>(c: T) -> bool {
    c.abs().as_f64() < PRUNE_THRESHOLD
}

impl<T: Scalar> MultiPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `x_{var+1}` (`var` is 0-based).
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(nvars, e, T::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: T) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        if !negligible(c) {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, T)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p.prune();
        p
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        *self.terms.entry(m).or_insert_with(T::zero) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !negligible(*c));
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], T)> + '_ {
        self.terms.iter().map(|(m, c)| (m.exponents(), *c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> T {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Total degree; the zero polynomial has degree 0 by convention.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |acc, c| Scalar::max(acc, c.abs()))
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn combine(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.check_dims(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, T::one()),
            ArithOp::Sub => self.add_unchecked(other, -T::one()),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Self, sign: T) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), sign * *c);
        }
        out.prune();
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), *ca * *cb);
            }
        }
        out.prune();
        out
    }

    pub fn scale(&self, c: T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            let w = *v * c;
            if !negligible(w) {
                out.terms.insert(m.clone(), w);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.nvars, T::one());
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Partial derivative `D^alpha`.
    pub fn differentiate(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: alpha.len(),
            });
        }
        let mut out = Self::zero(self.nvars);
        'terms: for (m, c) in &self.terms {
            let mut factor = T::one();
            let mut e = m.0.clone();
            for (v, &a) in alpha.iter().enumerate() {
                if a > e[v] {
                    continue 'terms;
                }
                for j in 0..a {
                    factor *= T::of((e[v] - j) as f64);
                }
                e[v] -= a;
            }
            out.add_term(Monomial(e), *c * factor);
        }
        out.prune();
        Ok(out)
    }

    /// Divided derivative `(1/order!) d^order/dx_var^order`: the coefficient of
    /// `x_var^e` picks up the binomial `C(e, order)`, an exact integer.
    pub fn hasse_derivative(&self, var: usize, order: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e < order {
                continue;
            }
            let mut e2 = m.0.clone();
            e2[var] = e - order;
            out.add_term(Monomial(e2), *c * T::of(binomial(e, order)));
        }
        out.prune();
        out
    }

    /// Value at `point`, rejecting wrong length and non-finite coordinates.
    pub fn evaluate(&self, point: &[T]) -> Result<T> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        if let Some(bad) = point.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("coordinate {} is {}", bad + 1, point[bad])));
        }
        Ok(self.eval(point))
    }

    /// Iterated Horner evaluation, nesting in `x_1` outermost. No validation.
    pub fn eval(&self, point: &[T]) -> T {
        if self.terms.is_empty() {
            return T::zero();
        }
        let mut rows: Vec<(&[u32], T)> = self.terms.iter().map(|(m, c)| (m.exponents(), *c)).collect();
        rows.sort_by(|a, b| b.0.cmp(a.0));
        horner(&rows, 0, point)
    }

    /// Mixed-precision evaluation at an `f64` point.
    pub fn eval_f64(&self, point: &[f64]) -> T {
        let p: Vec<T> = point.iter().map(|&x| T::of(x)).collect();
        self.eval(&p)
    }

    pub fn cast<U: Scalar>(&self) -> MultiPoly<U> {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let v = U::of(c.as_f64());
            if !negligible(v) {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Drops variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> Result<Self> {
        if self.degree_in(var) > 0 {
            return Err(Error::invalid(format!("x{} occurs in the polynomial", var + 1)));
        }
        let mut out = Self::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(var);
            out.terms.insert(Monomial(e), *c);
        }
        Ok(out)
    }

    /// Inserts a new variable at position `var` with exponent 0 everywhere.
    pub fn insert_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(var, 0);
            out.terms.insert(Monomial(e), *c);
        }
        out
    }

    /// Multiplies by `x_var^power`.
    pub fn shift(&self, var: usize, power: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[var] += power;
            out.terms.insert(Monomial(e), *c);
        }
        out
    }

    /// Splits by the exponent of `var`: entry `i` holds the coefficient of
    /// `x_var^i` (with that exponent zeroed).
    pub fn collect_in(&self, var: usize) -> Vec<Self> {
        let top = self.degree_in(var) as usize;
        let mut parts = vec![Self::zero(self.nvars); top + 1];
        for (m, c) in &self.terms {
            let i = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            parts[i].terms.insert(Monomial(e), *c);
        }
        parts
    }

    /// Bound on `|p(x)|` used for relative tolerances: the polynomial with
    /// absolute coefficients evaluated at `|x|`.
    pub fn abs_eval(&self, point: &[T]) -> T {
        let abs_point: Vec<T> = point.iter().map(|x| x.abs()).collect();
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.abs());
        }
        out.eval(&abs_point)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as f64
}

/// `rows` sorted descending lexicographically from `var` onward.
fn horner<T: Scalar>(rows: &[(&[u32], T)], var: usize, point: &[T]) -> T {
    if var == point.len() {
        return rows.iter().map(|r| r.1).sum();
    }
    let x = point[var];
    let mut acc = T::zero();
    let mut prev: Option<u32> = None;
    let mut start = 0;
    while start < rows.len() {
        let e = rows[start].0[var];
        let mut end = start + 1;
        while end < rows.len() && rows[end].0[var] == e {
            end += 1;
        }
        if let Some(p) = prev {
            acc *= Scalar::powi(x, p - e);
        }
        acc += horner(&rows[start..end], var + 1, point);
        prev = Some(e);
        start = end;
    }
    if let Some(p) = prev {
        acc *= Scalar::powi(x, p);
    }
    acc
}

impl<T: Scalar> Add for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    /// Panics on a dimension mismatch; see [`MultiPoly::combine`].
    fn add(self, rhs: Self) -> MultiPoly<T> {
        self.combine(rhs, ArithOp::Add).expect("dimension mismatch")
    }
}

impl<T: Scalar> Sub for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(self, rhs: Self) -> MultiPoly<T> {
        self.combine(rhs, ArithOp::Sub).expect("dimension mismatch")
    }
}

impl<T: Scalar> Mul for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn mul(self, rhs: Self) -> MultiPoly<T> {
        self.combine(rhs, ArithOp::Mul).expect("dimension mismatch")
    }
}

impl<T: Scalar> Add for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn add(self, rhs: Self) -> MultiPoly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(self, rhs: Self) -> MultiPoly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn mul(self, rhs: Self) -> MultiPoly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn neg(self) -> MultiPoly<T> {
        self.scale(-T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = MultiPoly<f64>;

    fn x() -> P {
        P::var(2, 0)
    }
    fn y() -> P {
        P::var(2, 1)
    }
    fn one() -> P {
        P::constant(2, 1.0)
    }

    #[test]
    fn cancellation_in_sum() {
        let s = &(&x() + &y()) + &(&x() - &y());
        assert_eq!(s, x().scale(2.0));
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &one()) * &(&x() - &one());
        assert_eq!(p, &x().pow(2) - &one());
    }

    #[test]
    fn zero_absorbs() {
        let p = &(&x() * &y()) + &one();
        let z = &p * &P::zero(2);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = P::var(2, 0);
        let b = P::var(3, 0);
        assert!(matches!(a.combine(&b, ArithOp::Add), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn power_rule_derivatives() {
        let x2y = &x().pow(2) * &y();
        assert_eq!(x2y.differentiate(&[1, 0]).unwrap(), (&x() * &y()).scale(2.0));
        assert!(x2y.differentiate(&[0, 2]).unwrap().is_zero());
        let x4 = x().pow(4);
        assert_eq!(x4.differentiate(&[2, 0]).unwrap(), x().pow(2).scale(12.0));
    }

    #[test]
    fn evaluation_examples() {
        let p = &x().pow(2) + &y().pow(2);
        assert_eq!(p.evaluate(&[3.0, 4.0]).unwrap(), 25.0);
        let q = &(&one() - &x().pow(2)) * &y();
        assert_eq!(q.evaluate(&[0.5, 2.0]).unwrap(), 1.5);
        let r = &(&q + &one().scale(7.0)) + &x().pow(3);
        assert_eq!(r.evaluate(&[0.0, 0.0]).unwrap(), 7.0);
        assert!(matches!(q.evaluate(&[f64::NAN, 1.0]), Err(Error::NonFinite(_))));
        assert!(q.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn degree_conventions() {
        assert_eq!((&x().pow(2) * &y()).degree(), 3);
        assert_eq!(P::zero(2).degree(), 0);
        assert_eq!((&(&one() - &x().pow(2)) * &y()).degree(), 3);
    }

    #[test]
    fn grlex_order_is_degree_then_last_variable() {
        let mut ms = vec![
            Monomial::new(vec![0, 1]),
            Monomial::new(vec![2, 0]),
            Monomial::new(vec![1, 0]),
            Monomial::new(vec![1, 1]),
            Monomial::new(vec![0, 0]),
        ];
        ms.sort();
        let got: Vec<Vec<u32>> = ms.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1]]);
    }

    #[test]
    fn hasse_derivative_uses_binomials() {
        let p = &y().pow(3).scale(2.0) + &(&x() * &y().pow(2));
        let h = p.hasse_derivative(1, 2);
        // C(3,2)*2 y + C(2,2) x
        assert_eq!(h, &y().scale(6.0) + &x());
    }

    #[test]
    fn remove_and_insert_var_round_trip() {
        let p = &x().pow(2) + &one();
        let q = p.remove_var(1).unwrap();
        assert_eq!(q.nvars(), 1);
        assert_eq!(q.insert_var(1), p);
        assert!(y().remove_var(1).is_err());
    }
}
