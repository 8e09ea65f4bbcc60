use crate::error::{Error, Result};
use crate::polyring::MultiPoly;
use crate::scalar::Scalar;

/// Hypersurface `x_k^d = Q_0(y) + Q_1(y) x_k + ... + Q_{d-1}(y) x_k^{d-1}`,
/// where `y` collects every coordinate except `x_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyRelation<T> {
    nvars: usize,
    var: usize,
    q: Vec<MultiPoly<T>>,
}

impl<T: Scalar> VarietyRelation<T> {
    /// `k` is 1-based as in `x_k`; `q[i]` is `Q_i`, so `d = q.len()`.
    pub fn new(nvars: usize, k: usize, q: Vec<MultiPoly<T>>) -> Result<Self> {
        if k == 0 || k > nvars {
            return Err(Error::InvalidRelation(format!(
                "distinguished variable x{k} outside x1..x{nvars}"
            )));
        }
        if q.len() < 2 {
            return Err(Error::InvalidRelation(format!(
                "relation degree d = {} must be at least 2",
                q.len()
            )));
        }
        let var = k - 1;
        for (i, qi) in q.iter().enumerate() {
            if qi.nvars() != nvars {
                return Err(Error::InvalidRelation(format!(
                    "Q_{i} has {} variables, expected {nvars}",
                    qi.nvars()
                )));
            }
            if qi.degree_in(var) > 0 {
                return Err(Error::InvalidRelation(format!("Q_{i} depends on x{k}")));
            }
        }
        Ok(VarietyRelation { nvars, var, q })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// 1-based index of the distinguished variable.
    pub fn k(&self) -> usize {
        self.var + 1
    }

    /// 0-based index of the distinguished variable.
    pub fn var(&self) -> usize {
        self.var
    }

    pub fn d(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[MultiPoly<T>] {
        &self.q
    }

    /// `x_k^d - sum_i Q_i x_k^i`, which vanishes exactly on the variety.
    pub fn defining_poly(&self) -> MultiPoly<T> {
        let mut p = MultiPoly::var(self.nvars, self.var).pow(self.d() as u32);
        for (i, qi) in self.q.iter().enumerate() {
            p = &p - &qi.shift(self.var, i as u32);
        }
        p
    }

    pub fn residual(&self, point: &[T]) -> T {
        let xk = point[self.var];
        let mut rhs = T::zero();
        for qi in self.q.iter().rev() {
            rhs = rhs * xk + qi.eval(point);
        }
        Scalar::powi(xk, self.d() as u32) - rhs
    }

    /// Coefficients of the fiber polynomial in `x_k` at parameter `point`
    /// (the `x_k` coordinate is ignored), lowest degree first, monic.
    pub fn fiber_coefficients(&self, point: &[T]) -> Vec<T> {
        let mut c: Vec<T> = self.q.iter().map(|qi| -qi.eval(point)).collect();
        c.push(T::one());
        c
    }

    pub fn cast<U: Scalar>(&self) -> VarietyRelation<U> {
        VarietyRelation {
            nvars: self.nvars,
            var: self.var,
            q: self.q.iter().map(MultiPoly::cast).collect(),
        }
    }

    fn check(&self, p: &MultiPoly<T>) -> Result<()> {
        if p.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: p.nvars(),
            });
        }
        Ok(())
    }

    /// Rewrites the highest power `x_k^m` (`m >= d`) through the relation
    /// until every `x_k`-exponent is below `d`.
    pub fn reduce(&self, p: &MultiPoly<T>) -> Result<NormalForm<T>> {
        self.check(p)?;
        let d = self.d() as u32;
        let shifted: Vec<MultiPoly<T>> = self
            .q
            .iter()
            .enumerate()
            .map(|(i, qi)| qi.shift(self.var, i as u32))
            .collect();
        let mut cur = p.clone();
        loop {
            let m = cur.degree_in(self.var);
            if cur.is_zero() || m < d {
                break;
            }
            let (top, rest): (Vec<_>, Vec<_>) = cur
                .terms()
                .map(|(e, c)| (e.to_vec(), c))
                .partition(|(e, _)| e[self.var] == m);
            let head = MultiPoly::from_terms(
                self.nvars,
                top.into_iter().map(|(mut e, c)| {
                    e[self.var] = m - d;
                    (e, c)
                }),
            );
            let mut next = MultiPoly::from_terms(self.nvars, rest);
            for sq in &shifted {
                next = &next + &(&head * sq);
            }
            cur = next;
        }
        let mut g = cur.collect_in(self.var);
        g.resize(self.d(), MultiPoly::zero(self.nvars));
        Ok(NormalForm {
            g,
            relation: self.clone(),
        })
    }

    /// Groups terms by their `x_k`-exponent. Input must already be reduced.
    pub fn collect_coefficients(&self, p: &MultiPoly<T>) -> Result<NormalForm<T>> {
        self.check(p)?;
        self.check_reduced(p)?;
        let mut g = p.collect_in(self.var);
        g.resize(self.d(), MultiPoly::zero(self.nvars));
        Ok(NormalForm {
            g,
            relation: self.clone(),
        })
    }

    fn check_reduced(&self, p: &MultiPoly<T>) -> Result<()> {
        let found = p.degree_in(self.var);
        if !p.is_zero() && found as usize >= self.d() {
            return Err(Error::DegreeTooHigh {
                var: self.k(),
                found,
                limit: self.d(),
            });
        }
        Ok(())
    }

    /// Recovers `G_{d-1}, ..., G_0` by successive differentiation in `x_k`:
    /// `G_{d-1}` is the `(d-1)`-th divided derivative, and each lower
    /// `G_i` is the `i`-th divided derivative minus the contributions
    /// `C(j, i) G_j x_k^{j-i}` of the coefficients already found.
    pub fn extract_coefficients(&self, p: &MultiPoly<T>) -> Result<NormalForm<T>> {
        self.check(p)?;
        self.check_reduced(p)?;
        let d = self.d();
        let mut g = vec![MultiPoly::zero(self.nvars); d];
        for i in (0..d).rev() {
            let mut gi = p.hasse_derivative(self.var, i as u32);
            for (j, gj) in g.iter().enumerate().skip(i + 1) {
                let binom = MultiPoly::constant(self.nvars, T::of(binomial(j, i)));
                let contribution = &(&binom * gj).shift(self.var, (j - i) as u32);
                gi = &gi - contribution;
            }
            if gi.degree_in(self.var) > 0 {
                return Err(Error::Consistency(format!(
                    "divided derivative of order {i} still depends on x{}",
                    self.k()
                )));
            }
            g[i] = gi;
        }
        Ok(NormalForm {
            g,
            relation: self.clone(),
        })
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64).round()
}

/// `sum_i G_i(y) x_k^i` with each `G_i` free of `x_k`: the canonical
/// representative of a polynomial restricted to the variety.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<T> {
    g: Vec<MultiPoly<T>>,
    relation: VarietyRelation<T>,
}

impl<T: Scalar> NormalForm<T> {
    /// Builds from explicit coefficients; each must be free of `x_k`.
    pub fn from_coefficients(g: Vec<MultiPoly<T>>, relation: VarietyRelation<T>) -> Result<Self> {
        if g.len() != relation.d() {
            return Err(Error::DimensionMismatch {
                expected: relation.d(),
                found: g.len(),
            });
        }
        for gi in &g {
            if gi.nvars() != relation.nvars() || gi.degree_in(relation.var()) > 0 {
                return Err(Error::invalid("normal-form coefficient must be free of x_k"));
            }
        }
        Ok(NormalForm { g, relation })
    }

    pub fn coefficients(&self) -> &[MultiPoly<T>] {
        &self.g
    }

    pub fn coefficient(&self, i: usize) -> &MultiPoly<T> {
        &self.g[i]
    }

    pub fn relation(&self) -> &VarietyRelation<T> {
        &self.relation
    }

    /// `sum_i G_i x_k^i` as an ambient polynomial.
    pub fn reassemble(&self) -> MultiPoly<T> {
        let var = self.relation.var();
        self.g
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(self.relation.nvars()), |acc, (i, gi)| {
                &acc + &gi.shift(var, i as u32)
            })
    }

    pub fn eval(&self, point: &[T]) -> T {
        let xk = point[self.relation.var()];
        self.g
            .iter()
            .rev()
            .fold(T::zero(), |acc, gi| acc * xk + gi.eval(point))
    }

    /// Total degree of the representative.
    pub fn degree(&self) -> u32 {
        self.reassemble().degree()
    }

    pub fn cast<U: Scalar>(&self) -> NormalForm<U> {
        NormalForm {
            g: self.g.iter().map(MultiPoly::cast).collect(),
            relation: self.relation.cast(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn cubic_relation() -> VarietyRelation<f64> {
        // y^3 = (1 - x^2) y
        let z = MultiPoly::zero(2);
        let q1 = parse_poly("1 - x1^2", Some(2)).unwrap();
        VarietyRelation::new(2, 2, vec![z.clone(), q1, z]).unwrap()
    }

    fn p(s: &str) -> MultiPoly<f64> {
        parse_poly(s, Some(2)).unwrap()
    }

    #[test]
    fn rejects_degenerate_relations() {
        let z = MultiPoly::<f64>::zero(2);
        assert!(VarietyRelation::new(2, 2, vec![z.clone()]).is_err());
        assert!(VarietyRelation::new(2, 3, vec![z.clone(), z.clone()]).is_err());
        assert!(VarietyRelation::new(2, 2, vec![p("x2"), z.clone()]).is_err());
        assert!(VarietyRelation::new(2, 2, vec![MultiPoly::zero(3), z]).is_err());
    }

    #[test]
    fn y_cubed_reduces_in_one_step() {
        let rel = cubic_relation();
        let nf = rel.reduce(&p("x2^3")).unwrap();
        assert!(nf.coefficient(0).is_zero());
        assert_eq!(nf.coefficient(1), &p("1 - x1^2"));
        assert!(nf.coefficient(2).is_zero());
    }

    #[test]
    fn y_fourth_reduces_to_y_squared_multiple() {
        let rel = cubic_relation();
        let nf = rel.reduce(&p("x2^4")).unwrap();
        assert_eq!(nf.reassemble(), p("x2^2 - x1^2*x2^2"));
    }

    #[test]
    fn y_fifth_matches_pointwise_on_the_variety() {
        let rel = cubic_relation();
        let nf = rel.reduce(&p("x2^5")).unwrap();
        assert_eq!(nf.coefficient(1), &p("1 - 2*x1^2 + x1^4"));
        // oracle: compare with y^5 at points on the curve
        for j in 0..100 {
            let x = -1.0 + 2.0 * j as f64 / 99.0;
            for y in [0.0, (1.0 - x * x).sqrt(), -(1.0 - x * x).sqrt()] {
                let lhs = y.powi(5);
                let rhs = nf.eval(&[x, y]);
                assert!((lhs - rhs).abs() < 1e-14, "{x} {y}");
            }
        }
    }

    #[test]
    fn extraction_agrees_with_collection() {
        let rel = cubic_relation();
        let poly = p("3 + x2 - x1^2*x2 + 5*x2^2");
        let nf = rel.extract_coefficients(&poly).unwrap();
        assert_eq!(nf.coefficient(0), &p("3"));
        assert_eq!(nf.coefficient(1), &p("1 - x1^2"));
        assert_eq!(nf.coefficient(2), &p("5"));
        assert_eq!(nf, rel.collect_coefficients(&poly).unwrap());

        let no_top = rel.extract_coefficients(&p("x1 + x2")).unwrap();
        assert!(no_top.coefficient(2).is_zero());
    }

    #[test]
    fn extraction_requires_reduced_input() {
        let rel = cubic_relation();
        assert!(matches!(
            rel.extract_coefficients(&p("x2^3")),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn defining_poly_vanishes_on_branches() {
        let rel = cubic_relation();
        let f = rel.defining_poly();
        let x: f64 = 0.3;
        let y = (1.0 - x * x).sqrt();
        assert!(f.eval(&[x, y]).abs() < 1e-15);
        assert!(rel.residual(&[x, y]).abs() < 1e-15);
    }
}
