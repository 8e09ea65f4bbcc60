//! Smooth cut-off equal to one near a sampled set and zero away from it.

use crate::error::{Error, Result};
use crate::geometry::sample::SampleSet;

/// `max |phi^(j)|` over `[0, 1]` for the transition profile, `j = 0..=4`.
const PROFILE_DERIVATIVE_MAX: [f64; 5] = [1.0, 2.0, 9.841_042_301_831_145, 110.566_912_706_723_08, 2280.397_617_152_086_6];

/// `h(y) = phi((dist(y, K) - eps/4) / (3 eps / 4))`, where `phi` falls from
/// 1 at `s <= 0` to 0 at `s >= 1` and is flat to all orders at both ends.
#[derive(Clone, Debug)]
pub struct BumpFunction {
    base: SampleSet,
    epsilon: f64,
}

fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// The transition profile.
pub fn profile(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let a = flat(1.0 - s);
        a / (a + flat(s))
    }
}

impl BumpFunction {
    pub fn new(base: SampleSet, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid("bump radius must be positive"));
        }
        Ok(BumpFunction { base, epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn base(&self) -> &SampleSet {
        &self.base
    }

    /// Euclidean distance to the nearest base point.
    pub fn distance(&self, y: &[f64]) -> f64 {
        self.base
            .points()
            .iter()
            .map(|p| p.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.eval_at_distance(self.distance(y))
    }

    pub fn eval_at_distance(&self, dist: f64) -> f64 {
        let quarter = 0.25 * self.epsilon;
        profile((dist - quarter) / (3.0 * quarter))
    }

    /// `C_j eps^{-j}` with `C_j = max|phi^(j)| (4/3)^j`, for `j <= 4`.
    pub fn derivative_bound(&self, order: usize) -> Result<f64> {
        let c = PROFILE_DERIVATIVE_MAX
            .get(order)
            .ok_or_else(|| Error::invalid(format!("derivative order {order} above 4")))?;
        Ok(c * (4.0 / 3.0f64).powi(order as i32) * self.epsilon.powi(-(order as i32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::branch::BoxDomain;

    fn unit_interval() -> SampleSet {
        SampleSet::from_boxes(vec![BoxDomain(vec![[0.0, 1.0]])], 101).unwrap()
    }

    #[test]
    fn profile_derivative_maxima_by_finite_differences() {
        let h = 1e-4;
        let mut d1 = 0.0f64;
        let mut d2 = 0.0f64;
        for i in 1..10_000 {
            let s = i as f64 / 10_000.0;
            d1 = d1.max(((profile(s + h) - profile(s - h)) / (2.0 * h)).abs());
            d2 = d2.max(((profile(s + h) - 2.0 * profile(s) + profile(s - h)) / (h * h)).abs());
        }
        assert!((d1 - PROFILE_DERIVATIVE_MAX[1]).abs() < 1e-3 * PROFILE_DERIVATIVE_MAX[1]);
        assert!((d2 - PROFILE_DERIVATIVE_MAX[2]).abs() < 1e-3 * PROFILE_DERIVATIVE_MAX[2]);
    }

    #[test]
    fn one_near_zero_far_unit_range() {
        let b = BumpFunction::new(unit_interval(), 0.1).unwrap();
        assert_eq!(b.eval(&[0.5]), 1.0);
        assert_eq!(b.eval(&[1.02]), 1.0);
        assert_eq!(b.eval(&[1.2]), 0.0);
        for i in 0..200 {
            let v = b.eval(&[1.0 + i as f64 * 1e-3]);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn slope_scales_inversely_with_radius() {
        let k = unit_interval();
        let max_slope = |eps: f64| {
            let b = BumpFunction::new(k.clone(), eps).unwrap();
            let h = 1e-5;
            (0..4000)
                .map(|i| 1.0 + i as f64 * eps / 3000.0)
                .map(|y| ((b.eval(&[y + h]) - b.eval(&[y - h])) / (2.0 * h)).abs())
                .fold(0.0, f64::max)
        };
        let ratio = max_slope(0.1) / max_slope(0.2);
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
        let b = BumpFunction::new(k.clone(), 0.1).unwrap();
        assert!(max_slope(0.1) <= b.derivative_bound(1).unwrap() * (1.0 + 1e-6));
        assert!(b.derivative_bound(5).is_err());
    }
}
