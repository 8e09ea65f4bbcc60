//! The built-in varieties and sets.

use crate::error::Result;
use crate::geometry::{sample_variety_set, BoxDomain, Branch, BranchSpec, SampleSet};
use crate::polyring::{parse_poly, MultiPoly, VarietyRelation};

/// `y^3 = (1 - x^2) y`: the line `y = 0` together with the unit circle.
pub fn circle_and_line() -> VarietyRelation<f64> {
    let q1 = parse_poly("1 - x1^2", Some(2)).expect("literal");
    VarietyRelation::new(2, 2, vec![MultiPoly::zero(2), q1, MultiPoly::zero(2)]).expect("literal")
}

/// All three branches over `x in [-1, 1]`.
pub fn circle_and_line_branches() -> BranchSpec {
    let radicand = parse_poly("1 - x1^2", Some(2)).expect("literal");
    BranchSpec::new(
        vec![
            Branch::Zero,
            Branch::Sqrt {
                radicand: radicand.clone(),
                sign: 1.0,
            },
            Branch::Sqrt { radicand, sign: -1.0 },
        ],
        vec![BoxDomain(vec![[-1.0, 1.0]])],
    )
}

pub fn circle_and_line_set(density: usize) -> Result<SampleSet> {
    sample_variety_set(&circle_and_line(), &circle_and_line_branches(), density)
}

/// `y^3 = 1 - x^2`.
pub fn cube_root_curve() -> VarietyRelation<f64> {
    let q0 = parse_poly("1 - x1^2", Some(2)).expect("literal");
    VarietyRelation::new(2, 2, vec![q0, MultiPoly::zero(2), MultiPoly::zero(2)]).expect("literal")
}

/// The real branch over `[-1/2, -1/4] ∪ [1/4, 1/2]`.
pub fn cube_root_branches() -> BranchSpec {
    BranchSpec::new(
        vec![Branch::CubeRoot {
            radicand: parse_poly("1 - x1^2", Some(2)).expect("literal"),
        }],
        vec![BoxDomain(vec![[-0.5, -0.25]]), BoxDomain(vec![[0.25, 0.5]])],
    )
}

pub fn cube_root_set(density: usize) -> Result<SampleSet> {
    sample_variety_set(&cube_root_curve(), &cube_root_branches(), density)
}

/// `x_k^3 = Q(y) x_k` in `nvars` variables.
pub fn cubic_family(nvars: usize, k: usize, q: MultiPoly<f64>) -> Result<VarietyRelation<f64>> {
    VarietyRelation::new(nvars, k, vec![MultiPoly::zero(nvars), q, MultiPoly::zero(nvars)])
}

/// Real points of a cubic-family member over the given boxes, found
/// numerically.
pub fn cubic_family_set(rel: &VarietyRelation<f64>, boxes: Vec<BoxDomain>, density: usize) -> Result<SampleSet> {
    sample_variety_set(rel, &BranchSpec::new(vec![Branch::Numeric], boxes), density)
}
