//! Finite stand-ins for compact sets: sampled varieties, projections and
//! fattened neighbourhoods.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::branch::{box_grid, validate_boxes, BoxDomain, BranchSpec};
use crate::polyring::{MultiPoly, VarietyRelation};
use crate::scalar::Scalar;

/// Points closer than this (max-norm) are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Relation residual allowed for on-variety points, relative to the size of
/// the terms in the relation.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-10;
/// Smallest accepted sampling density.
pub const MIN_DENSITY: usize = 64;
/// `refine_check` certifies a grid when the relative change is at most this.
pub const REFINE_CERTIFY: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    OnVariety,
    /// Plain box samples with no relation attached.
    Grid,
    Projection,
    Inflated,
}

#[derive(Clone, Debug)]
pub enum Source {
    Variety {
        relation: VarietyRelation<f64>,
        spec: BranchSpec,
        density: usize,
    },
    Boxes {
        boxes: Vec<BoxDomain>,
        density: usize,
    },
    Derived {
        parent: Box<SampleSet>,
    },
}

#[derive(Clone, Debug)]
pub struct SampleSet {
    points: Vec<Vec<f64>>,
    tol: f64,
    provenance: Provenance,
    source: Source,
}

impl SampleSet {
    fn build(points: Vec<Vec<f64>>, tol: f64, provenance: Provenance, source: Source) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet("sample set has no points".into()));
        }
        let dim = points[0].len();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("sample point {p:?}")));
            }
        }
        Ok(SampleSet {
            points: merge_duplicates(points),
            tol,
            provenance,
            source,
        })
    }

    /// Lobatto grid over a union of boxes, with no relation.
    pub fn from_boxes(boxes: Vec<BoxDomain>, density: usize) -> Result<Self> {
        let dim = boxes.first().map_or(0, |b| b.0.len());
        validate_boxes(&boxes, dim)?;
        let points = boxes.iter().flat_map(|b| box_grid(b, density)).collect();
        SampleSet::build(points, 0.0, Provenance::Grid, Source::Boxes { boxes, density })
    }

    /// Arbitrary points, tagged as a plain grid.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let src = Source::Boxes {
            boxes: Vec::new(),
            density: 0,
        };
        SampleSet::build(points, 0.0, Provenance::Grid, src)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    /// The same kind of set at doubled density. The new node count is
    /// `2 * density - 1`, so the old nodes are a subset of the new ones.
    pub fn refined(&self) -> Result<SampleSet> {
        match &self.source {
            Source::Variety {
                relation,
                spec,
                density,
            } => sample_variety_set(relation, spec, 2 * density - 1),
            Source::Boxes { boxes, density } if !boxes.is_empty() => {
                SampleSet::from_boxes(boxes.clone(), 2 * density - 1)
            }
            _ => Err(Error::invalid("only sampled sets can be refined")),
        }
    }

    /// One point per row, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Sorts lexicographically and drops points within [`MERGE_TOLERANCE`] of
/// an earlier kept point.
fn merge_duplicates(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.partial_cmp(y).unwrap())
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let dup = kept
            .iter()
            .rev()
            .take_while(|q| p[0] - q[0] <= MERGE_TOLERANCE)
            .any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= MERGE_TOLERANCE));
        if !dup {
            kept.push(p);
        }
    }
    kept
}

fn membership_scale(rel: &VarietyRelation<f64>, point: &[f64]) -> f64 {
    let x = point[rel.var()].abs();
    let mut scale = x.powi(rel.d() as i32);
    for (i, qi) in rel.q().iter().enumerate() {
        scale += qi.eval(point).abs() * x.powi(i as i32);
    }
    1.0 + scale
}

/// Whether `point` satisfies the relation at the membership tolerance.
pub fn on_variety(rel: &VarietyRelation<f64>, point: &[f64], tol: f64) -> bool {
    rel.residual(point).abs() <= tol * membership_scale(rel, point)
}

/// Samples `E = {(y, x_k) : y in boxes, x_k on a listed branch}` with
/// `density` Chebyshev–Lobatto nodes per box axis.
pub fn sample_variety_set(rel: &VarietyRelation<f64>, spec: &BranchSpec, density: usize) -> Result<SampleSet> {
    if density < MIN_DENSITY {
        return Err(Error::invalid(format!("density {density} below {MIN_DENSITY}")));
    }
    let n = rel.nvars();
    let k = rel.var();
    validate_boxes(&spec.boxes, n - 1)?;
    if spec.branches.is_empty() {
        return Err(Error::EmptySet("no branches".into()));
    }
    let mut points = Vec::new();
    for (bi, domain) in spec.boxes.iter().enumerate() {
        for y in box_grid(domain, density) {
            let mut ambient = y.clone();
            ambient.insert(k, 0.0);
            for branch in 0..spec.branches.len() {
                let values = spec.fiber_values(branch, rel, &ambient).map_err(|message| Error::BranchUndefined {
                    branch,
                    box_index: bi,
                    point: y.clone(),
                    message,
                })?;
                for xk in values {
                    let mut p = ambient.clone();
                    p[k] = xk;
                    if !on_variety(rel, &p, MEMBERSHIP_TOLERANCE) {
                        return Err(Error::BranchUndefined {
                            branch,
                            box_index: bi,
                            point: y.clone(),
                            message: format!("point off the variety, residual {:e}", rel.residual(&p)),
                        });
                    }
                    points.push(p);
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptySet("branches produced no real points".into()));
    }
    let source = Source::Variety {
        relation: rel.clone(),
        spec: spec.clone(),
        density,
    };
    SampleSet::build(points, MEMBERSHIP_TOLERANCE, Provenance::OnVariety, source)
}

/// Deletes coordinate `k` (1-based). Projecting a projection is rejected.
pub fn project_pi(e: &SampleSet, k: usize) -> Result<SampleSet> {
    if e.provenance == Provenance::Projection {
        return Err(Error::IllegalProjection("set is already a projection".into()));
    }
    if k == 0 || k > e.dim() || e.dim() < 2 {
        return Err(Error::IllegalProjection(format!(
            "cannot delete coordinate {k} of a {}-dimensional set",
            e.dim()
        )));
    }
    let points = e
        .points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.remove(k - 1);
            q
        })
        .collect();
    SampleSet::build(
        points,
        e.tol,
        Provenance::Projection,
        Source::Derived {
            parent: Box::new(e.clone()),
        },
    )
}

/// `E` plus `samples_per_point` random offsets of length at most `radius`
/// around every point, drawn uniformly from the full-dimensional ball.
pub fn inflate_set(e: &SampleSet, radius: f64, samples_per_point: usize, seed: u64) -> Result<SampleSet> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid("inflation radius must be positive"));
    }
    let dim = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = e.points.clone();
    for p in &e.points {
        for _ in 0..samples_per_point {
            let offset = loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                    break v;
                }
            };
            points.push(p.iter().zip(&offset).map(|(a, o)| a + radius * o).collect());
        }
    }
    SampleSet::build(
        points,
        radius,
        Provenance::Inflated,
        Source::Derived {
            parent: Box::new(e.clone()),
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNorm<T> {
    pub value: T,
    pub index: usize,
    pub point: Vec<f64>,
}

/// Max of `|p|` over the points; ties go to the lowest index.
pub fn sup_norm<T: Scalar>(p: &MultiPoly<T>, e: &SampleSet) -> SupNorm<T> {
    let (index, value) = e
        .points
        .par_iter()
        .enumerate()
        .map(|(i, pt)| (i, p.eval_f64(pt).abs()))
        .reduce(
            || (usize::MAX, -T::one()),
            |a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    SupNorm {
        value,
        index,
        point: e.points[index].clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineCheck {
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
    pub certified: bool,
}

/// Relative change of the sup norm when the set is resampled at doubled
/// density.
pub fn refine_check<T: Scalar>(p: &MultiPoly<T>, e: &SampleSet) -> Result<RefineCheck> {
    let fine_set = e.refined()?;
    let coarse = sup_norm(p, e).value.as_f64();
    let fine = sup_norm(p, &fine_set).value.as_f64();
    let relative_change = if fine == 0.0 { 0.0 } else { (fine - coarse).abs() / fine };
    Ok(RefineCheck {
        coarse,
        fine,
        relative_change,
        certified: relative_change <= REFINE_CERTIFY,
    })
}
