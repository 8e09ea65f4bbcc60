//! Seeded random relations and polynomials for the reduction properties.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::real_roots;
use crate::polyring::{MultiPoly, VarietyRelation};

/// Relative tolerance for pointwise agreement on the variety.
pub const SOUNDNESS_TOLERANCE: f64 = 1e-9;

/// A relation with small integer coefficients and two polynomials to reduce.
#[derive(Clone, Debug)]
pub struct RingCase {
    pub relation: VarietyRelation<f64>,
    pub p: MultiPoly<f64>,
    pub q: MultiPoly<f64>,
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, skip: Option<usize>, max_deg: u32, terms: usize) -> MultiPoly<f64> {
    let count = rng.gen_range(1..=terms);
    let t = (0..count).map(|_| {
        let total = rng.gen_range(0..=max_deg);
        let mut exps = vec![0u32; nvars];
        for _ in 0..total {
            let mut v = rng.gen_range(0..nvars);
            if Some(v) == skip {
                v = (v + 1) % nvars;
                if Some(v) == skip {
                    continue;
                }
            }
            exps[v] += 1;
        }
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i32..=3);
        }
        (exps, c as f64)
    });
    MultiPoly::from_terms(nvars, t)
}

/// Case number `index` of the stream seeded by `seed`.
pub fn random_ring_case(seed: u64, index: u64) -> RingCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let nvars = rng.gen_range(2..=3);
    let k = rng.gen_range(1..=nvars);
    let d = rng.gen_range(2..=3);
    let q: Vec<MultiPoly<f64>> = (0..d)
        .map(|_| {
            if rng.gen_bool(0.3) {
                MultiPoly::zero(nvars)
            } else {
                random_poly(&mut rng, nvars, Some(k - 1), 2, 3)
            }
        })
        .collect();
    let relation = VarietyRelation::new(nvars, k, q).expect("valid by construction");
    let p = random_poly(&mut rng, nvars, None, 5, 6);
    let q = random_poly(&mut rng, nvars, None, 5, 6);
    RingCase { relation, p, q }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RingReport {
    pub cases: usize,
    /// Points on the variety where soundness was tested.
    pub points: usize,
    /// Largest `|P - NF(P)| / (1 + sum |terms of P|)` at those points.
    pub worst_soundness: f64,
    pub soundness_failures: usize,
    pub idempotence_failures: usize,
    pub homomorphism_failures: usize,
    pub extraction_failures: usize,
    pub first_failure: Option<String>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.soundness_failures == 0
            && self.idempotence_failures == 0
            && self.homomorphism_failures == 0
            && self.extraction_failures == 0
    }

    fn fail(&mut self, what: &str, index: u64) {
        if self.first_failure.is_none() {
            self.first_failure = Some(format!("{what} at case {index}"));
        }
    }
}

/// Points of the variety above random parameters in `[-1.5, 1.5]`.
fn variety_points(rng: &mut ChaCha8Rng, rel: &VarietyRelation<f64>, want: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for _ in 0..8 * want {
        if out.len() >= want {
            break;
        }
        let mut y: Vec<f64> = (0..rel.nvars()).map(|_| rng.gen_range(-1.5..=1.5)).collect();
        let q: Vec<f64> = rel.q().iter().map(|qi| qi.eval(&y)).collect();
        if let Some(&root) = real_roots(&q).first() {
            y[rel.var()] = root;
            out.push(y);
        }
    }
    out
}

/// Checks one case, adding to `report`.
pub fn check_ring_case(case: &RingCase, index: u64, report: &mut RingReport) -> Result<()> {
    let rel = &case.relation;
    report.cases += 1;

    let nf = rel.reduce(&case.p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(index);
    for pt in variety_points(&mut rng, rel, 4) {
        report.points += 1;
        let scale = 1.0 + case.p.abs_eval(&pt) + nf.reassemble().abs_eval(&pt);
        let err = (case.p.eval(&pt) - nf.eval(&pt)).abs() / scale;
        report.worst_soundness = report.worst_soundness.max(err);
        if err > SOUNDNESS_TOLERANCE {
            report.soundness_failures += 1;
            report.fail("soundness", index);
        }
    }

    if rel.reduce(&nf.reassemble())? != nf {
        report.idempotence_failures += 1;
        report.fail("idempotence", index);
    }

    let nq = rel.reduce(&case.q)?;
    let direct = rel.reduce(&(&case.p * &case.q))?;
    let via = rel.reduce(&(&nf.reassemble() * &nq.reassemble()))?;
    if direct != via {
        report.homomorphism_failures += 1;
        report.fail("homomorphism", index);
    }

    let r = nf.reassemble();
    if rel.extract_coefficients(&r)? != rel.collect_coefficients(&r)? {
        report.extraction_failures += 1;
        report.fail("extraction", index);
    }
    Ok(())
}

/// Runs `cases` seeded cases.
pub fn ring_property_suite(cases: usize, seed: u64) -> Result<RingReport> {
    let mut report = RingReport::default();
    for i in 0..cases as u64 {
        check_ring_case(&random_ring_case(seed, i), i, &mut report)?;
    }
    Ok(report)
}
