//! TOML scenario files: a variety, a sampled set on it, and the experiment
//! blocks to run there.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::approx::{Target, MAX_ORDER};
use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Branch, BranchSpec, SampleSet, MIN_DENSITY};
use crate::markov::{BoundForm, GradingKind, DEFAULT_SEED};
use crate::polyring::{parse_poly, MultiPoly, VarietyRelation};
use crate::presets;

pub const PRESETS: [&str; 3] = ["example-2-2", "example-2-3", "example-2-4-family"];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    preset: Option<String>,
    relation: Option<RawRelation>,
    branches: Option<RawBranches>,
    family: Option<RawFamily>,
    #[serde(default = "default_density")]
    density: usize,
    #[serde(default = "default_seed")]
    seed: u64,
    output: Option<PathBuf>,
    markov: Option<MarkovBlock>,
    approx: Option<RawApprox>,
    counterexample: Option<CounterexampleBlock>,
    extension: Option<ExtensionBlock>,
    determining: Option<DeterminingBlock>,
}

fn default_density() -> usize {
    128
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    nvars: usize,
    /// 1-based distinguished variable.
    k: usize,
    /// `Q_0, ..., Q_{d-1}` as polynomial text.
    q: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranches {
    catalogue: Vec<RawBranch>,
    boxes: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawBranch {
    Zero,
    Sqrt { radicand: String },
    NegSqrt { radicand: String },
    Cbrt { radicand: String },
    Numeric,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    nvars: usize,
    k: usize,
    q: String,
    boxes: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovBlock {
    pub alphas: Vec<Vec<u32>>,
    #[serde(default = "default_grading")]
    pub grading: GradingKind,
    #[serde(default = "one")]
    pub lmin: usize,
    pub lmax: usize,
    /// Claimed bounds `||D^alpha P|| <= M n^{m |alpha|} ||P||` to check.
    #[serde(default)]
    pub bounds: Vec<BoundClaim>,
    /// Random polynomials compared against each LP factor.
    #[serde(default)]
    pub random: usize,
}

fn default_grading() -> GradingKind {
    GradingKind::TotalDegree
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundClaim {
    pub alpha: Vec<u32>,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub m: f64,
    #[serde(default = "default_form")]
    pub form: BoundForm,
}

fn default_form() -> BoundForm {
    BoundForm::Single
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    DoubleDouble,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawApprox {
    target: String,
    #[serde(default = "default_lmax")]
    lmax: usize,
    #[serde(default = "default_ladder")]
    ladder: Vec<u32>,
    #[serde(default = "default_precision")]
    precision: Precision,
}

fn default_lmax() -> usize {
    16
}

fn default_ladder() -> Vec<u32> {
    vec![1, 2, 4, 8, 10]
}

fn default_precision() -> Precision {
    Precision::DoubleDouble
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxBlock {
    pub target: Target,
    pub lmax: usize,
    pub ladder: Vec<u32>,
    pub precision: Precision,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleBlock {
    #[serde(default = "default_nmax")]
    pub nmax: usize,
}

fn default_nmax() -> usize {
    60
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionBlock {
    /// Bump exponent; defaults to `ceil(m) + 1` from the Markov block's fit.
    pub r: Option<u32>,
    pub level: usize,
    pub grid: Option<GridBlock>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminingSource {
    /// Metric projections of the zero function.
    Projections,
    /// The polynomials `y - sum_{k<=n} c_k x^{2k}` on the cube-root curve.
    Counterexample,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterminingBlock {
    pub alphas: Vec<Vec<u32>>,
    pub lmax: usize,
    #[serde(default = "default_source")]
    pub source: DeterminingSource,
}

fn default_source() -> DeterminingSource {
    DeterminingSource::Projections
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub preset: Option<String>,
    pub relation: VarietyRelation<f64>,
    pub branches: BranchSpec,
    pub density: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub markov: Option<MarkovBlock>,
    pub approx: Option<ApproxBlock>,
    pub counterexample: Option<CounterexampleBlock>,
    pub extension: Option<ExtensionBlock>,
    pub determining: Option<DeterminingBlock>,
}

fn config(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn poly_field(text: &str, nvars: usize, path: &str) -> Result<MultiPoly<f64>> {
    parse_poly(text, Some(nvars)).map_err(|e| config(path, e.to_string()))
}

fn boxes_field(raw: &[Vec<[f64; 2]>], ydim: usize, path: &str) -> Result<Vec<BoxDomain>> {
    if raw.is_empty() {
        return Err(config(path, "at least one box is required"));
    }
    raw.iter()
        .enumerate()
        .map(|(i, b)| {
            if b.len() != ydim {
                return Err(config(format!("{path}[{i}]"), format!("box has {} axes, expected {ydim}", b.len())));
            }
            if b.iter().any(|[lo, hi]| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
                return Err(config(format!("{path}[{i}]"), "each axis needs finite lo <= hi"));
            }
            Ok(BoxDomain(b.clone()))
        })
        .collect()
}

fn check_alphas(alphas: &[Vec<u32>], nvars: usize, path: &str) -> Result<()> {
    if alphas.is_empty() {
        return Err(config(path, "at least one multi-index is required"));
    }
    for (i, a) in alphas.iter().enumerate() {
        if a.len() != nvars {
            return Err(config(format!("{path}[{i}]"), format!("{} entries, expected {nvars}", a.len())));
        }
        if a.iter().sum::<u32>() == 0 {
            return Err(config(format!("{path}[{i}]"), "order must be at least 1"));
        }
    }
    Ok(())
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(path.display().to_string(), format!("cannot read: {e}")))?;
        Scenario::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| {
            let at = e.span().map(|s| line_col(text, s.start));
            let message = match at {
                Some((l, c)) => format!("line {l}, column {c}: {}", e.message()),
                None => e.message().to_string(),
            };
            config("<document>", message)
        })?;
        let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = match inner.span().map(|s| line_col(text, s.start)) {
                Some((l, c)) => format!("line {l}, column {c}: {}", inner.message()),
                None => inner.message().to_string(),
            };
            config(path, message)
        })?;
        Scenario::validate(raw)
    }

    fn validate(raw: RawScenario) -> Result<Self> {
        let (relation, branches) = match raw.preset.as_deref() {
            Some("example-2-2") => (presets::circle_and_line(), presets::circle_and_line_branches()),
            Some("example-2-3") => (presets::cube_root_curve(), presets::cube_root_branches()),
            Some("example-2-4-family") => {
                let f = raw
                    .family
                    .as_ref()
                    .ok_or_else(|| config("family", "preset example-2-4-family needs a [family] table"))?;
                if f.k == 0 || f.k > f.nvars || f.nvars < 2 {
                    return Err(config("family.k", format!("k = {} outside 1..={}", f.k, f.nvars)));
                }
                let q = poly_field(&f.q, f.nvars, "family.q")?;
                let rel = presets::cubic_family(f.nvars, f.k, q).map_err(|e| config("family.q", e.to_string()))?;
                let boxes = boxes_field(&f.boxes, f.nvars - 1, "family.boxes")?;
                (rel, BranchSpec::new(vec![Branch::Numeric], boxes))
            }
            Some(other) => {
                return Err(config("preset", format!("unknown preset {other:?}; expected one of {}", PRESETS.join(", "))))
            }
            None => {
                let r = raw.relation.as_ref().ok_or_else(|| config("relation", "a preset or a [relation] table is required"))?;
                if r.k == 0 || r.k > r.nvars || r.nvars < 2 {
                    return Err(config("relation.k", format!("k = {} outside 1..={}", r.k, r.nvars)));
                }
                let q = r
                    .q
                    .iter()
                    .enumerate()
                    .map(|(i, s)| poly_field(s, r.nvars, &format!("relation.q[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let rel = VarietyRelation::new(r.nvars, r.k, q).map_err(|e| config("relation.q", e.to_string()))?;
                let b = raw.branches.as_ref().ok_or_else(|| config("branches", "a [branches] table is required"))?;
                if b.catalogue.is_empty() {
                    return Err(config("branches.catalogue", "at least one branch is required"));
                }
                let catalogue = b
                    .catalogue
                    .iter()
                    .enumerate()
                    .map(|(i, br)| {
                        let path = format!("branches.catalogue[{i}].radicand");
                        Ok(match br {
                            RawBranch::Zero => Branch::Zero,
                            RawBranch::Numeric => Branch::Numeric,
                            RawBranch::Sqrt { radicand } => Branch::Sqrt {
                                radicand: poly_field(radicand, r.nvars, &path)?,
                                sign: 1.0,
                            },
                            RawBranch::NegSqrt { radicand } => Branch::Sqrt {
                                radicand: poly_field(radicand, r.nvars, &path)?,
                                sign: -1.0,
                            },
                            RawBranch::Cbrt { radicand } => Branch::CubeRoot {
                                radicand: poly_field(radicand, r.nvars, &path)?,
                            },
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let boxes = boxes_field(&b.boxes, r.nvars - 1, "branches.boxes")?;
                (rel, BranchSpec::new(catalogue, boxes))
            }
        };
        let nvars = relation.nvars();
        if raw.density < MIN_DENSITY {
            return Err(config("density", format!("{} is below the minimum {MIN_DENSITY}", raw.density)));
        }
        if let Some(m) = &raw.markov {
            check_alphas(&m.alphas, nvars, "markov.alphas")?;
            if m.lmin == 0 || m.lmin > m.lmax {
                return Err(config("markov.lmin", format!("need 1 <= lmin <= lmax, got {}..={}", m.lmin, m.lmax)));
            }
            for (i, b) in m.bounds.iter().enumerate() {
                if !m.alphas.contains(&b.alpha) {
                    return Err(config(format!("markov.bounds[{i}].alpha"), "not among markov.alphas"));
                }
                if !(b.big_m > 0.0 && b.m > 0.0) {
                    return Err(config(format!("markov.bounds[{i}]"), "M and m must be positive"));
                }
            }
        }
        let approx = match &raw.approx {
            None => None,
            Some(a) => {
                let target = Target::from_name(&a.target).map_err(|e| config("approx.target", e.to_string()))?;
                if a.ladder.is_empty() {
                    return Err(config("approx.ladder", "at least one exponent is required"));
                }
                Some(ApproxBlock {
                    target,
                    lmax: a.lmax,
                    ladder: a.ladder.clone(),
                    precision: a.precision,
                })
            }
        };
        if let Some(c) = &raw.counterexample {
            if raw.preset.as_deref() != Some("example-2-3") {
                return Err(config("counterexample", "needs preset example-2-3"));
            }
            if c.nmax == 0 || c.nmax > MAX_ORDER {
                return Err(config("counterexample.nmax", format!("{} outside 1..={MAX_ORDER}", c.nmax)));
            }
        }
        if let Some(x) = &raw.extension {
            let a = approx.as_ref().ok_or_else(|| config("extension", "needs an [approx] block"))?;
            if x.level > a.lmax {
                return Err(config("extension.level", format!("{} beyond approx.lmax = {}", x.level, a.lmax)));
            }
            match x.r {
                Some(0) => return Err(config("extension.r", "must be at least 1")),
                None if raw.markov.is_none() => {
                    return Err(config("extension.r", "give r or a [markov] block to fit it from"));
                }
                _ => {}
            }
            if let Some(g) = &x.grid {
                if g.bounds.len() != nvars {
                    return Err(config("extension.grid.box", format!("{} axes, expected {nvars}", g.bounds.len())));
                }
                if g.count < 2 {
                    return Err(config("extension.grid.count", "at least 2 nodes per axis"));
                }
            }
        }
        if let Some(d) = &raw.determining {
            check_alphas(&d.alphas, nvars, "determining.alphas")?;
            if d.source == DeterminingSource::Counterexample && raw.preset.as_deref() != Some("example-2-3") {
                return Err(config("determining.source", "the counterexample sequence needs preset example-2-3"));
            }
            if d.source == DeterminingSource::Counterexample && d.lmax > MAX_ORDER {
                return Err(config("determining.lmax", format!("above {MAX_ORDER}")));
            }
        }
        Ok(Scenario {
            name: raw.name,
            preset: raw.preset,
            relation,
            branches,
            density: raw.density,
            seed: raw.seed,
            output: raw.output,
            markov: raw.markov,
            approx,
            counterexample: raw.counterexample,
            extension: raw.extension,
            determining: raw.determining,
        })
    }

    pub fn sample(&self) -> Result<SampleSet> {
        crate::geometry::sample_variety_set(&self.relation, &self.branches, self.density)
    }
}
