//! Discretized compact sets on the hypersurface, their projections and
//! neighbourhoods, sup norms over them, and smooth bump functions.

mod branch;
mod bump;
mod sample;

pub use branch::{lobatto_nodes, real_roots, BoxDomain, Branch, BranchSpec};
pub use bump::{profile, BumpFunction};
pub use sample::{
    inflate_set, on_variety, project_pi, refine_check, sample_variety_set, sup_norm, Provenance, RefineCheck,
    SampleSet, Source, SupNorm, MEMBERSHIP_TOLERANCE, MERGE_TOLERANCE, MIN_DENSITY, REFINE_CERTIFY,
};
