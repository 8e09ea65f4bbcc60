//! Markov factors on sampled sets, exponent fits, and the inequality checks
//! built from them.

mod factor;
mod report;

pub use factor::{derivative_rows, markov_factor, markov_factor_exhaustive, MarkovFactor};
pub use report::{
    check_fmarkov_bound, fit_exponent, growth_property_check, least_squares, lemma_coeff_bound_check, log_log_slope,
    random_coefficients, Ambient, BoundCheck, BoundForm, CoefficientBoundRow, ExponentFit, GradingKind, GrowthCheck,
    MarkovReport, MarkovRow, random_spot_check, SpotCheck, DEFAULT_SEED,
};
