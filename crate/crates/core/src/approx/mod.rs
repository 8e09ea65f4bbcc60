//! Best uniform approximation on the variety, decay of approximation errors,
//! and the special functions behind the cube-root counterexample.

mod counterexample;
mod series;
mod special;

pub use counterexample::{
    counterexample_decay, counterexample_norm, counterexample_poly, series_coefficients, tail_closed_form,
    tail_direct, CounterexampleNorm, DecayRow, DIRECT_TERMS, MAX_ORDER, TAIL_AGREEMENT,
};
pub use series::{
    decay_diagnostic, metric_projection, rapid_decrease_diagnostic, seminorm_delta, ApproxSeries, DecayDiagnostic,
    DecayRung, Projection, Seminorm, Target, Verdict, MIN_WINDOW,
};
pub use special::{
    gamma, gamma_quotient, gamma_ratio_limit_check, gauss_2f1, ln_gamma, log_pochhammer, pochhammer, GammaRatioRow,
    GAMMA_NEG_THIRD,
};
