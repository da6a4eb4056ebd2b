//! Representatives of the uncertainty classes and empirical tests on them.
//!
//! Static maps are continuous piecewise-linear, so slope conditions are
//! finite checks over segments. Membership is decided exactly where that is
//! possible and backed by randomized IQC spot checks; non-membership comes
//! with an explicit witness signal or frequency/shift pair.

mod falsify;
mod iqc;
mod lti;
mod membership;
mod nonlinearity;
mod signal;

pub use falsify::{
    block_integrals, block_trace, decreasing_pair, falsify_noneven_odd, falsify_nonmonotone,
    falsify_nonmonotone_with_pair, sampled_shift_integrals, NonmonotoneWitness, OddConstruction, OddReport,
    OddWitness, BLOCK_DT, BLOCK_SAMPLES, ODD_SEARCH_POINTS,
};
pub use iqc::{convolve, iqc_inner_product, random_candidate, random_trace};
pub use lti::{
    analytic_witness, lti_membership_test, shift_condition, LtiReport, LtiUncertainty, LtiWitness, WitnessCase,
    CONSTANT_TOL,
};
pub use membership::{
    homotopy_sweep, membership_test_static, HomotopyReport, HomotopyStep, SlopeWitness, StaticReport,
    HOMOTOPY_TRIALS, IQC_TOL, SLOPE_TOL, TRIAL_DT, TRIAL_SAMPLES,
};
pub use nonlinearity::{StaticNonlinearity, SYMMETRY_TOL};
pub use signal::SignalTrace;
