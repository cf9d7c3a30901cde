//! Grüss-type inequality checks for positive maps, the counterexample
//! harness and seeded sweeps.

mod checks;
mod counterexample;
mod report;
mod sweep;

pub use checks::{
    block_gram, bpr_constant, bpr_not_above_classical, check_ball_variance, check_discrete_gruss, check_field_gruss,
    check_gruss_norm, check_gruss_operator, check_hadamard_gruss, check_scalar_gruss, check_variance_bound,
    hadamard_via_isometry, kadison_defect, selective_isometry, BlockGram, Bounds, CheckOptions, GrussInstance,
    KadisonDefect,
};
pub use counterexample::{choi_counterexample, counterexample_operands, CounterexampleBundle};
pub use report::{
    format_float, reports_to_csv, slack_ok, CheckId, Dims, InequalityReport, InputDigest, CSV_COLUMNS,
    DEFAULT_SLACK_TOL, OPERATOR_ORDER,
};
pub use sweep::{
    aggregate, run_trial, sweep, CheckConfig, Family, RankChoice, Suite, SweepAggregate, TrialError, TrialOutcome,
    Witness,
};
