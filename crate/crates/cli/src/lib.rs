//! Scenario driver for cavity particle-production runs: JSON configs in,
//! CSV/JSON artifacts out. The physics lives in the `rindler-cavity` crate;
//! this one only orchestrates sweeps, comparisons and reports.

// Validation code writes `!(x > 0.0)` rather than `x <= 0.0` on purpose: the
// negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod runner;
pub mod scenario;

pub use runner::{
    compare, csv_body, format_float, galilean_report, log_log_slope, run, CompareReport,
    GalileanReport, SweepResult, SweepRow, COMPARE_TOLERANCE, CSV_HEADER,
};
pub use scenario::{parse_log_range, Medium, ScenarioConfig, ScenarioError, Sweep};
