//! Run orchestration for the laboratory: configuration loading with
//! fail-closed validation, experiment dispatch, and deterministic result
//! persistence (CSV series, JSON report, run manifest).

// `!(x > 0.0)`-style guards are deliberate: they reject NaN along with
// the out-of-range value.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod runner;
