//! Library surface of the CLI, exposed so integration tests can parse run
//! configurations and records with the same types the binary uses.

// NaN-rejecting parameter guards are written as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
