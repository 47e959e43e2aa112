//! Verification of business workflows with exception recovery.
//!
//! A workflow is compiled into a past-time LTL model formula; temporal
//! properties are checked by bounded satisfiability of `model ∧ ¬property`
//! over lasso-shaped traces.

pub mod bsc;
pub mod cli;
pub mod compiler;
pub mod ltl;
pub mod oracle;
pub mod workflow;
