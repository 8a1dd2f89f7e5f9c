//! Command-line frontend for `polar-core`: CSV/JSON reports, gnuplot data
//! and the `verify` suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod format;
pub mod oracle;
pub mod plot;
pub mod report;
pub mod verify;
