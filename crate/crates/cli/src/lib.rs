//! Library half of the `weyl-lab` command-line tool: spec files, command
//! dispatch and report serialisation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod report;
pub mod spec_file;

pub use commands::{run, Command, KernelChoice, Outcome, Params, RunError};
pub use report::{emit, Format, Report};
pub use spec_file::{parse_spec, NumericPolicy, Operator, OperatorSpecFile, SpecError};
