#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! File formats, experiment drivers, the acceptance suite and the command
//! line for [`gaplab_core`].

pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod parallel;
pub mod report;
pub mod spec;
pub mod verify;

pub use error::{Error, Result};
