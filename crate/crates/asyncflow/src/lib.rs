//! File formats, reports, census driver and command-line front end for
//! `asyncflow-core`.
//!
//! Every bit string in every format puts coordinate 1 leftmost: `10` is the
//! state with `μ1 = 1, μ2 = 0`.

pub mod census;
pub mod cli;
pub mod error;
pub mod model;
pub mod pairs;
pub mod permutation;
pub mod portrait;
pub mod report;
pub mod schedule_text;

pub use error::{Error, ParseError, Result};
pub use model::{parse_model, ModelDocument};
pub use schedule_text::{parse_schedule, print_schedule};
