//! Benchmark driver for `fairorient`: replays update streams, measures
//! engine time and heap use, and summarises results tables as performance
//! profiles or geometric means.

pub mod error;
pub mod measure;
pub mod profile;
pub mod table;

pub use error::{BenchError, Result};
pub use measure::{run_all, run_cell, Cell, Instance, Mode, Reference, RunConfig};
pub use profile::{geomean, profile, Objective, Profile};
pub use table::{read_rows, write_rows, Extras, Row, Status};
