//! Measurement harness for the plain and shaped message populations.
//!
//! Exhaustive runs walk all of `A^N`; sampled runs draw i.i.d. messages from
//! a seeded source. Both report, for the plain messages and for their
//! transforms, the mean weighted entropy `N·H0`, mean alphabet usage, and the
//! compressed size (payload + coding scheme) for each scheme format.

mod census;
mod config;
mod report;
mod run;
mod source;
mod table;

pub use census::{type_class_census, CensusReport, CensusSide};
pub use config::{parse_key_values, Execution, ExperimentConfig, Mode, DEFAULT_EXHAUSTIVE_CAP};
pub use report::{ExperimentReport, References, SchemeComparison, SchemeSide, SideReport};
pub use run::{run_exhaustive, run_exhaustive_with, run_sampled, run_sampled_with, Tally};
pub use source::{source_entropy, SourceSpec};
pub use table::{reproduce_table, shaping_table, TableRow, TABLE_HEADER};
