//! Log ingestion, run configuration, the analysis pipeline and
//! serialization of signatures, baselines and reports.

pub mod analyze;
pub mod config;
pub mod log;
pub mod store;

pub use analyze::{analyze, analyze_records, segment, symbolize, Mode};
pub use config::{BaselineSegment, EpisodeBoundary, RunConfig};
pub use log::{parse_log, read_log, write_log, LogReader, StateStream, TransitionRecord};
pub use store::{emit_csv, load_baseline, load_policy, save_baseline, save_policy, save_report, write_csv};
