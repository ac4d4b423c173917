//! Entropy and mutual-information signatures over state-action-next-state
//! transition streams, with drift detection and sensor/actuator fault
//! diagnosis.

pub mod counts;
pub mod error;
pub mod infometrics;
pub mod io;
pub mod monitor;
pub mod pipeline;
pub mod simlab;
pub mod symbolizer;

pub use error::{Error, Result};
