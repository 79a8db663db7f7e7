//! File formats, experiment drivers and the `perturbed` command line for
//! [`perturbed_core`].

pub mod experiments;
pub mod io;

pub use experiments::{mc_threshold, tightness_report, FrequencyTable, Method, StdClock, TrialRecord, Verdict};
pub use io::{FormatError, RunConfig};
