//! Volume sweeps, power-law fits, verification suites and report files.

mod config;
mod fit;
mod report;
mod sweep;
mod verify;

pub use config::{SolverOptions, SweepConfig, VolumeGrid};
pub use fit::{fit_power_law, PowerLawFit};
pub use report::{emit_report, write_trace_csv, Report, CSV_HEADER};
pub use sweep::{
    deficit_envelope, fit_sweep, r0_envelope, record_from_result, run_sweep, Envelope, SweepFits, SweepRecord,
};
pub use verify::{isoperimetry_suite, lemma_table_csv, CorpusConfig, IsoSuite};
