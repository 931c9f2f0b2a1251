//! Scenario orchestration: configuration, the per-sample loop, metrics and
//! export.

pub mod export;
pub mod metrics;
pub mod plot;
pub mod run;
pub mod scenario;

pub use export::{export, read_csv, ExportFormat, CSV_HEADER};
pub use metrics::{compute_metrics, Metrics};
pub use run::{
    chirp_derivative, chirp_maxima, chirp_signal, crisis_free_reference, run, run_chirp_demo,
    run_closed_loop, run_open_loop, RunRecord, RunRow,
};
pub use scenario::{parse_config, ChirpSpec, OutputSignal, ReferenceSpec, ScenarioKind, ScenarioSpec};
