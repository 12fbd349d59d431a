//! Slotted simulation of a controller on a channel, with certification of
//! the proved sample-path inequalities and CSV/JSON/SVG output.

pub mod config;
pub mod output;
pub mod run;
pub mod svg;

pub use config::{
    BaselineKind, ChannelSpec, ControllerSpec, CsitSpec, ExperimentConfig, OutputSpec, RateAdaptSpec,
    PRESET_NAMES,
};
pub use output::{csv_string, emit_outputs, read_csv, write_csv, CSV_HEADER};
pub use run::{
    certify, compute_baseline, default_baseline_kind, load_baseline, run_experiment, training_samples,
    BaselinePolicy, CertContext, CertKind, Certificate, LedgerSummary, Reference, ReferenceKind, RunOutput,
    RunSummary, SlotRecord, CERT_SLACK, UTILITY_ALLOWANCE,
};
pub use svg::render_svg;
