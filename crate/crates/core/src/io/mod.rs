//! File formats: strong-motion records, dataset filters, CSV/JSON outputs
//! and simulation settings.

pub mod config_file;
pub mod filters;
pub mod formats;
pub mod knet;
pub mod manifest;

pub use config_file::{apply_config_text, set_config_value, CONFIG_KEYS};
pub use filters::{
    apply_dataset_filters, read_metadata_csv, DistanceKind, FilterReport, FilterRule, Network, RecordMetadata,
};
pub use formats::{
    atomic_write, fmt_num, numeric_csv, read_spectrum_csv, read_trace_csv, spectrum_csv, trace_csv, write_json,
};
pub use knet::{parse_strong_motion, write_strong_motion, StrongMotionFile, HEADER_ALIASES};
pub use manifest::{
    read_ensemble_manifest, read_selection_manifest, EnsembleManifest, ManifestMotion, SelectionManifest,
    SCHEMA_VERSION,
};
