//! JSON manifests for simulated ensembles and selections.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmpe::RangeWarning;
use crate::metrics::ScalarMetrics;
use crate::spectrum::ResponseSpectrum;
use crate::synth::{EnvelopeSpec, RankedMotion, SampledParams, SimulationConfig, SyntheticMotion};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestMotion {
    pub index: u64,
    /// Trace CSV, relative to the manifest.
    pub trace_file: Option<String>,
    pub params: SampledParams,
    pub envelope: EnvelopeSpec,
    pub measured: ScalarMetrics,
    pub spectrum: ResponseSpectrum,
    pub rescale: f64,
}

impl ManifestMotion {
    pub fn from_motion(m: &SyntheticMotion, trace_file: Option<String>) -> Self {
        Self {
            index: m.index,
            trace_file,
            params: m.params,
            envelope: m.envelope.clone(),
            measured: m.measured,
            spectrum: m.spectrum.clone(),
            rescale: m.rescale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub schema_version: u32,
    pub config: SimulationConfig,
    pub warnings: Vec<RangeWarning>,
    pub motions: Vec<ManifestMotion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionManifest {
    pub schema_version: u32,
    pub ensemble: String,
    pub target: String,
    pub k: usize,
    pub ranked: Vec<RankedMotion>,
    pub motions: Vec<ManifestMotion>,
}

fn check_version(value: &serde_json::Value) -> Result<()> {
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => Ok(()),
        Some(v) => Err(Error::InvalidArgument(format!(
            "manifest schema version {v} is not supported (expected {SCHEMA_VERSION})"
        ))),
        None => Err(Error::InvalidArgument("manifest has no schema_version".into())),
    }
}

pub fn read_ensemble_manifest(path: &Path) -> Result<EnsembleManifest> {
    let value: serde_json::Value = serde_json::from_slice(&std::fs::read(path)?)?;
    check_version(&value)?;
    Ok(serde_json::from_value(value)?)
}

pub fn read_selection_manifest(path: &Path) -> Result<SelectionManifest> {
    let value: serde_json::Value = serde_json::from_slice(&std::fs::read(path)?)?;
    check_version(&value)?;
    Ok(serde_json::from_value(value)?)
}
