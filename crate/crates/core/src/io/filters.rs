//! Record-selection rules for building a rock-site, shallow-crustal dataset.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ScalarMetrics;
use crate::series::GAL;

pub const MIN_MW: f64 = 4.5;
pub const MIN_VS30: f64 = 500.0;
pub const MAX_DEPTH_KM: f64 = 25.0;
pub const MIN_PGA_GAL: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    Rupture,
    Hypocentral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Network {
    #[serde(rename = "K-NET")]
    KNet,
    #[serde(rename = "KiK-net")]
    KikNet,
}

impl FromStr for DistanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rupture" | "rrup" => Ok(Self::Rupture),
            "hypocentral" | "rhyp" => Ok(Self::Hypocentral),
            other => Err(Error::InvalidArgument(format!("unknown distance kind '{other}'"))),
        }
    }
}

impl FromStr for Network {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "knet" => Ok(Self::KNet),
            "kiknet" => Ok(Self::KikNet),
            other => Err(Error::InvalidArgument(format!("unknown network '{other}'"))),
        }
    }
}

/// One row of station/event metadata. Missing values are `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RecordMetadata {
    pub id: String,
    pub mw: Option<f64>,
    pub depth_km: Option<f64>,
    pub distance_km: Option<f64>,
    pub distance_kind: Option<DistanceKind>,
    pub vs30: Option<f64>,
    pub network: Option<Network>,
    pub pga_gal: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterRule {
    IncompleteMetadata,
    Magnitude,
    Vs30,
    Depth,
    Pga,
    /// Caller-supplied magnitude–distance cut.
    External,
}

impl FilterRule {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::IncompleteMetadata => "incomplete-metadata",
            Self::Magnitude => "magnitude",
            Self::Vs30 => "vs30",
            Self::Depth => "depth",
            Self::Pga => "pga",
            Self::External => "external",
        }
    }
}

impl fmt::Display for FilterRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub id: String,
    pub accepted: bool,
    /// First failing rule; `None` when accepted.
    pub rule: Option<FilterRule>,
}

fn finite(v: Option<f64>) -> Option<f64> {
    v.filter(|x| x.is_finite())
}

/// Applies the rules in a fixed order and reports the first that fails.
/// When `metrics` is given its PGA replaces the metadata value.
pub fn apply_dataset_filters(
    meta: &RecordMetadata,
    metrics: Option<&ScalarMetrics>,
    external: Option<&dyn Fn(&RecordMetadata) -> bool>,
) -> FilterReport {
    let pga_gal = metrics.map(|m| m.pga / GAL).or(meta.pga_gal);
    let reject = |rule| FilterReport {
        id: meta.id.clone(),
        accepted: false,
        rule: Some(rule),
    };
    let (Some(mw), Some(depth), Some(_), Some(_), Some(vs30), Some(_), Some(pga)) = (
        finite(meta.mw),
        finite(meta.depth_km),
        finite(meta.distance_km),
        meta.distance_kind,
        finite(meta.vs30),
        meta.network,
        finite(pga_gal),
    ) else {
        return reject(FilterRule::IncompleteMetadata);
    };
    if mw < MIN_MW {
        return reject(FilterRule::Magnitude);
    }
    if vs30 < MIN_VS30 {
        return reject(FilterRule::Vs30);
    }
    if depth > MAX_DEPTH_KM {
        return reject(FilterRule::Depth);
    }
    if pga < MIN_PGA_GAL {
        return reject(FilterRule::Pga);
    }
    if let Some(pred) = external {
        if !pred(meta) {
            return reject(FilterRule::External);
        }
    }
    FilterReport {
        id: meta.id.clone(),
        accepted: true,
        rule: None,
    }
}

#[derive(Debug, Deserialize)]
struct MetadataRow {
    id: String,
    mw: Option<String>,
    depth_km: Option<String>,
    distance_km: Option<String>,
    distance_kind: Option<String>,
    vs30: Option<String>,
    network: Option<String>,
    pga_gal: Option<String>,
}

fn cell<T: FromStr>(v: Option<String>) -> Option<T> {
    v.map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).and_then(|s| s.parse().ok())
}

/// Reads metadata CSV with header
/// `id,mw,depth_km,distance_km,distance_kind,vs30,network,pga_gal`.
/// Empty or unparsable cells become missing values.
pub fn read_metadata_csv<R: Read>(reader: R) -> Result<Vec<RecordMetadata>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<MetadataRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        out.push(RecordMetadata {
            id: row.id,
            mw: cell(row.mw),
            depth_km: cell(row.depth_km),
            distance_km: cell(row.distance_km),
            distance_kind: cell(row.distance_kind),
            vs30: cell(row.vs30),
            network: cell(row.network),
            pga_gal: cell(row.pga_gal),
        });
    }
    Ok(out)
}
