use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use nsgm::gmpe::CoefficientTable;
use nsgm::io::{read_ensemble_manifest, read_spectrum_csv, SelectionManifest, SCHEMA_VERSION};
use nsgm::synth::{gmpe_target_spectrum, select_spectra};

use crate::emit;

#[derive(Args)]
pub struct SelectArgs {
    /// Ensemble manifest written by `simulate`.
    #[arg(long)]
    ensemble: PathBuf,
    /// Target spectrum CSV (`period_s,sa_g`); the scenario's GMPE median when absent.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Number of motions to keep.
    #[arg(long)]
    k: usize,
    /// Selection manifest; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: SelectArgs, table: &CoefficientTable) -> Result<()> {
    let ensemble = read_ensemble_manifest(&args.ensemble)
        .with_context(|| format!("reading {}", args.ensemble.display()))?;
    let (target, target_name) = match &args.target {
        Some(p) => {
            let file = std::fs::File::open(p).with_context(|| format!("reading {}", p.display()))?;
            let s = read_spectrum_csv(file).with_context(|| format!("parsing {}", p.display()))?;
            (s, p.display().to_string())
        }
        None => (gmpe_target_spectrum(table, &ensemble.config.scenario)?, "gmpe-median".to_string()),
    };
    let chosen = select_spectra(ensemble.motions.iter().map(|m| (m.index, &m.spectrum)), &target, args.k)?;
    let motions = chosen
        .ranked
        .iter()
        .filter_map(|r| ensemble.motions.iter().find(|m| m.index == r.index).cloned())
        .collect();
    let out = SelectionManifest {
        schema_version: SCHEMA_VERSION,
        ensemble: args.ensemble.display().to_string(),
        target: target_name,
        k: args.k,
        ranked: chosen.ranked,
        motions,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(args.out.as_deref(), text.as_bytes())
}
