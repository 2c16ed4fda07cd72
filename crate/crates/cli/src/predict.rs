use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use nsgm::gmpe::{
    predict_ai, predict_dsr, predict_fc_params, predict_sa, CoefficientTable, HorizontalDef, Prediction,
    RangeWarning, Scale, Scenario, Units,
};
use nsgm::ResponseSpectrum;
use serde::Serialize;

use crate::emit;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Param {
    Sa,
    Ai,
    Dsr,
    Fc,
    All,
}

#[derive(Args)]
pub struct PredictArgs {
    #[arg(long)]
    mw: f64,
    /// Rupture distance, km.
    #[arg(long)]
    rrup: f64,
    /// m/s.
    #[arg(long)]
    vs30: f64,
    #[arg(long, value_enum, default_value = "all")]
    param: Param,
    /// Horizontal-component definition for AI and duration.
    #[arg(long, default_value = "GM")]
    hdef: HorizontalDef,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the median SA spectrum as CSV (usable as a selection target).
    #[arg(long, value_name = "CSV")]
    spectrum_csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct Entry {
    target: String,
    /// Period in s for spectral ordinates.
    period: Option<f64>,
    median: f64,
    units: Units,
    mean: f64,
    scale: Scale,
    phi: f64,
    tau: f64,
    sigma: f64,
}

#[derive(Serialize)]
struct Output {
    scenario: Scenario,
    warnings: Vec<RangeWarning>,
    notes: Vec<String>,
    predictions: Vec<Entry>,
}

fn entry(target: &str, period: Option<f64>, p: &Prediction) -> Entry {
    Entry {
        target: target.into(),
        period,
        median: p.median(),
        units: p.units,
        mean: p.mean,
        scale: p.scale,
        phi: p.phi,
        tau: p.tau,
        sigma: p.sigma,
    }
}

pub fn run(args: PredictArgs, table: &CoefficientTable) -> Result<()> {
    let s = Scenario::new(args.mw, args.rrup, args.vs30)?;
    let want = |p| args.param == p || args.param == Param::All;
    let mut predictions = Vec::new();
    let mut notes = Vec::new();
    if want(Param::Sa) {
        for period in table.periods() {
            let p = predict_sa(table, &s, period)?;
            predictions.push(entry(if period == 0.0 { "PGA" } else { "SA" }, Some(period), &p));
        }
    }
    if want(Param::Ai) {
        predictions.push(entry("AI", None, &predict_ai(table, &s, args.hdef)?));
    }
    if want(Param::Dsr) {
        predictions.push(entry("DSR", None, &predict_dsr(table, &s, args.hdef)?));
    }
    if want(Param::Fc) {
        match predict_fc_params(table, &s) {
            Ok((a, b)) => {
                predictions.push(entry("FC_A", None, &a));
                predictions.push(entry("FC_B", None, &b));
            }
            Err(e) if args.param == Param::All => notes.push(format!("central-frequency parameters skipped: {e}")),
            Err(e) => bail!(e),
        }
    }
    if let Some(path) = &args.spectrum_csv {
        let sa: Vec<&Entry> = predictions.iter().filter(|e| e.period.is_some()).collect();
        if sa.is_empty() {
            bail!("--spectrum-csv needs --param sa or all");
        }
        let spectrum = ResponseSpectrum::new(
            sa.iter().map(|e| e.period.unwrap_or(0.0)).collect(),
            sa.iter().map(|e| e.median).collect(),
        )?;
        emit(Some(path), &nsgm::io::spectrum_csv(&spectrum)?)?;
    }
    let warnings = s.range_warnings();
    for w in &warnings {
        eprintln!("warning: {} = {} is outside [{}, {}]", w.variable, w.value, w.min, w.max);
    }
    let out = Output {
        scenario: s,
        warnings,
        notes,
        predictions,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(args.out.as_deref(), text.as_bytes())
}
