use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use nsgm::io::{fmt_num, parse_strong_motion, read_trace_csv};
use nsgm::tf::{central_frequency_series, fit_fc_model, pick_p_arrival, s_transform, transform_grid, FcFit, PickerConfig};
use nsgm::{compute_default_response_spectrum, compute_scalar_metrics, compute_snr, ScalarMetrics, TimeSeries};
use rayon::prelude::*;

use crate::emit;

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Strong-motion files, or trace CSVs (`t_s,acc_ms2`) with a .csv extension.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// CSV output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use this P-arrival time (s) instead of the STA/LTA pick.
    #[arg(long)]
    p_arrival: Option<f64>,
}

struct Row {
    file: String,
    metrics: ScalarMetrics,
    p_arrival: Option<f64>,
    fit: Result<FcFit, String>,
    sa: Vec<f64>,
}

fn load(path: &Path) -> Result<TimeSeries> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let ts = if is_csv {
        read_trace_csv(bytes.as_slice())
    } else {
        parse_strong_motion(&bytes).map(|(_, ts)| ts)
    };
    ts.with_context(|| format!("parsing {}", path.display()))
}

fn fc_fit(ts: &TimeSeries, t_p: f64, t95: f64) -> nsgm::Result<FcFit> {
    let start = (t_p - 1.0).max(ts.t0());
    let end = (t95 + 1.0).min(ts.end_time());
    let crop = ts.window(start, end)?;
    let freqs = transform_grid(&crop, 0.0, crop.nyquist());
    let snr = compute_snr(&crop, t_p, &freqs)?;
    let map = s_transform(&crop, &freqs)?;
    let series = central_frequency_series(&map, &snr, (t_p, t95))?;
    fit_fc_model(&series, &map)
}

fn analyze(path: &Path, p_arrival: Option<f64>) -> Result<Row> {
    let ts = load(path)?;
    let metrics = compute_scalar_metrics(&ts).with_context(|| format!("metrics of {}", path.display()))?;
    let pick = match p_arrival {
        Some(t) => Ok(t),
        None => pick_p_arrival(&ts, &PickerConfig::default()),
    };
    let fit = match &pick {
        Ok(t_p) => fc_fit(&ts, *t_p, metrics.t95).map_err(|e| e.to_string()),
        Err(e) => Err(format!("P pick: {e}")),
    };
    Ok(Row {
        file: path.display().to_string(),
        metrics,
        p_arrival: pick.ok(),
        fit,
        sa: compute_default_response_spectrum(&ts).sa,
    })
}

pub fn run(args: AnalyzeArgs) -> Result<()> {
    let rows = args
        .files
        .par_iter()
        .map(|p| analyze(p, args.p_arrival))
        .collect::<Result<Vec<_>>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = [
        "file", "pga_ms2", "pga_g", "ai_ms", "t5_s", "t95_s", "dsr_s", "p_arrival_s", "fc_a", "fc_b", "fc_branch",
        "fc_note",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(nsgm::TABULATED_PERIODS.iter().map(|p| {
        if *p == 0.0 {
            "sa_pga_g".to_string()
        } else {
            format!("sa_{p}s_g")
        }
    }));
    w.write_record(&header)?;
    for r in rows {
        let m = r.metrics;
        let mut rec = vec![r.file];
        rec.extend([m.pga, m.pga_g, m.ai, m.t5, m.t95, m.dsr].map(fmt_num));
        rec.push(r.p_arrival.map(fmt_num).unwrap_or_default());
        match &r.fit {
            Ok(f) => rec.extend([fmt_num(f.a), fmt_num(f.b), f.branch.to_string(), String::new()]),
            Err(e) => rec.extend([String::new(), String::new(), String::new(), e.clone()]),
        }
        rec.extend(r.sa.iter().map(|&v| fmt_num(v)));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    emit(args.out.as_deref(), &bytes)
}
