use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use nsgm::io::{apply_dataset_filters, parse_strong_motion, read_metadata_csv, trace_csv};
use serde::Serialize;

use crate::emit;

#[derive(Args)]
pub struct ParseArgs {
    file: PathBuf,
    /// Directory for `<name>.csv` and `<name>.header.json`.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
pub struct FilterArgs {
    /// Columns: id,mw,depth_km,distance_km,distance_kind,vs30,network,pga_gal.
    metadata: PathBuf,
    /// Report CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Header<'a> {
    source: String,
    samples: usize,
    dt: f64,
    header: &'a [(String, String)],
}

pub fn parse(args: ParseArgs) -> Result<()> {
    let bytes = std::fs::read(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let (file, ts) = parse_strong_motion(&bytes).with_context(|| format!("parsing {}", args.file.display()))?;
    let stem = args
        .file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "record".into());
    emit(Some(&args.out_dir.join(format!("{stem}.csv"))), &trace_csv(&ts)?)?;
    let header = Header {
        source: args.file.display().to_string(),
        samples: ts.len(),
        dt: ts.dt(),
        header: &file.header,
    };
    nsgm::io::write_json(&args.out_dir.join(format!("{stem}.header.json")), &header)?;
    Ok(())
}

pub fn filter(args: FilterArgs) -> Result<()> {
    let file = std::fs::File::open(&args.metadata).with_context(|| format!("reading {}", args.metadata.display()))?;
    let rows = read_metadata_csv(file).with_context(|| format!("parsing {}", args.metadata.display()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "accepted", "rule"])?;
    for r in &rows {
        let rep = apply_dataset_filters(r, None, None);
        w.write_record([
            rep.id.as_str(),
            if rep.accepted { "true" } else { "false" },
            rep.rule.map(|r| r.as_str()).unwrap_or(""),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    emit(args.out.as_deref(), &bytes)
}
