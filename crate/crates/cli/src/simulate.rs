use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use nsgm::gmpe::{predict_sa, CoefficientTable, HorizontalDef, Scenario};
use nsgm::io::{apply_config_text, numeric_csv, trace_csv, write_json, EnsembleManifest, ManifestMotion, SCHEMA_VERSION};
use nsgm::synth::{simulate_ensemble, GmpeTargets, SimulationConfig, SpectrumForm, SyntheticMotion};

use crate::emit;

#[derive(Args)]
pub struct SimulateArgs {
    /// `key = value` settings file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mw: Option<f64>,
    /// Rupture distance, km.
    #[arg(long)]
    rrup: Option<f64>,
    /// m/s.
    #[arg(long)]
    vs30: Option<f64>,
    /// Number of motions.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation of the AI, duration and central-frequency draws in σ units, or `none`.
    #[arg(long)]
    truncate_sigma: Option<String>,
    /// Time step, s.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    spectrum_form: Option<SpectrumForm>,
    #[arg(long)]
    hdef: Option<HorizontalDef>,
    /// Keep the synthesized amplitudes instead of rescaling to the sampled AI.
    #[arg(long)]
    no_rescale: bool,
    #[arg(long, default_value = "nsgm-out")]
    out_dir: PathBuf,
}

fn build_config(args: &SimulateArgs) -> Result<SimulationConfig> {
    let mut cfg = SimulationConfig::new(Scenario {
        mw: f64::NAN,
        rrup: f64::NAN,
        vs30: f64::NAN,
    });
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        apply_config_text(&mut cfg, &text).with_context(|| format!("in {}", path.display()))?;
    }
    let s = &mut cfg.scenario;
    s.mw = args.mw.unwrap_or(s.mw);
    s.rrup = args.rrup.unwrap_or(s.rrup);
    s.vs30 = args.vs30.unwrap_or(s.vs30);
    cfg.scenario = Scenario::new(s.mw, s.rrup, s.vs30).context("--mw, --rrup and --vs30 (or the config file) are required")?;
    if let Some(n) = args.n {
        cfg.n_sims = n;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(k) = &args.truncate_sigma {
        nsgm::io::set_config_value(&mut cfg, "truncate_sigma", k, 0).context("--truncate-sigma")?;
    }
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(form) = args.spectrum_form {
        cfg.spectrum_form = form;
    }
    if let Some(h) = args.hdef {
        cfg.hdef = h;
    }
    if args.no_rescale {
        cfg.exact_energy_rescale = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let x = q * (sorted.len() - 1) as f64;
    let (i, frac) = (x.floor() as usize, x.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

fn spectra_stats(motions: &[SyntheticMotion], table: &CoefficientTable, s: &Scenario) -> Result<Vec<u8>> {
    let periods = &motions[0].spectrum.periods;
    let mut rows = Vec::new();
    for (i, &p) in periods.iter().enumerate() {
        let mut ln: Vec<f64> = motions.iter().map(|m| m.spectrum.sa[i].ln()).collect();
        ln.sort_by(f64::total_cmp);
        let g = predict_sa(table, s, p)?;
        rows.push(vec![
            p,
            g.median(),
            g.sigma,
            percentile(&ln, 0.5).exp(),
            percentile(&ln, 0.16).exp(),
            percentile(&ln, 0.84).exp(),
        ]);
    }
    Ok(numeric_csv(
        &["period_s", "gmpe_median_g", "gmpe_sigma_ln", "sim_median_g", "sim_p16_g", "sim_p84_g"],
        rows,
    )?)
}

fn scalar_table(motions: &[SyntheticMotion]) -> Result<Vec<u8>> {
    Ok(numeric_csv(
        &[
            "index", "ai_sampled_ms", "ai_measured_ms", "dsr_sampled_s", "dsr_measured_s", "pga_g", "stress_drop_bar",
            "q0", "n_exponent", "fc_a", "fc_b",
        ],
        motions.iter().map(|m| {
            let p = &m.params;
            vec![
                m.index as f64,
                p.ai,
                m.measured.ai,
                p.dsr,
                m.measured.dsr,
                m.measured.pga_g,
                p.stress_drop,
                p.q0,
                p.n_exp,
                p.a,
                p.b,
            ]
        }),
    )?)
}

pub fn run(args: SimulateArgs, table: &CoefficientTable) -> Result<()> {
    let cfg = build_config(&args)?;
    let targets = GmpeTargets::new(table, &cfg)?;
    for w in targets.warnings() {
        eprintln!("warning: {} = {} is outside [{}, {}]", w.variable, w.value, w.min, w.max);
    }
    let motions = simulate_ensemble(&cfg, table)?;

    let dir = &args.out_dir;
    let mut entries = Vec::with_capacity(motions.len());
    for m in &motions {
        let name = format!("traces/sim_{:05}.csv", m.index);
        emit(Some(&dir.join(&name)), &trace_csv(&m.ts)?)?;
        entries.push(ManifestMotion::from_motion(m, Some(name)));
    }
    emit(Some(&dir.join("ensemble_spectra.csv")), &spectra_stats(&motions, table, &cfg.scenario)?)?;
    emit(Some(&dir.join("ensemble_scalars.csv")), &scalar_table(&motions)?)?;
    let manifest = EnsembleManifest {
        schema_version: SCHEMA_VERSION,
        config: cfg,
        warnings: targets.warnings().to_vec(),
        motions: entries,
    };
    write_json(&dir.join("ensemble.json"), &manifest)?;
    eprintln!("{} motions written to {}", motions.len(), dir.display());
    Ok(())
}
