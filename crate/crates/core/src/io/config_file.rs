//! `key = value` simulation settings. Keys mirror the fields of
//! [`SimulationConfig`]; nested and paired fields use `envelope.*` and
//! `_min`/`_max` suffixes.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::synth::SimulationConfig;

pub const CONFIG_KEYS: &[&str] = &[
    "mw",
    "rrup",
    "vs30",
    "n_sims",
    "dt",
    "master_seed",
    "truncate_sigma",
    "stress_drop_log10_min",
    "stress_drop_log10_max",
    "q0_min",
    "q0_max",
    "n_exponent_min",
    "n_exponent_max",
    "beta",
    "spectrum_form",
    "exact_energy_rescale",
    "hdef",
    "slice_duration",
    "slice_merge_tolerance",
    "envelope.fraction_p",
    "envelope.fraction_s",
    "envelope.fraction_coda",
    "envelope.pre_pad",
    "envelope.p_log_sd",
    "envelope.s_log_sd",
    "envelope.p_median_sp",
    "envelope.p_median_s",
    "envelope.coda_decay_cap",
    "envelope.tail_threshold",
    "envelope.calibration_tolerance",
    "envelope.max_iterations",
];

fn value<T: FromStr>(v: &str, line: usize, key: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad value '{v}' for {key}"),
    })
}

/// Sets one field from its textual form.
pub fn set_config_value(cfg: &mut SimulationConfig, key: &str, v: &str, line: usize) -> Result<()> {
    let v = v.trim();
    let f = |v: &str| value::<f64>(v, line, key);
    match key {
        "mw" => cfg.scenario.mw = f(v)?,
        "rrup" => cfg.scenario.rrup = f(v)?,
        "vs30" => cfg.scenario.vs30 = f(v)?,
        "n_sims" => cfg.n_sims = value(v, line, key)?,
        "dt" => cfg.dt = f(v)?,
        "master_seed" => cfg.master_seed = value(v, line, key)?,
        "truncate_sigma" => {
            cfg.truncate_sigma = match v.to_ascii_lowercase().as_str() {
                "none" | "off" => None,
                _ => Some(f(v)?),
            }
        }
        "stress_drop_log10_min" => cfg.stress_drop_log10_bounds.0 = f(v)?,
        "stress_drop_log10_max" => cfg.stress_drop_log10_bounds.1 = f(v)?,
        "q0_min" => cfg.q0_bounds.0 = f(v)?,
        "q0_max" => cfg.q0_bounds.1 = f(v)?,
        "n_exponent_min" => cfg.n_exponent_bounds.0 = f(v)?,
        "n_exponent_max" => cfg.n_exponent_bounds.1 = f(v)?,
        "beta" => cfg.beta = f(v)?,
        "spectrum_form" => cfg.spectrum_form = value(v, line, key)?,
        "exact_energy_rescale" => cfg.exact_energy_rescale = value(v, line, key)?,
        "hdef" => cfg.hdef = value(v, line, key)?,
        "slice_duration" => cfg.slice_duration = f(v)?,
        "slice_merge_tolerance" => cfg.slice_merge_tolerance = f(v)?,
        "envelope.fraction_p" => cfg.envelope.fractions[0] = f(v)?,
        "envelope.fraction_s" => cfg.envelope.fractions[1] = f(v)?,
        "envelope.fraction_coda" => cfg.envelope.fractions[2] = f(v)?,
        "envelope.pre_pad" => cfg.envelope.pre_pad = f(v)?,
        "envelope.p_log_sd" => cfg.envelope.p_log_sd = f(v)?,
        "envelope.s_log_sd" => cfg.envelope.s_log_sd = f(v)?,
        "envelope.p_median_sp" => cfg.envelope.p_median_sp = f(v)?,
        "envelope.p_median_s" => cfg.envelope.p_median_s = f(v)?,
        "envelope.coda_decay_cap" => cfg.envelope.coda_decay_cap = f(v)?,
        "envelope.tail_threshold" => cfg.envelope.tail_threshold = f(v)?,
        "envelope.calibration_tolerance" => cfg.envelope.calibration_tolerance = f(v)?,
        "envelope.max_iterations" => cfg.envelope.max_iterations = value(v, line, key)?,
        other => {
            return Err(Error::Parse {
                line,
                message: format!("unknown key '{other}'"),
            })
        }
    }
    Ok(())
}

/// Applies a settings file on top of `cfg`. `#` starts a comment.
pub fn apply_config_text(cfg: &mut SimulationConfig, text: &str) -> Result<()> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected key = value, found '{line}'"),
        })?;
        set_config_value(cfg, k.trim(), v, i + 1)?;
    }
    Ok(())
}
