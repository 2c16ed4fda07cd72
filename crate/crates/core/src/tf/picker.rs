use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// STA/LTA energy-ratio trigger settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PickerConfig {
    pub sta: f64,
    pub lta: f64,
    pub threshold: f64,
}

impl Default for PickerConfig {
    fn default() -> Self {
        Self {
            sta: 0.5,
            lta: 5.0,
            threshold: 3.0,
        }
    }
}

/// First time the short-term mean of a² exceeds `threshold` times the mean
/// over the preceding long-term window.
///
/// The long-term window uses whatever history exists (at least one STA
/// length) until a full window is available. A silent history with a
/// nonzero short-term window counts as a trigger.
pub fn pick_p_arrival(ts: &TimeSeries, cfg: &PickerConfig) -> Result<f64> {
    let dt = ts.dt();
    let nsta = ((cfg.sta / dt).round() as usize).max(1);
    let nlta = ((cfg.lta / dt).round() as usize).max(nsta);
    let energy: Vec<f64> = ts.samples().iter().map(|a| a * a).collect();
    let mut prefix = Vec::with_capacity(energy.len() + 1);
    prefix.push(0.0);
    for e in &energy {
        prefix.push(prefix.last().unwrap() + e);
    }
    let mean = |a: usize, b: usize| (prefix[b] - prefix[a]) / (b - a) as f64;

    for i in 0..energy.len() {
        // STA window [i + 1 - nsta, i], LTA window before it
        let sta_start = (i + 1).saturating_sub(nsta);
        let lta_start = sta_start.saturating_sub(nlta);
        let history = sta_start - lta_start;
        if history == 0 {
            continue;
        }
        let sta = mean(sta_start, i + 1);
        let lta = mean(lta_start, sta_start);
        let fired = if lta == 0.0 {
            sta > 0.0
        } else {
            history >= nsta && sta > cfg.threshold * lta
        };
        if fired {
            return Ok(ts.time(i));
        }
    }
    Err(Error::NoTrigger {
        threshold: cfg.threshold,
    })
}
