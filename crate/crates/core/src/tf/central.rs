use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snr::SnrProfile;
use crate::tf::TimeFrequencyMap;

/// Frequencies must beat this SNR to enter the spectral moments.
pub const SNR_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralFrequencySeries {
    /// Time after the P arrival, s.
    pub taus: Vec<f64>,
    /// Central frequency `sqrt(m2/m0)`, Hz.
    pub fc: Vec<f64>,
    /// Lowest and highest admitted frequency.
    pub valid_band: (f64, f64),
    /// Absolute time of τ = 0.
    pub p_arrival: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FcBranch {
    /// Whole `[t_P, t95]` window.
    Full,
    /// After the S-transform maximum.
    SWave,
    /// Between the P arrival and the S-transform maximum.
    PWave,
}

impl std::fmt::Display for FcBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FcBranch::Full => "full",
            FcBranch::SWave => "S",
            FcBranch::PWave => "P",
        })
    }
}

/// `F_C(τ) = exp(A - B ln(τ + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FcFit {
    pub a: f64,
    pub b: f64,
    pub branch: FcBranch,
    /// Fitted τ range, s after P.
    pub window: (f64, f64),
    pub rms_residual: f64,
}

impl FcFit {
    pub fn predict(&self, tau: f64) -> f64 {
        fc_model(self.a, self.b, tau)
    }
}

pub fn fc_model(a: f64, b: f64, tau: f64) -> f64 {
    (a - b * (tau + 1.0).ln()).exp()
}

/// Central frequency per τ over `window = (t_P, t95)` (absolute times),
/// from the moments of `|S|²` over frequencies with SNR above
/// [`SNR_THRESHOLD`]. Instants with no admitted power are skipped.
pub fn central_frequency_series(
    map: &TimeFrequencyMap,
    snr: &SnrProfile,
    window: (f64, f64),
) -> Result<CentralFrequencySeries> {
    let admitted: Vec<usize> = map
        .freqs
        .iter()
        .enumerate()
        .filter(|(_, &f)| snr.at(f).is_some_and(|s| s > SNR_THRESHOLD))
        .map(|(i, _)| i)
        .collect();
    let (Some(&lo), Some(&hi)) = (admitted.first(), admitted.last()) else {
        return Err(Error::EmptyBand {
            threshold: SNR_THRESHOLD,
        });
    };
    let (t_p, t_end) = window;
    let mut taus = Vec::new();
    let mut fc = Vec::new();
    for (ti, &t) in map.times.iter().enumerate() {
        if t < t_p - 1e-9 || t > t_end + 1e-9 {
            continue;
        }
        let (mut m0, mut m2) = (0.0, 0.0);
        for &fi in &admitted {
            let a = map.amplitude(fi, ti);
            let p = a * a;
            let f = map.freqs[fi];
            m0 += p;
            m2 += f * f * p;
        }
        if m0 > 0.0 {
            taus.push((t - t_p).max(0.0));
            fc.push((m2 / m0).sqrt());
        }
    }
    Ok(CentralFrequencySeries {
        taus,
        fc,
        valid_band: (map.freqs[lo], map.freqs[hi]),
        p_arrival: t_p,
    })
}

/// Ordinary least squares of `ln F_C` against `ln(τ + 1)`: returns `(A, B, rms)`.
pub fn fit_log_model(taus: &[f64], fc: &[f64]) -> Result<(f64, f64, f64)> {
    if taus.len() != fc.len() {
        return Err(Error::InvalidArgument("taus and fc differ in length".into()));
    }
    if taus.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 points, got {}",
            taus.len()
        )));
    }
    let xs: Vec<f64> = taus.iter().map(|t| (t + 1.0).ln()).collect();
    let ys: Vec<f64> = fc.iter().map(|f| f.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("all τ identical".into()));
    }
    let slope = sxy / sxx;
    let a = my - slope * mx;
    let b = -slope;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - (a - b * x)).powi(2)).sum();
    Ok((a, b, (rss / n).sqrt()))
}

/// Fits the central-frequency model with the P/S fallback: when the whole
/// window yields `B <= 0`, refit before and after the time of the
/// S-transform maximum and keep the S part if its slope is positive, else
/// the P part if its slope is positive.
pub fn fit_fc_model(series: &CentralFrequencySeries, map: &TimeFrequencyMap) -> Result<FcFit> {
    let fit = |idx: &[usize], branch| -> Result<FcFit> {
        let taus: Vec<f64> = idx.iter().map(|&i| series.taus[i]).collect();
        let fc: Vec<f64> = idx.iter().map(|&i| series.fc[i]).collect();
        let (a, b, rms) = fit_log_model(&taus, &fc)?;
        Ok(FcFit {
            a,
            b,
            branch,
            window: (taus[0], taus[taus.len() - 1]),
            rms_residual: rms,
        })
    };
    let all: Vec<usize> = (0..series.taus.len()).collect();
    let full = fit(&all, FcBranch::Full)?;
    if full.b > 0.0 {
        return Ok(full);
    }

    let tau_max = strongest_time(series, map) - series.p_arrival;
    let p_idx: Vec<usize> = all.iter().copied().filter(|&i| series.taus[i] <= tau_max).collect();
    let s_idx: Vec<usize> = all.iter().copied().filter(|&i| series.taus[i] >= tau_max).collect();
    let s_fit = fit(&s_idx, FcBranch::SWave).ok();
    let p_fit = fit(&p_idx, FcBranch::PWave).ok();
    match (s_fit, p_fit) {
        (Some(s), _) if s.b > 0.0 => Ok(s),
        (_, Some(p)) if p.b > 0.0 => Ok(p),
        _ => Err(Error::UnusableFcRecord(format!(
            "B <= 0 on the full window (B = {:.4}) and on both P/S sub-windows",
            full.b
        ))),
    }
}

/// Absolute time of the global S-transform maximum inside the series window.
fn strongest_time(series: &CentralFrequencySeries, map: &TimeFrequencyMap) -> f64 {
    let last = series.p_arrival + series.taus.last().copied().unwrap_or(0.0);
    let mut best = (series.p_arrival, f64::NEG_INFINITY);
    for (ti, &t) in map.times.iter().enumerate() {
        if t < series.p_arrival - 1e-9 || t > last + 1e-9 {
            continue;
        }
        for fi in 0..map.freqs.len() {
            let a = map.amplitude(fi, ti);
            if a > best.1 {
                best = (t, a);
            }
        }
    }
    best.0
}
