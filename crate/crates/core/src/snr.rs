//! Spectral signal-to-noise ratio against a 1 s pre-event noise window.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const NOISE_WINDOW: f64 = 1.0;

/// Full width of the log-frequency smoothing window, in decades.
pub const SMOOTHING_DECADES: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrProfile {
    pub freqs: Vec<f64>,
    pub snr: Vec<f64>,
    pub noise_window: (f64, f64),
}

impl SnrProfile {
    /// Frequencies whose SNR exceeds `threshold`.
    pub fn admitted(&self, threshold: f64) -> Vec<f64> {
        self.freqs
            .iter()
            .zip(&self.snr)
            .filter(|(_, &s)| s > threshold)
            .map(|(&f, _)| f)
            .collect()
    }

    /// SNR at `freq`, linearly interpolated; `None` outside the grid.
    pub fn at(&self, freq: f64) -> Option<f64> {
        let k = self.freqs.partition_point(|&f| f < freq);
        if k == self.freqs.len() {
            return None;
        }
        if (self.freqs[k] - freq).abs() <= 1e-12 * freq.max(1.0) {
            return Some(self.snr[k]);
        }
        if k == 0 {
            return None;
        }
        let (f0, f1) = (self.freqs[k - 1], self.freqs[k]);
        let s = (freq - f0) / (f1 - f0);
        Some(self.snr[k - 1] * (1.0 - s) + self.snr[k] * s)
    }
}

/// Ratio of smoothed, duration-normalized Fourier amplitudes of the signal
/// window `[p_arrival, end]` and the noise window `[p_arrival - 1 s, p_arrival)`.
pub fn compute_snr(ts: &TimeSeries, p_arrival: f64, freqs: &[f64]) -> Result<SnrProfile> {
    let noise_start = p_arrival - NOISE_WINDOW;
    if noise_start < ts.t0() - 1e-9 * ts.dt() {
        return Err(Error::InsufficientNoise {
            p_arrival,
            start: ts.t0(),
        });
    }
    if freqs.is_empty() {
        return Err(Error::Empty("frequency grid"));
    }
    if freqs.iter().any(|&f| !(f > 0.0)) || freqs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "SNR frequencies must be positive and increasing".into(),
        ));
    }
    let samples = ts.samples();
    let k_p = (((p_arrival - ts.t0()) / ts.dt()).round() as usize).min(samples.len());
    let n_noise = (NOISE_WINDOW / ts.dt()).round() as usize;
    let noise = &samples[k_p.saturating_sub(n_noise)..k_p];
    let signal = &samples[k_p..];
    if signal.is_empty() {
        return Err(Error::InvalidArgument("no samples after the P arrival".into()));
    }

    let noise_amp = smooth_log(freqs, &fourier_amplitudes(noise, ts.dt(), freqs));
    let signal_amp = smooth_log(freqs, &fourier_amplitudes(signal, ts.dt(), freqs));
    let peak = signal_amp.iter().cloned().fold(0.0_f64, f64::max);
    let floor = f64::EPSILON * peak;

    let snr = signal_amp
        .iter()
        .zip(&noise_amp)
        .map(|(&s, &n)| {
            if s == 0.0 {
                0.0
            } else {
                s / n.max(floor).max(f64::MIN_POSITIVE)
            }
        })
        .collect();
    Ok(SnrProfile {
        freqs: freqs.to_vec(),
        snr,
        noise_window: (noise_start, p_arrival),
    })
}

/// |∫ x e^{-i2πft} dt| / √duration at each frequency.
fn fourier_amplitudes(x: &[f64], dt: f64, freqs: &[f64]) -> Vec<f64> {
    let duration = (x.len() as f64 * dt).max(dt);
    freqs
        .iter()
        .map(|&f| {
            let (s, c) = (2.0 * PI * f * dt).sin_cos();
            // rotate a phasor instead of calling sin/cos per sample
            let (mut pr, mut pi) = (1.0_f64, 0.0_f64);
            let (mut re, mut im) = (0.0, 0.0);
            for (k, &v) in x.iter().enumerate() {
                re += v * pr;
                im -= v * pi;
                let nr = pr * c - pi * s;
                pi = pr * s + pi * c;
                pr = nr;
                if k % 256 == 255 {
                    let norm = (pr * pr + pi * pi).sqrt();
                    pr /= norm;
                    pi /= norm;
                }
            }
            (re * re + im * im).sqrt() * dt / duration.sqrt()
        })
        .collect()
}

/// Boxcar average over a window of [`SMOOTHING_DECADES`] centred in log10 f.
fn smooth_log(freqs: &[f64], values: &[f64]) -> Vec<f64> {
    let half = SMOOTHING_DECADES / 2.0;
    let logs: Vec<f64> = freqs.iter().map(|f| f.log10()).collect();
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut sum = 0.0;
    logs.iter()
        .map(|&l| {
            while hi < logs.len() && logs[hi] <= l + half + 1e-12 {
                sum += values[hi];
                hi += 1;
            }
            while logs[lo] < l - half - 1e-12 {
                sum -= values[lo];
                lo += 1;
            }
            sum / (hi - lo) as f64
        })
        .collect()
}
