use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// |S(τ, f)| on the sample-time grid of the transformed trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFrequencyMap {
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    /// Row-major, one row per frequency.
    amplitude: Vec<f64>,
}

impl TimeFrequencyMap {
    pub fn new(times: Vec<f64>, freqs: Vec<f64>, amplitude: Vec<f64>) -> Result<Self> {
        if amplitude.len() != times.len() * freqs.len() {
            return Err(Error::InvalidArgument("amplitude matrix has the wrong size".into()));
        }
        Ok(Self {
            times,
            freqs,
            amplitude,
        })
    }

    pub fn amplitude(&self, freq_index: usize, time_index: usize) -> f64 {
        self.amplitude[freq_index * self.times.len() + time_index]
    }

    pub fn row(&self, freq_index: usize) -> &[f64] {
        let n = self.times.len();
        &self.amplitude[freq_index * n..(freq_index + 1) * n]
    }

    /// Index and value of the largest amplitude, as (freq index, time index).
    pub fn argmax(&self) -> (usize, usize, f64) {
        let n = self.times.len();
        let (i, v) = self
            .amplitude
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        (i / n, i % n, v)
    }

    /// Writes `tau,freq,amplitude` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tau_s,freq_hz,amplitude")?;
        for (fi, f) in self.freqs.iter().enumerate() {
            for (ti, t) in self.times.iter().enumerate() {
                writeln!(out, "{:.8e},{:.8e},{:.8e}", t, f, self.amplitude(fi, ti))?;
            }
        }
        Ok(())
    }
}

/// Frequencies `n / (N dt)` of the transform grid lying in `[f_min, f_max]`,
/// capped at Nyquist.
pub fn transform_grid(ts: &TimeSeries, f_min: f64, f_max: f64) -> Vec<f64> {
    let n = ts.len();
    let df = 1.0 / (n as f64 * ts.dt());
    (1..=n / 2)
        .map(|k| k as f64 * df)
        .filter(|&f| f >= f_min - 1e-9 * df && f <= f_max + 1e-9 * df)
        .collect()
}

fn grid_indices(ts: &TimeSeries, freqs: &[f64]) -> Result<Vec<usize>> {
    let n = ts.len();
    let df = 1.0 / (n as f64 * ts.dt());
    let nyquist = ts.nyquist();
    freqs
        .iter()
        .map(|&f| {
            if !(f > 0.0) || f > nyquist * (1.0 + 1e-12) {
                return Err(Error::AboveNyquist { freq: f, nyquist });
            }
            let k = (f / df).round();
            if (k * df - f).abs() > 1e-9 * df || k as usize > n / 2 {
                return Err(Error::OffGrid { freq: f, df });
            }
            Ok(k as usize)
        })
        .collect()
}

/// Fourier transform of the S-transform window at bin offset `m`, folded over
/// the three nearest periods so it equals the DFT of the periodized window.
fn window_spectrum(m: i64, bin: usize, n: usize) -> f64 {
    let b = bin as f64;
    (-1..=1)
        .map(|q| {
            let x = (m + q * n as i64) as f64;
            (-2.0 * PI * PI * x * x / (b * b)).exp()
        })
        .sum()
}

/// S-transform amplitude with a Gaussian window of standard deviation `1/f`,
/// evaluated through the spectrum: one inverse FFT per frequency.
///
/// The trace is treated as periodic. Rows are computed independently, so the
/// result does not depend on the thread count.
pub fn s_transform(ts: &TimeSeries, freqs: &[f64]) -> Result<TimeFrequencyMap> {
    let bins = grid_indices(ts, freqs)?;
    let n = ts.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut spectrum: Vec<Complex64> = ts.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut spectrum);

    let inv_n = 1.0 / n as f64;
    let rows: Vec<Vec<f64>> = bins
        .par_iter()
        .map(|&bin| {
            let mut buf: Vec<Complex64> = (0..n)
                .map(|m| {
                    let signed = if m <= n / 2 { m as i64 } else { m as i64 - n as i64 };
                    spectrum[(m + bin) % n] * window_spectrum(signed, bin, n)
                })
                .collect();
            inverse.process(&mut buf);
            buf.iter().map(|z| z.norm() * inv_n).collect()
        })
        .collect();

    Ok(TimeFrequencyMap {
        times: (0..n).map(|k| ts.time(k)).collect(),
        freqs: freqs.to_vec(),
        amplitude: rows.concat(),
    })
}

/// Same transform by direct time-domain summation against the periodized
/// Gaussian window. O(N² · N_f); meant for verification.
pub fn s_transform_direct(ts: &TimeSeries, freqs: &[f64]) -> Result<TimeFrequencyMap> {
    let bins = grid_indices(ts, freqs)?;
    let n = ts.len();
    let dt = ts.dt();
    let period = n as f64 * dt;
    let x = ts.samples();

    let rows: Vec<Vec<f64>> = bins
        .par_iter()
        .zip(freqs.par_iter())
        .map(|(&bin, &f)| {
            let reach = (40.0 / bin as f64).ceil() as i64 + 1;
            let window: Vec<f64> = (0..n)
                .map(|d| {
                    (-reach..=reach)
                        .map(|p| {
                            let t = d as f64 * dt + p as f64 * period;
                            f / (2.0 * PI).sqrt() * (-0.5 * t * t * f * f).exp()
                        })
                        .sum::<f64>()
                        * dt
                })
                .collect();
            let demod: Vec<Complex64> = (0..n)
                .map(|k| {
                    let phase = -2.0 * PI * ((bin * k) % n) as f64 / n as f64;
                    Complex64::from_polar(x[k], phase)
                })
                .collect();
            (0..n)
                .map(|j| {
                    demod
                        .iter()
                        .enumerate()
                        .map(|(k, y)| y * window[(j + n - k) % n])
                        .sum::<Complex64>()
                        .norm()
                })
                .collect()
        })
        .collect();

    Ok(TimeFrequencyMap {
        times: (0..n).map(|k| ts.time(k)).collect(),
        freqs: freqs.to_vec(),
        amplitude: rows.concat(),
    })
}
