//! Uniformly sampled acceleration traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Standard gravity used for every g conversion and for Arias intensity.
pub const G: f64 = 9.81;

/// One gal (cm/s²) in m/s².
pub const GAL: f64 = 0.01;

/// Acceleration samples in m/s² on a uniform grid.
///
/// Sample `k` sits at `t0 + k * dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    samples: Vec<f64>,
    dt: f64,
    t0: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, dt: f64) -> Result<Self> {
        Self::with_origin(samples, dt, 0.0)
    }

    pub fn with_origin(samples: Vec<f64>, dt: f64, t0: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidSeries(format!("dt must be positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidSeries("t0 must be finite".into()));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(k) = samples.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidSeries(format!("sample {k} is not finite")));
        }
        Ok(Self { samples, dt, t0 })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Time of the last sample.
    pub fn end_time(&self) -> f64 {
        self.time(self.samples.len() - 1)
    }

    pub fn nyquist(&self) -> f64 {
        0.5 / self.dt
    }

    /// Multiplies every sample by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|a| a * c).collect(),
            ..*self
        }
    }

    /// Same samples with a different time origin.
    pub fn shifted(&self, t0: f64) -> Self {
        Self {
            samples: self.samples.clone(),
            dt: self.dt,
            t0,
        }
    }

    /// Samples whose time falls in `[start, end]`, keeping the original grid.
    pub fn window(&self, start: f64, end: f64) -> Result<Self> {
        // tolerate rounding in times computed as k·dt
        let first = ((start - self.t0) / self.dt - 1e-9).ceil().max(0.0) as usize;
        let last = (((end - self.t0) / self.dt + 1e-9).floor() as i64).min(self.len() as i64 - 1);
        if last < first as i64 + 1 {
            return Err(Error::InvalidArgument(format!(
                "window [{start}, {end}] s holds fewer than 2 samples"
            )));
        }
        Self::with_origin(
            self.samples[first..=last as usize].to_vec(),
            self.dt,
            self.time(first),
        )
    }

    /// Adds `before` and `after` zero samples, moving the origin back so the
    /// original samples keep their times.
    pub fn zero_padded(&self, before: usize, after: usize) -> Self {
        let mut samples = vec![0.0; before];
        samples.extend_from_slice(&self.samples);
        samples.resize(samples.len() + after, 0.0);
        Self {
            samples,
            dt: self.dt,
            t0: self.t0 - before as f64 * self.dt,
        }
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}
