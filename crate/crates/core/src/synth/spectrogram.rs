use crate::error::{Error, Result};
use crate::gmpe::Scenario;
use crate::series::G;
use crate::synth::config::{SimulationConfig, SpectrumForm};
use crate::synth::envelope::{build_envelope, fc_tau, Envelope};
use crate::synth::sampling::SampledParams;
use crate::synth::source::{corner_frequency, source_spectrum};

/// Energy density `PS(t, f) = E·Pa(t)·shape_s(f)`, stored in factored form:
/// the envelope on the sample grid and one unit-area spectral shape per time
/// slice, with frequencies `n·df` for `n = 1..=N/2`.
#[derive(Debug, Clone)]
pub struct SpectrogramModel {
    pub envelope: Envelope,
    pub dt: f64,
    pub df: f64,
    /// `(2g/π)·AI`, m²/s³.
    pub energy: f64,
    pub fc: f64,
    pub form: SpectrumForm,
    /// First sample of each slice; the last slice runs to the end.
    pub slice_starts: Vec<usize>,
    /// High-cut frequency per slice.
    pub slice_fc_tau: Vec<f64>,
    pub params: SampledParams,
}

impl SpectrogramModel {
    pub fn n_samples(&self) -> usize {
        self.envelope.pa.len()
    }

    pub fn n_freqs(&self) -> usize {
        self.n_samples() / 2
    }

    pub fn freqs(&self) -> Vec<f64> {
        (1..=self.n_freqs()).map(|n| n as f64 * self.df).collect()
    }

    pub fn slice_bounds(&self, s: usize) -> (usize, usize) {
        let end = self.slice_starts.get(s + 1).copied().unwrap_or(self.n_samples());
        (self.slice_starts[s], end)
    }

    /// Slice centre times, s.
    pub fn times(&self) -> Vec<f64> {
        (0..self.slice_starts.len())
            .map(|s| {
                let (a, b) = self.slice_bounds(s);
                0.5 * (a + b - 1) as f64 * self.dt
            })
            .collect()
    }

    /// Unit-area shape of slice `s` on the frequency grid: `Σ shape·df = 1`.
    pub fn shape(&self, s: usize) -> Result<Vec<f64>> {
        let fct = self.slice_fc_tau[s];
        let mut shape: Vec<f64> = (1..=self.n_freqs())
            .map(|n| source_spectrum(n as f64 * self.df, self.fc, fct, self.form))
            .collect();
        let area: f64 = shape.iter().sum::<f64>() * self.df;
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::DegenerateSlice(s));
        }
        shape.iter_mut().for_each(|v| *v /= area);
        Ok(shape)
    }

    /// Source term without the high-cut, per bin.
    pub(crate) fn source_terms(&self) -> Vec<f64> {
        (1..=self.n_freqs())
            .map(|n| source_spectrum(n as f64 * self.df, self.fc, f64::INFINITY, self.form))
            .collect()
    }

    /// `√shape` of slice `s` into `out`, given `√source_terms`.
    pub(crate) fn sqrt_shape_into(&self, s: usize, sqrt_source: &[f64], out: &mut [f64]) -> Result<()> {
        let inv = self.df / self.slice_fc_tau[s];
        let mut area = 0.0;
        for (i, (o, &b)) in out.iter_mut().zip(sqrt_source).enumerate() {
            let r2 = ((i + 1) as f64 * inv).powi(2);
            let r4 = r2 * r2;
            // √(1 + (f/F)⁸) is the high-cut divisor of the power shape
            let q = (1.0 + r4 * r4).sqrt();
            area += b * b / q;
            *o = b / q.sqrt();
        }
        area *= self.df;
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::DegenerateSlice(s));
        }
        let norm = area.sqrt().recip();
        out.iter_mut().for_each(|v| *v *= norm);
        Ok(())
    }

    /// `PS` for sample `k` and bin `n` (1-based, as in `n·df`).
    pub fn ps(&self, k: usize, shape: &[f64], n: usize) -> f64 {
        self.energy * self.envelope.pa[k] * shape[n - 1]
    }

    pub fn slice_of(&self, k: usize) -> usize {
        self.slice_starts.partition_point(|&s| s <= k) - 1
    }
}

pub fn build_spectrogram(params: &SampledParams, cfg: &SimulationConfig) -> Result<SpectrogramModel> {
    let envelope = build_envelope(params, &cfg.scenario, cfg.beta, &cfg.envelope, cfg.dt)?;
    spectrogram_from_envelope(envelope, params, &cfg.scenario, cfg)
}

/// Smallest `m >= n` whose only prime factors are 2, 3 and 5.
pub(crate) fn next_smooth(n: usize) -> usize {
    (n.max(1)..)
        .find(|&m| {
            let mut r = m;
            for p in [2, 3, 5] {
                while r % p == 0 {
                    r /= p;
                }
            }
            r == 1
        })
        .unwrap()
}

pub(crate) fn spectrogram_from_envelope(
    mut envelope: Envelope,
    params: &SampledParams,
    scenario: &Scenario,
    cfg: &SimulationConfig,
) -> Result<SpectrogramModel> {
    let dt = cfg.dt;
    if envelope.pa.len() < 4 {
        return Err(Error::InvalidSeries(format!("envelope holds only {} samples", envelope.pa.len())));
    }
    // zero tail up to an FFT-friendly length
    let n = next_smooth(envelope.pa.len());
    envelope.pa.resize(n, 0.0);
    envelope.spec.total_duration = (n - 1) as f64 * dt;

    let per_slice = ((cfg.slice_duration / dt).round() as usize).max(1);
    let nyquist = 0.5 / dt;
    let t_p = envelope.spec.t_p;
    let fc_at = |a: usize, b: usize| fc_tau(params.a, params.b, 0.5 * (a + b - 1) as f64 * dt - t_p, nyquist);
    let mut slice_starts = vec![0];
    let mut first = fc_at(0, per_slice.min(n)).ln();
    for a in (per_slice..n).step_by(per_slice) {
        let f = fc_at(a, (a + per_slice).min(n)).ln();
        if (f - first).abs() > cfg.slice_merge_tolerance {
            slice_starts.push(a);
            first = f;
        }
    }
    let slice_fc_tau = slice_starts
        .iter()
        .enumerate()
        .map(|(s, &a)| fc_at(a, slice_starts.get(s + 1).copied().unwrap_or(n)))
        .collect();
    Ok(SpectrogramModel {
        envelope,
        dt,
        df: 1.0 / (n as f64 * dt),
        energy: 2.0 * G / std::f64::consts::PI * params.ai,
        fc: corner_frequency(scenario.mw, params.stress_drop, cfg.beta),
        form: cfg.spectrum_form,
        slice_starts,
        slice_fc_tau,
        params: *params,
    })
}
