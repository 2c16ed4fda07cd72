use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::Result;
use crate::metrics::{compute_arias, compute_scalar_metrics, ScalarMetrics};
use crate::series::TimeSeries;
use crate::spectrum::{compute_default_response_spectrum, ResponseSpectrum};
use crate::synth::envelope::EnvelopeSpec;
use crate::synth::sampling::{SampledParams, PHASE_STREAM};
use crate::synth::spectrogram::SpectrogramModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticMotion {
    pub index: u64,
    pub ts: TimeSeries,
    pub params: SampledParams,
    pub envelope: EnvelopeSpec,
    /// Metrics measured on the output trace.
    pub measured: ScalarMetrics,
    pub spectrum: ResponseSpectrum,
    /// Global factor applied to reach the sampled AI (1 when rescaling is off).
    pub rescale: f64,
}

/// Phases uniform on [−π, π) from the phase stream of `sub_seed`.
pub fn draw_phases(sub_seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    rng.set_stream(PHASE_STREAM);
    (0..n).map(|_| PI * (2.0 * rng.random::<f64>() - 1.0)).collect()
}

/// `x_k = Σ_n C_n(t_k) cos(2π n k / N + φ_n)` with `C_n = √(2·PS·df)`.
pub fn synthesize_samples(model: &SpectrogramModel, phases: &[f64]) -> Result<Vec<f64>> {
    let sqrt_source: Vec<f64> = model.source_terms().iter().map(|v| v.sqrt()).collect();
    sum_fourier_series(
        &model.envelope.pa,
        model.energy,
        model.df,
        &model.slice_starts,
        |s, out| model.sqrt_shape_into(s, &sqrt_source, out),
        phases,
    )
}

const LANES: usize = 16;
/// Slices at least this long are summed with one inverse FFT.
const FFT_MIN_LEN: usize = 24;

fn sum_fourier_series(
    pa: &[f64],
    energy: f64,
    df: f64,
    slice_starts: &[usize],
    sqrt_shape_of: impl Fn(usize, &mut [f64]) -> Result<()>,
    phases: &[f64],
) -> Result<Vec<f64>> {
    let n_t = pa.len();
    let n_f = n_t / 2;
    assert!(phases.len() >= n_f, "one phase per frequency bin");
    let table: Vec<[f64; 2]> = (0..n_t)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n_t as f64;
            [th.cos(), th.sin()]
        })
        .collect();
    let (cos_phi, sin_phi): (Vec<f64>, Vec<f64>) = phases[..n_f].iter().map(|p| (p.cos(), p.sin())).unzip();

    let mut out = vec![0.0; n_t];
    let mut coef = vec![[0.0; 2]; n_f];
    let mut amp = vec![0.0; n_f];
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n_t);
    let mut buf = vec![Complex64::new(0.0, 0.0); n_t];
    for (s, &a) in slice_starts.iter().enumerate() {
        let b = slice_starts.get(s + 1).copied().unwrap_or(n_t);
        if pa[a..b].iter().all(|&p| p == 0.0) {
            continue;
        }
        sqrt_shape_of(s, &mut amp)?;
        for i in 0..n_f {
            coef[i] = [amp[i] * cos_phi[i], amp[i] * sin_phi[i]];
        }
        if b - a >= FFT_MIN_LEN {
            // Σ_n z_n e^{2πink/N} for every k at once
            buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for (i, c) in coef.iter().enumerate() {
                buf[i + 1] = Complex64::new(c[0], c[1]);
            }
            ifft.process(&mut buf);
            for k in a..b {
                if pa[k] != 0.0 {
                    out[k] = (2.0 * energy * pa[k] * df).sqrt() * buf[k].re;
                }
            }
            continue;
        }
        // Bin n contributes Re(z_n e^{iθ_n k}) with θ_n = 2πn/N. Seed z_n at
        // the slice start from the table, then rotate it sample by sample;
        // a group of bins per pass keeps independent rotations in flight.
        let len = b - a;
        let mut acc = vec![[0.0f64; LANES]; len];
        let a_mod = a % n_t;
        let mut idx = a_mod; // n·a mod N for n = 1
        for (g, group) in coef.chunks(LANES).enumerate() {
            let (mut zr, mut zi, mut wr, mut wi) = ([0.0; LANES], [0.0; LANES], [0.0; LANES], [0.0; LANES]);
            for (l, c) in group.iter().enumerate() {
                let n = LANES * g + l + 1;
                let t = table[idx];
                zr[l] = c[0] * t[0] - c[1] * t[1];
                zi[l] = c[0] * t[1] + c[1] * t[0];
                [wr[l], wi[l]] = table[n];
                idx += a_mod;
                if idx >= n_t {
                    idx -= n_t;
                }
            }
            for row in acc.iter_mut() {
                for l in 0..LANES {
                    row[l] += zr[l];
                    let r = zr[l] * wr[l] - zi[l] * wi[l];
                    zi[l] = zr[l] * wi[l] + zi[l] * wr[l];
                    zr[l] = r;
                }
            }
        }
        for (j, row) in acc.iter().enumerate() {
            let k = a + j;
            if pa[k] != 0.0 {
                out[k] = (2.0 * energy * pa[k] * df).sqrt() * row.iter().sum::<f64>();
            }
        }
    }
    Ok(out)
}

/// Synthesizes one motion from its spectrogram. With `exact_energy_rescale`,
/// the trace is scaled once so its Arias intensity equals `params.ai`.
pub fn synthesize(model: &SpectrogramModel, index: u64, exact_energy_rescale: bool) -> Result<SyntheticMotion> {
    let params = model.params;
    let phases = draw_phases(params.sub_seed, model.n_freqs());
    let samples = synthesize_samples(model, &phases)?;
    let mut ts = TimeSeries::new(samples, model.dt)?;
    let mut rescale = 1.0;
    if exact_energy_rescale {
        let ai = compute_arias(&ts).ai;
        if ai > 0.0 {
            rescale = (params.ai / ai).sqrt();
            ts = ts.scaled(rescale);
        }
    }
    let measured = compute_scalar_metrics(&ts)?;
    let spectrum = compute_default_response_spectrum(&ts);
    Ok(SyntheticMotion {
        index,
        ts,
        params,
        envelope: model.envelope.spec.clone(),
        measured,
        spectrum,
        rescale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmpe::Scenario;
    use crate::synth::config::{SimulationConfig, SpectrumForm};
    use crate::synth::envelope::{Envelope, EnvelopeSpec};
    use crate::synth::spectrogram::build_spectrogram;

    fn flat_model(n: usize, dt: f64, energy: f64) -> SpectrogramModel {
        let envelope = Envelope {
            spec: EnvelopeSpec {
                t_p: 0.0,
                t_s: 0.0,
                t_c: 0.0,
                energy_fractions: [0.05, 0.85, 0.10],
                p_median: 1.0,
                s_median: 1.0,
                coda_decay_rate: 1.0,
                total_duration: (n - 1) as f64 * dt,
                achieved_dsr: 0.9 * n as f64 * dt,
            },
            pa: vec![1.0 / (n as f64 * dt); n],
            dt,
        };
        SpectrogramModel {
            envelope,
            dt,
            df: 1.0 / (n as f64 * dt),
            energy,
            fc: 1.0,
            form: SpectrumForm::AsPrinted,
            slice_starts: vec![0],
            slice_fc_tau: vec![10.0],
            params: SampledParams {
                ai: 0.1,
                dsr: 1.0,
                a: 1.0,
                b: 0.1,
                stress_drop: 10.0,
                q0: 100.0,
                n_exp: 0.7,
                sub_seed: 9,
            },
        }
    }

    #[test]
    fn zero_energy_gives_zero_trace() {
        let m = flat_model(256, 0.01, 0.0);
        let x = synthesize_samples(&m, &vec![0.3; 128]).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_bin_gives_pure_cosine() {
        let (n_t, dt, energy) = (200, 0.01, 3.0);
        let df = 1.0 / (n_t as f64 * dt);
        let pa = vec![1.0 / (n_t as f64 * dt); n_t];
        let mut shape = vec![0.0; n_t / 2];
        shape[4] = 1.0 / df; // bin n = 5, unit area
        let phases: Vec<f64> = (0..n_t / 2).map(|i| 0.1 * i as f64 - 2.0).collect();
        let x = sum_fourier_series(
            &pa,
            energy,
            df,
            &[0],
            |_, out| {
                out.iter_mut().zip(&shape).for_each(|(o, v)| *o = v.sqrt());
                Ok(())
            },
            &phases,
        )
        .unwrap();
        let amp = (2.0 * energy * pa[0] * shape[4] * df).sqrt();
        for (k, v) in x.iter().enumerate() {
            let t = k as f64 * dt;
            assert!((v - amp * (2.0 * PI * 5.0 * df * t + phases[4]).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn table_sum_matches_direct_cosines() {
        let cfg = SimulationConfig::new(Scenario::new(5.0, 10.0, 800.0).unwrap());
        let params = SampledParams {
            ai: 0.01,
            dsr: 2.0,
            a: 2.5,
            b: 0.3,
            stress_drop: 10.0,
            q0: 80.0,
            n_exp: 0.6,
            sub_seed: 77,
        };
        let mut cfg = cfg;
        cfg.envelope.coda_decay_cap = 0.2;
        let m = build_spectrogram(&params, &cfg).unwrap();
        let phases = draw_phases(params.sub_seed, m.n_freqs());
        let x = synthesize_samples(&m, &phases).unwrap();
        for k in (0..m.n_samples()).step_by(97) {
            let shape = m.shape(m.slice_of(k)).unwrap();
            let direct: f64 = (1..=m.n_freqs())
                .map(|n| {
                    let c = (2.0 * m.ps(k, &shape, n) * m.df).sqrt();
                    c * (2.0 * PI * n as f64 * m.df * k as f64 * m.dt + phases[n - 1]).cos()
                })
                .sum();
            assert!((x[k] - direct).abs() < 1e-9 * (1.0 + direct.abs()), "k={k}");
        }
    }

    #[test]
    fn energy_closure() {
        let cfg = SimulationConfig::new(Scenario::new(5.0, 50.0, 550.0).unwrap());
        let params = SampledParams {
            ai: 0.002,
            dsr: 12.0,
            a: 2.6,
            b: 0.2,
            stress_drop: 20.0,
            q0: 60.0,
            n_exp: 0.8,
            sub_seed: 5,
        };
        let m = build_spectrogram(&params, &cfg).unwrap();
        let on = synthesize(&m, 0, true).unwrap();
        assert!((on.measured.ai - params.ai).abs() < 1e-6 * params.ai);
        let off = synthesize(&m, 0, false).unwrap();
        assert!((off.measured.ai / params.ai - 1.0).abs() < 0.3, "{}", off.measured.ai / params.ai);
        assert_eq!(off.rescale, 1.0);
        assert_eq!(on.ts.samples(), off.ts.scaled(on.rescale).samples());
    }

    #[test]
    fn phases_are_deterministic_and_bounded() {
        let a = draw_phases(11, 1000);
        assert_eq!(a, draw_phases(11, 1000));
        assert_ne!(a, draw_phases(12, 1000));
        assert!(a.iter().all(|p| (-PI..PI).contains(p)));
    }
}
