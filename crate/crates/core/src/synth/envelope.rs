use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gmpe::Scenario;
use crate::metrics::{crossing_times, cumulative_trapezoid_weights};
use crate::synth::config::EnvelopeConfig;
use crate::synth::sampling::SampledParams;

/// Lowest high-cut frequency, Hz.
pub const MIN_FC_TAU: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSpec {
    /// P onset, s from trace start.
    pub t_p: f64,
    /// S onset.
    pub t_s: f64,
    /// Coda start: the S mode.
    pub t_c: f64,
    pub energy_fractions: [f64; 3],
    pub p_median: f64,
    pub s_median: f64,
    /// Reciprocal of the coda energy decay time, 1/s.
    pub coda_decay_rate: f64,
    pub total_duration: f64,
    /// 5–95% interval of the sampled envelope.
    pub achieved_dsr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub spec: EnvelopeSpec,
    /// Pa at `k·dt`, normalized so `Σ Pa·dt = 1`.
    pub pa: Vec<f64>,
    pub dt: f64,
}

/// High-cut frequency at `tau` seconds after the P onset, clamped to
/// `[MIN_FC_TAU, nyquist]`.
pub fn fc_tau(a: f64, b: f64, tau: f64, nyquist: f64) -> f64 {
    (a - b * (tau.max(0.0) + 1.0).ln()).exp().clamp(MIN_FC_TAU, nyquist)
}

fn lognormal_pdf(x: f64, median: f64, sd: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = (x / median).ln() / sd;
    (-0.5 * z * z).exp() / (x * sd * (2.0 * PI).sqrt())
}

/// Offset past which a lognormal density stays below `rel` of its mode value.
fn lognormal_extent(median: f64, sd: f64, rel: f64) -> f64 {
    // density ∝ exp(−z²/2 − sd·z) with z = ln(x/m)/sd; mode at z = −sd
    let z = -sd + (-2.0 * rel.ln()).sqrt();
    median * (sd * z).exp()
}

struct Layout {
    t_p: f64,
    t_s: f64,
    fractions: [f64; 3],
    p_log_sd: f64,
    s_log_sd: f64,
    p_median_sp: f64,
    p_median_s: f64,
    decay_time: f64,
    tail: f64,
    dt: f64,
}

impl Layout {
    fn p_median(&self, w: f64) -> f64 {
        (self.p_median_sp * (self.t_s - self.t_p) + self.p_median_s * w).max(self.dt)
    }

    fn s_mode(&self, w: f64) -> f64 {
        self.t_s + w * (-self.s_log_sd * self.s_log_sd).exp()
    }

    /// Unnormalized Pa for S median `w`, trimmed after the last sample above
    /// the tail threshold.
    fn sample(&self, w: f64) -> (Vec<f64>, f64) {
        let [fp, fs, fcoda] = self.fractions;
        let mp = self.p_median(w);
        let t_c = self.s_mode(w);
        let l = self.decay_time;
        let rel = self.tail * 1e-2;
        let end = (self.t_p + lognormal_extent(mp, self.p_log_sd, rel))
            .max(self.t_s + lognormal_extent(w, self.s_log_sd, rel))
            .max(t_c + l * (1.0 / rel).ln() + 10.0 * l);
        let n = (end / self.dt).ceil() as usize + 2;
        let mut pa: Vec<f64> = (0..n)
            .map(|k| {
                let t = k as f64 * self.dt;
                let coda = if t >= t_c { (-(t - t_c) / l).exp() / l } else { 0.0 };
                fp * lognormal_pdf(t - self.t_p, mp, self.p_log_sd)
                    + fs * lognormal_pdf(t - self.t_s, w, self.s_log_sd)
                    + fcoda * coda
            })
            .collect();
        let peak = pa.iter().cloned().fold(0.0, f64::max);
        let last = pa.iter().rposition(|&v| v >= self.tail * peak).unwrap_or(0);
        pa.truncate((last + 2).min(n));
        (pa, t_c)
    }

    fn dsr(&self, pa: &[f64]) -> Result<f64> {
        let cum = cumulative_trapezoid_weights(pa.iter().copied(), self.dt, 1.0);
        let (t5, t95) = crossing_times(&cum, 0.0, self.dt, 0.05, 0.95)?;
        Ok(t95 - t5)
    }
}

/// Builds the P/S/coda envelope and calibrates the S median so the 5–95%
/// interval of Pa matches `params.dsr`.
pub fn build_envelope(
    params: &SampledParams,
    scenario: &Scenario,
    beta: f64,
    cfg: &EnvelopeConfig,
    dt: f64,
) -> Result<Envelope> {
    if !(params.dsr > 0.0) {
        return Err(Error::InvalidArgument(format!("D_SR must be positive (got {})", params.dsr)));
    }
    let alpha = 3f64.sqrt() * beta;
    let t_p = cfg.pre_pad;
    let t_s = t_p + scenario.rrup * (1.0 / beta - 1.0 / alpha);
    let nyquist = 0.5 / dt;

    let mut layout = Layout {
        t_p,
        t_s,
        fractions: cfg.fractions,
        p_log_sd: cfg.p_log_sd,
        s_log_sd: cfg.s_log_sd,
        p_median_sp: cfg.p_median_sp,
        p_median_s: cfg.p_median_s,
        decay_time: 0.0,
        tail: cfg.tail_threshold,
        dt,
    };
    let coda_time = |layout: &Layout, w: f64| {
        let f_star = fc_tau(params.a, params.b, layout.s_mode(w) - t_p, nyquist);
        let q = params.q0 * f_star.powf(params.n_exp);
        (q / (PI * f_star)).min(cfg.coda_decay_cap * params.dsr).max(dt)
    };
    let mut eval = |w: f64| -> Result<(f64, Vec<f64>, f64, f64)> {
        layout.decay_time = coda_time(&layout, w);
        let (pa, t_c) = layout.sample(w);
        Ok((layout.dsr(&pa)?, pa, t_c, layout.decay_time))
    };

    // Illinois false position on g(x) = ln D(e^x) − ln D_target
    let target = params.dsr;
    let g = |d: f64| (d / target).ln();
    // bracket by halving/doubling from w = D/2; below a few samples the S
    // bump falls between grid points and D(w) stops being monotone
    let w_min = 5.0 * dt;
    let mut x0 = (0.5 * target).max(w_min).ln();
    let mut e0 = eval(x0.exp())?;
    while g(e0.0) > 0.0 {
        if x0 <= w_min.ln() {
            return Err(Error::CalibrationFailed { target, achieved: e0.0 });
        }
        x0 = (x0 - std::f64::consts::LN_2).max(w_min.ln());
        e0 = eval(x0.exp())?;
    }
    let mut x1 = x0 + std::f64::consts::LN_2;
    let mut e1 = eval(x1.exp())?;
    while g(e1.0) < 0.0 {
        if x1 > (100.0 * target).ln() {
            return Err(Error::CalibrationFailed { target, achieved: e1.0 });
        }
        (x0, e0) = (x1, e1);
        x1 += std::f64::consts::LN_2;
        e1 = eval(x1.exp())?;
    }
    let (mut g0, mut g1) = (g(e0.0), g(e1.0));
    let mut side = 0;
    for _ in 0..cfg.max_iterations {
        if g0.abs().min(g1.abs()) <= 1e-4 {
            break;
        }
        let x = if g1 != g0 { x1 - g1 * (x1 - x0) / (g1 - g0) } else { 0.5 * (x0 + x1) };
        let x = if x > x0.min(x1) && x < x0.max(x1) { x } else { 0.5 * (x0 + x1) };
        let e = eval(x.exp())?;
        let gx = g(e.0);
        if gx * g1 > 0.0 {
            (x1, g1, e1) = (x, gx, e);
            if side == 1 {
                g0 *= 0.5;
            }
            side = 1;
        } else {
            (x0, g0, e0) = (x, gx, e);
            if side == -1 {
                g1 *= 0.5;
            }
            side = -1;
        }
    }
    let (best_w, best) = if (e0.0 - target).abs() <= (e1.0 - target).abs() { (x0.exp(), e0) } else { (x1.exp(), e1) };
    let (achieved, mut pa, t_c, decay) = best;
    if (achieved - target).abs() > cfg.calibration_tolerance * target {
        return Err(Error::CalibrationFailed { target, achieved });
    }
    let area: f64 = pa.iter().sum::<f64>() * dt;
    pa.iter_mut().for_each(|v| *v /= area);
    let spec = EnvelopeSpec {
        t_p,
        t_s,
        t_c,
        energy_fractions: cfg.fractions,
        p_median: layout.p_median(best_w),
        s_median: best_w,
        coda_decay_rate: 1.0 / decay,
        total_duration: (pa.len() - 1) as f64 * dt,
        achieved_dsr: achieved,
    };
    Ok(Envelope { spec, pa, dt })
}
