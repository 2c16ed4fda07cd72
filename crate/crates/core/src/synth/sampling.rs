use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::Result;
use crate::gmpe::{
    predict_ai, predict_dsr, predict_fc_params, CoefficientTable, Prediction, RangeWarning,
};
use crate::synth::config::SimulationConfig;

/// splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-simulation seed: `splitmix64(master ^ splitmix64(index))`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Stream of the per-simulation generator reserved for the Fourier phases.
pub(crate) const PHASE_STREAM: u64 = 1;

/// Scenario predictions that drive the random draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmpeTargets {
    pub ln_ai: Prediction,
    pub ln_dsr: Prediction,
    pub a: Prediction,
    pub ln_b: Prediction,
}

impl GmpeTargets {
    pub fn new(table: &CoefficientTable, cfg: &SimulationConfig) -> Result<Self> {
        let s = &cfg.scenario;
        let (a, ln_b) = predict_fc_params(table, s)?;
        Ok(Self {
            ln_ai: predict_ai(table, s, cfg.hdef)?,
            ln_dsr: predict_dsr(table, s, cfg.hdef)?,
            a,
            ln_b,
        })
    }

    pub fn warnings(&self) -> &[RangeWarning] {
        &self.ln_ai.warnings
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledParams {
    /// m/s.
    pub ai: f64,
    /// s.
    pub dsr: f64,
    pub a: f64,
    pub b: f64,
    /// bars.
    pub stress_drop: f64,
    pub q0: f64,
    pub n_exp: f64,
    pub sub_seed: u64,
}

/// Standard normal deviate restricted to `[-k, k]` by inverse-CDF sampling.
pub fn truncated_standard_normal<R: Rng>(rng: &mut R, k: Option<f64>) -> f64 {
    let std = Normal::standard();
    let u: f64 = rng.random();
    match k {
        Some(0.0) => 0.0,
        Some(k) => {
            let lo = std.cdf(-k);
            let hi = std.cdf(k);
            std.inverse_cdf(lo + u * (hi - lo)).clamp(-k, k)
        }
        // `random` is in [0, 1); shift away from 0 to stay finite
        None => std.inverse_cdf(u.max(f64::MIN_POSITIVE)),
    }
}

fn uniform<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    lo + rng.random::<f64>() * (hi - lo)
}

/// Draws in a fixed order from the generator seeded by `mix_seed(master, index)`:
/// ln AI, ln D_SR, A, ln B, log10 Δσ, Q₀, N.
pub fn sample_params(cfg: &SimulationConfig, targets: &GmpeTargets, index: u64) -> SampledParams {
    let sub_seed = mix_seed(cfg.master_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let k = cfg.truncate_sigma;
    let mut draw = |p: &Prediction| p.mean + p.sigma * truncated_standard_normal(&mut rng, k);
    let ln_ai = draw(&targets.ln_ai);
    let ln_dsr = draw(&targets.ln_dsr);
    let a = draw(&targets.a);
    let ln_b = draw(&targets.ln_b);
    SampledParams {
        ai: ln_ai.exp(),
        dsr: ln_dsr.exp(),
        a,
        b: ln_b.exp(),
        stress_drop: 10f64.powf(uniform(&mut rng, cfg.stress_drop_log10_bounds)),
        q0: uniform(&mut rng, cfg.q0_bounds),
        n_exp: uniform(&mut rng, cfg.n_exponent_bounds),
        sub_seed,
    }
}
