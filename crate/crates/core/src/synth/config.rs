use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmpe::{HorizontalDef, Scenario};

/// Form of the ω-square source term in the slice spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumForm {
    /// `(2πf)² / √(1 + (f/f_c)²)`, the radical as printed.
    #[default]
    AsPrinted,
    /// `(2πf)² / (1 + (f/f_c)²)`.
    BruneStandard,
}

impl std::str::FromStr for SpectrumForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "as-printed" => Ok(Self::AsPrinted),
            "brune-standard" | "brune" => Ok(Self::BruneStandard),
            other => Err(Error::InvalidArgument(format!("unknown spectrum form '{other}'"))),
        }
    }
}

/// Shape of the P/S/coda energy envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConfig {
    /// Energy fractions of P, S and coda.
    pub fractions: [f64; 3],
    /// Zero padding before the P onset, s.
    pub pre_pad: f64,
    pub p_log_sd: f64,
    pub s_log_sd: f64,
    /// P median = `p_median_sp`·Δt_SP + `p_median_s`·(S median).
    pub p_median_sp: f64,
    pub p_median_s: f64,
    /// Upper bound on the coda energy decay time as a fraction of the target D_SR.
    pub coda_decay_cap: f64,
    /// Trace ends once Pa falls below this fraction of its peak.
    pub tail_threshold: f64,
    pub calibration_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self {
            fractions: [0.05, 0.85, 0.10],
            pre_pad: 1.0,
            p_log_sd: 0.6,
            s_log_sd: 0.5,
            p_median_sp: 0.5,
            p_median_s: 0.2,
            coda_decay_cap: 0.5,
            tail_threshold: 1e-6,
            calibration_tolerance: 0.02,
            max_iterations: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub scenario: Scenario,
    pub n_sims: usize,
    pub dt: f64,
    pub master_seed: u64,
    /// ±bound in σ units on the GMPE-driven draws; `None` leaves them untruncated.
    pub truncate_sigma: Option<f64>,
    pub stress_drop_log10_bounds: (f64, f64),
    pub q0_bounds: (f64, f64),
    pub n_exponent_bounds: (f64, f64),
    /// Shear-wave velocity, km/s.
    pub beta: f64,
    pub spectrum_form: SpectrumForm,
    pub exact_energy_rescale: bool,
    /// Definition used for the AI and duration targets.
    pub hdef: HorizontalDef,
    /// Length of the spectrogram time slices, s.
    pub slice_duration: f64,
    /// Adjacent slices merge while ln F_Cτ stays within this distance of the
    /// first one; 0 keeps every slice.
    pub slice_merge_tolerance: f64,
    pub envelope: EnvelopeConfig,
}

impl SimulationConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            n_sims: 1,
            dt: 0.01,
            master_seed: 0,
            truncate_sigma: Some(1.0),
            stress_drop_log10_bounds: (0.0, 2.0),
            q0_bounds: (45.0, 140.0),
            n_exponent_bounds: (0.5, 0.9),
            beta: 3.6,
            spectrum_form: SpectrumForm::AsPrinted,
            exact_energy_rescale: true,
            hdef: HorizontalDef::GM,
            slice_duration: 0.1,
            slice_merge_tolerance: 0.01,
            envelope: EnvelopeConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.n_sims == 0 {
            return bad("n_sims must be at least 1".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive (got {})", self.dt));
        }
        for (name, (lo, hi)) in [
            ("stress_drop_log10_bounds", self.stress_drop_log10_bounds),
            ("q0_bounds", self.q0_bounds),
            ("n_exponent_bounds", self.n_exponent_bounds),
        ] {
            if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return bad(format!("{name} must be ordered (got {lo}, {hi})"));
            }
        }
        if self.q0_bounds.0 <= 0.0 {
            return bad("q0 must be positive".into());
        }
        if let Some(k) = self.truncate_sigma {
            if !(k >= 0.0) {
                return bad(format!("truncate_sigma must be >= 0 (got {k})"));
            }
        }
        if !(self.beta > 0.0) || !(self.slice_duration > 0.0) || !(self.slice_merge_tolerance >= 0.0) {
            return bad("beta and slice_duration must be positive".into());
        }
        let env = &self.envelope;
        let sum: f64 = env.fractions.iter().sum();
        if env.fractions.iter().any(|&f| !(f > 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return bad(format!("envelope fractions must be positive and sum to 1 (got {:?})", env.fractions));
        }
        if !(env.pre_pad >= 0.0 && env.p_log_sd > 0.0 && env.s_log_sd > 0.0 && env.coda_decay_cap > 0.0) {
            return bad("envelope widths must be positive".into());
        }
        if !(env.tail_threshold > 0.0 && env.tail_threshold < 1.0) {
            return bad("tail_threshold must lie in (0, 1)".into());
        }
        Ok(())
    }
}
