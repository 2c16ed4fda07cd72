use crate::synth::config::SpectrumForm;

/// Stress drop whose source shape serves as the reference, bars.
pub const REFERENCE_STRESS_DROP: f64 = 10.0;

/// Corner frequency in Hz from `log10 f_c = 1.341 + log10(β Δσ^(1/3)) − 0.5 M_W`
/// with β in km/s and Δσ in bars.
pub fn corner_frequency(mw: f64, stress_drop: f64, beta: f64) -> f64 {
    10f64.powf(1.341 + (beta * stress_drop.cbrt()).log10() - 0.5 * mw)
}

/// Acceleration source spectrum with a high-cut at `fc_tau`.
pub fn source_spectrum(f: f64, fc: f64, fc_tau: f64, form: SpectrumForm) -> f64 {
    let w = 2.0 * std::f64::consts::PI * f;
    let r = (f / fc).powi(2);
    let source = match form {
        SpectrumForm::AsPrinted => (1.0 + r).sqrt(),
        SpectrumForm::BruneStandard => 1.0 + r,
    };
    w * w / (source * (1.0 + (f / fc_tau).powi(8)).sqrt())
}
