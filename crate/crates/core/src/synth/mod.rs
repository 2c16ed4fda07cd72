//! Monte Carlo synthesis of nonstationary accelerograms from a factored
//! spectrogram, and selection against a target spectrum.

mod config;
mod ensemble;
mod envelope;
mod sampling;
mod select;
mod source;
mod spectrogram;
mod synthesis;

pub use config::{EnvelopeConfig, SimulationConfig, SpectrumForm};
pub use ensemble::{simulate_ensemble, simulate_one};
pub use envelope::{build_envelope, fc_tau, Envelope, EnvelopeSpec, MIN_FC_TAU};
pub use sampling::{mix_seed, sample_params, splitmix64, truncated_standard_normal, GmpeTargets, SampledParams};
pub use select::{gmpe_target_spectrum, select_best_match, select_spectra, spectral_mse, RankedMotion, SelectionResult};
pub use source::{corner_frequency, source_spectrum, REFERENCE_STRESS_DROP};
pub use spectrogram::{build_spectrogram, SpectrogramModel};
pub use synthesis::{draw_phases, synthesize, synthesize_samples, SyntheticMotion};
