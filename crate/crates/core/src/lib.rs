//! Nonstationary stochastic ground-motion simulation for rock sites: record
//! metrics, time-frequency analysis, prediction equations and synthesis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gmpe;
pub mod io;
pub mod metrics;
pub mod series;
pub mod snr;
pub mod spectrum;
pub mod synth;
pub mod tf;

pub use error::{Error, Result};
pub use metrics::{
    compute_arias, compute_pga, compute_scalar_metrics, compute_significant_duration, Arias, Peak,
    ScalarMetrics, SignificantDuration,
};
pub use series::{TimeSeries, G, GAL};
pub use snr::{compute_snr, SnrProfile};
pub use spectrum::{
    compute_default_response_spectrum, compute_response_spectrum, ResponseSpectrum, DAMPING,
    TABULATED_PERIODS,
};
