//! Time-frequency analysis: S-transform, central frequency and its decay model.

mod central;
mod picker;
mod stransform;

pub use central::{
    central_frequency_series, fc_model, fit_fc_model, fit_log_model, CentralFrequencySeries,
    FcBranch, FcFit, SNR_THRESHOLD,
};
pub use picker::{pick_p_arrival, PickerConfig};
pub use stransform::{s_transform, s_transform_direct, transform_grid, TimeFrequencyMap};
