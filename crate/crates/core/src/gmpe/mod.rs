//! Rock-site prediction equations for SA, AI, significant duration and the
//! central-frequency parameters, and random-effects residual splitting.

mod predict;
mod residuals;
mod tables;

pub use predict::{
    predict_ai, predict_dsr, predict_fc_params, predict_sa, sa_mean_ln, Prediction, RangeWarning,
    Scale, Scenario, Units, MW_RANGE, VS30_RANGE,
};
pub use residuals::{decompose_residuals, EventTerm, RecordResidual, ResidualDecomposition};
pub use tables::{
    load_coefficients, CoefficientTable, HorizontalDef, ParamCoefficientRow, SaCoefficientRow,
    Target, PARAM_TABLE_CSV, SA_TABLE_CSV,
};
