use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmpe::tables::{CoefficientTable, HorizontalDef, ParamCoefficientRow, SaCoefficientRow, Target};

/// Magnitude and V_S30 ranges the regressions support.
pub const MW_RANGE: (f64, f64) = (4.5, 6.9);
pub const VS30_RANGE: (f64, f64) = (500.0, 1500.0);

const VS30_REF: f64 = 800.0;
const MW_SPREADING_PIVOT: f64 = 4.5;
const MW_PIVOT: f64 = 5.6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub mw: f64,
    /// Closest distance to the rupture, km.
    pub rrup: f64,
    /// m/s.
    pub vs30: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeWarning {
    pub variable: String,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

impl Scenario {
    pub fn new(mw: f64, rrup: f64, vs30: f64) -> Result<Self> {
        if !mw.is_finite() || !(rrup >= 0.0 && rrup.is_finite()) || !(vs30 > 0.0 && vs30.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scenario needs finite M_W, R_RUP >= 0 and V_S30 > 0 (got {mw}, {rrup}, {vs30})"
            )));
        }
        Ok(Self { mw, rrup, vs30 })
    }

    /// Predictors outside the supported ranges. Evaluation still proceeds.
    pub fn range_warnings(&self) -> Vec<RangeWarning> {
        let mut out = Vec::new();
        for (name, value, (min, max)) in [("mw", self.mw, MW_RANGE), ("vs30", self.vs30, VS30_RANGE)] {
            if value < min || value > max {
                out.push(RangeWarning {
                    variable: name.into(),
                    value,
                    min,
                    max,
                });
            }
        }
        out
    }

    fn site_term(&self, c1: f64) -> f64 {
        c1 * (self.vs30 / VS30_REF).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Units {
    G,
    MetersPerSecond,
    Seconds,
    Dimensionless,
}

/// Whether `mean` is the natural log of the quantity or the quantity itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scale {
    Ln,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    /// Regressed mean: ln of the median for log-scale targets, the value for A.
    pub mean: f64,
    pub phi: f64,
    pub tau: f64,
    pub sigma: f64,
    pub scale: Scale,
    pub units: Units,
    pub warnings: Vec<RangeWarning>,
}

impl Prediction {
    pub fn median(&self) -> f64 {
        match self.scale {
            Scale::Ln => self.mean.exp(),
            Scale::Linear => self.mean,
        }
    }
}

/// Magnitude scaling with a hinge at `mh`: quadratic below, linear above.
fn hinge_magnitude(row: &SaCoefficientRow, mw: f64) -> f64 {
    let dm = mw - row.mh;
    if mw <= row.mh {
        row.a1 + row.a2 * dm + row.a3 * dm * dm
    } else {
        row.a1 + row.a4 * dm
    }
}

pub fn sa_mean_ln(row: &SaCoefficientRow, s: &Scenario) -> f64 {
    let r = s.rrup.hypot(row.h);
    hinge_magnitude(row, s.mw)
        + (row.b1 + row.b2 * (s.mw - MW_SPREADING_PIVOT)) * r.ln()
        + row.b3 * r
        + s.site_term(row.c1)
}

/// ln(SA) in g at a tabulated period (0 for PGA).
pub fn predict_sa(table: &CoefficientTable, s: &Scenario, period: f64) -> Result<Prediction> {
    let row = table.sa_row(period).ok_or_else(|| Error::UntabulatedPeriod {
        period,
        available: table
            .periods()
            .iter()
            .map(|p| if *p == 0.0 { "PGA".to_string() } else { p.to_string() })
            .collect::<Vec<_>>()
            .join(", "),
    })?;
    Ok(Prediction {
        mean: sa_mean_ln(row, s),
        phi: row.phi,
        tau: row.tau,
        sigma: row.sigma,
        scale: Scale::Ln,
        units: Units::G,
        warnings: s.range_warnings(),
    })
}

fn param_row(table: &CoefficientTable, target: Target, hdef: HorizontalDef) -> Result<&ParamCoefficientRow> {
    table
        .param_row(target, hdef)
        .ok_or_else(|| Error::UnknownDefinition(format!("{} with {hdef}", target.label())))
}

fn required(v: Option<f64>, name: &str, target: Target) -> Result<f64> {
    v.ok_or_else(|| Error::UnknownDefinition(format!("coefficient {name} of {} is absent", target.label())))
}

fn prediction(row: &ParamCoefficientRow, mean: f64, scale: Scale, units: Units, s: &Scenario) -> Prediction {
    Prediction {
        mean,
        phi: row.phi,
        tau: row.tau,
        sigma: row.sigma,
        scale,
        units,
        warnings: s.range_warnings(),
    }
}

/// ln(AI) in m/s.
pub fn predict_ai(table: &CoefficientTable, s: &Scenario, hdef: HorizontalDef) -> Result<Prediction> {
    let row = param_row(table, Target::Ai, hdef)?;
    let a3 = required(row.a3, "a3", Target::Ai)?;
    let b2 = required(row.b2, "b2", Target::Ai)?;
    let h = required(row.h, "h", Target::Ai)?;
    let dm = s.mw - MW_PIVOT;
    let mean = row.a1
        + row.a2 * dm
        + a3 * dm * dm
        + (row.b1 + b2 * (s.mw - MW_SPREADING_PIVOT)) * s.rrup.hypot(h).ln()
        + s.site_term(row.c1);
    Ok(prediction(row, mean, Scale::Ln, Units::MetersPerSecond, s))
}

/// ln(D_SR) in s.
pub fn predict_dsr(table: &CoefficientTable, s: &Scenario, hdef: HorizontalDef) -> Result<Prediction> {
    let row = param_row(table, Target::Dsr, hdef)?;
    let b2 = required(row.b2, "b2", Target::Dsr)?;
    let h = required(row.h, "h", Target::Dsr)?;
    let mean = row.a1
        + row.a2 * (s.mw - MW_PIVOT)
        + (row.b1 + b2 * (s.mw - MW_SPREADING_PIVOT)) * s.rrup.hypot(h).ln()
        + s.site_term(row.c1);
    Ok(prediction(row, mean, Scale::Ln, Units::Seconds, s))
}

fn fc_param(row: &ParamCoefficientRow, s: &Scenario) -> f64 {
    row.a1 + row.a2 * (s.mw - MW_PIVOT) + row.b1 * s.rrup.ln() + s.site_term(row.c1)
}

/// Predictions of A and ln(B) for the central-frequency model.
pub fn predict_fc_params(table: &CoefficientTable, s: &Scenario) -> Result<(Prediction, Prediction)> {
    if !(s.rrup > 0.0) {
        return Err(Error::DistanceSingularity(s.rrup));
    }
    let a = param_row(table, Target::A, HorizontalDef::GM)?;
    let b = param_row(table, Target::LnB, HorizontalDef::GM)?;
    Ok((
        prediction(a, fc_param(a, s), Scale::Linear, Units::Dimensionless, s),
        prediction(b, fc_param(b, s), Scale::Ln, Units::Dimensionless, s),
    ))
}
