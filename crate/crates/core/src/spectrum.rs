//! 5%-damped acceleration response spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::compute_pga;
use crate::series::{TimeSeries, G};

pub const DAMPING: f64 = 0.05;

/// Integration steps per oscillator period, at minimum.
const STEPS_PER_PERIOD: f64 = 20.0;

/// The tabulated periods of the SA coefficient table; 0 is the PGA anchor.
pub const TABULATED_PERIODS: [f64; 22] = [
    0.0, 0.0384, 0.0484, 0.0582, 0.0769, 0.0844, 0.097, 0.1167, 0.1472, 0.1691, 0.2036, 0.234,
    0.309, 0.3551, 0.3896, 0.4274, 0.469, 0.5913, 0.7456, 0.818, 0.9401, 1.3622,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSpectrum {
    /// Oscillator periods in s, strictly increasing. A leading 0 stands for PGA.
    pub periods: Vec<f64>,
    /// Peak absolute acceleration response in g.
    pub sa: Vec<f64>,
    pub damping: f64,
}

impl ResponseSpectrum {
    pub fn new(periods: Vec<f64>, sa: Vec<f64>) -> Result<Self> {
        if periods.len() != sa.len() {
            return Err(Error::InvalidArgument("periods and SA differ in length".into()));
        }
        check_periods(&periods)?;
        if sa.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument("SA values must be finite and non-negative".into()));
        }
        Ok(Self {
            periods,
            sa,
            damping: DAMPING,
        })
    }

    pub fn get(&self, period: f64) -> Option<f64> {
        self.periods
            .iter()
            .position(|p| (p - period).abs() <= 1e-9 * period.max(1.0))
            .map(|i| self.sa[i])
    }
}

fn check_periods(periods: &[f64]) -> Result<()> {
    if periods.is_empty() {
        return Err(Error::Empty("period list"));
    }
    if periods.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
        return Err(Error::InvalidArgument("periods must be finite and >= 0".into()));
    }
    if periods.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("periods must be strictly increasing".into()));
    }
    Ok(())
}

/// Response spectrum at [`TABULATED_PERIODS`].
pub fn compute_default_response_spectrum(ts: &TimeSeries) -> ResponseSpectrum {
    compute_response_spectrum(ts, &TABULATED_PERIODS).expect("tabulated periods are valid")
}

/// Peak absolute acceleration of a 5%-damped oscillator at each period.
///
/// Period 0 returns the PGA. Integration uses the average-acceleration
/// Newmark scheme, sub-stepping the input linearly so that no step exceeds
/// `T / 20`.
pub fn compute_response_spectrum(ts: &TimeSeries, periods: &[f64]) -> Result<ResponseSpectrum> {
    check_periods(periods)?;
    let pga = compute_pga(ts).g;
    let sa = periods
        .iter()
        .map(|&t| {
            if t == 0.0 {
                pga
            } else {
                sdof_peak_absolute_acceleration(ts.samples(), ts.dt(), t, DAMPING) / G
            }
        })
        .collect();
    Ok(ResponseSpectrum {
        periods: periods.to_vec(),
        sa,
        damping: DAMPING,
    })
}

/// Peak |ü + a_g| in the input's units for an oscillator starting at rest.
pub fn sdof_peak_absolute_acceleration(ground: &[f64], dt: f64, period: f64, damping: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI / period;
    let k = omega * omega;
    let c = 2.0 * damping * omega;
    let nsub = (dt * STEPS_PER_PERIOD / period).ceil().max(1.0) as usize;
    let h = dt / nsub as f64;

    // average acceleration: beta = 1/4, gamma = 1/2
    let k_eff = k + 2.0 * c / h + 4.0 / (h * h);
    let inv_k_eff = 1.0 / k_eff;

    let (mut u, mut v) = (0.0_f64, 0.0_f64);
    let mut acc = -ground[0];
    let mut peak = 0.0_f64;
    for w in ground.windows(2) {
        let slope = (w[1] - w[0]) / nsub as f64;
        for j in 1..=nsub {
            let ag = w[0] + slope * j as f64;
            let p = -ag + (4.0 / (h * h)) * u + (4.0 / h) * v + acc + c * ((2.0 / h) * u + v);
            let u_next = p * inv_k_eff;
            let acc_next = 4.0 * (u_next - u) / (h * h) - 4.0 * v / h - acc;
            v += 0.5 * h * (acc + acc_next);
            u = u_next;
            acc = acc_next;
            peak = peak.max((c * v + k * u).abs());
        }
    }
    peak
}
