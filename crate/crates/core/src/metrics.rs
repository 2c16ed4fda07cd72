//! Scalar intensity measures: peak acceleration, Arias intensity and
//! significant duration.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{TimeSeries, G};

/// Peak acceleration in both m/s² and g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub ms2: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarMetrics {
    /// Peak |a| in m/s².
    pub pga: f64,
    pub pga_g: f64,
    /// Arias intensity, m/s.
    pub ai: f64,
    pub t5: f64,
    pub t95: f64,
    /// Significant relative duration `t95 - t5`, s.
    pub dsr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arias {
    /// Total Arias intensity, m/s.
    pub ai: f64,
    /// Husid curve: cumulative Arias intensity at each sample time, ending at `ai`.
    pub cumulative: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificantDuration {
    pub t5: f64,
    pub t95: f64,
    pub dsr: f64,
}

pub fn compute_pga(ts: &TimeSeries) -> Peak {
    let ms2 = ts.samples().iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    Peak { ms2, g: ms2 / G }
}

/// Arias intensity `π/(2g) ∫ a² dt` by the trapezoidal rule.
///
/// The Husid curve assigns the trapezoid weight of sample `k` to the interval
/// ending at `t_k`, so that a lone nonzero sample produces a jump within one
/// sample interval. Its last value equals the trapezoidal total.
pub fn compute_arias(ts: &TimeSeries) -> Arias {
    let scale = PI / (2.0 * G);
    let cumulative = cumulative_trapezoid_weights(ts.samples().iter().map(|a| a * a), ts.dt(), scale);
    let ai = *cumulative.last().unwrap_or(&0.0);
    Arias { ai, cumulative }
}

/// Running sum of trapezoid weights `scale * w_k * y_k * dt`, where the end
/// samples carry half weight.
pub(crate) fn cumulative_trapezoid_weights(
    values: impl ExactSizeIterator<Item = f64>,
    dt: f64,
    scale: f64,
) -> Vec<f64> {
    let n = values.len();
    let mut acc = 0.0;
    values
        .enumerate()
        .map(|(k, y)| {
            let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
            acc += scale * w * y * dt;
            acc
        })
        .collect()
}

/// First times the normalized cumulative curve reaches `lo` and `hi`, with
/// linear interpolation between samples.
pub(crate) fn crossing_times(cumulative: &[f64], t0: f64, dt: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let total = *cumulative.last().ok_or(Error::Empty("cumulative curve"))?;
    if !(total > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let cross = |frac: f64| -> f64 {
        let target = frac * total;
        let k = cumulative.partition_point(|&c| c < target);
        if k == 0 {
            return t0;
        }
        let (c0, c1) = (cumulative[k - 1], cumulative[k]);
        let s = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
        t0 + ((k - 1) as f64 + s) * dt
    };
    Ok((cross(lo), cross(hi)))
}

pub fn compute_significant_duration(ts: &TimeSeries) -> Result<SignificantDuration> {
    let arias = compute_arias(ts);
    let (t5, t95) = crossing_times(&arias.cumulative, ts.t0(), ts.dt(), 0.05, 0.95)?;
    Ok(SignificantDuration {
        t5,
        t95,
        dsr: t95 - t5,
    })
}

pub fn compute_scalar_metrics(ts: &TimeSeries) -> Result<ScalarMetrics> {
    let peak = compute_pga(ts);
    let arias = compute_arias(ts);
    let (t5, t95) = crossing_times(&arias.cumulative, ts.t0(), ts.dt(), 0.05, 0.95)?;
    Ok(ScalarMetrics {
        pga: peak.ms2,
        pga_g: peak.g,
        ai: arias.ai,
        t5,
        t95,
        dsr: t95 - t5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ts(samples: Vec<f64>, dt: f64) -> TimeSeries {
        TimeSeries::new(samples, dt).unwrap()
    }

    #[test]
    fn pga_of_small_trace() {
        assert_eq!(compute_pga(&ts(vec![1.0, -3.0, 2.0], 0.01)).ms2, 3.0);
        assert_eq!(compute_pga(&ts(vec![0.0; 10], 0.01)).ms2, 0.0);
        assert_relative_eq!(compute_pga(&ts(vec![0.0, G], 0.01)).g, 1.0);
    }

    #[test]
    fn arias_of_unit_constant_over_one_second() {
        let a = compute_arias(&ts(vec![1.0; 101], 0.01));
        assert_relative_eq!(a.ai, PI / (2.0 * 9.81), max_relative = 1e-12);
    }

    #[test]
    fn arias_of_sine_matches_fine_quadrature() {
        let dt = 0.01;
        let x: Vec<f64> = (0..=1000).map(|k| (2.0 * PI * k as f64 * dt).sin()).collect();
        let ai = compute_arias(&ts(x, dt)).ai;
        // Oracle: composite Simpson on a 100x finer grid.
        let n = 100_000;
        let h = 10.0 / n as f64;
        let f = |t: f64| (2.0 * PI * t).sin().powi(2);
        let mut s = f(0.0) + f(10.0);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        let oracle = PI / (2.0 * G) * s * h / 3.0;
        assert_relative_eq!(oracle, PI * 5.0 / (2.0 * 9.81), max_relative = 1e-9);
        assert_relative_eq!(ai, oracle, max_relative = 1e-6);
    }

    #[test]
    fn zero_trace_has_zero_energy_and_no_duration() {
        let z = ts(vec![0.0; 50], 0.01);
        assert_eq!(compute_arias(&z).ai, 0.0);
        assert!(matches!(compute_significant_duration(&z), Err(Error::ZeroEnergy)));
    }

    #[test]
    fn constant_trace_duration_is_ninety_percent() {
        let d = compute_significant_duration(&ts(vec![0.7; 2001], 0.005)).unwrap();
        assert_relative_eq!(d.dsr, 0.9 * 10.0, max_relative = 1e-9);
    }

    #[test]
    fn impulse_duration_within_one_sample() {
        let mut x = vec![0.0; 300];
        x[100] = 5.0;
        let d = compute_significant_duration(&ts(x, 0.01)).unwrap();
        assert!(d.dsr <= 0.01 + 1e-15, "dsr = {}", d.dsr);
        assert!((d.t5 - 1.0).abs() <= 0.01);
    }

    #[test]
    fn two_bursts_match_exhaustive_scan() {
        let dt = 0.01;
        let x: Vec<f64> = (0..1500)
            .map(|k| {
                let t = k as f64 * dt;
                let b1 = (-(t - 3.0).powi(2) / 0.5).exp() * (9.0 * t).sin();
                let b2 = 0.6 * (-(t - 9.0).powi(2) / 2.0).exp() * (5.0 * t).cos();
                b1 + b2
            })
            .collect();
        let d = compute_significant_duration(&ts(x.clone(), dt)).unwrap();

        // Oracle: recompute each partial sum from scratch, scan every interval.
        let n = x.len();
        let w = |j: usize| if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        let partial = |k: usize| (0..=k).map(|j| w(j) * x[j] * x[j]).sum::<f64>();
        let total = partial(n - 1);
        let find = |frac: f64| {
            for k in 1..n {
                let (c0, c1) = (partial(k - 1), partial(k));
                if c1 >= frac * total && c0 < frac * total {
                    return (k - 1) as f64 * dt + (frac * total - c0) / (c1 - c0) * dt;
                }
            }
            unreachable!()
        };
        assert_relative_eq!(d.t5, find(0.05), epsilon = 1e-9);
        assert_relative_eq!(d.t95, find(0.95), epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn husid_curve_is_monotone_and_scales(
            x in prop::collection::vec(-10.0f64..10.0, 2..200),
            c in -5.0f64..5.0,
        ) {
            let s = ts(x, 0.02);
            let a = compute_arias(&s);
            prop_assert!(a.cumulative.windows(2).all(|w| w[1] >= w[0]));
            prop_assert_eq!(*a.cumulative.last().unwrap(), a.ai);
            let scaled = s.scaled(c);
            let ai_c = compute_arias(&scaled).ai;
            prop_assert!((ai_c - c * c * a.ai).abs() <= 1e-12 * (1.0 + c * c * a.ai));
            prop_assert!((compute_pga(&scaled).ms2 - c.abs() * compute_pga(&s).ms2).abs() < 1e-12);
        }

        #[test]
        fn zero_padding_and_shift_leave_metrics_unchanged(
            x in prop::collection::vec(-3.0f64..3.0, 3..150),
            pad in 1usize..100,
            t0 in -50.0f64..50.0,
        ) {
            prop_assume!(x.iter().filter(|v| v.abs() > 1e-3).count() > 1);
            let s = ts(x.clone(), 0.01);
            let mut padded = x.clone();
            padded.push(0.0);
            padded.extend(std::iter::repeat_n(0.0, pad));
            // the trailing half-weight moves, so compare against the trace that
            // already ends in a zero sample
            let mut base = x;
            base.push(0.0);
            let b = compute_arias(&ts(base, 0.01)).ai;
            let p = compute_arias(&ts(padded, 0.01)).ai;
            prop_assert!((p - b).abs() <= 1e-12 * b.max(1e-300));

            let d0 = compute_significant_duration(&s).unwrap();
            let d1 = compute_significant_duration(&s.shifted(t0)).unwrap();
            prop_assert!((d0.dsr - d1.dsr).abs() < 1e-9);
            prop_assert!(d0.t5 < d0.t95);
        }
    }
}
