use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventTerm {
    pub event: String,
    pub count: usize,
    pub mean_residual: f64,
    pub delta_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordResidual {
    pub event: String,
    pub total: f64,
    pub delta_b: f64,
    pub delta_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualDecomposition {
    /// In order of first appearance.
    pub events: Vec<EventTerm>,
    /// In input order.
    pub records: Vec<RecordResidual>,
}

/// Splits total residuals into between-event and within-event terms at fixed
/// variance components: `δB_i = τ² n_i r̄_i / (n_i τ² + φ²)`, `δW_ij = r_ij − δB_i`.
pub fn decompose_residuals<S: AsRef<str>>(
    records: &[(S, f64)],
    phi: f64,
    tau: f64,
) -> Result<ResidualDecomposition> {
    if records.is_empty() {
        return Err(Error::Empty("event group"));
    }
    if !(phi > 0.0) || !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("need φ > 0 and τ >= 0 (got {phi}, {tau})")));
    }
    let mut events: Vec<EventTerm> = Vec::new();
    for (id, r) in records {
        let id = id.as_ref();
        match events.iter_mut().find(|e| e.event == id) {
            Some(e) => {
                e.count += 1;
                e.mean_residual += r;
            }
            None => events.push(EventTerm {
                event: id.to_string(),
                count: 1,
                mean_residual: *r,
                delta_b: 0.0,
            }),
        }
    }
    let tau2 = tau * tau;
    let phi2 = phi * phi;
    for e in &mut events {
        let n = e.count as f64;
        e.mean_residual /= n;
        e.delta_b = tau2 * n * e.mean_residual / (n * tau2 + phi2);
    }
    let records = records
        .iter()
        .map(|(id, r)| {
            let id = id.as_ref();
            let db = events.iter().find(|e| e.event == id).map(|e| e.delta_b).unwrap_or(0.0);
            RecordResidual {
                event: id.to_string(),
                total: *r,
                delta_b: db,
                delta_w: r - db,
            }
        })
        .collect();
    Ok(ResidualDecomposition { events, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn large_event_absorbs_constant_residual() {
        let recs: Vec<(&str, f64)> = (0..100_000).map(|_| ("e1", 0.7)).collect();
        let d = decompose_residuals(&recs, 0.6, 0.5).unwrap();
        assert!((d.events[0].delta_b - 0.7).abs() < 1e-4);
    }

    #[test]
    fn no_between_event_variance() {
        let recs = [("a", 0.3), ("b", -1.0), ("a", 0.5)];
        let d = decompose_residuals(&recs, 0.6, 0.0).unwrap();
        assert!(d.events.iter().all(|e| e.delta_b == 0.0));
        assert!(d.records.iter().all(|r| r.delta_w == r.total));
    }

    #[test]
    fn two_events_by_hand() {
        // event A: r = 0.4, 0.2 → r̄ = 0.3, n = 2; event B: r = -0.5, n = 1
        // φ = 0.6, τ = 0.5 → δB_A = 0.25·2·0.3/(2·0.25 + 0.36) = 0.15/0.86
        //                    δB_B = 0.25·(-0.5)/(0.25 + 0.36) = -0.125/0.61
        let recs = [("A", 0.4), ("B", -0.5), ("A", 0.2)];
        let d = decompose_residuals(&recs, 0.6, 0.5).unwrap();
        assert!((d.events[0].delta_b - 0.15 / 0.86).abs() < 1e-15);
        assert!((d.events[1].delta_b + 0.125 / 0.61).abs() < 1e-15);
        assert!((d.records[1].delta_w - (-0.5 + 0.125 / 0.61)).abs() < 1e-15);
    }

    #[test]
    fn empty_input_is_an_error() {
        let recs: [(&str, f64); 0] = [];
        assert!(decompose_residuals(&recs, 0.5, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn terms_add_back_to_total(
            recs in prop::collection::vec((0u8..5, -3.0f64..3.0), 1..60),
            phi in 0.1f64..1.5,
            tau in 0.0f64..1.5,
        ) {
            let recs: Vec<(String, f64)> = recs.into_iter().map(|(e, r)| (format!("ev{e}"), r)).collect();
            let d = decompose_residuals(&recs, phi, tau).unwrap();
            for r in &d.records {
                prop_assert!((r.delta_b + r.delta_w - r.total).abs() < 1e-12);
            }
            // conditional mean: Σ_j δW_ij = n_i r̄_i − n_i δB_i = δB_i φ²/τ²
            for e in &d.events {
                let sum_w: f64 = d.records.iter().filter(|r| r.event == e.event).map(|r| r.delta_w).sum();
                if tau > 0.0 {
                    prop_assert!((sum_w - e.delta_b * phi * phi / (tau * tau)).abs() < 1e-9);
                }
            }
        }
    }
}
