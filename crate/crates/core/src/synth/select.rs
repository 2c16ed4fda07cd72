use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmpe::{predict_sa, CoefficientTable, Scenario};
use crate::spectrum::ResponseSpectrum;
use crate::synth::synthesis::SyntheticMotion;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedMotion {
    pub index: u64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Best first.
    pub ranked: Vec<RankedMotion>,
}

/// GMPE median spectrum over the tabulated periods, in g.
pub fn gmpe_target_spectrum(table: &CoefficientTable, scenario: &Scenario) -> Result<ResponseSpectrum> {
    let periods = table.periods();
    let sa = periods
        .iter()
        .map(|&p| predict_sa(table, scenario, p).map(|pr| pr.median()))
        .collect::<Result<Vec<_>>>()?;
    ResponseSpectrum::new(periods, sa)
}

/// Mean over the target periods of `(ln SA − ln SA_target)²`.
pub fn spectral_mse(spectrum: &ResponseSpectrum, target: &ResponseSpectrum) -> Result<f64> {
    let mut sum = 0.0;
    for (&p, &t) in target.periods.iter().zip(&target.sa) {
        let s = spectrum.get(p).ok_or_else(|| {
            Error::InvalidArgument(format!("candidate spectrum lacks the target period {p} s"))
        })?;
        let d = s.ln() - t.ln();
        sum += if d.is_nan() { f64::INFINITY } else { d * d };
    }
    Ok(sum / target.periods.len() as f64)
}

/// Ranks `(index, spectrum)` candidates by spectral MSE and keeps the best `k`.
/// Ties keep index order.
pub fn select_spectra<'a>(
    candidates: impl IntoIterator<Item = (u64, &'a ResponseSpectrum)>,
    target: &ResponseSpectrum,
    k: usize,
) -> Result<SelectionResult> {
    let mut ranked = candidates
        .into_iter()
        .map(|(index, s)| Ok(RankedMotion { index, mse: spectral_mse(s, target)? }))
        .collect::<Result<Vec<_>>>()?;
    if ranked.is_empty() {
        return Err(Error::Empty("ensemble"));
    }
    if k > ranked.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot select {k} motions from an ensemble of {}",
            ranked.len()
        )));
    }
    ranked.sort_by(|a, b| a.mse.total_cmp(&b.mse).then(a.index.cmp(&b.index)));
    ranked.truncate(k);
    Ok(SelectionResult { ranked })
}

pub fn select_best_match(motions: &[SyntheticMotion], target: &ResponseSpectrum, k: usize) -> Result<SelectionResult> {
    select_spectra(motions.iter().map(|m| (m.index, &m.spectrum)), target, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(sa: &[f64]) -> ResponseSpectrum {
        ResponseSpectrum::new(vec![0.0, 0.1, 1.0], sa.to_vec()).unwrap()
    }

    #[test]
    fn exact_match_ranks_first() {
        let target = spectrum(&[0.2, 0.5, 0.1]);
        let a = spectrum(&[0.3, 0.5, 0.1]);
        let b = target.clone();
        let c = spectrum(&[0.1, 0.1, 0.1]);
        let r = select_spectra([(0, &a), (1, &b), (2, &c)], &target, 3).unwrap();
        assert_eq!(r.ranked[0], RankedMotion { index: 1, mse: 0.0 });
        assert_eq!(r.ranked.iter().map(|m| m.index).collect::<Vec<_>>(), vec![1, 0, 2]);
        let expect = (1.5f64.ln()).powi(2) / 3.0;
        assert!((r.ranked[1].mse - expect).abs() < 1e-15);
    }

    #[test]
    fn ties_keep_index_order_and_bounds() {
        let target = spectrum(&[0.2, 0.5, 0.1]);
        let a = spectrum(&[0.4, 0.5, 0.1]);
        let b = spectrum(&[0.1, 0.5, 0.1]); // same |ln ratio|
        let r = select_spectra([(7, &a), (3, &b)], &target, 2).unwrap();
        assert_eq!(r.ranked[0].index, 3);
        assert!(select_spectra([(7, &a)], &target, 0).unwrap().ranked.is_empty());
        assert!(select_spectra([(7, &a)], &target, 2).is_err());
        let none: [(u64, &ResponseSpectrum); 0] = [];
        assert!(matches!(select_spectra(none, &target, 0), Err(Error::Empty(_))));
    }

    #[test]
    fn zero_spectrum_ranks_last() {
        let target = spectrum(&[0.2, 0.5, 0.1]);
        let z = spectrum(&[0.0, 0.0, 0.0]);
        let a = spectrum(&[0.9, 0.9, 0.9]);
        let r = select_spectra([(0, &z), (1, &a)], &target, 2).unwrap();
        assert_eq!(r.ranked[0].index, 1);
        assert!(r.ranked[1].mse.is_infinite());
    }

    #[test]
    fn target_spectrum_uses_gmpe_medians() {
        let t = gmpe_target_spectrum(&CoefficientTable::embedded(), &Scenario::new(5.6, 10.0, 800.0).unwrap()).unwrap();
        assert_eq!(t.periods.len(), 22);
        assert!((t.get(0.0).unwrap() - 0.150_927_119_449_553_6).abs() < 1e-12);
    }
}
