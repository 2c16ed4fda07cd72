use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gmpe::CoefficientTable;
use crate::synth::config::SimulationConfig;
use crate::synth::sampling::{sample_params, GmpeTargets};
use crate::synth::spectrogram::build_spectrogram;
use crate::synth::synthesis::{synthesize, SyntheticMotion};

/// Samples, builds and synthesizes motion `index` of the ensemble.
pub fn simulate_one(cfg: &SimulationConfig, targets: &GmpeTargets, index: u64) -> Result<SyntheticMotion> {
    let params = sample_params(cfg, targets, index);
    let model = build_spectrogram(&params, cfg)?;
    synthesize(&model, index, cfg.exact_energy_rescale)
}

/// All `cfg.n_sims` motions in index order. Each motion depends only on
/// `(master_seed, index)`, so the result is independent of scheduling.
pub fn simulate_ensemble(cfg: &SimulationConfig, table: &CoefficientTable) -> Result<Vec<SyntheticMotion>> {
    cfg.validate()?;
    let targets = GmpeTargets::new(table, cfg)?;
    let results: Vec<Result<SyntheticMotion>> = (0..cfg.n_sims as u64)
        .into_par_iter()
        .map(|i| simulate_one(cfg, &targets, i))
        .collect();
    let mut motions = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(m) => motions.push(m),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(motions)
    } else {
        Err(Error::EnsembleFailures {
            count: failures.len(),
            summary: failures.join("; "),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmpe::Scenario;

    fn cfg(n: usize) -> SimulationConfig {
        let mut c = SimulationConfig::new(Scenario::new(5.0, 20.0, 800.0).unwrap());
        c.n_sims = n;
        c.master_seed = 2024;
        c
    }

    #[test]
    fn single_member_matches_direct_path() {
        let table = CoefficientTable::embedded();
        let c = cfg(1);
        let ens = simulate_ensemble(&c, &table).unwrap();
        let direct = simulate_one(&c, &GmpeTargets::new(&table, &c).unwrap(), 0).unwrap();
        assert_eq!(ens, vec![direct]);
    }

    #[test]
    fn reruns_are_bitwise_identical() {
        let table = CoefficientTable::embedded();
        let a = simulate_ensemble(&cfg(4), &table).unwrap();
        let b = simulate_ensemble(&cfg(4), &table).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.ts.samples().iter().zip(y.ts.samples()).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
        assert_eq!(a.iter().map(|m| m.index).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        // a prefix of a larger ensemble is the same
        let c = simulate_ensemble(&cfg(2), &table).unwrap();
        assert_eq!(&a[..2], &c[..]);
    }

    #[test]
    fn failures_are_aggregated_with_indices() {
        let table = CoefficientTable::embedded();
        let mut c = cfg(3);
        c.envelope.max_iterations = 0;
        c.envelope.calibration_tolerance = 1e-12;
        match simulate_ensemble(&c, &table) {
            Err(Error::EnsembleFailures { count, summary }) => {
                assert_eq!(count, 3);
                assert!(summary.contains("#0") && summary.contains("#2"));
            }
            other => panic!("{other:?}"),
        }
    }
}
