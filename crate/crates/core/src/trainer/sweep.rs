use serde::{Deserialize, Serialize};

use super::experiment::{fresh_checkpoint, run_phases, PhaseSettings, ResultRow};
use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::model::{ModelCheckpoint, Phase};
use crate::seed::stable_hash;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    /// Fine-tuning of the pretrained base.
    pub pretrained: PhaseSettings,
    /// Training of the fresh baseline (pretraining learning rate by default).
    pub scratch: PhaseSettings,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            pretrained: PhaseSettings::default(),
            scratch: PhaseSettings::default().with_lr(super::phase::PRETRAIN_LR),
        }
    }
}

/// One (fraction, seed) measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub fraction: f64,
    pub seed: u64,
    pub examples: usize,
    pub pretrained_top1: f64,
    pub scratch_top1: f64,
}

/// Seed-aggregated curve point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub fraction: f64,
    pub examples: usize,
    pub pretrained_mean: f64,
    pub pretrained_std: f64,
    pub scratch_mean: f64,
    pub scratch_std: f64,
}

impl SweepRow {
    pub fn gap(&self) -> f64 {
        self.pretrained_mean - self.scratch_mean
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub rows: Vec<SweepRow>,
    /// Full result rows, labelled `sweep-pretrained` and `sweep-scratch`.
    #[serde(default)]
    pub results: Vec<ResultRow>,
}

impl Sweep {
    pub fn row(&self, fraction: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.fraction == fraction)
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 {
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Nested subsample of `dataset`: the same `seed` yields a subset of the
/// larger fraction's items.
pub fn subsample_nested(dataset: &Dataset, fraction: f64, seed: u64) -> Dataset {
    dataset.subsample(fraction, stable_hash(seed, "subsample"))
}

/// For each fraction and seed, fine-tunes a copy of `base` and trains a
/// fresh model of the same shape on the same subsample, then evaluates
/// both on `heldout`.
pub fn sweep_finetune_size(
    base: &ModelCheckpoint,
    finetune: &Dataset,
    heldout: &Dataset,
    fractions: &[f64],
    seeds: &[u64],
    settings: &SweepSettings,
) -> Result<Sweep> {
    if seeds.is_empty() {
        return Err(Error::Invalid("a sweep needs at least one seed".into()));
    }
    if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(Error::Invalid(format!("fraction {f} not in (0, 1]")));
    }
    let mut points = Vec::new();
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for &fraction in fractions {
        let mut pre = Vec::new();
        let mut scratch = Vec::new();
        let mut examples = 0;
        for &seed in seeds {
            let subset = subsample_nested(finetune, fraction, seed);
            if subset.is_empty() {
                log::warn!("fraction {fraction} leaves no fine-tuning examples; skipped");
                continue;
            }
            examples = subset.len();
            let mut p = run_phases(
                "sweep-pretrained",
                base.clone(),
                &[(Phase::Finetune, &subset, settings.pretrained.clone())],
                heldout,
                seed,
            )?;
            let fresh = fresh_checkpoint(&base.config, &base.vocab, seed)?;
            let mut s = run_phases(
                "sweep-scratch",
                fresh,
                &[(Phase::Pretrain, &subset, settings.scratch.clone())],
                heldout,
                seed,
            )?;
            log::info!(
                "fraction {fraction} seed {seed}: pretrained {:.4} scratch {:.4}",
                p.metrics.top1,
                s.metrics.top1
            );
            points.push(SweepPoint {
                fraction,
                seed,
                examples,
                pretrained_top1: p.metrics.top1,
                scratch_top1: s.metrics.top1,
            });
            pre.push(p.metrics.top1);
            scratch.push(s.metrics.top1);
            p.row.fraction = Some(fraction);
            s.row.fraction = Some(fraction);
            results.push(p.row);
            results.push(s.row);
        }
        if pre.is_empty() {
            continue;
        }
        let (pm, ps) = mean_std(&pre);
        let (sm, ss) = mean_std(&scratch);
        rows.push(SweepRow {
            fraction,
            examples,
            pretrained_mean: pm,
            pretrained_std: ps,
            scratch_mean: sm,
            scratch_std: ss,
        });
    }
    Ok(Sweep { points, rows, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[0.4]), (0.4, 0.0));
    }
}
