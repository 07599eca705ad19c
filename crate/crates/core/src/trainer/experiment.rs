use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::phase::{train_phase, EarlyStop, PhaseReport, TrainPhase, FINETUNE_LR, MAX_EPOCHS, PRETRAIN_LR};
use crate::corpus::{read_jsonl, Dataset, DatasetRole, Language};
use crate::error::{Error, Result};
use crate::eval::{evaluate, Metrics};
use crate::model::{ModelCheckpoint, ModelConfig, Phase};
use crate::seed::stable_hash;
use crate::tokenizer::Vocabulary;

/// Optimization settings shared by configured phases and sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSettings {
    /// Defaults to the pretraining rate for a first phase and the
    /// fine-tuning rate afterwards.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default = "default_max_epochs")]
    pub max_epochs: usize,
    #[serde(default)]
    pub early_stop: EarlyStop,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
}

fn default_max_epochs() -> usize {
    MAX_EPOCHS
}
fn default_batch_size() -> usize {
    16
}
fn default_validation_fraction() -> f64 {
    0.1
}

impl Default for PhaseSettings {
    fn default() -> Self {
        PhaseSettings {
            learning_rate: None,
            max_epochs: MAX_EPOCHS,
            early_stop: EarlyStop::default(),
            batch_size: default_batch_size(),
            validation_fraction: default_validation_fraction(),
        }
    }
}

impl PhaseSettings {
    pub fn with_lr(mut self, lr: f64) -> Self {
        self.learning_rate = Some(lr);
        self
    }

    pub fn with_max_epochs(mut self, n: usize) -> Self {
        self.max_epochs = n;
        self
    }

    /// Resolves the settings into a phase over `dataset`.
    pub fn phase<'a>(&self, phase: Phase, dataset: &'a Dataset, seed: u64) -> TrainPhase<'a> {
        let mut p = TrainPhase::new(phase, dataset, seed);
        p.learning_rate = self.learning_rate.unwrap_or(match phase {
            Phase::Pretrain => PRETRAIN_LR,
            Phase::Finetune => FINETUNE_LR,
        });
        p.max_epochs = self.max_epochs;
        p.early_stop = self.early_stop;
        p.batch_size = self.batch_size;
        p.validation_fraction = self.validation_fraction;
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpec {
    pub role: DatasetRole,
    #[serde(flatten)]
    pub settings: PhaseSettings,
}

impl PhaseSpec {
    pub fn new(role: DatasetRole) -> Self {
        PhaseSpec {
            role,
            settings: PhaseSettings::default(),
        }
    }
}

/// Dataset role sequence of each numbered configuration.
pub const CONFIG_ROWS: [&[DatasetRole]; 7] = {
    use DatasetRole::*;
    [
        &[Commit],
        &[All],
        &[Autocompletion],
        &[Commit, All],
        &[Commit, Autocompletion],
        &[All, Autocompletion],
        &[Commit, All, Autocompletion],
    ]
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// 1..=7, see [`CONFIG_ROWS`].
    pub id: u8,
    pub phases: Vec<PhaseSpec>,
    #[serde(default)]
    pub seed: u64,
    pub model: ModelConfig,
}

impl ExperimentConfig {
    /// Configuration `id` with default phase settings.
    pub fn numbered(id: u8, model: ModelConfig, seed: u64) -> Result<Self> {
        let row = CONFIG_ROWS
            .get((id as usize).wrapping_sub(1))
            .ok_or_else(|| Error::Invalid(format!("no configuration {id}")))?;
        Ok(ExperimentConfig {
            id,
            phases: row.iter().map(|&r| PhaseSpec::new(r)).collect(),
            seed,
            model,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let roles: Vec<DatasetRole> = self.phases.iter().map(|p| p.role).collect();
        match CONFIG_ROWS.get((self.id as usize).wrapping_sub(1)) {
            Some(row) if *row == roles.as_slice() => Ok(()),
            Some(row) => Err(Error::Invalid(format!(
                "configuration {} trains on {:?}, not {:?}",
                self.id,
                row.iter().map(|r| r.name()).collect::<Vec<_>>(),
                roles.iter().map(|r| r.name()).collect::<Vec<_>>()
            ))),
            None => Err(Error::Invalid(format!("no configuration {}", self.id))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// The datasets of one language that configurations draw from.
#[derive(Clone, Debug)]
pub struct DataCatalog {
    pub language: Language,
    pub ide: Dataset,
    pub commit: Dataset,
    /// Training split of the autocompletion events.
    pub autocompletion: Dataset,
    /// Held-out autocompletion events used for every evaluation.
    pub heldout: Dataset,
}

impl DataCatalog {
    pub fn dataset(&self, role: DatasetRole) -> Result<Dataset> {
        Ok(match role {
            DatasetRole::Ide => self.ide.clone(),
            DatasetRole::Commit => self.commit.clone(),
            DatasetRole::Autocompletion => self.autocompletion.clone(),
            DatasetRole::All => Dataset::union_all(&self.autocompletion, &self.ide)?,
        })
    }
}

/// Seed of phase `index` of a run seeded with `seed`.
pub fn phase_seed(seed: u64, index: usize) -> u64 {
    stable_hash(seed, &format!("phase-{index}"))
}

/// A fresh checkpoint whose initialization depends on `seed`.
pub fn fresh_checkpoint(model: &ModelConfig, vocab: &Vocabulary, seed: u64) -> Result<ModelCheckpoint> {
    let mut cfg = model.clone();
    cfg.seed = stable_hash(seed, "init");
    ModelCheckpoint::fresh(cfg, vocab.clone())
}

/// One machine-readable line of `results.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    /// Numbered configuration or a free-form run label.
    pub config: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fraction: Option<f64>,
    pub phases: Vec<String>,
    pub epochs_per_phase: Vec<usize>,
    pub best_epoch_per_phase: Vec<usize>,
    pub heldout_events: usize,
    pub top1: f64,
    pub top3: f64,
    pub mrr3: f64,
}

impl ResultRow {
    fn key(&self) -> (String, u64, Option<u64>) {
        (self.config.clone(), self.seed, self.fraction.map(f64::to_bits))
    }
}

/// Appends one row; readers keep the last row per (config, seed, fraction).
pub fn append_result(path: &Path, row: &ResultRow) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut line = serde_json::to_vec(row)?;
    line.push(b'\n');
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    f.write_all(&line).map_err(|e| Error::io(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let rows: Vec<ResultRow> = read_jsonl(path)?;
    let mut latest: BTreeMap<_, ResultRow> = BTreeMap::new();
    for row in rows {
        latest.insert(row.key(), row);
    }
    Ok(latest.into_values().collect())
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub checkpoint: ModelCheckpoint,
    pub metrics: Metrics,
    pub reports: Vec<PhaseReport>,
    pub row: ResultRow,
}

/// Chains `phases` from `start`: the first phase of a run from a fresh
/// model counts as pretraining, every later one as fine-tuning. Phase `i`
/// is seeded with [`phase_seed`]`(seed, i)`.
pub fn run_phases(
    label: &str,
    start: ModelCheckpoint,
    phases: &[(Phase, &Dataset, PhaseSettings)],
    heldout: &Dataset,
    seed: u64,
) -> Result<RunOutcome> {
    if phases.is_empty() {
        return Err(Error::Invalid("a run needs at least one phase".into()));
    }
    let mut ckpt = start;
    let mut reports = Vec::with_capacity(phases.len());
    for (i, (kind, ds, settings)) in phases.iter().enumerate() {
        let phase = settings.phase(*kind, ds, phase_seed(seed, i));
        let report = train_phase(ckpt, &phase)?;
        ckpt = report.checkpoint.clone();
        reports.push(report);
    }
    let model = ckpt.model();
    let metrics = evaluate(&model, &ckpt.vocab, heldout)?.metrics;
    let row = ResultRow {
        config: label.to_string(),
        seed,
        fraction: None,
        phases: phases.iter().map(|(_, d, _)| d.role.name().to_string()).collect(),
        epochs_per_phase: reports.iter().map(|r| r.history.len()).collect(),
        best_epoch_per_phase: reports.iter().map(|r| r.best_epoch).collect(),
        heldout_events: metrics.n,
        top1: metrics.top1,
        top3: metrics.top3,
        mrr3: metrics.mrr3,
    };
    Ok(RunOutcome {
        checkpoint: ckpt,
        metrics,
        reports,
        row,
    })
}

/// Runs a numbered configuration from a fresh model over `catalog` and
/// evaluates it on the catalog's held-out events.
pub fn run_config(config: &ExperimentConfig, catalog: &DataCatalog, vocab: &Vocabulary) -> Result<RunOutcome> {
    config.validate()?;
    let datasets: Vec<Dataset> = config
        .phases
        .iter()
        .map(|p| catalog.dataset(p.role))
        .collect::<Result<_>>()?;
    let phases: Vec<(Phase, &Dataset, PhaseSettings)> = config
        .phases
        .iter()
        .zip(&datasets)
        .enumerate()
        .map(|(i, (p, d))| {
            let kind = if i == 0 { Phase::Pretrain } else { Phase::Finetune };
            (kind, d, p.settings.clone())
        })
        .collect();
    let start = fresh_checkpoint(&config.model, vocab, config.seed)?;
    run_phases(&config.id.to_string(), start, &phases, &catalog.heldout, config.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbered_configs_validate() {
        for id in 1..=7 {
            ExperimentConfig::numbered(id, ModelConfig::tiny(0), 0).unwrap().validate().unwrap();
        }
        assert!(ExperimentConfig::numbered(8, ModelConfig::tiny(0), 0).is_err());
        let mut c = ExperimentConfig::numbered(6, ModelConfig::tiny(0), 0).unwrap();
        c.phases.reverse();
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_json_round_trip_with_defaults() {
        let json = r#"{"id": 5, "model": {"vocab_size": 0, "context_len": 16, "d_model": 16, "n_heads": 2,
            "n_layers": 1, "d_ff": 32, "dropout": 0.0, "seed": 0},
            "phases": [{"role": "commit"}, {"role": "autocompletion", "learning_rate": 1e-4}]}"#;
        let c: ExperimentConfig = serde_json::from_str(json).unwrap();
        c.validate().unwrap();
        assert_eq!(c.phases[0].settings, PhaseSettings::default());
        assert_eq!(c.phases[1].settings.learning_rate, Some(1e-4));
    }

    #[test]
    fn results_keep_last_row_per_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs/results.jsonl");
        let mut row = ResultRow {
            config: "6".into(),
            seed: 1,
            fraction: None,
            phases: vec!["all".into(), "autocompletion".into()],
            epochs_per_phase: vec![3, 2],
            best_epoch_per_phase: vec![3, 1],
            heldout_events: 10,
            top1: 0.1,
            top3: 0.2,
            mrr3: 0.15,
        };
        append_result(&path, &row).unwrap();
        row.top1 = 0.3;
        append_result(&path, &row).unwrap();
        row.seed = 2;
        append_result(&path, &row).unwrap();
        let rows = read_results(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].top1, 0.3);
    }
}
