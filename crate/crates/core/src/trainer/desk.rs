//! The desk-scale transfer experiments over the synthetic corpus.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::experiment::{fresh_checkpoint, run_phases, DataCatalog, PhaseSettings, RunOutcome};
use super::sweep::{subsample_nested, sweep_finetune_size, Sweep, SweepSettings};
use crate::corpus::synth::{self, SynthConfig};
use crate::corpus::{
    build_dataset, split_holdout, synthesize_events_indexed, Dataset, DatasetRole, EventPolicy, Language, Origin,
    SourceDocument,
};
use crate::error::Result;
use crate::model::{ModelCheckpoint, ModelConfig, Phase};
use crate::tokenizer::{build_vocab, Vocabulary, DEFAULT_CUTOFF};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeskConfig {
    pub synth: SynthConfig,
    pub model: ModelConfig,
    /// Share of autocompletion events held out for evaluation.
    pub holdout_fraction: f64,
    pub vocab_cutoff: u64,
    /// Vocabulary size cap; rarer subtokens go through copy placeholders.
    pub max_vocab: usize,
    /// Probability that an eligible site in an acceptance log is logged.
    pub site_rate: f64,
    pub seed: u64,
    pub pretrain: PhaseSettings,
    pub finetune: PhaseSettings,
    pub scratch: PhaseSettings,
}

impl DeskConfig {
    pub fn new(seed: u64) -> Self {
        DeskConfig {
            synth: SynthConfig::desk(seed),
            model: ModelConfig {
                vocab_size: 0,
                context_len: 64,
                d_model: 64,
                n_heads: 4,
                n_layers: 2,
                d_ff: 256,
                dropout: 0.1,
                seed: 0,
            },
            holdout_fraction: 0.1,
            vocab_cutoff: DEFAULT_CUTOFF,
            max_vocab: 1024,
            site_rate: 0.2,
            seed,
            pretrain: PhaseSettings::default().with_lr(1e-3).with_max_epochs(8),
            finetune: PhaseSettings::default().with_lr(2e-4).with_max_epochs(10),
            scratch: PhaseSettings::default().with_lr(1e-3).with_max_epochs(10),
        }
    }
}

/// Everything the experiments need, built once.
#[derive(Clone, Debug)]
pub struct DeskSetup {
    pub config: DeskConfig,
    pub documents: Vec<SourceDocument>,
    pub vocab: Vocabulary,
    pub catalogs: BTreeMap<Language, DataCatalog>,
}

impl DeskSetup {
    pub fn build(config: DeskConfig) -> Result<Self> {
        let documents = synth::generate(&config.synth);
        let mut catalogs = BTreeMap::new();
        for lang in Language::ALL {
            let of = |origin: Origin| -> Vec<SourceDocument> {
                documents
                    .iter()
                    .filter(|d| d.language == lang && d.origin == origin)
                    .cloned()
                    .collect()
            };
            let index: Vec<SourceDocument> = documents.iter().filter(|d| d.language == lang).cloned().collect();
            let mut policy = EventPolicy::for_language(lang);
            policy.site_rate = config.site_rate;
            let events = synthesize_events_indexed(&of(Origin::AcceptanceLog), Some(&index), &policy, config.seed)?;
            let all_events = build_dataset(DatasetRole::Autocompletion, lang, &[], &events)?;
            let (autocompletion, heldout) = split_holdout(&all_events, config.holdout_fraction, config.seed)?;
            let commit = build_dataset(DatasetRole::Commit, lang, &of(Origin::Commit), &[])?;
            catalogs.insert(
                lang,
                DataCatalog {
                    language: lang,
                    ide: build_dataset(DatasetRole::Ide, lang, &of(Origin::IdeSnapshot), &[])?,
                    commit,
                    autocompletion,
                    heldout,
                },
            );
        }
        let corpora: Vec<&Dataset> = catalogs
            .values()
            .flat_map(|c| [&c.ide, &c.commit, &c.autocompletion])
            .collect();
        let vocab = build_vocab(&corpora, config.vocab_cutoff).truncated(config.max_vocab);
        Ok(DeskSetup {
            config,
            documents,
            vocab,
            catalogs,
        })
    }

    pub fn catalog(&self, lang: Language) -> &DataCatalog {
        &self.catalogs[&lang]
    }

    pub fn fresh(&self, seed: u64) -> Result<ModelCheckpoint> {
        fresh_checkpoint(&self.config.model, &self.vocab, seed)
    }

    /// Pretrains a fresh model on `dataset`.
    pub fn pretrain(&self, dataset: &Dataset, seed: u64) -> Result<RunOutcome> {
        let lang = *dataset.language_mix.iter().next().unwrap_or(&Language::LangA);
        run_phases(
            &format!("pretrain-{}", dataset.role.name()),
            self.fresh(seed)?,
            &[(Phase::Pretrain, dataset, self.config.pretrain.clone())],
            &self.catalog(lang).heldout,
            seed,
        )
    }
}

/// Top-1 accuracy of the three training regimes for one seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferTrial {
    pub seed: u64,
    pub pretrain_only: f64,
    pub finetune_only: f64,
    pub pretrain_finetune: f64,
}

/// Task transfer: IDE pretraining, fine-tuning on `finetune_events`
/// autocompletion events, and both.
pub fn task_transfer(setup: &DeskSetup, finetune_events: usize, seed: u64) -> Result<TransferTrial> {
    let cat = setup.catalog(Language::LangA);
    let n = cat.autocompletion.len();
    let ft = subsample_nested(&cat.autocompletion, (finetune_events as f64 / n as f64).min(1.0), seed);
    let pre = setup.pretrain(&cat.ide, seed)?;
    let both = run_phases(
        "ide->autocompletion",
        pre.checkpoint.clone(),
        &[(Phase::Finetune, &ft, setup.config.finetune.clone())],
        &cat.heldout,
        seed,
    )?;
    let only = run_phases(
        "autocompletion",
        setup.fresh(seed)?,
        &[(Phase::Pretrain, &ft, setup.config.scratch.clone())],
        &cat.heldout,
        seed,
    )?;
    Ok(TransferTrial {
        seed,
        pretrain_only: pre.metrics.top1,
        finetune_only: only.metrics.top1,
        pretrain_finetune: both.metrics.top1,
    })
}

fn sweep_settings(setup: &DeskSetup) -> SweepSettings {
    SweepSettings {
        pretrained: setup.config.finetune.clone(),
        scratch: setup.config.scratch.clone(),
    }
}

/// Commit-pretrained vs scratch over fine-tuning fractions of the LangA
/// autocompletion events.
pub fn commit_sweep(setup: &DeskSetup, fractions: &[f64], seeds: &[u64]) -> Result<Sweep> {
    let cat = setup.catalog(Language::LangA);
    let base = setup.pretrain(&cat.commit, seeds[0])?.checkpoint;
    sweep_finetune_size(&base, &cat.autocompletion, &cat.heldout, fractions, seeds, &sweep_settings(setup))
}

/// LangA-pretrained vs scratch over fine-tuning fractions of the LangB
/// autocompletion events. `base` defaults to IDE pretraining on LangA.
pub fn language_sweep(setup: &DeskSetup, base: Option<ModelCheckpoint>, fractions: &[f64], seeds: &[u64]) -> Result<Sweep> {
    let base = match base {
        Some(b) => b,
        None => setup.pretrain(&setup.catalog(Language::LangA).ide, seeds[0])?.checkpoint,
    };
    let cat = setup.catalog(Language::LangB);
    sweep_finetune_size(&base, &cat.autocompletion, &cat.heldout, fractions, seeds, &sweep_settings(setup))
}
