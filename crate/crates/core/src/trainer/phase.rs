use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{split_holdout, Dataset, DatasetItem};
use crate::error::{Error, Result};
use crate::model::{shifted_targets, AdamConfig, AdamState, Gpt, Mode, ModelCheckpoint, Params, Phase, ProvenanceEntry};
use crate::ranker::encode_context;
use crate::seed::stable_hash;
use crate::tokenizer::{encode_identifier, encode_sequence, Vocabulary};

pub const PRETRAIN_LR: f64 = 5e-4;
pub const FINETUNE_LR: f64 = 5e-6;
pub const MAX_EPOCHS: usize = 20;

/// Held-out-loss patience rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    pub patience: usize,
    /// Improvement (in nats) needed to reset the patience counter.
    pub min_delta: f64,
}

impl Default for EarlyStop {
    fn default() -> Self {
        EarlyStop {
            patience: 3,
            min_delta: 1e-3,
        }
    }
}

/// Tracks the best epoch and decides when to stop.
///
/// The best epoch is the strict minimum of every loss seen, so the returned
/// weights are never worse than any evaluated epoch; only improvements of at
/// least `min_delta` reset the patience counter.
#[derive(Clone, Debug)]
pub struct EarlyStopping {
    rule: EarlyStop,
    best: Option<(usize, f64)>,
    reference: f64,
    stale: usize,
}

impl EarlyStopping {
    pub fn new(rule: EarlyStop) -> Self {
        EarlyStopping {
            rule,
            best: None,
            reference: f64::INFINITY,
            stale: 0,
        }
    }

    /// Records the loss of `epoch` (1-based). Returns whether it is the new best.
    pub fn observe(&mut self, epoch: usize, loss: f64) -> bool {
        let is_best = self.best.is_none_or(|(_, b)| loss < b);
        if is_best {
            self.best = Some((epoch, loss));
        }
        if loss < self.reference - self.rule.min_delta {
            self.reference = loss;
            self.stale = 0;
        } else {
            self.stale += 1;
        }
        is_best
    }

    pub fn should_stop(&self) -> bool {
        self.stale >= self.rule.patience
    }

    pub fn best(&self) -> Option<(usize, f64)> {
        self.best
    }
}

/// One training phase over a dataset.
#[derive(Clone, Debug)]
pub struct TrainPhase<'a> {
    pub phase: Phase,
    pub dataset: &'a Dataset,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub early_stop: EarlyStop,
    pub batch_size: usize,
    /// Share of the dataset held out for early stopping.
    pub validation_fraction: f64,
    pub seed: u64,
    /// Fingerprint of the vocabulary the dataset was prepared for, if known.
    pub vocab_fingerprint: Option<u64>,
}

impl<'a> TrainPhase<'a> {
    pub fn new(phase: Phase, dataset: &'a Dataset, seed: u64) -> Self {
        TrainPhase {
            phase,
            dataset,
            learning_rate: match phase {
                Phase::Pretrain => PRETRAIN_LR,
                Phase::Finetune => FINETUNE_LR,
            },
            max_epochs: MAX_EPOCHS,
            early_stop: EarlyStop::default(),
            batch_size: 16,
            validation_fraction: 0.1,
            seed,
            vocab_fingerprint: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Invalid(format!("learning rate {} must be positive", self.learning_rate)));
        }
        if self.max_epochs == 0 || self.early_stop.patience == 0 || self.batch_size == 0 {
            return Err(Error::Invalid("max_epochs, patience and batch_size must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::Invalid(format!("validation fraction {} not in [0, 1)", self.validation_fraction)));
        }
        Ok(())
    }
}

/// A model input with its per-position targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example {
    pub ids: Vec<u32>,
    pub targets: Vec<Option<u32>>,
}

impl Example {
    pub fn n_targets(&self) -> usize {
        self.targets.iter().filter(|t| t.is_some()).count()
    }
}

/// Turns dataset items into training examples.
///
/// Code sequences become `<lang>`-prefixed windows of at most `context_len`
/// ids, cut at document boundaries, trained on every next-id target. Events
/// become the encoded completion context followed by the accepted
/// identifier, trained only on the identifier's two subtokens.
pub fn build_examples(dataset: &Dataset, vocab: &Vocabulary, context_len: usize) -> Result<Vec<Example>> {
    if context_len < 3 {
        return Err(Error::Invalid("context length must be at least 3".into()));
    }
    let mut out = Vec::new();
    for item in &dataset.items {
        let lang = item.language();
        match item {
            DatasetItem::Sequence(seq) => {
                let control = lang.control_code();
                let body = match seq.tokens.first() {
                    Some(t) if *t == control => &seq.tokens[1..],
                    _ => &seq.tokens[..],
                };
                let enc = encode_sequence(body, lang, vocab)?;
                for chunk in enc.ids.chunks(context_len - 1) {
                    let mut ids = Vec::with_capacity(chunk.len() + 1);
                    ids.push(vocab.control_id(lang));
                    ids.extend_from_slice(chunk);
                    let targets = shifted_targets(&ids, 1);
                    if targets.iter().any(Option::is_some) {
                        out.push(Example { ids, targets });
                    }
                }
            }
            DatasetItem::Event(ev) => {
                let (mut ids, copy) = encode_context(&ev.context_tokens, lang, vocab, context_len - 1)?;
                let mut copy = copy;
                let (_, pair) = encode_identifier(&ev.accepted, vocab, &mut copy)?;
                let n = ids.len();
                ids.push(pair[0]);
                let mut targets = vec![None; n + 1];
                targets[n - 1] = Some(pair[0]);
                targets[n] = Some(pair[1]);
                out.push(Example { ids, targets });
            }
        }
    }
    Ok(out)
}

/// Mean loss per target over `examples`, without dropout.
pub fn mean_loss(model: &Gpt<f32>, examples: &[Example]) -> Result<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for ex in examples {
        let logits = model.forward(&ex.ids, Mode::Infer, None)?;
        let n = ex.n_targets();
        if n == 0 {
            continue;
        }
        sum += crate::model::cross_entropy(&logits, &ex.targets)? * n as f64;
        count += n;
    }
    if count == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(sum / count as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub heldout_loss: f64,
}

#[derive(Clone, Debug)]
pub struct PhaseReport {
    pub checkpoint: ModelCheckpoint,
    pub history: Vec<EpochStats>,
    pub best_epoch: usize,
    pub stopped_early: bool,
    /// Loss of the starting weights on the validation examples.
    pub initial_loss: f64,
}

/// Trains `start` on `phase` and returns the weights of the epoch with the
/// lowest held-out loss, with one provenance entry appended.
///
/// Up to `validation_fraction` of the items (by seeded hash of their ids)
/// are held out for early stopping; when that leaves nothing to hold out the
/// training loss is used instead.
pub fn train_phase(start: ModelCheckpoint, phase: &TrainPhase) -> Result<PhaseReport> {
    phase.validate()?;
    if start.vocab.len() != start.config.vocab_size {
        return Err(Error::VocabMismatch(format!(
            "checkpoint vocabulary has {} entries, model expects {}",
            start.vocab.len(),
            start.config.vocab_size
        )));
    }
    if let Some(fp) = phase.vocab_fingerprint {
        if fp != start.vocab.fingerprint() {
            return Err(Error::VocabMismatch(format!(
                "dataset prepared for vocabulary {fp:016x}, checkpoint has {:016x}",
                start.vocab.fingerprint()
            )));
        }
    }
    if phase.dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let held_n = (phase.validation_fraction * phase.dataset.len() as f64).round() as usize;
    let (train_ds, val_ds) = if held_n > 0 && held_n < phase.dataset.len() {
        let (t, v) = split_holdout(phase.dataset, phase.validation_fraction, stable_hash(phase.seed, "validation"))?;
        (t, Some(v))
    } else {
        (phase.dataset.clone(), None)
    };
    let context_len = start.config.context_len;
    let train = build_examples(&train_ds, &start.vocab, context_len)?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let val = match &val_ds {
        Some(v) => build_examples(v, &start.vocab, context_len)?,
        None => Vec::new(),
    };
    let val_or_train = if val.is_empty() { &train } else { &val };

    let provenance = ProvenanceEntry {
        phase: phase.phase,
        role: phase.dataset.role,
        languages: phase.dataset.language_mix.iter().copied().collect(),
        examples: phase.dataset.len(),
        epochs: 0,
        best_epoch: 0,
        learning_rate: phase.learning_rate,
        seed: phase.seed,
    };
    let ModelCheckpoint {
        config,
        params,
        provenance: mut lineage,
        vocab,
        format_version,
    } = start;
    let mut model = Gpt::from_params(config.clone(), params)?;
    let mut adam = AdamState::<f32>::for_model(&config, AdamConfig::default());
    let mut grads = Params::<f32>::zeros(&config);
    let mut rng = ChaCha8Rng::seed_from_u64(stable_hash(phase.seed, "batches"));
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(stable_hash(phase.seed, "dropout"));

    let initial_loss = mean_loss(&model, val_or_train)?;
    let mut stopper = EarlyStopping::new(phase.early_stop);
    let mut best_params = model.params.clone();
    let mut history = Vec::new();
    let batch = phase.batch_size.min(train.len());
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut stopped_early = false;

    for epoch in 1..=phase.max_epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        let mut loss_count = 0usize;
        // the trailing partial batch is dropped
        for idx in order.chunks_exact(batch) {
            let n_targets: usize = idx.iter().map(|&i| train[i].n_targets()).sum();
            if n_targets == 0 {
                continue;
            }
            grads.fill_zero();
            let scale = 1.0 / n_targets as f32;
            for &i in idx {
                let ex = &train[i];
                let (s, c) = model.accumulate_gradients(&ex.ids, &ex.targets, Some(&mut dropout_rng), &mut grads, scale)?;
                loss_sum += s;
                loss_count += c;
            }
            adam.step(&mut model.params, &grads, phase.learning_rate)?;
        }
        let heldout_loss = mean_loss(&model, val_or_train)?;
        let train_loss = if loss_count > 0 { loss_sum / loss_count as f64 } else { f64::NAN };
        log::info!("{:?} epoch {epoch}: train {train_loss:.4} held-out {heldout_loss:.4}", phase.phase);
        history.push(EpochStats {
            epoch,
            train_loss,
            heldout_loss,
        });
        if stopper.observe(epoch, heldout_loss) {
            best_params = model.params.clone();
        }
        if stopper.should_stop() {
            stopped_early = epoch < phase.max_epochs;
            break;
        }
    }
    let (best_epoch, _) = stopper.best().expect("at least one epoch ran");
    lineage.push(ProvenanceEntry {
        epochs: history.len(),
        best_epoch,
        ..provenance
    });
    Ok(PhaseReport {
        checkpoint: ModelCheckpoint {
            config,
            params: best_params,
            provenance: lineage,
            vocab,
            format_version,
        },
        history,
        best_epoch,
        stopped_early,
        initial_loss,
    })
}
