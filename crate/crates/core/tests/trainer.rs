use std::collections::HashSet;
use std::path::PathBuf;

use xfer_core::corpus::{
    build_dataset, load_documents, split_holdout, synthesize_events, Dataset, DatasetItem, DatasetRole, EventPolicy,
    Language, Origin, SourceDocument, TokenSequence,
};
use xfer_core::model::{ModelCheckpoint, ModelConfig, Phase};
use xfer_core::tokenizer::{build_vocab, Vocabulary};
use xfer_core::trainer::{
    append_result, build_examples, fresh_checkpoint, mean_loss, phase_seed, read_results, run_config, subsample_nested, sweep_finetune_size,
    train_phase, DataCatalog, EarlyStop, EarlyStopping, ExperimentConfig, PhaseSettings, SweepSettings, TrainPhase,
};
use xfer_core::seed::stable_hash;
use xfer_core::Error;

struct Fixture {
    catalog: DataCatalog,
    vocab: Vocabulary,
}

fn fixture() -> Fixture {
    let docs = load_documents(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/sample")).unwrap();
    let lang = Language::LangA;
    let of = |o: Origin| -> Vec<SourceDocument> {
        docs.iter().filter(|d| d.language == lang && d.origin == o).take(6).cloned().collect()
    };
    let events = synthesize_events(&of(Origin::AcceptanceLog), &EventPolicy::default().with_mean(8.0), 1).unwrap();
    let events = build_dataset(DatasetRole::Autocompletion, lang, &[], &events[..events.len().min(60)]).unwrap();
    let (train, heldout) = split_holdout(&events, 0.2, 1).unwrap();
    let catalog = DataCatalog {
        language: lang,
        ide: build_dataset(DatasetRole::Ide, lang, &of(Origin::IdeSnapshot), &[]).unwrap(),
        commit: build_dataset(DatasetRole::Commit, lang, &of(Origin::Commit), &[]).unwrap(),
        autocompletion: train,
        heldout,
    };
    let vocab = build_vocab(&[&catalog.ide, &catalog.commit, &catalog.autocompletion], 2).truncated(300);
    Fixture { catalog, vocab }
}

fn model(vocab: &Vocabulary) -> ModelConfig {
    let mut cfg = ModelConfig::tiny(vocab.len());
    cfg.context_len = 32;
    cfg
}

fn quick(id: u8, vocab: &Vocabulary, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::numbered(id, model(vocab), seed).unwrap();
    for p in &mut cfg.phases {
        p.settings = PhaseSettings::default().with_max_epochs(2).with_lr(1e-3);
    }
    cfg
}

#[test]
fn chained_run_equals_manual_chaining() {
    let f = fixture();
    let cfg = quick(5, &f.vocab, 9);
    let run = run_config(&cfg, &f.catalog, &f.vocab).unwrap();

    let mut ckpt = fresh_checkpoint(&cfg.model, &f.vocab, cfg.seed).unwrap();
    for (i, (spec, kind)) in cfg.phases.iter().zip([Phase::Pretrain, Phase::Finetune]).enumerate() {
        let ds = f.catalog.dataset(spec.role).unwrap();
        ckpt = train_phase(ckpt, &spec.settings.phase(kind, &ds, phase_seed(cfg.seed, i))).unwrap().checkpoint;
    }
    assert_eq!(run.checkpoint.to_bytes().unwrap(), ckpt.to_bytes().unwrap());
    assert_eq!(run.checkpoint.provenance.len(), 2);
    assert_eq!(run.row.phases, ["commit", "autocompletion"]);
}

#[test]
fn fine_tune_only_config_is_one_phase_from_fresh() {
    let f = fixture();
    let cfg = quick(3, &f.vocab, 4);
    let run = run_config(&cfg, &f.catalog, &f.vocab).unwrap();
    let fresh = fresh_checkpoint(&cfg.model, &f.vocab, 4).unwrap();
    let phase = cfg.phases[0].settings.phase(Phase::Pretrain, &f.catalog.autocompletion, phase_seed(4, 0));
    let single = train_phase(fresh, &phase).unwrap();
    assert_eq!(run.checkpoint.params, single.checkpoint.params);
}

#[test]
fn result_rows_have_the_documented_fields() {
    let f = fixture();
    let run = run_config(&quick(3, &f.vocab, 1), &f.catalog, &f.vocab).unwrap();
    let v = serde_json::to_value(&run.row).unwrap();
    let keys: HashSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let want: HashSet<&str> = [
        "config", "seed", "phases", "epochs_per_phase", "best_epoch_per_phase", "heldout_events", "top1", "top3", "mrr3",
    ]
    .into();
    assert_eq!(keys, want);
    assert_eq!(run.row.config, "3");
    assert_eq!(run.row.heldout_events, f.catalog.heldout.len());
    assert!(run.row.top1 <= run.row.mrr3 && run.row.mrr3 <= run.row.top3);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.jsonl");
    let mut newer = run.row.clone();
    newer.top1 = 0.0;
    append_result(&path, &run.row).unwrap();
    append_result(&path, &newer).unwrap();
    assert_eq!(read_results(&path).unwrap(), [newer]);
}

#[test]
fn two_sequences_are_memorized() {
    let toks = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
    let items = vec![
        DatasetItem::Sequence(TokenSequence { id: "a".into(), language: Language::LangB, tokens: toks("x = foo ( y ) + bar") }),
        DatasetItem::Sequence(TokenSequence { id: "b".into(), language: Language::LangB, tokens: toks("return y . baz ( x )") }),
    ];
    let ds = Dataset::new(DatasetRole::Ide, items);
    let vocab = build_vocab(&[&ds], 1);
    let start = ModelCheckpoint::fresh(ModelConfig::tiny(vocab.len()), vocab).unwrap();
    let before = start.provenance.len();
    let mut phase = TrainPhase::new(Phase::Pretrain, &ds, 3);
    phase.learning_rate = 5e-4;
    phase.max_epochs = 200;
    phase.early_stop = EarlyStop { patience: 200, min_delta: 0.0 };
    phase.validation_fraction = 0.0;
    let report = train_phase(start, &phase).unwrap();
    let last = report.history.last().unwrap().heldout_loss;
    assert!(last < 0.5 * report.initial_loss, "loss {} → {last}", report.initial_loss);
    assert_eq!(report.checkpoint.provenance.len(), before + 1);
    let entry = report.checkpoint.provenance.last().unwrap();
    assert_eq!((entry.phase, entry.role, entry.examples, entry.epochs), (Phase::Pretrain, DatasetRole::Ide, 2, 200));
}

#[test]
fn empty_dataset_and_vocabulary_mismatch() {
    let f = fixture();
    let start = fresh_checkpoint(&model(&f.vocab), &f.vocab, 1).unwrap();
    let empty = Dataset::new(DatasetRole::Commit, Vec::new());
    assert!(matches!(train_phase(start.clone(), &TrainPhase::new(Phase::Pretrain, &empty, 1)), Err(Error::EmptyDataset)));

    let mut phase = TrainPhase::new(Phase::Pretrain, &f.catalog.commit, 1);
    phase.vocab_fingerprint = Some(Vocabulary::specials_only().fingerprint());
    assert!(matches!(train_phase(start.clone(), &phase), Err(Error::VocabMismatch(_))));

    let mut wrong = start;
    wrong.vocab = Vocabulary::specials_only();
    let phase = TrainPhase::new(Phase::Pretrain, &f.catalog.commit, 1);
    assert!(matches!(train_phase(wrong, &phase), Err(Error::VocabMismatch(_))));

    let mut bad = quick(6, &f.vocab, 1);
    bad.phases.pop();
    assert!(run_config(&bad, &f.catalog, &f.vocab).is_err());
}

#[test]
fn patience_trace() {
    let mut s = EarlyStopping::new(EarlyStop { patience: 2, min_delta: 1e-3 });
    let mut stopped_at = None;
    for (i, loss) in [2.0, 1.9, 1.91, 1.92, 1.5].into_iter().enumerate() {
        s.observe(i + 1, loss);
        if s.should_stop() {
            stopped_at = Some(i + 1);
            break;
        }
    }
    assert_eq!(stopped_at, Some(4));
    assert_eq!(s.best(), Some((2, 1.9)));
}

#[test]
fn best_epoch_weights_are_returned() {
    let f = fixture();
    let start = fresh_checkpoint(&model(&f.vocab), &f.vocab, 2).unwrap();
    let mut phase = TrainPhase::new(Phase::Pretrain, &f.catalog.commit, 2);
    phase.learning_rate = 3e-2; // large enough to overshoot
    phase.max_epochs = 6;
    let r = train_phase(start, &phase).unwrap();
    let best = r.history.iter().map(|e| e.heldout_loss).fold(f64::INFINITY, f64::min);
    assert_eq!(r.history[r.best_epoch - 1].heldout_loss, best);
    // re-measure the returned weights on the phase's validation split
    let (_, val) = split_holdout(&f.catalog.commit, 0.1, stable_hash(2, "validation")).unwrap();
    let examples = build_examples(&val, &f.vocab, 32).unwrap();
    assert_eq!(mean_loss(&r.checkpoint.model(), &examples).unwrap(), best);
}

#[test]
fn sweep_subsets_nest_and_empty_fractions_are_skipped() {
    let f = fixture();
    let ds = &f.catalog.autocompletion;
    let ids = |d: &Dataset| d.items.iter().map(|i| i.id().to_string()).collect::<HashSet<_>>();
    for seed in 0..3 {
        let small = ids(&subsample_nested(ds, 0.2, seed));
        let large = ids(&subsample_nested(ds, 0.6, seed));
        assert!(small.is_subset(&large));
    }

    let base = fresh_checkpoint(&model(&f.vocab), &f.vocab, 1).unwrap();
    let settings = SweepSettings {
        pretrained: PhaseSettings::default().with_max_epochs(1),
        scratch: PhaseSettings::default().with_max_epochs(1).with_lr(1e-3),
    };
    let tiny_fraction = 0.1 / ds.len() as f64;
    let sweep = sweep_finetune_size(&base, ds, &f.catalog.heldout, &[tiny_fraction, 0.5], &[1], &settings).unwrap();
    assert_eq!(sweep.rows.len(), 1);
    assert_eq!(sweep.rows[0].fraction, 0.5);
    let labels: Vec<&str> = sweep.results.iter().map(|r| r.config.as_str()).collect();
    assert_eq!(labels, ["sweep-pretrained", "sweep-scratch"]);
    assert!(sweep.results.iter().all(|r| r.fraction == Some(0.5)));
    assert!(sweep_finetune_size(&base, ds, &f.catalog.heldout, &[1.5], &[1], &settings).is_err());
    assert!(sweep_finetune_size(&base, ds, &f.catalog.heldout, &[0.5], &[], &settings).is_err());
}
