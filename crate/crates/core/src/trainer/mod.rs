//! Two-phase training, the numbered experiment configurations and
//! fine-tuning-size sweeps.

pub mod desk;
mod experiment;
mod phase;
mod sweep;

pub use experiment::{
    append_result, fresh_checkpoint, phase_seed, read_results, run_config, run_phases, DataCatalog,
    ExperimentConfig, PhaseSettings, PhaseSpec, ResultRow, RunOutcome, CONFIG_ROWS,
};
pub use phase::{
    build_examples, mean_loss, train_phase, EarlyStop, EarlyStopping, EpochStats, Example, PhaseReport,
    TrainPhase, FINETUNE_LR, MAX_EPOCHS, PRETRAIN_LR,
};
pub use sweep::{subsample_nested, sweep_finetune_size, Sweep, SweepPoint, SweepRow, SweepSettings};
