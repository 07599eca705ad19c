mod data;
mod plot;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use xfer_core::corpus::synth::{self, SynthConfig};
use xfer_core::corpus::{read_jsonl, write_documents, DatasetRole, Language};
use xfer_core::eval::{ab_compare, evaluate, significance_gate, simulate_ab, write_audit_csv, AbSimulation, ABObservation};
use xfer_core::model::{ModelCheckpoint, ModelConfig};
use xfer_core::tokenizer::{build_vocab, Vocabulary, DEFAULT_CUTOFF};
use xfer_core::trainer::desk::{commit_sweep, language_sweep, task_transfer, DeskConfig, DeskSetup};
use xfer_core::trainer::{
    append_result, fresh_checkpoint, run_config, sweep_finetune_size, ExperimentConfig, PhaseSettings, Sweep,
    SweepSettings, FINETUNE_LR, PRETRAIN_LR,
};
use xfer_service::{AppState, EventLog, Snapshot, DEFAULT_PORT};

use crate::data::{BuildOptions, DataPaths};

#[derive(Parser)]
#[command(name = "xfer", version, about = "Code autocompletion with pretraining and fine-tuning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and split datasets.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Build and merge subtoken vocabularies.
    #[command(subcommand)]
    Vocab(VocabCmd),
    /// Run one numbered training configuration.
    Train(TrainArgs),
    /// Pretrained vs scratch over fine-tuning set sizes.
    Sweep(SweepArgs),
    /// Draw sweep curves as SVG, with the numbers as CSV.
    Plot(PlotArgs),
    /// Offline evaluation on held-out events.
    Eval(EvalArgs),
    /// Compare two arms of per-(developer, day) acceptance counts.
    Abtest(AbArgs),
    /// Simulate an A/B usage log.
    SimulateAb(SimulateAbArgs),
    /// Generate a synthetic source tree.
    Synth(SynthArgs),
    /// Run the three transfer experiments on the synthetic desk corpus.
    Desk(DeskArgs),
    /// Serve completions over HTTP.
    Serve(ServeArgs),
}

#[derive(Subcommand)]
enum CorpusCmd {
    Build(CorpusBuildArgs),
    Split(CorpusSplitArgs),
}

#[derive(Args)]
struct CorpusBuildArgs {
    #[arg(long)]
    role: DatasetRole,
    #[arg(long)]
    lang: Language,
    /// Source tree with a manifest.jsonl [default: $XFER_DATA_DIR or data/sample]
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mean suggestion-list size of synthesized events.
    #[arg(long)]
    candidate_mean: Option<f64>,
    /// Share of eligible sites logged as events.
    #[arg(long)]
    site_rate: Option<f64>,
}

#[derive(Args)]
struct CorpusSplitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0.10)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// [default: IN with a .train.jsonl suffix]
    #[arg(long)]
    train: Option<PathBuf>,
    /// [default: IN with a .heldout.jsonl suffix]
    #[arg(long)]
    heldout: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VocabCmd {
    Build {
        #[arg(long = "in", required = true)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: u64,
        /// Keep only the most frequent entries.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Overrides the configuration's seed.
    #[arg(long)]
    seed: Option<u64>,
}

/// A training configuration file: an experiment plus where its data lives.
#[derive(Deserialize, Serialize)]
struct TrainFile {
    #[serde(flatten)]
    experiment: ExperimentConfig,
    data: DataPaths,
}

#[derive(Args)]
struct SweepArgs {
    /// Pretrained checkpoint, or `fresh`.
    #[arg(long)]
    base: String,
    #[arg(long)]
    finetune: PathBuf,
    #[arg(long)]
    heldout: PathBuf,
    /// Vocabulary for a fresh base.
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.25,0.5,1.0")]
    fractions: Vec<f64>,
    /// Number of seeds (0..N).
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = FINETUNE_LR)]
    finetune_lr: f64,
    #[arg(long, default_value_t = PRETRAIN_LR)]
    scratch_lr: f64,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long, default_value = "sweep")]
    name: String,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Sweep JSON files; `LABEL=PATH` names a series.
    #[arg(long = "sweep", required = true)]
    sweeps: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "top-1 vs fine-tuning data")]
    title: String,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    heldout: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    audit: Option<PathBuf>,
}

#[derive(Args)]
struct AbArgs {
    #[arg(long)]
    control: PathBuf,
    #[arg(long)]
    experiment: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct SimulateAbArgs {
    #[arg(long)]
    control: PathBuf,
    #[arg(long)]
    experiment: PathBuf,
    #[arg(long, default_value_t = 500)]
    developers: usize,
    #[arg(long, default_value_t = 14)]
    days: usize,
    #[arg(long, default_value_t = 18.0)]
    mean_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    uplift: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Sample,
    Desk,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value_t = Preset::Sample)]
    preset: Preset,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DeskArgs {
    #[arg(long, default_value = "runs/desk")]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 7)]
    corpus_seed: u64,
    /// Autocompletion events for the task-transfer comparison.
    #[arg(long, default_value_t = 1000)]
    finetune_events: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.25,0.5,1.0")]
    fractions: Vec<f64>,
}

#[derive(Args)]
struct ServeArgs {
    /// Checkpoint to serve; without it the service answers 503 until a reload.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[arg(long, default_value = "runs/events.jsonl")]
    log: PathBuf,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Corpus(CorpusCmd::Build(a)) => corpus_build(a),
        Command::Corpus(CorpusCmd::Split(a)) => {
            let train = a.train.unwrap_or_else(|| data::sibling(&a.input, "train"));
            let heldout = a.heldout.unwrap_or_else(|| data::sibling(&a.input, "heldout"));
            let (t, h) = data::split_file(&a.input, a.fraction, a.seed, &train, &heldout)?;
            println!("train {t} -> {}\nheldout {h} -> {}", train.display(), heldout.display());
            Ok(())
        }
        Command::Vocab(VocabCmd::Build {
            input,
            cutoff,
            max_size,
            out,
        }) => {
            let sets = input
                .iter()
                .map(|p| data::load_dataset(p, DatasetRole::All))
                .collect::<Result<Vec<_>>>()?;
            let mut vocab = build_vocab(&sets.iter().collect::<Vec<_>>(), cutoff);
            if let Some(m) = max_size {
                vocab = vocab.truncated(m);
            }
            data::ensure_parent(&out)?;
            vocab.save(&out)?;
            println!("{} entries -> {}", vocab.len(), out.display());
            Ok(())
        }
        Command::Vocab(VocabCmd::Union { a, b, out }) => {
            let v = Vocabulary::load(&a)?.union(&Vocabulary::load(&b)?);
            data::ensure_parent(&out)?;
            v.save(&out)?;
            println!("{} entries -> {}", v.len(), out.display());
            Ok(())
        }
        Command::Train(a) => train(a),
        Command::Sweep(a) => sweep(a),
        Command::Plot(a) => plot_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Abtest(a) => abtest(a),
        Command::SimulateAb(a) => {
            let sim = AbSimulation {
                developers_per_arm: a.developers,
                days: a.days,
                mean_rate: a.mean_rate,
                uplift: a.uplift,
                ..Default::default()
            };
            let (c, e) = simulate_ab(&sim, a.seed)?;
            write_rows(&a.control, &c)?;
            write_rows(&a.experiment, &e)?;
            println!("{} + {} observations", c.len(), e.len());
            Ok(())
        }
        Command::Synth(a) => {
            let cfg = match a.preset {
                Preset::Sample => SynthConfig::sample(a.seed),
                Preset::Desk => SynthConfig::desk(a.seed),
            };
            let docs = synth::generate(&cfg);
            std::fs::create_dir_all(&a.out)?;
            write_documents(&a.out, &docs)?;
            print!("{}", synth::describe(&docs));
            Ok(())
        }
        Command::Desk(a) => desk(a),
        Command::Serve(a) => serve(a),
    }
}

fn corpus_build(a: CorpusBuildArgs) -> Result<()> {
    let dir = a.input.unwrap_or_else(data::default_source_dir);
    let opts = BuildOptions {
        seed: a.seed,
        candidate_mean: a.candidate_mean,
        site_rate: a.site_rate,
    };
    let ds = data::build_from_tree(&dir, a.role, a.lang, &opts)?;
    data::save_dataset(&a.out, &ds)?;
    println!("{} {} items -> {}", ds.len(), a.role.name(), a.out.display());
    Ok(())
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    data::ensure_parent(path)?;
    xfer_core::corpus::write_jsonl(path, rows)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    data::ensure_parent(path)?;
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn train(a: TrainArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let mut file: TrainFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.config.display()))?;
    if let Some(s) = a.seed {
        file.experiment.seed = s;
    }
    let cfg = &file.experiment;
    cfg.validate()?;
    let vocab = Vocabulary::load(&data::resolve(&file.data.vocab))?;
    let catalog = file.data.catalog()?;
    log::info!(
        "config {} seed {}: {} phases, {} held-out events",
        cfg.id,
        cfg.seed,
        cfg.phases.len(),
        catalog.heldout.len()
    );
    let outcome = run_config(cfg, &catalog, &vocab)?;
    let stem = a.out.join(format!("config-{}-seed-{}", cfg.id, cfg.seed));
    data::ensure_parent(&stem.with_extension("ckpt"))?;
    outcome.checkpoint.save(&stem.with_extension("ckpt"))?;
    let history: Vec<_> = outcome.reports.iter().map(|r| &r.history).collect();
    write_json(&stem.with_extension("history.json"), &history)?;
    append_result(&a.out.join("results.jsonl"), &outcome.row)?;
    println!("{}", serde_json::to_string(&outcome.row)?);
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let base = if a.base == "fresh" {
        let vocab = Vocabulary::load(a.vocab.as_deref().context("--vocab is required with --base fresh")?)?;
        fresh_checkpoint(&ModelConfig::desk(0), &vocab, 0)?
    } else {
        ModelCheckpoint::load(Path::new(&a.base))?
    };
    ensure!(a.seeds > 0, "--seeds must be at least 1");
    let finetune = data::load_dataset(&a.finetune, DatasetRole::Autocompletion)?;
    let heldout = data::load_dataset(&a.heldout, DatasetRole::Autocompletion)?;
    let mut settings = SweepSettings {
        pretrained: PhaseSettings::default().with_lr(a.finetune_lr),
        scratch: PhaseSettings::default().with_lr(a.scratch_lr),
    };
    if let Some(n) = a.max_epochs {
        settings.pretrained.max_epochs = n;
        settings.scratch.max_epochs = n;
    }
    let seeds: Vec<u64> = (0..a.seeds).collect();
    let result = sweep_finetune_size(&base, &finetune, &heldout, &a.fractions, &seeds, &settings)?;
    save_sweep(&a.out, &a.name, &result)
}

fn save_sweep(out: &Path, name: &str, sweep: &Sweep) -> Result<()> {
    let path = out.join(format!("{name}.json"));
    write_json(&path, sweep)?;
    for row in &sweep.results {
        let mut row = row.clone();
        row.config = format!("{name}/{}", row.config);
        append_result(&out.join("results.jsonl"), &row)?;
    }
    println!("fraction  examples  pretrained  scratch  gap");
    for r in &sweep.rows {
        println!(
            "{:>8}  {:>8}  {:>10.4}  {:>7.4}  {:+.4}",
            r.fraction,
            r.examples,
            r.pretrained_mean,
            r.scratch_mean,
            r.gap()
        );
    }
    println!("-> {}", path.display());
    Ok(())
}

fn plot_cmd(a: PlotArgs) -> Result<()> {
    let series = a
        .sweeps
        .iter()
        .map(|spec| {
            let (label, path) = match spec.split_once('=') {
                Some((l, p)) => (l.to_string(), PathBuf::from(p)),
                None => {
                    let p = PathBuf::from(spec);
                    (p.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep").to_string(), p)
                }
            };
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            Ok(plot::Series {
                label,
                sweep: serde_json::from_str(&text)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if series.iter().all(|s| s.sweep.rows.is_empty()) {
        bail!("no sweep rows to plot");
    }
    data::ensure_parent(&a.out)?;
    plot::write_svg(&a.out, &a.title, &series)?;
    let csv = a.out.with_extension("csv");
    plot::write_csv(&csv, &series)?;
    println!("{} and {}", a.out.display(), csv.display());
    Ok(())
}

fn eval_cmd(a: EvalArgs) -> Result<()> {
    let ckpt = ModelCheckpoint::load(&a.model)?;
    let heldout = data::load_dataset(&a.heldout, DatasetRole::Autocompletion)?;
    let report = evaluate(&ckpt.model(), &ckpt.vocab, &heldout)?;
    write_json(&a.out, &report.metrics)?;
    if let Some(audit) = &a.audit {
        data::ensure_parent(audit)?;
        write_audit_csv(audit, &report.audit)?;
    }
    println!("{}", serde_json::to_string(&report.metrics)?);
    Ok(())
}

fn abtest(a: AbArgs) -> Result<()> {
    let control: Vec<ABObservation> = read_jsonl(&a.control)?;
    let experiment: Vec<ABObservation> = read_jsonl(&a.experiment)?;
    let result = ab_compare(&control, &experiment)?;
    let significant = significance_gate(&result, a.level);
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        result: &'a xfer_core::eval::ABResult,
        level: f64,
        significant: bool,
    }
    let out = Out {
        result: &result,
        level: a.level,
        significant,
    };
    if let Some(path) = &a.out {
        write_json(path, &out)?;
    }
    println!(
        "control {:.2} ± {:.2}, experiment {:.2} ± {:.2}, improvement {:+.2}%, p = {:.4} -> {}",
        result.mean_control,
        result.std_control,
        result.mean_experiment,
        result.std_experiment,
        100.0 * result.improvement,
        result.p_value,
        if significant { "significant" } else { "not significant" }
    );
    Ok(())
}

fn desk(a: DeskArgs) -> Result<()> {
    ensure!(a.seeds > 0, "--seeds must be at least 1");
    let setup = DeskSetup::build(DeskConfig::new(a.corpus_seed))?;
    std::fs::create_dir_all(&a.out)?;
    let seeds: Vec<u64> = (1..=a.seeds).collect();

    let mut trials = Vec::new();
    for &s in &seeds {
        let t = task_transfer(&setup, a.finetune_events, s)?;
        log::info!("task transfer seed {s}: {t:?}");
        trials.push(t);
    }
    write_json(&a.out.join("task_transfer.json"), &trials)?;
    let mean = |f: fn(&xfer_core::trainer::desk::TransferTrial) -> f64| trials.iter().map(f).sum::<f64>() / trials.len() as f64;
    println!(
        "task transfer ({} events): pretrain-only {:.4}  fine-tune-only {:.4}  pretrain+fine-tune {:.4}",
        a.finetune_events,
        mean(|t| t.pretrain_only),
        mean(|t| t.finetune_only),
        mean(|t| t.pretrain_finetune)
    );

    let commit = commit_sweep(&setup, &a.fractions, &seeds)?;
    save_sweep(&a.out, "commit", &commit)?;
    let language = language_sweep(&setup, None, &a.fractions, &seeds)?;
    save_sweep(&a.out, "language", &language)?;
    for (name, title, s) in [
        ("commit", "commit pretraining, lang-a fine-tuning", commit),
        ("language", "lang-a pretraining, lang-b fine-tuning", language),
    ] {
        let svg = a.out.join(format!("{name}.svg"));
        let series = [plot::Series {
            label: name.to_string(),
            sweep: s,
        }];
        plot::write_svg(&svg, title, &series)?;
        plot::write_csv(&svg.with_extension("csv"), &series)?;
    }
    Ok(())
}

fn serve(a: ServeArgs) -> Result<()> {
    let snapshot = a.model.as_deref().map(Snapshot::load).transpose()?;
    if snapshot.is_none() {
        log::warn!("no --model given; POST /v1/reload to load one");
    }
    let state = Arc::new(AppState::new(snapshot, EventLog::open(&a.log)?));
    let addr: SocketAddr = format!("{}:{}", a.host, a.port).parse().context("bad --host/--port")?;
    log::info!("listening on http://{addr}, logging acceptances to {}", a.log.display());
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(xfer_service::serve(state, addr))?;
    Ok(())
}
