use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use xfer_core::corpus::{
    build_dataset, load_documents, read_jsonl, split_holdout, synthesize_events_indexed, write_jsonl, Dataset,
    DatasetItem, DatasetRole, EventPolicy, Language, Origin, SourceDocument,
};
use xfer_core::trainer::DataCatalog;

pub const DATA_DIR_ENV: &str = "XFER_DATA_DIR";

/// Root for relative data paths: `$XFER_DATA_DIR` if set, else the cwd.
pub fn data_root() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

pub fn resolve(path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        data_root().join(path)
    }
}

/// Default source tree for `corpus build`.
pub fn default_source_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from("data/sample"),
    }
}

pub fn load_dataset(path: &Path, role: DatasetRole) -> Result<Dataset> {
    let items: Vec<DatasetItem> = read_jsonl(path).with_context(|| format!("reading dataset {}", path.display()))?;
    Ok(Dataset::new(role, items))
}

pub fn save_dataset(path: &Path, ds: &Dataset) -> Result<()> {
    ensure_parent(path)?;
    write_jsonl(path, &ds.items).with_context(|| format!("writing {}", path.display()))
}

pub fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

pub struct BuildOptions {
    pub seed: u64,
    pub candidate_mean: Option<f64>,
    pub site_rate: Option<f64>,
}

fn of(docs: &[SourceDocument], lang: Language, origin: Origin) -> Vec<SourceDocument> {
    docs.iter()
        .filter(|d| d.language == lang && d.origin == origin)
        .cloned()
        .collect()
}

/// Builds a dataset of `role` from the source tree at `dir`. Autocompletion
/// events are synthesized from the tree's acceptance logs.
pub fn build_from_tree(dir: &Path, role: DatasetRole, lang: Language, opts: &BuildOptions) -> Result<Dataset> {
    let docs = load_documents(dir).with_context(|| format!("loading source tree {}", dir.display()))?;
    let events = || -> Result<Dataset> {
        let mut policy = EventPolicy::for_language(lang);
        if let Some(m) = opts.candidate_mean {
            policy.candidate_mean = m;
        }
        if let Some(r) = opts.site_rate {
            policy.site_rate = r;
        }
        let index: Vec<SourceDocument> = docs.iter().filter(|d| d.language == lang).cloned().collect();
        let accept = of(&docs, lang, Origin::AcceptanceLog);
        if accept.is_empty() {
            bail!("{} has no {lang} acceptance logs", dir.display());
        }
        let events = synthesize_events_indexed(&accept, Some(&index), &policy, opts.seed)?;
        Ok(build_dataset(DatasetRole::Autocompletion, lang, &[], &events)?)
    };
    Ok(match role {
        DatasetRole::Autocompletion => events()?,
        DatasetRole::Ide => build_dataset(role, lang, &of(&docs, lang, Origin::IdeSnapshot), &[])?,
        DatasetRole::Commit => build_dataset(role, lang, &of(&docs, lang, Origin::Commit), &[])?,
        DatasetRole::All => {
            let ide = build_dataset(DatasetRole::Ide, lang, &of(&docs, lang, Origin::IdeSnapshot), &[])?;
            Dataset::union_all(&events()?, &ide)?
        }
    })
}

pub fn split_file(input: &Path, fraction: f64, seed: u64, train: &Path, heldout: &Path) -> Result<(usize, usize)> {
    let ds = load_dataset(input, DatasetRole::All)?;
    let (t, h) = split_holdout(&ds, fraction, seed)?;
    save_dataset(train, &t)?;
    save_dataset(heldout, &h)?;
    Ok((t.len(), h.len()))
}

/// `FILE.jsonl` → `FILE.<suffix>.jsonl`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    path.with_file_name(format!("{stem}.{suffix}.jsonl"))
}

/// The `data` section of a training configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DataPaths {
    pub language: Language,
    pub vocab: PathBuf,
    pub autocompletion: PathBuf,
    pub heldout: PathBuf,
    #[serde(default)]
    pub ide: Option<PathBuf>,
    #[serde(default)]
    pub commit: Option<PathBuf>,
}

impl DataPaths {
    pub fn catalog(&self) -> Result<DataCatalog> {
        let optional = |p: &Option<PathBuf>, role| -> Result<Dataset> {
            match p {
                Some(p) => load_dataset(&resolve(p), role),
                None => Ok(Dataset::new(role, Vec::new())),
            }
        };
        Ok(DataCatalog {
            language: self.language,
            ide: optional(&self.ide, DatasetRole::Ide)?,
            commit: optional(&self.commit, DatasetRole::Commit)?,
            autocompletion: load_dataset(&resolve(&self.autocompletion), DatasetRole::Autocompletion)?,
            heldout: load_dataset(&resolve(&self.heldout), DatasetRole::Autocompletion)?,
        })
    }
}
