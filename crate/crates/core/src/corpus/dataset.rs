use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::events::CompletionEvent;
use super::lexer::{Language, TokenKind};
use super::source::{Origin, SourceDocument};
use crate::error::{Error, Result};
use crate::seed::stable_hash;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetRole {
    Autocompletion,
    Ide,
    Commit,
    All,
}

impl DatasetRole {
    pub fn name(self) -> &'static str {
        match self {
            DatasetRole::Autocompletion => "autocompletion",
            DatasetRole::Ide => "ide",
            DatasetRole::Commit => "commit",
            DatasetRole::All => "all",
        }
    }

    fn required_origin(self) -> Option<Origin> {
        match self {
            DatasetRole::Ide => Some(Origin::IdeSnapshot),
            DatasetRole::Commit => Some(Origin::Commit),
            DatasetRole::Autocompletion => Some(Origin::AcceptanceLog),
            DatasetRole::All => None,
        }
    }
}

impl std::str::FromStr for DatasetRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "autocompletion" | "selec" => Ok(DatasetRole::Autocompletion),
            "ide" | "ctx" => Ok(DatasetRole::Ide),
            "commit" | "diff" => Ok(DatasetRole::Commit),
            "all" => Ok(DatasetRole::All),
            _ => Err(Error::Invalid(format!("unknown dataset role {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Heldout,
}

/// A task-agnostic code sequence (IDE snapshot or commit file).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    pub id: String,
    pub language: Language,
    pub tokens: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetItem {
    Event(CompletionEvent),
    Sequence(TokenSequence),
}

impl DatasetItem {
    pub fn id(&self) -> &str {
        match self {
            DatasetItem::Event(e) => &e.id,
            DatasetItem::Sequence(s) => &s.id,
        }
    }

    pub fn language(&self) -> Language {
        match self {
            DatasetItem::Event(e) => e.language,
            DatasetItem::Sequence(s) => s.language,
        }
    }

    /// The leading tokens the model sees (the context for events).
    pub fn tokens(&self) -> &[String] {
        match self {
            DatasetItem::Event(e) => &e.context_tokens,
            DatasetItem::Sequence(s) => &s.tokens,
        }
    }

    fn tokens_mut(&mut self) -> &mut Vec<String> {
        match self {
            DatasetItem::Event(e) => &mut e.context_tokens,
            DatasetItem::Sequence(s) => &mut s.tokens,
        }
    }

    pub fn as_event(&self) -> Option<&CompletionEvent> {
        match self {
            DatasetItem::Event(e) => Some(e),
            DatasetItem::Sequence(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub role: DatasetRole,
    pub language_mix: BTreeSet<Language>,
    pub items: Vec<DatasetItem>,
    pub split: Split,
}

impl Dataset {
    pub fn new(role: DatasetRole, items: Vec<DatasetItem>) -> Self {
        let language_mix = items.iter().map(DatasetItem::language).collect();
        Dataset {
            role,
            language_mix,
            items,
            split: Split::Train,
        }
    }

    pub fn from_events(events: Vec<CompletionEvent>) -> Self {
        Dataset::new(
            DatasetRole::Autocompletion,
            events.into_iter().map(DatasetItem::Event).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = &CompletionEvent> {
        self.items.iter().filter_map(DatasetItem::as_event)
    }

    /// The `All` role: the multiset union of autocompletion and IDE items.
    pub fn union_all(autocompletion: &Dataset, ide: &Dataset) -> Result<Dataset> {
        if autocompletion.role != DatasetRole::Autocompletion || ide.role != DatasetRole::Ide {
            return Err(Error::Invalid(format!(
                "All is built from autocompletion and ide datasets, got {} and {}",
                autocompletion.role.name(),
                ide.role.name()
            )));
        }
        let mut items = autocompletion.items.clone();
        items.extend(ide.items.iter().cloned());
        Ok(Dataset::new(DatasetRole::All, items))
    }

    /// Concatenates datasets of the same role (e.g. across languages).
    pub fn concat(parts: &[&Dataset]) -> Result<Dataset> {
        let role = parts.first().ok_or(Error::EmptyDataset)?.role;
        if parts.iter().any(|p| p.role != role) {
            return Err(Error::Invalid("cannot concatenate datasets of different roles".into()));
        }
        let items = parts.iter().flat_map(|p| p.items.iter().cloned()).collect();
        Ok(Dataset::new(role, items))
    }

    /// Prepends the language control code to every item.
    pub fn tagged(&self) -> Result<Dataset> {
        let mut out = self.clone();
        for item in &mut out.items {
            let lang = item.language();
            let tagged = tag_language(item.tokens(), lang)?;
            *item.tokens_mut() = tagged;
        }
        Ok(out)
    }

    /// Keeps the items whose id hash falls in the first `fraction` of the
    /// seed's ordering, so smaller fractions select subsets of larger ones.
    pub fn subsample(&self, fraction: f64, seed: u64) -> Dataset {
        let keep = (fraction.clamp(0.0, 1.0) * self.items.len() as f64).round() as usize;
        let mut order: Vec<(u64, usize)> = self
            .items
            .iter()
            .enumerate()
            .map(|(i, it)| (stable_hash(seed, it.id()), i))
            .collect();
        order.sort();
        let mut chosen: Vec<usize> = order.into_iter().take(keep).map(|(_, i)| i).collect();
        chosen.sort_unstable();
        let items = chosen.into_iter().map(|i| self.items[i].clone()).collect();
        let mut out = Dataset::new(self.role, items);
        out.split = self.split;
        out
    }
}

/// Prepends the control code for `language`. Tagging twice is an error.
pub fn tag_language(tokens: &[String], language: Language) -> Result<Vec<String>> {
    if tokens
        .first()
        .is_some_and(|t| Language::ALL.iter().any(|l| l.control_code() == *t))
    {
        return Err(Error::AlreadyTagged);
    }
    let mut out = Vec::with_capacity(tokens.len() + 1);
    out.push(language.control_code());
    out.extend(tokens.iter().cloned());
    Ok(out)
}

/// Builds a dataset of `role` for `language`.
///
/// IDE and Commit datasets are built from documents with the matching
/// origin; Autocompletion datasets are built from `events`. `All` is
/// assembled with [`Dataset::union_all`].
pub fn build_dataset(
    role: DatasetRole,
    language: Language,
    documents: &[SourceDocument],
    events: &[CompletionEvent],
) -> Result<Dataset> {
    if role == DatasetRole::All {
        return Err(Error::Invalid(
            "the All role is the union of built Autocompletion and IDE datasets".into(),
        ));
    }
    let required = role.required_origin().expect("non-All role");
    for doc in documents {
        if doc.origin != required {
            return Err(Error::OriginMismatch {
                path: doc.path.clone(),
                found: doc.origin.name().into(),
                role: role.name().into(),
                expected: required.name().into(),
            });
        }
        if doc.language != language {
            return Err(Error::Invalid(format!(
                "{}: language {} does not match dataset language {language}",
                doc.path, doc.language
            )));
        }
    }
    let items = match role {
        DatasetRole::Autocompletion => {
            if events.is_empty() {
                return Err(Error::Invalid(
                    "autocompletion datasets require completion events".into(),
                ));
            }
            let mut items = Vec::with_capacity(events.len());
            for ev in events {
                ev.validate()?;
                if ev.language != language {
                    return Err(Error::Invalid(format!("event {} has language {}", ev.id, ev.language)));
                }
                items.push(DatasetItem::Event(ev.clone()));
            }
            items
        }
        _ => {
            let mut items = Vec::with_capacity(documents.len());
            for doc in documents {
                let tokens = doc
                    .lex()?
                    .tokens
                    .into_iter()
                    .filter(|t| t.kind != TokenKind::Other)
                    .map(|t| t.text)
                    .collect();
                items.push(DatasetItem::Sequence(TokenSequence {
                    id: doc.path.clone(),
                    language: doc.language,
                    tokens,
                }));
            }
            items
        }
    };
    let mut ds = Dataset::new(role, items);
    ds.language_mix.insert(language);
    Ok(ds)
}

/// Splits `dataset` into (train, heldout) with `round(fraction * n)` held out.
/// Membership is keyed by a seeded hash of each item id.
pub fn split_holdout(dataset: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Invalid(format!("holdout fraction {fraction} not in (0, 1)")));
    }
    let n = dataset.items.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let heldout_n = (fraction * n as f64).round() as usize;
    let mut order: Vec<(u64, &str, usize)> = dataset
        .items
        .iter()
        .enumerate()
        .map(|(i, it)| (stable_hash(seed, it.id()), it.id(), i))
        .collect();
    order.sort();
    let mut is_heldout = vec![false; n];
    for &(_, _, i) in order.iter().take(heldout_n) {
        is_heldout[i] = true;
    }
    let mut train = Vec::with_capacity(n - heldout_n);
    let mut heldout = Vec::with_capacity(heldout_n);
    for (item, held) in dataset.items.iter().zip(is_heldout) {
        if held {
            heldout.push(item.clone());
        } else {
            train.push(item.clone());
        }
    }
    let mut train = Dataset::new(dataset.role, train);
    let mut held = Dataset::new(dataset.role, heldout);
    train.language_mix = dataset.language_mix.clone();
    held.language_mix = dataset.language_mix.clone();
    held.split = Split::Heldout;
    Ok((train, held))
}

/// Writes one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut buf, row)?;
        buf.push(b'\n');
    }
    let tmp = path.with_extension("jsonl.tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(&buf).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;

    fn seq_dataset(n: usize) -> Dataset {
        let items = (0..n)
            .map(|i| {
                DatasetItem::Sequence(TokenSequence {
                    id: format!("s{i}"),
                    language: Language::LangA,
                    tokens: vec!["x".into()],
                })
            })
            .collect();
        Dataset::new(DatasetRole::Ide, items)
    }

    fn event(i: usize) -> CompletionEvent {
        CompletionEvent {
            id: format!("e{i}"),
            language: Language::LangA,
            context_tokens: vec!["$".into()],
            candidates: vec!["foo".into()],
            accepted: "foo".into(),
            developer_id: "d".into(),
            day: NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(),
        }
    }

    #[test]
    fn commit_dataset_from_files() {
        let docs: Vec<_> = (0..3)
            .map(|i| SourceDocument::new(format!("c{i}"), Language::LangA, Origin::Commit, "$x = 1;"))
            .collect();
        let ds = build_dataset(DatasetRole::Commit, Language::LangA, &docs, &[]).unwrap();
        assert_eq!(ds.len(), 3);
        assert!(ds.items.iter().all(|i| matches!(i, DatasetItem::Sequence(_))));
    }

    #[test]
    fn origin_mismatch_names_document() {
        let docs = vec![SourceDocument::new("ide/a.hk", Language::LangA, Origin::IdeSnapshot, "x")];
        let err = build_dataset(DatasetRole::Autocompletion, Language::LangA, &docs, &[]).unwrap_err();
        assert!(err.to_string().contains("ide/a.hk"), "{err}");
        let err = build_dataset(DatasetRole::Commit, Language::LangA, &docs, &[]).unwrap_err();
        assert!(err.to_string().contains("ide/a.hk"));
        // no documents and no events
        assert!(build_dataset(DatasetRole::Autocompletion, Language::LangA, &[], &[]).is_err());
    }

    #[test]
    fn all_is_union() {
        let auto = Dataset::from_events((0..10).map(event).collect());
        let ide = seq_dataset(7);
        let all = Dataset::union_all(&auto, &ide).unwrap();
        assert_eq!(all.len(), 17);
        assert_eq!(all.role, DatasetRole::All);
        assert!(Dataset::union_all(&ide, &auto).is_err());
    }

    #[test]
    fn tagging() {
        let toks = vec!["t1".to_string(), "t2".to_string()];
        let tagged = tag_language(&toks, Language::LangA).unwrap();
        assert_eq!(tagged, vec!["<lang-a>", "t1", "t2"]);
        assert!(matches!(tag_language(&tagged, Language::LangA), Err(Error::AlreadyTagged)));
        assert!(matches!(tag_language(&tagged, Language::LangB), Err(Error::AlreadyTagged)));
        let ds = seq_dataset(4).tagged().unwrap();
        assert!(ds.tagged().is_err());
    }

    #[test]
    fn split_sizes() {
        for (n, held) in [(100, 10), (10, 1), (17, 2)] {
            let (tr, he) = split_holdout(&seq_dataset(n), 0.10, 1).unwrap();
            assert_eq!((tr.len(), he.len()), (n - held, held));
        }
        assert!(split_holdout(&seq_dataset(0), 0.1, 1).is_err());
        assert!(split_holdout(&seq_dataset(5), 1.0, 1).is_err());
        assert!(split_holdout(&seq_dataset(5), 0.0, 1).is_err());
    }

    #[test]
    fn split_is_a_deterministic_partition() {
        let ds = seq_dataset(50);
        let (tr1, he1) = split_holdout(&ds, 0.1, 7).unwrap();
        let (tr2, he2) = split_holdout(&ds, 0.1, 7).unwrap();
        assert_eq!(he1, he2);
        assert_eq!(tr1, tr2);
        let mut ids: Vec<&str> = tr1.items.iter().chain(&he1.items).map(|i| i.id()).collect();
        ids.sort();
        let mut orig: Vec<&str> = ds.items.iter().map(|i| i.id()).collect();
        orig.sort();
        assert_eq!(ids, orig);
        let (_, he3) = split_holdout(&ds, 0.1, 8).unwrap();
        assert_ne!(he1, he3);
    }

    #[test]
    fn subsample_nests() {
        let ds = seq_dataset(200);
        let small = ds.subsample(0.05, 3);
        let big = ds.subsample(0.25, 3);
        assert_eq!(small.len(), 10);
        assert_eq!(big.len(), 50);
        let big_ids: BTreeSet<&str> = big.items.iter().map(|i| i.id()).collect();
        assert!(small.items.iter().all(|i| big_ids.contains(i.id())));
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ev.jsonl");
        let items: Vec<DatasetItem> = vec![DatasetItem::Event(event(1)), seq_dataset(1).items[0].clone()];
        write_jsonl(&path, &items).unwrap();
        let back: Vec<DatasetItem> = read_jsonl(&path).unwrap();
        assert_eq!(back, items);
        let text = fs::read_to_string(&path).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in ["id", "language", "context_tokens", "candidates", "accepted", "developer_id", "day"] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
    }
}
