use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lexer::{decode_source, lex, Language, TokenStream};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    IdeSnapshot,
    Commit,
    AcceptanceLog,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::IdeSnapshot => "ide_snapshot",
            Origin::Commit => "commit",
            Origin::AcceptanceLog => "acceptance_log",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDocument {
    pub path: String,
    pub language: Language,
    pub content: String,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cursor_offset: Option<usize>,
}

impl SourceDocument {
    pub fn new(
        path: impl Into<String>,
        language: Language,
        origin: Origin,
        content: impl Into<String>,
    ) -> Self {
        SourceDocument {
            path: path.into(),
            language,
            content: content.into(),
            origin,
            cursor_offset: None,
        }
    }

    pub fn with_cursor(mut self, offset: usize) -> Self {
        self.cursor_offset = Some(offset);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(off) = self.cursor_offset {
            if off > self.content.len() {
                return Err(Error::Invalid(format!(
                    "{}: cursor offset {off} beyond content length {}",
                    self.path,
                    self.content.len()
                )));
            }
        }
        Ok(())
    }

    pub fn lex(&self) -> Result<TokenStream> {
        lex(&self.content, self.language).map_err(|e| match e {
            Error::Undecodable { reason, .. } => Error::Undecodable {
                path: self.path.clone(),
                reason,
            },
            other => other,
        })
    }
}

/// Manifest row describing one file of an on-disk corpus.
#[derive(Debug, Deserialize, Serialize)]
struct ManifestEntry {
    path: String,
    language: Language,
    origin: Origin,
    #[serde(default)]
    cursor_offset: Option<usize>,
}

/// Loads every document listed in `root/manifest.jsonl`, sorted by path.
pub fn load_documents(root: &Path) -> Result<Vec<SourceDocument>> {
    let manifest = root.join("manifest.jsonl");
    let text = fs::read_to_string(&manifest).map_err(|e| Error::io(&manifest, e))?;
    let mut docs = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let entry: ManifestEntry = serde_json::from_str(line)?;
        let full = root.join(&entry.path);
        let bytes = fs::read(&full).map_err(|e| Error::io(&full, e))?;
        let content = decode_source(&entry.path, &bytes)?;
        let doc = SourceDocument {
            path: entry.path,
            language: entry.language,
            content,
            origin: entry.origin,
            cursor_offset: entry.cursor_offset,
        };
        doc.validate()?;
        docs.push(doc);
    }
    docs.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(docs)
}

/// Writes documents plus a manifest under `root`.
pub fn write_documents(root: &Path, docs: &[SourceDocument]) -> Result<()> {
    let mut manifest = String::new();
    for doc in docs {
        let full = root.join(&doc.path);
        if let Some(parent) = full.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&full, &doc.content).map_err(|e| Error::io(&full, e))?;
        let entry = ManifestEntry {
            path: doc.path.clone(),
            language: doc.language,
            origin: doc.origin,
            cursor_offset: doc.cursor_offset,
        };
        manifest.push_str(&serde_json::to_string(&entry)?);
        manifest.push('\n');
    }
    let path = root.join("manifest.jsonl");
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))
}
