//! Checkpoint container: `XFERCKPT`, a little-endian u32 header length, a
//! JSON header (config, provenance, tensor manifest) and raw little-endian
//! f32 tensor payloads.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::gpt::Gpt;
use super::params::{ModelConfig, Params};
use crate::corpus::{DatasetRole, Language};
use crate::error::{Error, Result};
use crate::tokenizer::Vocabulary;

const MAGIC: &[u8; 8] = b"XFERCKPT";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Pretrain,
    Finetune,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub phase: Phase,
    pub role: DatasetRole,
    pub languages: Vec<Language>,
    pub examples: usize,
    pub epochs: usize,
    pub best_epoch: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    shape: Vec<usize>,
    offset: usize,
    len: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Header {
    format_version: u32,
    config: ModelConfig,
    provenance: Vec<ProvenanceEntry>,
    tensors: Vec<TensorEntry>,
    vocabulary: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelCheckpoint {
    pub config: ModelConfig,
    pub params: Params<f32>,
    pub provenance: Vec<ProvenanceEntry>,
    pub vocab: Vocabulary,
    pub format_version: u32,
}

impl ModelCheckpoint {
    /// A freshly initialized model for `vocab`.
    pub fn fresh(mut config: ModelConfig, vocab: Vocabulary) -> Result<Self> {
        config.vocab_size = vocab.len();
        let model = Gpt::<f32>::new(config)?;
        Ok(ModelCheckpoint {
            config: model.config,
            params: model.params,
            provenance: Vec::new(),
            vocab,
            format_version: FORMAT_VERSION,
        })
    }

    pub fn model(&self) -> Gpt<f32> {
        Gpt {
            config: self.config.clone(),
            params: self.params.clone(),
        }
    }

    pub fn into_model(self) -> (Gpt<f32>, Vocabulary) {
        (
            Gpt {
                config: self.config,
                params: self.params,
            },
            self.vocab,
        )
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut tensors = Vec::new();
        let mut payload: Vec<u8> = Vec::with_capacity(self.params.n_params() * 4);
        for (name, t) in self.params.named() {
            tensors.push(TensorEntry {
                name,
                shape: t.shape.clone(),
                offset: payload.len(),
                len: t.data.len(),
            });
            for v in &t.data {
                payload.extend_from_slice(&v.to_le_bytes());
            }
        }
        let header = Header {
            format_version: self.format_version,
            config: self.config.clone(),
            provenance: self.provenance.clone(),
            tensors,
            vocabulary: self.vocab.to_tsv(),
        };
        let json = serde_json::to_vec(&header)?;
        let mut out = Vec::with_capacity(12 + json.len() + payload.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(json.len() as u32).to_le_bytes());
        out.extend_from_slice(&json);
        out.extend_from_slice(&payload);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Checkpoint(m.to_string());
        if bytes.len() < 12 || &bytes[..8] != MAGIC {
            return Err(bad("missing magic"));
        }
        let hlen = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
        let body = bytes.get(12..12 + hlen).ok_or_else(|| bad("truncated header"))?;
        let header: Header = serde_json::from_slice(body)?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported format version {}",
                header.format_version
            )));
        }
        header.config.validate()?;
        let payload = &bytes[12 + hlen..];
        let mut params = Params::<f32>::zeros(&header.config);
        let expected: Vec<String> = params.named().into_iter().map(|(n, _)| n).collect();
        if expected.len() != header.tensors.len() {
            return Err(bad("tensor manifest does not match config"));
        }
        for ((entry, want_name), dst) in header.tensors.iter().zip(&expected).zip(params.tensors_mut()) {
            if entry.name != *want_name || entry.shape != dst.shape || entry.len != dst.data.len() {
                return Err(Error::Checkpoint(format!("tensor {} does not match config", entry.name)));
            }
            let raw = payload
                .get(entry.offset..entry.offset + entry.len * 4)
                .ok_or_else(|| Error::Checkpoint(format!("tensor {} truncated", entry.name)))?;
            for (v, chunk) in dst.data.iter_mut().zip(raw.chunks_exact(4)) {
                *v = f32::from_le_bytes(chunk.try_into().expect("4 bytes"));
            }
        }
        let vocab = Vocabulary::from_tsv(&header.vocabulary)?;
        if vocab.len() != header.config.vocab_size {
            return Err(bad("vocabulary size does not match config"));
        }
        Ok(ModelCheckpoint {
            config: header.config,
            params,
            provenance: header.provenance,
            vocab,
            format_version: header.format_version,
        })
    }

    /// Writes to a temporary sibling and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let bytes = self.to_bytes()?;
        let tmp = path.with_extension("ckpt.tmp");
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        f.write_all(&bytes).map_err(|e| Error::io(&tmp, e))?;
        f.sync_all().map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

/// Returns a tensor list in checkpoint order (used by tests and tooling).
pub fn tensor_names(config: &ModelConfig) -> Vec<String> {
    Params::<f32>::zeros(config).named().into_iter().map(|(n, _)| n).collect()
}
