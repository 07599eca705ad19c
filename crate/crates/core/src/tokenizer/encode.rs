//! Sequence encoding with per-example copy placeholders.

use std::collections::HashMap;

use crate::corpus::{classify, Language, TokenKind};
use crate::error::{Error, Result};

use super::split::{bigram_encode, Bigram, END_OF_TOKEN};
use super::vocab::{Vocabulary, MAX_PLACEHOLDERS, UNK};

/// Per-example map from out-of-vocabulary subtokens to `<var-i>` slots,
/// assigned in first-occurrence order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CopyMap {
    slots: Vec<String>,
    index: HashMap<String, usize>,
    overflowed: usize,
}

impl CopyMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the slot for `subtoken`, allocating the next one if needed.
    /// `None` once all placeholders are in use.
    pub fn assign(&mut self, subtoken: &str) -> Option<usize> {
        if let Some(&i) = self.index.get(subtoken) {
            return Some(i);
        }
        if self.slots.len() >= MAX_PLACEHOLDERS {
            self.overflowed += 1;
            log::debug!("copy placeholders exhausted; {subtoken:?} maps to {UNK}");
            return None;
        }
        let i = self.slots.len();
        self.slots.push(subtoken.to_string());
        self.index.insert(subtoken.to_string(), i);
        Some(i)
    }

    pub fn lookup(&self, subtoken: &str) -> Option<usize> {
        self.index.get(subtoken).copied()
    }

    pub fn get(&self, slot: usize) -> Option<&str> {
        self.slots.get(slot).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[String] {
        &self.slots
    }

    /// Subtokens that did not get a placeholder.
    pub fn overflowed(&self) -> usize {
        self.overflowed
    }
}

/// Id for one subtoken: its vocabulary id, else a copy placeholder, else `<unk>`.
pub fn subtoken_id(subtoken: &str, vocab: &Vocabulary, copy: &mut CopyMap) -> u32 {
    if subtoken == END_OF_TOKEN {
        return Vocabulary::END_ID;
    }
    if let Some(id) = vocab.id(subtoken).filter(|_| vocab.contains_entry(subtoken)) {
        return id;
    }
    copy.assign(subtoken)
        .and_then(|i| vocab.placeholder_id(i))
        .unwrap_or(Vocabulary::UNK_ID)
}

/// Encodes one identifier to its two ids.
pub fn encode_identifier(token: &str, vocab: &Vocabulary, copy: &mut CopyMap) -> Result<(Bigram, [u32; 2])> {
    let b = bigram_encode(token, |t| vocab.contains_entry(t))?;
    let first = subtoken_id(&b.first, vocab, copy);
    let second = subtoken_id(&b.second, vocab, copy);
    Ok((b, [first, second]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedSequence {
    pub ids: Vec<u32>,
    pub var_map: CopyMap,
    pub source_len: usize,
    /// One entry per source token: `None` for single-id tokens,
    /// `Some(join)` for identifiers occupying two ids.
    pub layout: Vec<Option<u8>>,
}

impl EncodedSequence {
    /// Id offset at which each source token starts.
    pub fn token_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.layout.len());
        let mut pos = 0;
        for l in &self.layout {
            out.push(pos);
            pos += if l.is_some() { 2 } else { 1 };
        }
        out
    }
}

fn is_control_code(tok: &str) -> bool {
    Language::ALL.iter().any(|l| l.control_code() == tok)
}

/// Encodes a token sequence, continuing the placeholder assignment in `copy`.
pub fn encode_with(
    tokens: &[String],
    language: Language,
    vocab: &Vocabulary,
    copy: &mut CopyMap,
) -> Result<(Vec<u32>, Vec<Option<u8>>)> {
    let mut ids = Vec::with_capacity(tokens.len() * 2);
    let mut layout = Vec::with_capacity(tokens.len());
    for tok in tokens {
        if is_control_code(tok) {
            ids.push(vocab.id(tok).expect("control codes are specials"));
            layout.push(None);
            continue;
        }
        match classify(tok, language) {
            TokenKind::Identifier => {
                let (b, pair) = encode_identifier(tok, vocab, copy)?;
                ids.extend_from_slice(&pair);
                layout.push(Some(b.join));
            }
            _ => {
                let id = vocab
                    .id(tok)
                    .filter(|_| vocab.contains_entry(tok))
                    .unwrap_or(Vocabulary::UNK_ID);
                ids.push(id);
                layout.push(None);
            }
        }
    }
    Ok((ids, layout))
}

/// Encodes `tokens` with a fresh per-example copy map.
pub fn encode_sequence(tokens: &[String], language: Language, vocab: &Vocabulary) -> Result<EncodedSequence> {
    let mut var_map = CopyMap::new();
    let (ids, layout) = encode_with(tokens, language, vocab, &mut var_map)?;
    Ok(EncodedSequence {
        ids,
        var_map,
        source_len: tokens.len(),
        layout,
    })
}

fn resolve(id: u32, vocab: &Vocabulary, copy: &CopyMap) -> Result<String> {
    if let Some(slot) = vocab.placeholder_index(id) {
        return copy
            .get(slot)
            .map(str::to_string)
            .ok_or(Error::MissingPlaceholder(slot));
    }
    vocab
        .token(id)
        .map(str::to_string)
        .ok_or(Error::TokenOutOfRange { id, size: vocab.len() })
}

/// Decodes an identifier's id pair back to its text.
pub fn decode_pair(ids: [u32; 2], join: u8, vocab: &Vocabulary, copy: &CopyMap) -> Result<String> {
    let first = resolve(ids[0], vocab, copy)?;
    let second = resolve(ids[1], vocab, copy)?;
    Ok(Bigram::join_halves(&first, &second, join))
}

/// Inverse of [`encode_sequence`]; exact on identifier tokens.
pub fn decode(encoded: &EncodedSequence, vocab: &Vocabulary) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(encoded.layout.len());
    let mut pos = 0;
    for l in &encoded.layout {
        match l {
            Some(join) => {
                let pair = [encoded.ids[pos], encoded.ids[pos + 1]];
                out.push(decode_pair(pair, *join, vocab, &encoded.var_map)?);
                pos += 2;
            }
            None => {
                out.push(resolve(encoded.ids[pos], vocab, &encoded.var_map)?);
                pos += 1;
            }
        }
    }
    Ok(out)
}
