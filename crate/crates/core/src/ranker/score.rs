use std::cmp::Ordering;

use serde::Serialize;

use super::tree::{build_tree, PartialTokenTree, Skipped};
use super::encode_context;
use crate::corpus::Language;
use crate::error::{Error, Result};
use crate::model::{log_softmax, Gpt, Mode, Scalar};
use crate::tokenizer::Vocabulary;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Suggestion {
    pub candidate: String,
    /// Position in the request's candidate list.
    pub index: usize,
    /// `log P(sub1 | ctx) + log P(sub2 | ctx, sub1)`.
    pub score: f64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedSuggestions {
    pub suggestions: Vec<Suggestion>,
    pub skipped: Vec<Skipped>,
    /// Model evaluations used: one context pass plus one per root.
    pub forwards: usize,
}

impl RankedSuggestions {
    pub fn rank_of(&self, candidate: &str) -> Option<usize> {
        self.suggestions.iter().find(|s| s.candidate == candidate).map(|s| s.rank)
    }
}

fn to_f64<T: Scalar>(v: T) -> f64 {
    v.to_f64().expect("finite score")
}

/// Higher score first; exact ties by candidate text, then input position.
fn order(a: &Suggestion, b: &Suggestion) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.candidate.cmp(&b.candidate))
        .then_with(|| a.index.cmp(&b.index))
}

fn ranked(tree: &PartialTokenTree, mut scored: Vec<(usize, f64)>, forwards: usize) -> RankedSuggestions {
    scored.sort_unstable_by_key(|&(i, _)| i);
    let mut suggestions: Vec<Suggestion> = scored
        .into_iter()
        .map(|(index, score)| Suggestion {
            candidate: tree.candidates[index].clone(),
            index,
            score,
            rank: 0,
        })
        .collect();
    suggestions.sort_by(order);
    for (r, s) in suggestions.iter_mut().enumerate() {
        s.rank = r + 1;
    }
    RankedSuggestions {
        suggestions,
        skipped: tree.skipped.clone(),
        forwards,
    }
}

/// Scores every candidate in `tree`: one pass over the context, then all
/// roots extended from the cached state together.
pub fn score_candidates<T: Scalar>(context_ids: &[u32], tree: &PartialTokenTree, model: &Gpt<T>) -> Result<RankedSuggestions> {
    if context_ids.is_empty() {
        return Err(Error::Invalid("empty context".into()));
    }
    if tree.roots.is_empty() {
        return Ok(ranked(tree, Vec::new(), 0));
    }
    let state = model.prefill(context_ids)?;
    let first = log_softmax(&state.last_logits);
    let roots: Vec<u32> = tree.roots.keys().copied().collect();
    let logits = model.extend_batch(&state, &roots)?;
    let v = model.config.vocab_size;
    let mut scored = Vec::with_capacity(tree.leaf_count());
    for (r, node) in tree.roots.values().enumerate() {
        let second = log_softmax(&logits[r * v..(r + 1) * v]);
        let head = to_f64(first[node.subtoken as usize]);
        for (&sub2, idx) in &node.children {
            let s = head + to_f64(second[sub2 as usize]);
            scored.extend(idx.iter().map(|&i| (i, s)));
        }
    }
    Ok(ranked(tree, scored, 1 + roots.len()))
}

/// Reference scorer: an independent full forward pass per candidate.
pub fn brute_force_scores<T: Scalar>(context_ids: &[u32], tree: &PartialTokenTree, model: &Gpt<T>) -> Result<RankedSuggestions> {
    let n = context_ids.len();
    let mut scored = Vec::new();
    for (i, [a, b]) in tree.paths() {
        let mut seq = context_ids.to_vec();
        seq.push(a);
        let logits = model.forward(&seq, Mode::Infer, None)?;
        let s = to_f64(log_softmax(logits.row(n - 1))[a as usize]) + to_f64(log_softmax(logits.row(n))[b as usize]);
        scored.push((i, s));
    }
    let forwards = scored.len();
    Ok(ranked(tree, scored, forwards))
}

/// Encodes context and candidates, then ranks them.
pub fn rank<T: Scalar>(
    model: &Gpt<T>,
    vocab: &Vocabulary,
    language: Language,
    context_tokens: &[String],
    candidates: &[String],
) -> Result<RankedSuggestions> {
    if vocab.len() != model.config.vocab_size {
        return Err(Error::VocabMismatch(format!(
            "vocabulary has {} entries, model expects {}",
            vocab.len(),
            model.config.vocab_size
        )));
    }
    // leave room for the first subtoken
    let (ctx, copy) = encode_context(context_tokens, language, vocab, model.config.context_len - 1)?;
    let tree = build_tree(candidates, language, vocab, &copy);
    score_candidates(&ctx, &tree, model)
}

/// The first `k` suggestions (all of them when fewer).
pub fn top_k(ranked: &RankedSuggestions, k: usize) -> &[Suggestion] {
    &ranked.suggestions[..k.min(ranked.suggestions.len())]
}
