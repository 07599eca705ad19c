//! Candidate ranking over a height-2 partial-token tree.

mod score;
mod tree;

pub use score::{brute_force_scores, rank, score_candidates, top_k, RankedSuggestions, Suggestion};
pub use tree::{build_tree, Node, PartialTokenTree, Skipped};

use crate::corpus::Language;
use crate::error::{Error, Result};
use crate::tokenizer::{encode_with, CopyMap, Vocabulary};

/// Encodes completion context as `<lang>` followed by its subtokens, keeping
/// the control code and the most recent `max_len - 1` ids. Copy placeholders
/// are assigned over the whole context, before truncation.
pub fn encode_context(
    tokens: &[String],
    language: Language,
    vocab: &Vocabulary,
    max_len: usize,
) -> Result<(Vec<u32>, CopyMap)> {
    if max_len < 2 {
        return Err(Error::Invalid("context window must hold at least two ids".into()));
    }
    let control = language.control_code();
    let body = match tokens.first() {
        Some(t) if *t == control => &tokens[1..],
        _ => tokens,
    };
    let mut copy = CopyMap::new();
    let (ids, _) = encode_with(body, language, vocab, &mut copy)?;
    let keep = ids.len().min(max_len - 1);
    let mut out = Vec::with_capacity(keep + 1);
    out.push(vocab.control_id(language));
    out.extend_from_slice(&ids[ids.len() - keep..]);
    Ok((out, copy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &[&str]) -> Vec<String> {
        s.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn context_is_tagged_and_truncated_from_the_left() {
        let v = Vocabulary::specials_only();
        let (ids, copy) = encode_context(&toks(&["alpha", "(", "beta", ")"]), Language::LangB, &v, 4).unwrap();
        assert_eq!(ids.len(), 4);
        assert_eq!(ids[0], v.control_id(Language::LangB));
        // placeholders were assigned over the full context
        assert_eq!(copy.slots(), &["alpha".to_string(), "beta".to_string()]);
        let (tagged, _) =
            encode_context(&toks(&["<lang-b>", "x"]), Language::LangB, &v, 16).unwrap();
        let (plain, _) = encode_context(&toks(&["x"]), Language::LangB, &v, 16).unwrap();
        assert_eq!(tagged, plain);
    }
}
