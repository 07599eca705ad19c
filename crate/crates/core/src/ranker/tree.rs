use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{classify, Language, TokenKind};
use crate::tokenizer::{encode_identifier, CopyMap, Vocabulary};

/// A candidate left out of the tree, with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub candidate: String,
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub subtoken: u32,
    /// Second subtoken → candidates whose encoding ends there. Distinct
    /// candidates can share a full path (e.g. two unseen OOV names).
    pub children: BTreeMap<u32, Vec<usize>>,
    pub candidate_indices: Vec<usize>,
}

/// Height-2 trie over candidates' bigram encodings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTokenTree {
    pub roots: BTreeMap<u32, Node>,
    pub candidates: Vec<String>,
    pub skipped: Vec<Skipped>,
}

impl PartialTokenTree {
    pub fn leaf_count(&self) -> usize {
        self.roots.values().map(|n| n.candidate_indices.len()).sum()
    }

    /// Candidate index → its (first, second) ids.
    pub fn paths(&self) -> Vec<(usize, [u32; 2])> {
        let mut out = Vec::with_capacity(self.leaf_count());
        for (&first, node) in &self.roots {
            for (&second, idx) in &node.children {
                out.extend(idx.iter().map(|&i| (i, [first, second])));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Inserts each candidate's bigram encoding. OOV halves continue the
/// context's copy map, so a candidate that reuses an OOV name from the
/// context gets the same `<var-i>`; each candidate encodes against its own
/// copy of the map, so the result does not depend on candidate order.
pub fn build_tree(candidates: &[String], language: Language, vocab: &Vocabulary, context_copy: &CopyMap) -> PartialTokenTree {
    let mut roots: BTreeMap<u32, Node> = BTreeMap::new();
    let mut skipped = Vec::new();
    let mut seen = HashSet::new();
    for (i, cand) in candidates.iter().enumerate() {
        let skip = |reason: &str| Skipped {
            candidate: cand.clone(),
            index: i,
            reason: reason.to_string(),
        };
        if !seen.insert(cand.as_str()) {
            skipped.push(skip("duplicate candidate"));
            continue;
        }
        if classify(cand, language) != TokenKind::Identifier {
            skipped.push(skip("not an identifier"));
            continue;
        }
        let mut copy = context_copy.clone();
        let ids = match encode_identifier(cand, vocab, &mut copy) {
            Ok((_, ids)) => ids,
            Err(e) => {
                skipped.push(skip(&e.to_string()));
                continue;
            }
        };
        let node = roots.entry(ids[0]).or_insert_with(|| Node {
            subtoken: ids[0],
            children: BTreeMap::new(),
            candidate_indices: Vec::new(),
        });
        node.children.entry(ids[1]).or_default().push(i);
        node.candidate_indices.push(i);
    }
    if !skipped.is_empty() {
        log::debug!("ranker skipped {} candidate(s)", skipped.len());
    }
    PartialTokenTree {
        roots,
        candidates: candidates.to_vec(),
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Dataset, DatasetItem, DatasetRole, TokenSequence};
    use crate::tokenizer::{build_vocab, END_OF_TOKEN};

    fn vocab_with(words: &[&str]) -> Vocabulary {
        let tokens: Vec<String> = words.iter().flat_map(|w| [w.to_string(), w.to_string()]).collect();
        let ds = Dataset::new(
            DatasetRole::Ide,
            vec![DatasetItem::Sequence(TokenSequence {
                id: "s".into(),
                language: Language::LangB,
                tokens,
            })],
        );
        build_vocab(&[&ds], 2)
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn in_vocab_candidate_is_whole_path() {
        let v = vocab_with(&["fooBar"]);
        let t = build_tree(&s(&["fooBar"]), Language::LangB, &v, &CopyMap::new());
        let end = v.id(END_OF_TOKEN).unwrap();
        assert_eq!(t.paths(), vec![(0, [v.id("fooBar").unwrap(), end])]);
    }

    #[test]
    fn shared_first_half_shares_a_root() {
        let v = vocab_with(&["fooBar", "BazQuux", "X"]);
        let t = build_tree(&s(&["fooBarBazQuux", "fooBarX"]), Language::LangB, &v, &CopyMap::new());
        assert_eq!(t.roots.len(), 1);
        assert_eq!(t.leaf_count(), 2);
        let root = t.roots.values().next().unwrap();
        assert_eq!(root.children.len(), 2);
    }

    #[test]
    fn context_placeholders_are_reused() {
        let v = Vocabulary::specials_only();
        let mut ctx = CopyMap::new();
        ctx.assign("widget");
        let t = build_tree(&s(&["widget", "gadget"]), Language::LangB, &v, &ctx);
        let paths = t.paths();
        assert_eq!(paths[0].1[0], v.placeholder_id(0).unwrap());
        // an unseen OOV name takes the next free slot
        assert_eq!(paths[1].1[0], v.placeholder_id(1).unwrap());
    }

    #[test]
    fn unencodable_candidates_are_reported() {
        let v = Vocabulary::specials_only();
        let t = build_tree(&s(&["ok", "(", "ok", ""]), Language::LangB, &v, &CopyMap::new());
        assert_eq!(t.leaf_count(), 1);
        let idx: Vec<usize> = t.skipped.iter().map(|s| s.index).collect();
        assert_eq!(idx, vec![1, 2, 3]);
    }
}
