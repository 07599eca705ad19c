use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use crate::corpus::{classify, Dataset, DatasetItem, Language, TokenKind};
use crate::error::{Error, Result};

use super::split::{bigram_encode, END_OF_TOKEN};

pub const PAD: &str = "<pad>";
pub const UNK: &str = "<unk>";
/// Number of per-example copy placeholders `<var-0>` … `<var-63>`.
pub const MAX_PLACEHOLDERS: usize = 64;
pub const DEFAULT_CUTOFF: u64 = 2;

pub fn placeholder(i: usize) -> String {
    format!("<var-{i}>")
}

fn special_tokens() -> Vec<String> {
    let mut s = vec![PAD.to_string(), UNK.to_string(), END_OF_TOKEN.to_string()];
    s.extend((0..MAX_PLACEHOLDERS).map(placeholder));
    s.extend(Language::ALL.iter().map(|l| l.control_code()));
    s
}

/// Ordered subtoken table. Specials occupy the first ids, corpus entries
/// follow in (descending count, string) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<(String, u64)>,
    n_specials: usize,
    id_of: HashMap<String, u32>,
}

impl Vocabulary {
    pub const PAD_ID: u32 = 0;
    pub const UNK_ID: u32 = 1;
    pub const END_ID: u32 = 2;
    pub const FIRST_PLACEHOLDER_ID: u32 = 3;

    /// A vocabulary holding only the special tokens.
    pub fn specials_only() -> Self {
        Self::from_counts(BTreeMap::new())
    }

    fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let specials = special_tokens();
        let mut corpus: Vec<(String, u64)> = counts
            .into_iter()
            .filter(|(s, _)| !specials.contains(s))
            .collect();
        corpus.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let n_specials = specials.len();
        let entries: Vec<(String, u64)> = specials
            .into_iter()
            .map(|s| (s, 0))
            .chain(corpus)
            .collect();
        let id_of = entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i as u32))
            .collect();
        Vocabulary {
            entries,
            n_specials,
            id_of,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n_specials(&self) -> usize {
        self.n_specials
    }

    pub fn id(&self, subtoken: &str) -> Option<u32> {
        self.id_of.get(subtoken).copied()
    }

    pub fn contains(&self, subtoken: &str) -> bool {
        self.id_of.contains_key(subtoken)
    }

    /// True for corpus entries (not specials).
    pub fn contains_entry(&self, subtoken: &str) -> bool {
        self.id(subtoken).is_some_and(|id| id as usize >= self.n_specials)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.entries.get(id as usize).map(|(s, _)| s.as_str())
    }

    pub fn count(&self, id: u32) -> Option<u64> {
        self.entries.get(id as usize).map(|(_, c)| *c)
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn placeholder_id(&self, i: usize) -> Option<u32> {
        (i < MAX_PLACEHOLDERS).then(|| Self::FIRST_PLACEHOLDER_ID + i as u32)
    }

    /// Inverse of [`Vocabulary::placeholder_id`].
    pub fn placeholder_index(&self, id: u32) -> Option<usize> {
        let first = Self::FIRST_PLACEHOLDER_ID;
        (id >= first && id < first + MAX_PLACEHOLDERS as u32).then(|| (id - first) as usize)
    }

    pub fn control_id(&self, language: Language) -> u32 {
        self.id(&language.control_code()).expect("control codes are specials")
    }

    /// Union with counts summed; the result is independent of argument order.
    pub fn union(&self, other: &Vocabulary) -> Vocabulary {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for v in [self, other] {
            for (s, c) in &v.entries[v.n_specials..] {
                *counts.entry(s.clone()).or_default() += c;
            }
        }
        Vocabulary::from_counts(counts)
    }

    /// Keeps at most `max_size` ids (specials always kept).
    pub fn truncated(&self, max_size: usize) -> Vocabulary {
        let keep = max_size.max(self.n_specials);
        let counts = self.entries[self.n_specials..]
            .iter()
            .take(keep - self.n_specials)
            .cloned()
            .collect();
        Vocabulary::from_counts(counts)
    }

    /// `subtoken<TAB>count` per line, specials first.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (s, c) in &self.entries {
            out.push_str(s);
            out.push('\t');
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Vocabulary> {
        let specials = special_tokens();
        let mut counts = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let (tok, count) = line
                .rsplit_once('\t')
                .ok_or_else(|| Error::Invalid(format!("vocabulary line {}: missing tab", i + 1)))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::Invalid(format!("vocabulary line {}: bad count", i + 1)))?;
            if i < specials.len() {
                if tok != specials[i] {
                    return Err(Error::Invalid(format!(
                        "vocabulary line {}: expected special {}, found {tok}",
                        i + 1,
                        specials[i]
                    )));
                }
                continue;
            }
            if counts.insert(tok.to_string(), count).is_some() {
                return Err(Error::Invalid(format!("duplicate vocabulary entry {tok:?}")));
            }
        }
        let v = Vocabulary::from_counts(counts);
        if v.to_tsv() != text {
            return Err(Error::Invalid("vocabulary entries are not in canonical order".into()));
        }
        Ok(v)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Vocabulary> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Vocabulary::from_tsv(&text)
    }

    /// Stable fingerprint used to check that a dataset and a model agree.
    pub fn fingerprint(&self) -> u64 {
        crate::seed::stable_hash(self.len() as u64, &self.to_tsv())
    }
}

fn count_token(counts: &mut BTreeMap<String, u64>, tok: &str, language: Language) {
    match classify(tok, language) {
        TokenKind::Identifier => {
            *counts.entry(tok.to_string()).or_default() += 1;
            if let Ok(b) = bigram_encode(tok, |_| false) {
                if !b.is_whole() {
                    *counts.entry(b.first).or_default() += 1;
                    *counts.entry(b.second).or_default() += 1;
                }
            }
        }
        _ => *counts.entry(tok.to_string()).or_default() += 1,
    }
}

/// Counts whole identifiers, their bigram halves and all other tokens over
/// `corpora`, keeping entries seen at least `cutoff` times.
pub fn build_vocab(corpora: &[&Dataset], cutoff: u64) -> Vocabulary {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for ds in corpora {
        for item in &ds.items {
            let lang = item.language();
            for tok in item.tokens() {
                count_token(&mut counts, tok, lang);
            }
            if let DatasetItem::Event(e) = item {
                count_token(&mut counts, &e.accepted, lang);
            }
        }
    }
    counts.retain(|_, c| *c >= cutoff.max(1));
    Vocabulary::from_counts(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DatasetRole, TokenSequence};

    fn ds(lang: Language, tokens: &[&str]) -> Dataset {
        Dataset::new(
            DatasetRole::Commit,
            vec![DatasetItem::Sequence(TokenSequence {
                id: "s".into(),
                language: lang,
                tokens: tokens.iter().map(|s| s.to_string()).collect(),
            })],
        )
    }

    #[test]
    fn specials_first_and_dense() {
        let v = Vocabulary::specials_only();
        assert_eq!(v.token(0), Some(PAD));
        assert_eq!(v.token(1), Some(UNK));
        assert_eq!(v.token(2), Some(END_OF_TOKEN));
        assert_eq!(v.token(3), Some("<var-0>"));
        assert_eq!(v.placeholder_id(63), v.id("<var-63>"));
        assert_eq!(v.placeholder_id(64), None);
        assert!(v.id("<lang-a>").is_some());
        assert_eq!(v.len(), v.n_specials());
    }

    #[test]
    fn cutoff_threshold() {
        let d = ds(Language::LangB, &["a", "a", "b", "(", "("]);
        let v = build_vocab(&[&d], 2);
        assert!(v.contains_entry("a"));
        assert!(v.contains_entry("("));
        assert!(!v.contains_entry("b"));
    }

    #[test]
    fn counts_whole_identifiers_and_halves() {
        let d = ds(Language::LangB, &["fooBarBaz", "fooBarBaz"]);
        let v = build_vocab(&[&d], 2);
        for s in ["fooBarBaz", "fooBar", "Baz"] {
            assert!(v.contains_entry(s), "{s}");
        }
    }

    #[test]
    fn union_sums_counts_and_commutes() {
        let a = build_vocab(&[&ds(Language::LangA, &["x", "x", "y", "y"])], 1);
        let b = build_vocab(&[&ds(Language::LangB, &["y", "z"])], 1);
        let ab = a.union(&b);
        assert_eq!(ab, b.union(&a));
        assert!(ab.len() - ab.n_specials() <= (a.len() - a.n_specials()) + (b.len() - b.n_specials()));
        assert_eq!(ab.count(ab.id("y").unwrap()), Some(3));
        for (s, _) in a.entries().iter().chain(b.entries()) {
            assert!(ab.contains(s));
        }
    }

    #[test]
    fn tsv_round_trip_and_validation() {
        let v = build_vocab(&[&ds(Language::LangA, &["q", "q", "r", "r", "r"])], 1);
        let text = v.to_tsv();
        assert_eq!(Vocabulary::from_tsv(&text).unwrap(), v);
        assert!(text.starts_with("<pad>\t0\n<unk>\t0\n</t>\t0\n"));
        let swapped = text.replace("r\t3\nq\t2", "q\t2\nr\t3");
        assert!(Vocabulary::from_tsv(&swapped).is_err());
        assert!(Vocabulary::from_tsv("nope\n").is_err());
    }

    #[test]
    fn empty_corpora_give_specials() {
        let v = build_vocab(&[], 2);
        assert_eq!(v, Vocabulary::specials_only());
    }
}
