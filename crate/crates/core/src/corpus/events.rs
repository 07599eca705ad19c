//! Synthetic autocompletion logs.
//!
//! Each event records the token the author actually wrote at an eligible
//! site, together with a candidate list that mixes identifiers from the same
//! file with corpus-frequent identifiers, the way static analysis scoping
//! would offer them.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::{Days, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Poisson;
use serde::{Deserialize, Serialize};

use super::lexer::{classify, Language, Token, TokenKind};
use super::source::SourceDocument;
use crate::error::{Error, Result};
use crate::seed::{rng_for, stable_hash};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionEvent {
    pub id: String,
    pub language: Language,
    pub context_tokens: Vec<String>,
    pub candidates: Vec<String>,
    pub accepted: String,
    pub developer_id: String,
    pub day: NaiveDate,
}

impl CompletionEvent {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Invalid(format!("event {}: {msg}", self.id)));
        if self.context_tokens.is_empty() {
            return fail("empty context");
        }
        if self.candidates.is_empty() {
            return fail("empty candidate list");
        }
        let distinct: HashSet<&str> = self.candidates.iter().map(String::as_str).collect();
        if distinct.len() != self.candidates.len() {
            return fail("duplicate candidates");
        }
        if !distinct.contains(self.accepted.as_str()) {
            return fail("accepted token is not among the candidates");
        }
        if classify(&self.accepted, self.language) != TokenKind::Identifier {
            return fail("accepted token is not an identifier");
        }
        Ok(())
    }

    /// 1-based position of `accepted` in `candidates` order.
    pub fn accepted_index(&self) -> usize {
        self.candidates
            .iter()
            .position(|c| *c == self.accepted)
            .expect("validated event")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventPolicy {
    /// Mean of the Poisson candidate-list size.
    pub candidate_mean: f64,
    /// Overrides the Poisson draw with a constant list size.
    pub fixed_size: Option<usize>,
    /// Probability that an eligible site becomes an event.
    pub site_rate: f64,
    /// Share of distractors drawn from the same file.
    pub same_file_share: f64,
}

impl EventPolicy {
    pub const LANG_A_CANDIDATE_MEAN: f64 = 99.5;
    pub const LANG_B_CANDIDATE_MEAN: f64 = 26.3;

    pub fn for_language(language: Language) -> Self {
        let candidate_mean = match language {
            Language::LangA => Self::LANG_A_CANDIDATE_MEAN,
            Language::LangB => Self::LANG_B_CANDIDATE_MEAN,
        };
        EventPolicy {
            candidate_mean,
            ..Default::default()
        }
    }

    pub fn with_mean(mut self, mean: f64) -> Self {
        self.candidate_mean = mean;
        self
    }

    pub fn fixed(size: usize) -> Self {
        EventPolicy {
            fixed_size: Some(size),
            site_rate: 1.0,
            ..Default::default()
        }
    }
}

impl Default for EventPolicy {
    fn default() -> Self {
        EventPolicy {
            candidate_mean: Self::LANG_B_CANDIDATE_MEAN,
            fixed_size: None,
            site_rate: 0.25,
            same_file_share: 0.5,
        }
    }
}

/// Identifier occurrence counts per language, ordered for deterministic sampling.
#[derive(Clone, Debug, Default)]
pub struct FrequencyTable {
    counts: BTreeMap<Language, BTreeMap<String, u64>>,
}

impl FrequencyTable {
    pub fn from_documents(docs: &[(Language, Vec<Token>)]) -> Self {
        let mut table = FrequencyTable::default();
        for (lang, tokens) in docs {
            for t in tokens.iter().filter(|t| t.is_identifier()) {
                table.add(*lang, &t.text, 1);
            }
        }
        table
    }

    pub fn add(&mut self, language: Language, ident: &str, count: u64) {
        *self
            .counts
            .entry(language)
            .or_default()
            .entry(ident.to_string())
            .or_default() += count;
    }

    /// The `limit` most frequent identifiers, ties broken by string.
    pub fn most_frequent(&self, language: Language, limit: usize) -> Vec<(&str, u64)> {
        let Some(table) = self.counts.get(&language) else {
            return Vec::new();
        };
        let mut all: Vec<(&str, u64)> = table.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        all.truncate(limit);
        all
    }

    fn entries(&self, language: Language) -> Vec<(&str, u64)> {
        self.counts
            .get(&language)
            .map(|t| t.iter().map(|(k, v)| (k.as_str(), *v)).collect())
            .unwrap_or_default()
    }
}

/// Whether the identifier at `idx` is a site where a completion could be
/// accepted: a reference, call or member position, not a fresh declaration.
pub fn is_eligible_site(
    tokens: &[Token],
    idx: usize,
    language: Language,
    seen: &HashSet<&str>,
) -> bool {
    let tok = &tokens[idx];
    if !tok.is_identifier() || idx == 0 {
        return false;
    }
    let prev = tokens[..idx].iter().rev().find(|t| t.kind != TokenKind::Other);
    let Some(prev) = prev else {
        return false;
    };
    if prev.kind == TokenKind::Keyword && language.is_declaration_keyword(&prev.text) {
        return false;
    }
    // LangA parameters and typed properties: `Type $name`
    if language == Language::LangA && prev.text == "$" {
        if let Some(before) = tokens[..idx - 1].iter().rev().find(|t| t.kind != TokenKind::Other) {
            if matches!(before.kind, TokenKind::Identifier | TokenKind::Keyword)
                && !matches!(before.text.as_str(), "return" | "echo" | "as" | "new" | "throw")
            {
                return false;
            }
        }
    }
    if in_signature(tokens, idx, language) {
        return false;
    }
    let next = tokens[idx + 1..].iter().find(|t| t.kind != TokenKind::Other);
    let assigned = next.is_some_and(|n| n.text == "=");
    if assigned && !seen.contains(tok.text.as_str()) {
        return false;
    }
    true
}

/// True when `idx` sits inside the parameter list of a function definition.
fn in_signature(tokens: &[Token], idx: usize, language: Language) -> bool {
    let mut depth = 0i32;
    for j in (0..idx).rev().take(96) {
        match tokens[j].text.as_str() {
            ")" => depth += 1,
            "(" if depth > 0 => depth -= 1,
            "(" => {
                let mut before = tokens[..j].iter().rev().filter(|t| t.kind != TokenKind::Other);
                let name = before.next();
                let kw = before.next();
                return matches!((name, kw), (Some(n), Some(k))
                    if n.is_identifier() && language.is_declaration_keyword(&k.text));
            }
            ";" | "{" | "}" | ":" if depth == 0 => return false,
            _ => {}
        }
    }
    false
}

/// The tokens a model sees: everything except comments and other trivia.
pub fn context_tokens(tokens: &[Token]) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Other)
        .map(|t| t.text.clone())
        .collect()
}

fn project_of(path: &str) -> &str {
    path.rsplit_once('/').map(|(dir, _)| dir).unwrap_or("")
}

/// Synthesizes completion events from `documents`. The output is ordered by
/// (path, offset) and is a pure function of the inputs and `seed`.
pub fn synthesize_events(
    documents: &[SourceDocument],
    policy: &EventPolicy,
    seed: u64,
) -> Result<Vec<CompletionEvent>> {
    synthesize_events_indexed(documents, None, policy, seed)
}

/// Like [`synthesize_events`], but corpus-frequent distractors are drawn
/// from `index` (typically the whole codebase) instead of `documents`.
pub fn synthesize_events_indexed(
    documents: &[SourceDocument],
    index: Option<&[SourceDocument]>,
    policy: &EventPolicy,
    seed: u64,
) -> Result<Vec<CompletionEvent>> {
    let mut docs: Vec<&SourceDocument> = documents.iter().collect();
    docs.sort_by(|a, b| a.path.cmp(&b.path));

    let mut lexed = Vec::with_capacity(docs.len());
    for doc in &docs {
        lexed.push((doc.language, doc.lex()?.tokens));
    }
    let freq = match index {
        None => FrequencyTable::from_documents(&lexed),
        Some(index) => {
            let mut all = Vec::with_capacity(index.len());
            for doc in index {
                all.push((doc.language, doc.lex()?.tokens));
            }
            FrequencyTable::from_documents(&all)
        }
    };
    let pools: BTreeMap<Language, (Vec<String>, Option<WeightedIndex<u64>>)> = Language::ALL
        .iter()
        .map(|&lang| {
            let entries = freq.entries(lang);
            let names: Vec<String> = entries.iter().map(|(k, _)| k.to_string()).collect();
            let weights = WeightedIndex::new(entries.iter().map(|(_, c)| *c)).ok();
            (lang, (names, weights))
        })
        .collect();
    let base_day = NaiveDate::from_ymd_opt(2021, 3, 1).expect("valid date");

    let mut events = Vec::new();
    for (doc, (lang, tokens)) in docs.iter().zip(&lexed) {
        let mut rng = rng_for(seed, &doc.path);
        let file_idents: BTreeSet<&str> = tokens
            .iter()
            .filter(|t| t.is_identifier())
            .map(|t| t.text.as_str())
            .collect();
        let developer = format!(
            "dev-{:03}",
            stable_hash(seed, project_of(&doc.path)) % 64
        );
        let mut seen: HashSet<&str> = HashSet::new();
        let mut offset = 0usize;
        for (idx, tok) in tokens.iter().enumerate() {
            offset += tok.sep.len();
            let site_offset = offset;
            offset += tok.text.len();
            let eligible = is_eligible_site(tokens, idx, *lang, &seen);
            if tok.is_identifier() {
                seen.insert(tok.text.as_str());
            }
            if !eligible || rng.random::<f64>() >= policy.site_rate {
                continue;
            }
            let context = context_tokens(&tokens[..idx]);
            if context.is_empty() {
                continue;
            }
            let size = match policy.fixed_size {
                Some(n) => n.max(1),
                None => {
                    let pois = Poisson::new(policy.candidate_mean.max(1e-9))
                        .map_err(|e| Error::Invalid(format!("candidate mean: {e}")))?;
                    (pois.sample(&mut rng) as usize).max(2)
                }
            };
            let (pool, weights) = &pools[lang];
            let candidates = draw_candidates(
                Some(&tok.text),
                &file_idents,
                pool,
                weights.as_ref(),
                size,
                policy.same_file_share,
                &mut rng,
            );
            let day = base_day
                .checked_add_days(Days::new(stable_hash(seed, &format!("{}#{site_offset}", doc.path)) % 14))
                .expect("date in range");
            let event = CompletionEvent {
                id: format!("{}@{site_offset}", doc.path),
                language: *lang,
                context_tokens: context,
                candidates,
                accepted: tok.text.clone(),
                developer_id: developer.clone(),
                day,
            };
            event.validate()?;
            events.push(event);
        }
    }
    Ok(events)
}

/// Suggestion list for an online request: identifiers from the file so far
/// plus frequency-weighted identifiers from `table`, drawn the same way as
/// offline event distractors. Deterministic in `seed`.
pub fn derive_candidates(
    file_tokens: &[Token],
    table: &FrequencyTable,
    language: Language,
    size: usize,
    same_file_share: f64,
    seed: u64,
) -> Vec<String> {
    let file_idents: BTreeSet<&str> = file_tokens
        .iter()
        .filter(|t| t.is_identifier())
        .map(|t| t.text.as_str())
        .collect();
    let entries = table.entries(language);
    let pool: Vec<String> = entries.iter().map(|(k, _)| k.to_string()).collect();
    let weights = WeightedIndex::new(entries.iter().map(|(_, c)| *c)).ok();
    let mut rng = rng_for(seed, "derive_candidates");
    draw_candidates(None, &file_idents, &pool, weights.as_ref(), size, same_file_share, &mut rng)
}

/// Builds a deduplicated candidate list of `size` entries, containing
/// `accepted` when given.
pub(crate) fn draw_candidates<R: Rng>(
    accepted: Option<&str>,
    file_idents: &BTreeSet<&str>,
    pool: &[String],
    weights: Option<&WeightedIndex<u64>>,
    size: usize,
    same_file_share: f64,
    rng: &mut R,
) -> Vec<String> {
    let mut chosen: Vec<String> = accepted.iter().map(|a| a.to_string()).collect();
    let mut taken: HashSet<String> = chosen.iter().cloned().collect();
    let wanted = size.saturating_sub(chosen.len());
    let from_file = ((wanted as f64) * same_file_share).ceil() as usize;

    let mut local: Vec<&str> = file_idents.iter().copied().filter(|s| Some(*s) != accepted).collect();
    local.shuffle(rng);
    for s in local.iter().take(from_file) {
        if taken.insert(s.to_string()) {
            chosen.push(s.to_string());
        }
    }

    if let Some(weights) = weights {
        // frequency-weighted draws; bounded so tiny pools terminate
        let mut attempts = 0;
        while chosen.len() < size && attempts < size * 20 {
            attempts += 1;
            let name = &pool[weights.sample(rng)];
            if taken.insert(name.clone()) {
                chosen.push(name.clone());
            }
        }
    }
    // pad from the rest of the file, then from the pool in order
    for s in local.iter().skip(from_file).copied().chain(pool.iter().map(String::as_str)) {
        if chosen.len() >= size {
            break;
        }
        if taken.insert(s.to_string()) {
            chosen.push(s.to_string());
        }
    }
    chosen.truncate(size.max(1));
    chosen.shuffle(rng);
    chosen
}
