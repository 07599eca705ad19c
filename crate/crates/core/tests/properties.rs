use std::collections::{BTreeMap, HashMap};

use chrono::NaiveDate;
use proptest::prelude::*;
use proptest::sample::subsequence;
use xfer_core::corpus::{
    classify, split_holdout, synthesize_events, CompletionEvent, Dataset, DatasetItem, DatasetRole, EventPolicy,
    Language, Origin, SourceDocument, TokenKind, TokenSequence,
};
use xfer_core::eval::{ab_compare, ABObservation, Metrics};
use xfer_core::model::{Gpt, Mode, ModelConfig};
use xfer_core::ranker::{rank, top_k};
use xfer_core::tokenizer::{bigram_encode, build_vocab, decode, encode_sequence, Vocabulary, END_OF_TOKEN};
use xfer_core::trainer::{subsample_nested, EarlyStop, EarlyStopping};

const WORDS: &[&str] = &["foo", "bar", "Baz", "get", "Name", "id", "URL", "x2", "item", "Store", "v"];

fn identifier() -> impl Strategy<Value = String> {
    (prop::collection::vec(0..WORDS.len(), 1..5), prop::collection::vec(0..3u8, 4), any::<bool>())
        .prop_map(|(ws, seps, lead)| {
            let mut s = String::new();
            if lead {
                s.push('_');
            }
            for (i, w) in ws.iter().enumerate() {
                if i > 0 && seps[i % 4] == 0 {
                    s.push('_');
                }
                s.push_str(WORDS[*w]);
            }
            s
        })
        .prop_filter("identifier", |s| classify(s, Language::LangB) == TokenKind::Identifier)
}

fn token() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => identifier(),
        1 => prop::sample::select(vec!["(", ")", ".", "=", "+", ",", "1", "\"s\"", "return", "if"]).prop_map(String::from),
    ]
}

fn sequence_item(id: String, tokens: Vec<String>) -> DatasetItem {
    DatasetItem::Sequence(TokenSequence {
        id,
        language: Language::LangB,
        tokens,
    })
}

fn event(i: usize) -> CompletionEvent {
    CompletionEvent {
        id: format!("ev-{i}"),
        language: Language::LangB,
        context_tokens: vec!["x".into()],
        candidates: vec!["a".into(), "b".into()],
        accepted: "a".into(),
        developer_id: "d".into(),
        day: NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(),
    }
}

fn vocab_from(seqs: &[Vec<String>], cutoff: u64) -> Vocabulary {
    let items = seqs.iter().enumerate().map(|(i, s)| sequence_item(format!("s{i}"), s.clone())).collect();
    build_vocab(&[&Dataset::new(DatasetRole::Ide, items)], cutoff)
}

fn observations(side: &str, counts: &[u64]) -> Vec<ABObservation> {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| ABObservation {
            developer_id: format!("{side}{i}"),
            day: NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(),
            completions_accepted: c,
        })
        .collect()
}

fn ranked_ids(d: &Dataset) -> Vec<String> {
    let mut v: Vec<String> = d.items.iter().map(|i| i.id().to_string()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_has_every_item(n in 1usize..40, m in 0usize..40) {
        let ac = Dataset::from_events((0..n).map(event).collect());
        let ide = Dataset::new(DatasetRole::Ide, (0..m).map(|i| sequence_item(format!("i{i}"), vec!["x".into()])).collect());
        let all = Dataset::union_all(&ac, &ide).unwrap();
        prop_assert_eq!(all.len(), n + m);
        prop_assert_eq!(all.events().count(), n);
    }

    #[test]
    fn synthesized_events_are_valid(lines in prop::collection::vec(prop::collection::vec(token(), 1..8), 1..12), seed in any::<u64>()) {
        let content: String = lines.iter().map(|l| l.join(" ") + "\n").collect();
        let doc = SourceDocument::new("p/f.py", Language::LangB, Origin::AcceptanceLog, content);
        let policy = EventPolicy { site_rate: 1.0, ..EventPolicy::fixed(6) };
        for ev in synthesize_events(&[doc], &policy, seed).unwrap() {
            prop_assert!(ev.validate().is_ok());
            prop_assert!(ev.candidates.contains(&ev.accepted));
            prop_assert_eq!(classify(&ev.accepted, ev.language), TokenKind::Identifier);
            let prev = ev.context_tokens.last().unwrap();
            prop_assert!(!Language::LangB.is_declaration_keyword(prev));
        }
    }

    #[test]
    fn holdout_split_partitions(n in 1usize..200, fraction in 0.01f64..0.99, seed in any::<u64>()) {
        let ds = Dataset::from_events((0..n).map(event).collect());
        let (t, h) = split_holdout(&ds, fraction, seed).unwrap();
        prop_assert_eq!(h.len(), (fraction * n as f64).round() as usize);
        let mut both = ranked_ids(&t);
        both.extend(ranked_ids(&h));
        both.sort();
        prop_assert_eq!(both, ranked_ids(&ds));
        let held: std::collections::HashSet<String> = ranked_ids(&h).into_iter().collect();
        prop_assert!(ranked_ids(&t).iter().all(|id| !held.contains(id)));
    }

    #[test]
    fn every_identifier_is_two_subtokens(tok in identifier(), in_vocab in any::<bool>()) {
        let b = bigram_encode(&tok, |t| in_vocab && t == tok).unwrap();
        prop_assert!(!b.first.is_empty() && !b.second.is_empty());
        if in_vocab {
            prop_assert_eq!(b.pair(), (tok.as_str(), END_OF_TOKEN));
        }
    }

    #[test]
    fn decode_inverts_encode(train in prop::collection::vec(prop::collection::vec(token(), 1..20), 0..4),
                             seq in prop::collection::vec(token(), 1..40)) {
        let vocab = vocab_from(&train, 1);
        let enc = encode_sequence(&seq, Language::LangB, &vocab).unwrap();
        prop_assert_eq!(enc.layout.len(), seq.len());
        let dec = decode(&enc, &vocab).unwrap();
        for (a, b) in seq.iter().zip(&dec) {
            if classify(a, Language::LangB) == TokenKind::Identifier {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn placeholders_are_consistent(train in prop::collection::vec(prop::collection::vec(token(), 1..20), 0..3),
                                   seq in prop::collection::vec(identifier(), 1..30)) {
        let vocab = vocab_from(&train, 1);
        let enc = encode_sequence(&seq, Language::LangB, &vocab).unwrap();
        let mut by_subtoken: HashMap<String, u32> = HashMap::new();
        let mut by_id: HashMap<u32, String> = HashMap::new();
        for (i, tok) in seq.iter().enumerate() {
            let b = bigram_encode(tok, |t| vocab.contains_entry(t)).unwrap();
            for (half, id) in [(&b.first, enc.ids[2 * i]), (&b.second, enc.ids[2 * i + 1])] {
                if vocab.placeholder_index(id).is_none() {
                    continue;
                }
                prop_assert_eq!(*by_subtoken.entry(half.clone()).or_insert(id), id);
                prop_assert_eq!(by_id.entry(id).or_insert(half.clone()).as_str(), half.as_str());
            }
        }
        // slots are numbered in first-seen order
        let order: Vec<usize> = enc.ids.iter().filter_map(|&id| vocab.placeholder_index(id)).collect();
        let mut next = 0;
        for i in order {
            prop_assert!(i <= next);
            if i == next {
                next += 1;
            }
        }
    }

    #[test]
    fn vocabulary_union_is_a_bijection(a in prop::collection::vec(prop::collection::vec(token(), 1..20), 1..4),
                                       b in prop::collection::vec(prop::collection::vec(token(), 1..20), 1..4)) {
        let (va, vb) = (vocab_from(&a, 1), vocab_from(&b, 1));
        let u = va.union(&vb);
        for id in 0..u.len() as u32 {
            prop_assert_eq!(u.id(u.token(id).unwrap()), Some(id));
        }
        for (s, _) in va.entries().iter().chain(vb.entries()) {
            prop_assert!(u.contains(s));
        }
        let counts: BTreeMap<&str, u64> = u.entries().iter().map(|(s, c)| (s.as_str(), *c)).collect();
        for (s, c) in va.entries() {
            let other = vb.entries().iter().find(|(t, _)| t == s).map_or(0, |(_, c)| *c);
            prop_assert_eq!(counts[s.as_str()], c + other);
        }
    }

    #[test]
    fn subsamples_nest(n in 1usize..120, f1 in 0.0f64..1.0, f2 in 0.0f64..1.0, seed in any::<u64>()) {
        let ds = Dataset::from_events((0..n).map(event).collect());
        let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        let small = ranked_ids(&subsample_nested(&ds, lo, seed));
        let large = ranked_ids(&subsample_nested(&ds, hi, seed));
        prop_assert!(small.iter().all(|id| large.binary_search(id).is_ok()));
    }

    #[test]
    fn metrics_are_ordered(ranks in prop::collection::vec(prop::option::of(1usize..10), 1..100)) {
        let m = Metrics::from_ranks(&ranks, 0).unwrap();
        prop_assert!(0.0 <= m.top1 && m.top1 <= m.mrr3 && m.mrr3 <= m.top3 && m.top3 <= 1.0);
    }

    #[test]
    fn ab_compare_is_symmetric(c in prop::collection::vec(1u64..40, 2..30), e in prop::collection::vec(1u64..40, 2..30)) {
        let (c, e) = (observations("c", &c), observations("e", &e));
        let fwd = ab_compare(&c, &e).unwrap();
        let rev = ab_compare(&e, &c).unwrap();
        prop_assert_eq!(fwd.p_value, rev.p_value);
        prop_assert!((0.0..=1.0).contains(&fwd.p_value));
        prop_assert!(fwd.improvement * rev.improvement <= 0.0);
        prop_assert!((fwd.improvement - (fwd.mean_experiment - fwd.mean_control) / fwd.mean_control).abs() < 1e-12);
    }

    #[test]
    fn early_stopping_keeps_the_minimum(losses in prop::collection::vec(0.1f64..5.0, 1..30), patience in 1usize..5) {
        let mut s = EarlyStopping::new(EarlyStop { patience, min_delta: 1e-3 });
        let mut seen = Vec::new();
        for (i, l) in losses.iter().enumerate() {
            s.observe(i + 1, *l);
            seen.push(*l);
            if s.should_stop() {
                break;
            }
        }
        let (epoch, best) = s.best().unwrap();
        prop_assert!(seen.iter().all(|l| best <= *l));
        prop_assert_eq!(seen[epoch - 1], best);
    }
}

fn tiny(seed: u64, vocab: usize) -> Gpt<f64> {
    let mut cfg = ModelConfig::tiny(vocab);
    cfg.seed = seed;
    cfg.context_len = 32;
    Gpt::new(cfg).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn logits_never_see_the_future(ids in prop::collection::vec(0u32..20, 2..16), k in 0usize..16, new in 0u32..20, seed in 0u64..1000) {
        let k = k % ids.len();
        let g = tiny(seed, 20);
        let before = g.forward(&ids, Mode::Infer, None).unwrap();
        let mut changed = ids.clone();
        changed[k] = new;
        let after = g.forward(&changed, Mode::Infer, None).unwrap();
        for p in 0..k {
            prop_assert_eq!(before.row(p), after.row(p));
        }
    }

    #[test]
    fn ranking_ignores_candidate_order(cands in prop::collection::btree_set(identifier(), 1..25),
                                       keep in subsequence((0..24usize).collect::<Vec<_>>(), 0..24),
                                       seed in 0u64..1000) {
        let cands: Vec<String> = cands.into_iter().collect();
        let vocab = vocab_from(&[cands.iter().step_by(2).cloned().collect()], 1);
        let g = tiny(seed, vocab.len());
        let ctx: Vec<String> = vec!["x".into(), "=".into(), cands[0].clone(), "(".into()];
        let r = rank(&g, &vocab, Language::LangB, &ctx, &cands).unwrap();
        // a deterministic permutation driven by `keep`
        let mut shuffled = cands.clone();
        for (i, j) in keep.iter().enumerate() {
            let (a, b) = (i % shuffled.len(), j % shuffled.len());
            shuffled.swap(a, b);
        }
        let s = rank(&g, &vocab, Language::LangB, &ctx, &shuffled).unwrap();
        let view = |r: &xfer_core::ranker::RankedSuggestions| r.suggestions.iter().map(|x| (x.candidate.clone(), x.score)).collect::<Vec<_>>();
        prop_assert_eq!(view(&r), view(&s));
        for k in 1..cands.len() {
            prop_assert_eq!(top_k(&r, k), &top_k(&r, k + 1)[..k]);
        }
    }
}
