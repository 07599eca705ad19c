//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. `XFER_ACCEPT_ONLY=1,5` runs a subset.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xfer_core::corpus::{
    context_tokens, load_documents, Dataset, DatasetItem, DatasetRole, Language, SourceDocument, TokenKind,
    TokenSequence,
};
use xfer_core::eval::{
    ab_compare, improvement, mrr_at_k, significance_gate, simulate_ab, welch_test, AbSimulation, Metrics,
};
use xfer_core::model::{cross_entropy, shifted_targets, Gpt, Mode, ModelCheckpoint, ModelConfig, Params};
use xfer_core::ranker::{encode_context, rank};
use xfer_core::tokenizer::{
    bigram_encode, build_vocab, decode, decode_pair, encode_identifier, encode_sequence, CopyMap, Vocabulary,
    END_OF_TOKEN,
};
use xfer_core::trainer::desk::{commit_sweep, language_sweep, task_transfer, DeskConfig, DeskSetup};
use xfer_core::trainer::ResultRow;

// Pinned tolerances and thresholds.
const TOKENIZER_BUDGET: Duration = Duration::from_secs(30);
const RANDOM_IDENTIFIERS: usize = 10_000;
const GRAD_EPS: f64 = 1e-5;
const GRAD_REL_TOL: f64 = 1e-4;
const GRAD_BUDGET: Duration = Duration::from_secs(120);
const RANKER_INSTANCES: usize = 50;
const RANKER_MAX_CANDIDATES: usize = 100;
const RANKER_TOL: f64 = 1e-6;
const METRIC_VECTORS: usize = 1000;
const RQ_SEEDS: [u64; 3] = [1, 2, 3];
const RQ1_EVENTS: usize = 1000;
const RQ1_MARGIN: f64 = 0.02;
const RQ1_BUDGET: Duration = Duration::from_secs(45 * 60);
const RQ2_FRACTIONS: [f64; 3] = [0.01, 0.10, 1.0];
const RQ2_MIN_GAP: f64 = 0.05;
const RQ3_FRACTION: f64 = 0.10;
const RQ3_MIN_GAP: f64 = 0.05;
const RQ3_HALF_DATA_SLACK: f64 = 0.01;
const WELCH_TOL: f64 = 1e-10;
/// (19.34 − 18.14) / 18.14 = 0.066152…; the published 0.0663 was computed
/// from unrounded means, so the two-decimal inputs reproduce it to ~1.5e-4.
const IMPROVEMENT_TOL: f64 = 5e-4;
const NULL_SIMULATIONS: u64 = 1000;
const NULL_RATE: (f64, f64) = (0.03, 0.07);
const LATENCY_REQUESTS: usize = 200;
const LATENCY_CANDIDATES: usize = 100;
const LATENCY_P50_MS: f64 = 100.0;

type Outcome = Result<String, String>;

fn pass_if(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sample_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/sample")
}

fn sample_docs() -> Vec<SourceDocument> {
    load_documents(&sample_dir()).expect("bundled sample corpus")
}

/// Vocabulary over every file of the sample, all origins.
fn sample_vocab(docs: &[SourceDocument]) -> Vocabulary {
    let items = docs
        .iter()
        .map(|d| {
            let tokens = d
                .lex()
                .unwrap()
                .tokens
                .into_iter()
                .filter(|t| t.kind != TokenKind::Other)
                .map(|t| t.text)
                .collect();
            DatasetItem::Sequence(TokenSequence {
                id: d.path.clone(),
                language: d.language,
                tokens,
            })
        })
        .collect();
    build_vocab(&[&Dataset::new(DatasetRole::All, items)], 2)
}

const WORDS: &[&str] = &[
    "get", "set", "user", "id", "name", "list", "map", "item", "count", "http", "url", "parse", "value", "node",
    "tree", "cache", "key", "load", "save", "index", "buffer", "x", "y", "tmp", "queue", "photo", "batch", "ok",
];

/// Random identifier in one of several naming styles, with digits,
/// acronyms and stray underscores.
fn random_identifier(rng: &mut ChaCha8Rng, lang: Language) -> String {
    loop {
        let parts: Vec<String> = (0..rng.random_range(1..=5))
            .map(|_| {
                let mut w = if rng.random_bool(0.7) {
                    WORDS.choose(rng).unwrap().to_string()
                } else {
                    (0..rng.random_range(1..=6))
                        .map(|_| rng.random_range(b'a'..=b'z') as char)
                        .collect()
                };
                if rng.random_bool(0.15) {
                    w = w.to_uppercase();
                }
                if rng.random_bool(0.15) {
                    w.push_str(&rng.random_range(0..100).to_string());
                }
                w
            })
            .collect();
        let mut s = match rng.random_range(0..4) {
            0 => parts.join("_"),
            1 => parts.iter().map(|p| p.to_lowercase()).collect::<Vec<_>>().join("__"),
            _ => {
                let mut s = String::new();
                for (i, p) in parts.iter().enumerate() {
                    let mut cs = p.chars();
                    let head = cs.next().unwrap();
                    if i == 0 && rng.random_bool(0.5) {
                        s.push(head);
                    } else {
                        s.extend(head.to_uppercase());
                    }
                    s.extend(cs);
                }
                s
            }
        };
        if rng.random_bool(0.1) {
            s.insert(0, '_');
        }
        if xfer_core::corpus::classify(&s, lang) == TokenKind::Identifier {
            return s;
        }
    }
}

/// Isolated encode → decode of one identifier.
fn identifier_round_trip(tok: &str, vocab: &Vocabulary) -> Result<(), String> {
    let mut copy = CopyMap::new();
    let (b, ids) = encode_identifier(tok, vocab, &mut copy).map_err(|e| format!("{tok}: {e}"))?;
    if b.first.is_empty() || b.second.is_empty() || ids.len() != 2 {
        return Err(format!("{tok}: not a two-subtoken encoding {b:?}"));
    }
    let back = decode_pair(ids, b.join, vocab, &copy).map_err(|e| format!("{tok}: {e}"))?;
    if back != tok {
        return Err(format!("{tok} decoded as {back}"));
    }
    Ok(())
}

fn criterion_tokenizer() -> Outcome {
    let start = Instant::now();
    let docs = sample_docs();
    let vocab = sample_vocab(&docs);
    let mut identifiers = 0usize;
    let mut files_checked = 0usize;
    let mut overflowed = 0usize;
    for doc in &docs {
        let stream = doc.lex().map_err(|e| e.to_string())?;
        for t in stream.tokens.iter().filter(|t| t.is_identifier()) {
            identifier_round_trip(&t.text, &vocab)?;
            identifiers += 1;
        }
        let texts: Vec<String> = stream.tokens.iter().filter(|t| t.kind != TokenKind::Other).map(|t| t.text.clone()).collect();
        let enc = encode_sequence(&texts, doc.language, &vocab).map_err(|e| e.to_string())?;
        for (tok, slot) in texts.iter().zip(&enc.layout) {
            let is_ident = xfer_core::corpus::classify(tok, doc.language) == TokenKind::Identifier;
            if is_ident != slot.is_some() {
                return Err(format!("{}: {tok} occupies the wrong number of ids", doc.path));
            }
        }
        if enc.var_map.overflowed() > 0 {
            overflowed += 1;
            continue;
        }
        let dec = decode(&enc, &vocab).map_err(|e| e.to_string())?;
        for (a, b) in texts.iter().zip(&dec) {
            if xfer_core::corpus::classify(a, doc.language) == TokenKind::Identifier && a != b {
                return Err(format!("{}: sequence round trip {a} -> {b}", doc.path));
            }
        }
        files_checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut in_vocab: HashSet<String> = HashSet::new();
    for i in 0..RANDOM_IDENTIFIERS {
        let lang = if i % 2 == 0 { Language::LangA } else { Language::LangB };
        let tok = random_identifier(&mut rng, lang);
        identifier_round_trip(&tok, &vocab)?;
        if i % 3 == 0 {
            in_vocab.insert(tok.clone());
        }
        let b = bigram_encode(&tok, |t| in_vocab.contains(t)).map_err(|e| e.to_string())?;
        if in_vocab.contains(&tok) && (b.first != tok || b.second != END_OF_TOKEN) {
            return Err(format!("in-vocabulary {tok} encoded as {b:?}"));
        }
    }
    let worked = bigram_encode("fooBarBazQuux", |_| false).map_err(|e| e.to_string())?;
    if worked.pair() != ("fooBar", "BazQuux") {
        return Err(format!("fooBarBazQuux -> {:?}", worked.pair()));
    }
    let whole = bigram_encode("fooBarBazQuux", |t| t == "fooBarBazQuux").map_err(|e| e.to_string())?;
    if whole.pair() != ("fooBarBazQuux", END_OF_TOKEN) {
        return Err(format!("in-vocab -> {:?}", whole.pair()));
    }
    let elapsed = start.elapsed();
    pass_if(
        docs.len() >= 200 && elapsed < TOKENIZER_BUDGET,
        format!(
            "{} files, {identifiers} corpus identifiers + {RANDOM_IDENTIFIERS} random: all 2 subtokens, decode∘encode exact; \
             {files_checked} whole-file round trips ({overflowed} files over the placeholder cap); {:.1}s (< {}s)",
            docs.len(),
            elapsed.as_secs_f64(),
            TOKENIZER_BUDGET.as_secs()
        ),
    )
}

fn criterion_gradients() -> Outcome {
    let start = Instant::now();
    let mut cfg = ModelConfig::tiny(13);
    cfg.seed = 11;
    assert_eq!((cfg.d_model, cfg.n_layers), (16, 2));
    let mut g = Gpt::<f64>::new(cfg).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for t in g.params.tensors_mut() {
        for v in &mut t.data {
            *v += rng.random_range(-0.05..0.05);
        }
    }
    let ids = [1u32, 5, 12, 3, 3, 9, 0, 7, 11, 2];
    let targets = shifted_targets(&ids, 0);
    let n = targets.iter().flatten().count() as f64;
    let mut grads = Params::<f64>::zeros(&g.config);
    g.accumulate_gradients(&ids, &targets, None, &mut grads, 1.0 / n)
        .map_err(|e| e.to_string())?;
    let loss = |m: &Gpt<f64>| cross_entropy(&m.forward(&ids, Mode::Infer, None).unwrap(), &targets).unwrap();
    let grad_named = grads.named();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for (k, (name, grad)) in grad_named.iter().enumerate() {
        // three random unit directions per parameter group
        for _ in 0..3 {
            let d: Vec<f64> = (0..grad.data.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            let d: Vec<f64> = d.iter().map(|x| x / norm).collect();
            let analytic: f64 = grad.data.iter().zip(&d).map(|(a, b)| a * b).sum();
            let mut plus = g.clone();
            let mut minus = g.clone();
            for (i, di) in d.iter().enumerate() {
                plus.params.tensors_mut()[k].data[i] += GRAD_EPS * di;
                minus.params.tensors_mut()[k].data[i] -= GRAD_EPS * di;
            }
            let numeric = (loss(&plus) - loss(&minus)) / (2.0 * GRAD_EPS);
            let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
            if rel >= GRAD_REL_TOL {
                return Err(format!("{name}: analytic {analytic:e} numeric {numeric:e} rel {rel:e}"));
            }
            worst = worst.max(rel);
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    pass_if(
        elapsed < GRAD_BUDGET,
        format!(
            "{} parameter groups, {checks} directional checks, worst relative error {worst:.2e} (< {GRAD_REL_TOL:e}); {:.1}s",
            grad_named.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn log_softmax_f64(row: &[f64]) -> Vec<f64> {
    let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + row.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
    row.iter().map(|x| x - lse).collect()
}

fn criterion_ranker() -> Outcome {
    let docs = sample_docs();
    let vocab = sample_vocab(&docs).truncated(400);
    let mut cfg = ModelConfig::tiny(vocab.len());
    cfg.context_len = 64;
    cfg.seed = 5;
    let mut model = Gpt::<f64>::new(cfg).map_err(|e| e.to_string())?;
    // spread the scores so orderings are decided well above rounding noise
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for t in model.params.tensors_mut() {
        for v in &mut t.data {
            *v += rng.random_range(-0.3..0.3);
        }
    }
    let pool: Vec<String> = docs
        .iter()
        .flat_map(|d| d.lex().unwrap().tokens.into_iter().filter(|t| t.is_identifier()).map(|t| t.text))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut worst = 0.0f64;
    let mut total = 0;
    for case in 0..RANKER_INSTANCES {
        let doc = docs.choose(&mut rng).unwrap();
        let tokens = doc.lex().unwrap().tokens;
        let cut = rng.random_range(1..tokens.len());
        let context = context_tokens(&tokens[..cut]);
        if context.is_empty() {
            continue;
        }
        let n = rng.random_range(1..=RANKER_MAX_CANDIDATES);
        let mut candidates: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        while candidates.len() < n {
            let c = match rng.random_range(0..3) {
                0 => tokens.iter().filter(|t| t.is_identifier()).collect::<Vec<_>>().choose(&mut rng).map(|t| t.text.clone()),
                1 => pool.choose(&mut rng).cloned(),
                _ => Some(random_identifier(&mut rng, doc.language)),
            };
            if let Some(c) = c.filter(|c| seen.insert(c.clone())) {
                candidates.push(c);
            }
        }
        let ranked = rank(&model, &vocab, doc.language, &context, &candidates).map_err(|e| e.to_string())?;
        if !ranked.skipped.is_empty() {
            return Err(format!("case {case}: unexpected skips {:?}", ranked.skipped));
        }

        // independent per-candidate scoring: one full forward each
        let (ctx, copy) = encode_context(&context, doc.language, &vocab, model.config.context_len - 1).map_err(|e| e.to_string())?;
        let mut oracle: Vec<(usize, f64)> = Vec::new();
        for (i, c) in candidates.iter().enumerate() {
            let mut local = copy.clone();
            let (_, [a, b]) = encode_identifier(c, &vocab, &mut local).map_err(|e| e.to_string())?;
            let mut seq = ctx.clone();
            seq.push(a);
            let logits = model.forward(&seq, Mode::Infer, None).map_err(|e| e.to_string())?;
            let p = seq.len() - 1;
            let s = log_softmax_f64(logits.row(p - 1))[a as usize] + log_softmax_f64(logits.row(p))[b as usize];
            oracle.push((i, s));
        }
        oracle.sort_by(|x, y| {
            y.1.total_cmp(&x.1)
                .then_with(|| candidates[x.0].cmp(&candidates[y.0]))
                .then(x.0.cmp(&y.0))
        });
        if oracle.len() != ranked.suggestions.len() {
            return Err(format!("case {case}: {} ranked vs {} candidates", ranked.suggestions.len(), oracle.len()));
        }
        for (r, ((i, s), got)) in oracle.iter().zip(&ranked.suggestions).enumerate() {
            if got.candidate != candidates[*i] || got.rank != r + 1 {
                return Err(format!("case {case}: rank {} is {} but brute force has {}", r + 1, got.candidate, candidates[*i]));
            }
            let diff = (got.score - s).abs();
            worst = worst.max(diff);
            if diff > RANKER_TOL {
                return Err(format!("case {case}: {} scored {} vs {}", got.candidate, got.score, s));
            }
        }
        total += candidates.len();
    }
    Ok(format!(
        "{RANKER_INSTANCES} instances, {total} candidates: identical order, max |Δscore| {worst:.1e} (≤ {RANKER_TOL:e})"
    ))
}

fn brute_mrr(ranks: &[Option<usize>], k: usize) -> f64 {
    let mut total = 0.0;
    for r in ranks {
        if let Some(r) = r {
            if *r >= 1 && *r <= k {
                total += 1.0 / *r as f64;
            }
        }
    }
    total / ranks.len() as f64
}

fn criterion_metrics(evaluations: &[Metrics]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut ordered = 0;
    for i in 0..METRIC_VECTORS {
        let n = rng.random_range(1..60);
        let ranks: Vec<Option<usize>> = (0..n)
            .map(|_| rng.random_bool(0.85).then(|| rng.random_range(1..=12)))
            .collect();
        let got = mrr_at_k(&ranks, 3).map_err(|e| e.to_string())?;
        let want = brute_mrr(&ranks, 3);
        if got != want {
            return Err(format!("vector {i}: mrr {got} vs brute force {want}"));
        }
        let m = Metrics::from_ranks(&ranks, 0).map_err(|e| e.to_string())?;
        if !(m.top1 <= m.mrr3 && m.mrr3 <= m.top3) {
            return Err(format!("vector {i}: {m:?} out of order"));
        }
        ordered += 1;
    }
    for m in evaluations {
        if !(m.top1 <= m.mrr3 && m.mrr3 <= m.top3) {
            return Err(format!("evaluation {m:?} out of order"));
        }
        ordered += 1;
    }
    let half = mrr_at_k(&[Some(1), Some(2), None], 3).map_err(|e| e.to_string())?;
    pass_if(
        half == 0.5,
        format!("{METRIC_VECTORS} random vectors match brute force exactly; top1 ≤ mrr3 ≤ top3 on {ordered} evaluations; [1,2,none] → {half}"),
    )
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn criterion_rq1(setup: &DeskSetup) -> Outcome {
    let start = Instant::now();
    let mut trials = Vec::new();
    for seed in RQ_SEEDS {
        let t = task_transfer(setup, RQ1_EVENTS, seed).map_err(|e| e.to_string())?;
        eprintln!("    rq1 seed {seed}: {t:?}");
        trials.push(t);
    }
    let pt = mean(trials.iter().map(|t| t.pretrain_only));
    let ft = mean(trials.iter().map(|t| t.finetune_only));
    let both = mean(trials.iter().map(|t| t.pretrain_finetune));
    let elapsed = start.elapsed();
    pass_if(
        both - ft >= RQ1_MARGIN && both - pt >= RQ1_MARGIN && elapsed < RQ1_BUDGET,
        format!(
            "top-1 over {} seeds: pretrain+fine-tune {both:.4}, fine-tune only {ft:.4} (+{:.1} pts), pretrain only {pt:.4} (+{:.1} pts); \
             need ≥ {:.0} pts each; {:.1} min",
            RQ_SEEDS.len(),
            100.0 * (both - ft),
            100.0 * (both - pt),
            100.0 * RQ1_MARGIN,
            elapsed.as_secs_f64() / 60.0
        ),
    )
}

fn rows_metrics(rows: &[ResultRow]) -> Vec<Metrics> {
    rows.iter()
        .map(|r| Metrics {
            n: r.heldout_events,
            top1: r.top1,
            top3: r.top3,
            mrr3: r.mrr3,
            unscorable: 0,
        })
        .collect()
}

fn criterion_rq2(setup: &DeskSetup, evaluations: &mut Vec<Metrics>) -> Outcome {
    let start = Instant::now();
    let sweep = commit_sweep(setup, &RQ2_FRACTIONS, &RQ_SEEDS).map_err(|e| e.to_string())?;
    evaluations.extend(rows_metrics(&sweep.results));
    for r in &sweep.rows {
        eprintln!("    rq2 {r:?}");
    }
    let small = sweep.row(RQ2_FRACTIONS[0]).ok_or("no 1% row")?;
    let full = sweep.row(1.0).ok_or("no 100% row")?;
    pass_if(
        small.gap() > full.gap() && small.gap() >= RQ2_MIN_GAP,
        format!(
            "commit-pretrained minus scratch top-1: {:.1} pts at 1% ({} events), {:.1} pts at 100% ({} events); need 1% gap > 100% gap and ≥ {:.0} pts; {:.1} min",
            100.0 * small.gap(),
            small.examples,
            100.0 * full.gap(),
            full.examples,
            100.0 * RQ2_MIN_GAP,
            start.elapsed().as_secs_f64() / 60.0
        ),
    )
}

fn criterion_rq3(setup: &DeskSetup, evaluations: &mut Vec<Metrics>) -> Outcome {
    let start = Instant::now();
    let sweep = language_sweep(setup, None, &[RQ3_FRACTION, 2.0 * RQ3_FRACTION], &RQ_SEEDS).map_err(|e| e.to_string())?;
    evaluations.extend(rows_metrics(&sweep.results));
    for r in &sweep.rows {
        eprintln!("    rq3 {r:?}");
    }
    let f = sweep.row(RQ3_FRACTION).ok_or("no f row")?;
    let f2 = sweep.row(2.0 * RQ3_FRACTION).ok_or("no 2f row")?;
    pass_if(
        f.gap() >= RQ3_MIN_GAP && f.pretrained_mean >= f2.scratch_mean - RQ3_HALF_DATA_SLACK,
        format!(
            "lang-b at 10% ({} events): lang-a-pretrained {:.4} vs scratch {:.4} (+{:.1} pts, need ≥ {:.0}); \
             scratch at 20% {:.4} (pretrained@10% must be ≥ it − {:.0} pt); {:.1} min",
            f.examples,
            f.pretrained_mean,
            f.scratch_mean,
            100.0 * f.gap(),
            100.0 * RQ3_MIN_GAP,
            f2.scratch_mean,
            100.0 * RQ3_HALF_DATA_SLACK,
            start.elapsed().as_secs_f64() / 60.0
        ),
    )
}

fn criterion_ab() -> Outcome {
    // reference values from scipy.stats.ttest_ind(a, b, equal_var=False)
    let cases: [(&[f64], &[f64], f64, f64, f64); 2] = [
        (
            &[1.0, 2.0, 3.0, 4.0, 5.0],
            &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0],
            2.3763541031440183,
            0.04928433820673049,
            6.972255729794934,
        ),
        (
            &[12.0, 15.5, 9.25, 20.0, 17.75, 11.0, 14.5],
            &[18.5, 21.0, 16.25, 25.5, 19.0, 22.75, 17.5, 24.0],
            3.3847269863903158,
            0.0054261541475134414,
            11.990675711323403,
        ),
    ];
    let mut worst = 0.0f64;
    for (a, b, t, p, df) in cases {
        let w = welch_test(a, b).map_err(|e| e.to_string())?;
        for (got, want, what) in [(w.t, t, "t"), (w.p_value, p, "p"), (w.df, df, "df")] {
            let d = (got - want).abs();
            worst = worst.max(d);
            if d > WELCH_TOL {
                return Err(format!("Welch {what}: {got} vs {want}"));
            }
        }
    }
    let imp = improvement(18.14, 19.34);
    if (imp - 0.0663).abs() > IMPROVEMENT_TOL {
        return Err(format!("improvement {imp} vs 0.0663"));
    }
    let sim = AbSimulation {
        developers_per_arm: 100,
        days: 1,
        ..Default::default()
    };
    let mut fired = 0;
    for s in 0..NULL_SIMULATIONS {
        let (c, e) = simulate_ab(&sim, s).map_err(|e| e.to_string())?;
        if significance_gate(&ab_compare(&c, &e).map_err(|e| e.to_string())?, 0.95) {
            fired += 1;
        }
    }
    let rate = fired as f64 / NULL_SIMULATIONS as f64;
    let (c, e) = simulate_ab(&sim, 0).map_err(|e| e.to_string())?;
    let mut r = ab_compare(&c, &e).map_err(|e| e.to_string())?;
    let mut gate = Vec::new();
    for p in [0.0238, 0.0494, 0.06] {
        r.p_value = p;
        gate.push(significance_gate(&r, 0.95));
    }
    pass_if(
        rate >= NULL_RATE.0 && rate <= NULL_RATE.1 && gate == [true, true, false],
        format!(
            "Welch t/p/df within {worst:.1e} (≤ {WELCH_TOL:e}); improvement(18.14, 19.34) = {imp:.5} (0.0663 ± {IMPROVEMENT_TOL}); \
             null false-positive rate {:.1}% over {NULL_SIMULATIONS} (need {:.0}–{:.0}%); gate 0.0238/0.0494/0.06 → {gate:?}",
            100.0 * rate,
            100.0 * NULL_RATE.0,
            100.0 * NULL_RATE.1
        ),
    )
}

fn criterion_latency() -> Outcome {
    let docs = sample_docs();
    let vocab = sample_vocab(&docs);
    let ckpt = ModelCheckpoint::fresh(ModelConfig::desk(0), vocab.clone()).map_err(|e| e.to_string())?;
    let model = ckpt.model();
    let pool: Vec<String> = vocab
        .entries()
        .iter()
        .map(|(s, _)| s.clone())
        .filter(|s| xfer_core::corpus::classify(s, Language::LangA) == TokenKind::Identifier)
        .collect();
    let long: Vec<&SourceDocument> = docs.iter().filter(|d| d.language == Language::LangA && d.content.len() > 2000).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ms = Vec::with_capacity(LATENCY_REQUESTS);
    for _ in 0..LATENCY_REQUESTS {
        let doc = long.choose(&mut rng).unwrap();
        let tokens = doc.lex().unwrap().tokens;
        let cut = rng.random_range(tokens.len() / 2..tokens.len());
        let context = context_tokens(&tokens[..cut]);
        let candidates: Vec<String> = pool.choose_multiple(&mut rng, LATENCY_CANDIDATES).cloned().collect();
        let t = Instant::now();
        let ranked = rank(&model, &vocab, doc.language, &context, &candidates).map_err(|e| e.to_string())?;
        ms.push(t.elapsed().as_secs_f64() * 1e3);
        assert_eq!(ranked.suggestions.len(), LATENCY_CANDIDATES);
    }
    ms.sort_by(f64::total_cmp);
    let p50 = ms[ms.len() / 2];
    let p95 = ms[ms.len() * 95 / 100];
    let cfg = &model.config;
    pass_if(
        p50 < LATENCY_P50_MS,
        format!(
            "default model (d{} h{} L{} ctx{}, vocab {}), {LATENCY_REQUESTS} requests × {LATENCY_CANDIDATES} candidates: p50 {p50:.1} ms (< {LATENCY_P50_MS}), p95 {p95:.1} ms",
            cfg.d_model,
            cfg.n_heads,
            cfg.n_layers,
            cfg.context_len,
            vocab.len()
        ),
    )
}

fn run(id: u8, name: &str, only: &Option<Vec<u8>>, results: &mut Vec<(u8, bool)>, f: impl FnOnce() -> Outcome) {
    if only.as_ref().is_some_and(|o| !o.contains(&id)) {
        return;
    }
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let (ok, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    println!("[{}] {id}. {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    results.push((id, ok));
}

fn main() {
    let only: Option<Vec<u8>> = std::env::var("XFER_ACCEPT_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wants = |ids: &[u8]| only.as_ref().is_none_or(|o| ids.iter().any(|i| o.contains(i)));
    let mut results = Vec::new();
    run(1, "tokenizer exactness", &only, &mut results, criterion_tokenizer);
    run(2, "gradient correctness", &only, &mut results, criterion_gradients);
    run(3, "ranker oracle equivalence", &only, &mut results, criterion_ranker);
    run(8, "A/B statistics", &only, &mut results, criterion_ab);
    run(9, "scoring latency", &only, &mut results, criterion_latency);

    let mut evaluations = Vec::new();
    if wants(&[4, 5, 6, 7]) {
        let setup = DeskSetup::build(DeskConfig::new(7)).expect("desk corpus");
        run(5, "RQ1 task transfer", &only, &mut results, || criterion_rq1(&setup));
        run(6, "RQ2 diminishing benefit of commit pretraining", &only, &mut results, || {
            criterion_rq2(&setup, &mut evaluations)
        });
        run(7, "RQ3 cross-language transfer", &only, &mut results, || {
            criterion_rq3(&setup, &mut evaluations)
        });
    }
    run(4, "metric oracle", &only, &mut results, || criterion_metrics(&evaluations));

    let failed: Vec<u8> = results.iter().filter(|(_, ok)| !ok).map(|(id, _)| *id).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" ({failed:?})") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
