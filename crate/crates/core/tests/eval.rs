use chrono::NaiveDate;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xfer_core::corpus::{CompletionEvent, Dataset, Language};
use xfer_core::eval::{
    ab_compare, evaluate, metrics_from_audit, mrr_at_k, read_audit_csv, write_audit_csv, ABObservation, Metrics,
};
use xfer_core::model::{Gpt, ModelConfig};
use xfer_core::tokenizer::Vocabulary;

fn event(id: usize, context: Vec<String>, candidates: Vec<String>, accepted: String) -> CompletionEvent {
    CompletionEvent {
        id: format!("e{id}"),
        language: Language::LangB,
        context_tokens: context,
        candidates,
        accepted,
        developer_id: "dev-000".into(),
        day: NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(),
    }
}

fn obs(side: &str, counts: &[u64]) -> Vec<ABObservation> {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| ABObservation {
            developer_id: format!("{side}-{i}"),
            day: NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(),
            completions_accepted: c,
        })
        .collect()
}

fn model() -> (Gpt<f32>, Vocabulary) {
    let vocab = Vocabulary::specials_only();
    let mut cfg = ModelConfig::tiny(vocab.len());
    cfg.context_len = 32;
    cfg.seed = 21;
    (Gpt::new(cfg).unwrap(), vocab)
}

#[test]
fn mrr_examples() {
    assert_eq!(mrr_at_k(&[Some(1); 5], 3).unwrap(), 1.0);
    assert_eq!(mrr_at_k(&[Some(4)], 3).unwrap(), 0.0);
    assert_eq!(mrr_at_k(&[Some(1), Some(2), None], 3).unwrap(), 0.5);
    assert!(mrr_at_k(&[], 3).is_err());
}

#[test]
fn single_event_ranked_first() {
    let (m, v) = model();
    let ds = Dataset::from_events(vec![event(0, vec!["x".into()], vec!["onlyOne".into()], "onlyOne".into())]);
    let r = evaluate(&m, &v, &ds).unwrap();
    assert_eq!((r.metrics.top1, r.metrics.top3, r.metrics.mrr3), (1.0, 1.0, 1.0));
}

/// With the accepted token drawn uniformly from 26 candidates independently
/// of the model, top-1 is Binomial(n, 1/26) whatever the weights are.
#[test]
fn random_model_is_at_chance() {
    let (m, v) = model();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let syllables = ["ka", "lo", "mi", "nu", "pe", "ri", "so", "tu"];
    let word = |rng: &mut ChaCha8Rng| -> String {
        let mut s: String = (0..3).map(|_| *syllables.choose(rng).unwrap()).collect();
        if rng.random_bool(0.5) {
            s.push_str(&format!("{}{}", syllables.choose(rng).unwrap().to_uppercase(), rng.random_range(0..9)));
        }
        s
    };
    let n = 1200;
    let events: Vec<CompletionEvent> = (0..n)
        .map(|i| {
            let context: Vec<String> = (0..rng.random_range(1..12)).map(|_| word(&mut rng)).collect();
            let mut cands = Vec::new();
            while cands.len() < 26 {
                let w = word(&mut rng);
                if !cands.contains(&w) {
                    cands.push(w);
                }
            }
            cands.shuffle(&mut rng);
            let accepted = cands.choose(&mut rng).unwrap().clone();
            event(i, context, cands, accepted)
        })
        .collect();
    let r = evaluate(&m, &v, &Dataset::from_events(events)).unwrap();
    let p = 1.0 / 26.0;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert_eq!(r.metrics.unscorable, 0);
    assert!((r.metrics.top1 - p).abs() <= 3.0 * sigma, "top1 {} vs {p} ± {}", r.metrics.top1, 3.0 * sigma);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ranks.csv");
    write_audit_csv(&path, &r.audit).unwrap();
    let back = read_audit_csv(&path).unwrap();
    assert_eq!(back, r.audit);
    assert_eq!(metrics_from_audit(&back).unwrap(), r.metrics);
    let brute = back.iter().map(|a| a.rank.filter(|&k| k <= 3).map_or(0.0, |k| 1.0 / k as f64)).sum::<f64>() / n as f64;
    assert!((brute - r.metrics.mrr3).abs() < 1e-12);
}

#[test]
fn unscorable_events_count_as_misses() {
    let m = Metrics::from_ranks(&[Some(1), None], 1).unwrap();
    assert_eq!((m.top1, m.top3, m.mrr3, m.unscorable), (0.5, 0.5, 0.5, 1));
}

#[test]
fn identical_groups_show_no_effect() {
    let c = obs("c", &[3, 9, 4, 12, 7]);
    let e = obs("e", &[3, 9, 4, 12, 7]);
    let r = ab_compare(&c, &e).unwrap();
    assert_eq!(r.improvement, 0.0);
    assert_eq!(r.p_value, 1.0);
    assert!(ab_compare(&c, &[]).is_err());
}

#[test]
fn ten_versus_eleven() {
    // constant 10 and 11 with one step of jitter either way keeps the means exact
    let mut c = vec![10u64; 100];
    let mut e = vec![11u64; 100];
    (c[0], c[1], e[0], e[1]) = (9, 11, 10, 12);
    let r = ab_compare(&obs("c", &c), &obs("e", &e)).unwrap();
    assert!((r.improvement - 0.10).abs() < 1e-12);
    // closed form: both variances 2/99, n = 100
    let var: f64 = 2.0 / 99.0;
    let se = (2.0 * var / 100.0).sqrt();
    let df = (2.0 * var / 100.0).powi(2) / (2.0 * (var / 100.0).powi(2) / 99.0);
    assert!((r.t_statistic - 1.0 / se).abs() < 1e-9);
    assert!((r.degrees_of_freedom - df).abs() < 1e-9);
    assert!(r.p_value < 0.01);
    assert_eq!(r.unique_developers, (100, 100));
}

#[test]
fn duplicate_developer_days_are_rejected() {
    let mut c = obs("c", &[1, 2, 3]);
    c[2].developer_id = c[0].developer_id.clone();
    assert!(ab_compare(&c, &obs("e", &[1, 2])).is_err());
}
