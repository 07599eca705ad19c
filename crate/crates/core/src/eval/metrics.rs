use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::model::{Gpt, Scalar};
use crate::ranker::rank;
use crate::tokenizer::Vocabulary;

pub const MRR_K: usize = 3;

/// Mean of `1/rank` over events, counting ranks beyond `k` (and missing
/// ranks) as zero.
pub fn mrr_at_k(ranks: &[Option<usize>], k: usize) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let total: f64 = ranks
        .iter()
        .map(|r| match r {
            Some(r) if *r >= 1 && *r <= k => 1.0 / *r as f64,
            _ => 0.0,
        })
        .sum();
    Ok(total / ranks.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: usize,
    pub top1: f64,
    pub top3: f64,
    pub mrr3: f64,
    /// Events whose accepted token could not be scored (counted as misses).
    pub unscorable: usize,
}

impl Metrics {
    pub fn from_ranks(ranks: &[Option<usize>], unscorable: usize) -> Result<Metrics> {
        let n = ranks.len();
        let within = |k: usize| ranks.iter().filter(|r| matches!(r, Some(r) if *r <= k)).count() as f64 / n.max(1) as f64;
        Ok(Metrics {
            n,
            mrr3: mrr_at_k(ranks, MRR_K)?,
            top1: within(1),
            top3: within(3),
            unscorable,
        })
    }
}

/// One held-out event's outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub event_id: String,
    pub rank: Option<usize>,
    pub candidates: usize,
    pub scorable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub metrics: Metrics,
    pub audit: Vec<AuditRow>,
}

/// Ranks each held-out event's candidates and locates the accepted token.
pub fn evaluate<T: Scalar>(model: &Gpt<T>, vocab: &Vocabulary, heldout: &Dataset) -> Result<EvalReport> {
    let mut audit = Vec::with_capacity(heldout.len());
    for ev in heldout.events() {
        let ranked = rank(model, vocab, ev.language, &ev.context_tokens, &ev.candidates)?;
        let rank = ranked.rank_of(&ev.accepted);
        audit.push(AuditRow {
            event_id: ev.id.clone(),
            rank,
            candidates: ev.candidates.len(),
            scorable: rank.is_some(),
        });
    }
    if audit.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let metrics = metrics_from_audit(&audit)?;
    Ok(EvalReport { metrics, audit })
}

pub fn metrics_from_audit(audit: &[AuditRow]) -> Result<Metrics> {
    let ranks: Vec<Option<usize>> = audit.iter().map(|a| a.rank).collect();
    Metrics::from_ranks(&ranks, audit.iter().filter(|a| !a.scorable).count())
}

/// `event_id,rank,candidates,scorable` with an empty rank for unscorable rows.
pub fn write_audit_csv(path: &Path, audit: &[AuditRow]) -> Result<()> {
    let mut out = String::from("event_id,rank,candidates,scorable\n");
    for a in audit {
        let rank = a.rank.map(|r| r.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{}", a.event_id, rank, a.candidates, a.scorable).expect("string write");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_audit_csv(path: &Path) -> Result<Vec<AuditRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: &str| Error::Invalid(format!("malformed audit row: {line}"));
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|line| {
            // event ids may contain commas; the last three fields never do
            let mut parts = line.rsplitn(4, ',');
            let scorable = parts.next().ok_or_else(|| bad(line))?;
            let candidates = parts.next().ok_or_else(|| bad(line))?;
            let rank = parts.next().ok_or_else(|| bad(line))?;
            let event_id = parts.next().ok_or_else(|| bad(line))?;
            Ok(AuditRow {
                event_id: event_id.to_string(),
                rank: if rank.is_empty() {
                    None
                } else {
                    Some(rank.parse().map_err(|_| bad(line))?)
                },
                candidates: candidates.parse().map_err(|_| bad(line))?,
                scorable: scorable.parse().map_err(|_| bad(line))?,
            })
        })
        .collect()
}
