//! Offline ranking metrics and A/B statistics.

mod ab;
mod metrics;

pub use ab::{ab_compare, improvement, significance_gate, simulate_ab, welch_test, ABObservation, ABResult, AbSimulation, WelchTest};
pub use metrics::{
    evaluate, metrics_from_audit, mrr_at_k, read_audit_csv, write_audit_csv, AuditRow, EvalReport, Metrics, MRR_K,
};
