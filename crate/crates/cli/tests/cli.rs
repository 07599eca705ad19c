use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

fn xfer(dir: &Path, args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_xfer"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .env_remove("XFER_DATA_DIR")
        .output()
        .expect("spawn xfer");
    assert!(
        out.status.success(),
        "xfer {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn pipeline_from_source_tree_to_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    xfer(d, &["synth", "--preset", "sample", "--seed", "3", "--out", "tree"]);
    assert!(d.join("tree/manifest.jsonl").exists());

    xfer(d, &["corpus", "build", "--role", "autocompletion", "--lang", "lang-a", "--in", "tree", "--out", "ac.jsonl", "--seed", "1", "--candidate-mean", "12"]);
    let split = xfer(d, &["corpus", "split", "--in", "ac.jsonl", "--fraction", "0.1", "--seed", "1"]);
    assert!(split.contains("ac.train.jsonl") && split.contains("ac.heldout.jsonl"));
    xfer(d, &["corpus", "build", "--role", "ide", "--lang", "lang-a", "--in", "tree", "--out", "ide.jsonl"]);
    xfer(d, &["corpus", "build", "--role", "commit", "--lang", "lang-a", "--in", "tree", "--out", "commit.jsonl"]);
    xfer(d, &["vocab", "build", "--in", "ide.jsonl", "--in", "commit.jsonl", "--in", "ac.train.jsonl", "--max-size", "500", "--out", "vocab.tsv"]);

    // the event file is line-per-event in the service's log format
    let first = std::fs::read_to_string(d.join("ac.jsonl")).unwrap();
    let ev: Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    for key in ["id", "language", "context_tokens", "candidates", "accepted", "developer_id", "day"] {
        assert!(ev.get(key).is_some(), "missing {key}");
    }

    let config = json!({
        "id": 5,
        "seed": 2,
        "phases": [{"role": "commit", "max_epochs": 1}, {"role": "autocompletion", "max_epochs": 1}],
        "model": {"vocab_size": 0, "context_len": 32, "d_model": 16, "n_heads": 2, "n_layers": 1, "d_ff": 32, "dropout": 0.0, "seed": 0},
        "data": {"language": "lang-a", "vocab": "vocab.tsv", "autocompletion": "ac.train.jsonl",
                 "heldout": "ac.heldout.jsonl", "commit": "commit.jsonl"}
    });
    std::fs::write(d.join("exp5.json"), config.to_string()).unwrap();
    xfer(d, &["train", "--config", "exp5.json", "--out", "runs"]);
    let ckpt = d.join("runs/config-5-seed-2.ckpt");
    assert!(ckpt.exists());
    let row: Value = serde_json::from_str(std::fs::read_to_string(d.join("runs/results.jsonl")).unwrap().trim()).unwrap();
    assert_eq!(row["config"], "5");
    assert_eq!(row["phases"], json!(["commit", "autocompletion"]));
    assert_eq!(row["epochs_per_phase"], json!([1, 1]));
    let (t1, t3, mrr) = (row["top1"].as_f64().unwrap(), row["top3"].as_f64().unwrap(), row["mrr3"].as_f64().unwrap());
    assert!(t1 <= mrr && mrr <= t3);

    // a wrong role sequence for the id is refused
    let mut bad = config.clone();
    bad["id"] = json!(6);
    std::fs::write(d.join("bad.json"), bad.to_string()).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_xfer"))
        .args(["train", "--config", "bad.json", "--out", "runs"])
        .current_dir(d)
        .output()
        .unwrap()
        .status;
    assert!(!status.success());

    xfer(d, &["eval", "--model", "runs/config-5-seed-2.ckpt", "--heldout", "ac.heldout.jsonl", "--out", "metrics.json", "--audit", "ranks.csv"]);
    let m = read_json(&d.join("metrics.json"));
    let mut keys: Vec<&str> = m.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["mrr3", "n", "top1", "top3", "unscorable"]);
    assert_eq!(m["top1"], row["top1"]);
    let audit = std::fs::read_to_string(d.join("ranks.csv")).unwrap();
    assert_eq!(audit.lines().count() as u64, m["n"].as_u64().unwrap() + 1);

    xfer(d, &["sweep", "--base", "runs/config-5-seed-2.ckpt", "--finetune", "ac.train.jsonl", "--heldout", "ac.heldout.jsonl",
        "--fractions", "0.25,0.5", "--seeds", "1", "--max-epochs", "1", "--name", "s", "--out", "runs"]);
    let sweep = read_json(&d.join("runs/s.json"));
    assert_eq!(sweep["rows"].as_array().unwrap().len(), 2);
    let rows = std::fs::read_to_string(d.join("runs/results.jsonl")).unwrap();
    assert_eq!(rows.lines().count(), 5);
    assert!(rows.contains("\"config\":\"s/sweep-scratch\""));

    xfer(d, &["plot", "--sweep", "commit=runs/s.json", "--out", "fig.svg"]);
    assert!(std::fs::read_to_string(d.join("fig.svg")).unwrap().starts_with("<svg"));
    let csv = std::fs::read_to_string(d.join("fig.csv")).unwrap();
    assert!(csv.starts_with("series,fraction,examples,"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn abtest_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    xfer(d, &["simulate-ab", "--control", "c.jsonl", "--experiment", "e.jsonl", "--developers", "200", "--days", "5", "--uplift", "0.15", "--seed", "4"]);
    let line = xfer(d, &["abtest", "--control", "c.jsonl", "--experiment", "e.jsonl", "--out", "ab.json"]);
    assert!(line.contains("significant"));
    let ab = read_json(&d.join("ab.json"));
    assert_eq!(ab["unique_developers"], json!([200, 200]));
    assert_eq!(ab["significant"], true);
    assert!(ab["improvement"].as_f64().unwrap() > 0.05);
}
