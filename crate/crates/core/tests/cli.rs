mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use newsreuse::corpus::Role;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ARTIFACTS: [&str; 15] = [
    "matches.jsonl",
    "matches.csv",
    "summary.json",
    "vectors.emb1",
    "vectors.emb1.meta.json",
    "accounting.csv",
    "rates.json",
    "positions.csv",
    "chi_square.json",
    "pr.json",
    "heatmap_target.json",
    "heatmap_target.svg",
    "heatmap_source.json",
    "heatmap_source.svg",
    "terms.json",
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newsreuse"))
}

struct Fixture {
    dir: tempfile::TempDir,
    target: PathBuf,
    source: PathBuf,
}

fn fixture(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = temporal_fixture(&mut rng);
    let b = rate_fixture(&mut rng, 20, 12, 15);
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("target.jsonl");
    let source = dir.path().join("source.jsonl");
    write_corpus(&target, Role::Target, &[a.targets, b.targets].concat());
    write_corpus(&source, Role::Source, &[a.sources, b.sources].concat());
    Fixture { dir, target, source }
}

fn run_cmd(f: &Fixture, out: &Path, extra: &[&str]) -> Output {
    let o = bin()
        .arg("run")
        .arg("--target")
        .arg(&f.target)
        .arg("--source")
        .arg(&f.source)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    assert!(o.status.success(), "run failed: {}", String::from_utf8_lossy(&o.stderr));
    o
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    ARTIFACTS.iter().map(|name| (name.to_string(), std::fs::read(dir.join(name)).unwrap())).collect()
}

#[test]
fn run_writes_every_artifact_deterministically() {
    let f = fixture(1);
    let a = f.dir.path().join("a");
    let b = f.dir.path().join("b");
    let c = f.dir.path().join("c");
    run_cmd(&f, &a, &["--parallelism", "1"]);
    run_cmd(&f, &b, &["--parallelism", "1"]);
    run_cmd(&f, &c, &["--parallelism", "8"]);
    let first = snapshot(&a);
    assert_eq!(first, snapshot(&b));
    assert_eq!(first, snapshot(&c));

    let accounting = String::from_utf8(first["accounting.csv"].clone()).unwrap();
    assert!(accounting.contains("False positives,1,1,1,1,1"), "{accounting}");
    assert!(accounting.contains("The earliest matches,,13,,13,13"), "{accounting}");
    let pr: serde_json::Value = serde_json::from_slice(&first["pr.json"]).unwrap();
    assert_eq!(pr["total_pairs"], 13);
    let chi: serde_json::Value = serde_json::from_slice(&first["chi_square.json"]).unwrap();
    assert!(chi.get("p_value").is_some() || chi.get("error").is_some());
}

#[test]
fn report_rebuilds_analysis_artifacts() {
    let f = fixture(2);
    let out = f.dir.path().join("out");
    run_cmd(&f, &out, &[]);
    let before = snapshot(&out);
    for name in ["accounting.csv", "positions.csv", "pr.json", "terms.json", "heatmap_target.svg"] {
        std::fs::remove_file(out.join(name)).unwrap();
    }
    let o = bin()
        .arg("report")
        .arg("--target")
        .arg(&f.target)
        .arg("--source")
        .arg(&f.source)
        .arg("--out-dir")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(before, snapshot(&out));
}

#[test]
fn config_file_with_flag_override() {
    let f = fixture(3);
    let cfg = f.dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"threshold": 0.99, "heatmap_max": 4, "target_path": "target.jsonl", "source_path": "source.jsonl", "out_dir": "cfg-out"}"#,
    )
    .unwrap();
    let o = bin().arg("run").arg("--config").arg(&cfg).arg("--threshold").arg("0.6").output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(f.dir.path().join("cfg-out/summary.json")).unwrap()).unwrap();
    assert!((summary["threshold"].as_f64().unwrap() - 0.6).abs() < 1e-6);
    assert!(summary["accounting"]["raw"]["pairs"].as_u64().unwrap() > 0);
}

#[test]
fn ingest_prints_counts() {
    let f = fixture(4);
    let out = f.dir.path().join("ingested");
    let o = bin()
        .args(["ingest", "--target"])
        .arg(&f.target)
        .arg("--source")
        .arg(&f.source)
        .arg("--out-dir")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("target: 22 articles"), "{stdout}");
    assert!(stdout.contains("source: 18 articles"), "{stdout}");
    assert!(out.join("target.jsonl").is_file() && out.join("source.jsonl").is_file());
}

#[test]
fn ingest_exit_codes() {
    let f = fixture(5);
    let missing =
        bin().args(["ingest", "--target", "/nonexistent/t.jsonl", "--source"]).arg(&f.source).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let text = std::fs::read_to_string(&f.target).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[6] = r#"{"id": "broken", "role": "target""#;
    let bad = f.dir.path().join("bad.jsonl");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let o = bin().arg("ingest").arg("--target").arg(&bad).arg("--source").arg(&f.source).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7"));
}

fn pairs_file(dir: &Path, lines: &[serde_json::Value]) -> PathBuf {
    let path = dir.join("pairs.jsonl");
    let text: Vec<String> = lines.iter().map(|v| v.to_string()).collect();
    std::fs::write(&path, text.join("\n")).unwrap();
    path
}

#[test]
fn calibrate_reports_groups() {
    let dir = tempfile::tempdir().unwrap();
    let same = "The mayor opened the bridge. Traffic resumed at noon. Officials praised the builders.";
    let path = pairs_file(
        dir.path(),
        &[
            serde_json::json!({"pair_id": "1", "language": "en", "source_text": same, "target_text": same}),
            serde_json::json!({"pair_id": "2", "language": "de", "source_text": "Ein Satz hier.", "target_text": "Noch ein Satz."}),
        ],
    );
    let o = bin().arg("calibrate").arg("--pairs").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = stdout.lines().collect();
    assert_eq!(rows[0], "group,full text,different sentences,similar sentences,support");
    assert!(rows[1].starts_with("de,") && rows[1].contains(",,"), "{stdout}");
    assert!(rows[2].starts_with("en,1.0000,") && rows[2].ends_with(",1.0000,1"), "{stdout}");
}

#[test]
fn calibrate_without_separation_warns() {
    let dir = tempfile::tempdir().unwrap();
    let a = "Storm hits coast. Schools close early.";
    let b = "Schools close early. Storm hits coast.";
    let path = pairs_file(
        dir.path(),
        &[serde_json::json!({"pair_id": "1", "language": "en", "source_text": a, "target_text": b})],
    );
    let o = bin().arg("calibrate").arg("--pairs").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no separation"));

    let missing = bin().args(["calibrate", "--pairs", "/nonexistent.jsonl"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}
