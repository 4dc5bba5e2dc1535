mod common;

use std::path::Path;
use std::process::Command;

use iefsvm::data::synthetic;
use iefsvm::eval::{EvalReport, Method};
use serde_json::Value;

fn run(args: &[&str]) -> iefsvm::cli::CommandOutput {
    let mut full = vec!["iefsvm"];
    full.extend_from_slice(args);
    iefsvm::cli::run(full).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn json(p: impl AsRef<Path>) -> Value {
    serde_json::from_str(&read(p)).unwrap()
}

/// Data rows of a report CSV: the provenance comment and header are dropped.
fn csv_rows(p: impl AsRef<Path>) -> Vec<Vec<String>> {
    read(p)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn toy_csv(dir: &Path, name: &str, n_pos: usize, n_neg: usize, seed: u64) -> String {
    let ds = synthetic::two_gaussians(n_pos, n_neg, 2, 1.5, seed);
    let path = dir.join(format!("{name}.csv"));
    common::write_dataset_csv(&ds, &path);
    s(&path)
}

const LABELS: [&str; 4] = ["--label-col", "label", "--minority-label", "1"];

#[test]
fn patterns_atlas_is_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run(&["patterns", "--out-dir", &s(&a)]);
    run(&["patterns", "--out-dir", &s(&b), "--seed", "0"]);
    assert_eq!(read(a.join("atlas.csv")), read(b.join("atlas.csv")));
    assert_eq!(read(a.join("atlas.json")), read(b.join("atlas.json")));

    let text = read(a.join("atlas.csv"));
    assert!(text.starts_with("# iefsvm "));
    assert!(text.lines().nth(1).unwrap() == "mu,sigma,d,theta,nonzero_count,kind");
    let rows = csv_rows(a.join("atlas.csv"));
    let patterns: Vec<&Vec<String>> = rows.iter().filter(|r| r[5] == "pattern").collect();
    assert_eq!(patterns.len(), 4374);
    let low = patterns.iter().filter(|r| r[4].parse::<usize>().unwrap() <= 2).count();
    assert_eq!(low, 18);
    assert!(rows.iter().any(|r| r[5].starts_with("levelcurve-")));

    let doc = json(a.join("atlas.json"));
    assert_eq!(doc["pattern_count"], 4374);
    assert_eq!(doc["meta"]["command"], "patterns");
    assert_eq!(doc["meta"]["seed"], 0);
}

#[test]
fn train_respects_membership_box() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_csv(tmp.path(), "toy", 5, 15, 3);
    let out = tmp.path().join("train");
    let mut args = vec!["train", "--data", &data, "--method", "iefsvm", "--dump-memberships", "--out-dir"];
    let out_s = s(&out);
    args.push(&out_s);
    args.extend(LABELS);
    run(&args);

    let doc = json(out.join("model.json"));
    let c = doc["hyperparams"]["c"].as_f64().unwrap();
    let rows = csv_rows(out.join("memberships.csv"));
    assert_eq!(rows.len(), 20);
    let memberships: Vec<f64> = rows.iter().map(|r| r[7].parse().unwrap()).collect();
    let model = &doc["model"];
    let indices = model["support_indices"].as_array().unwrap();
    let alphas = model["alphas"].as_array().unwrap();
    assert!(!indices.is_empty());
    for (i, a) in indices.iter().zip(alphas) {
        let (i, a) = (i.as_u64().unwrap() as usize, a.as_f64().unwrap());
        assert!(a > 0.0 && a <= memberships[i] * c * (1.0 + 1e-12), "alpha {a} s {} C {c}", memberships[i]);
    }
    // minority rows carry full membership; the stats columns are filled for N = 20
    for r in &rows {
        if r[1] == "1" {
            assert_eq!(r[7], "1");
        }
        assert!(!r[2].is_empty());
    }
}

#[test]
fn retrain_from_recorded_config_is_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_csv(tmp.path(), "toy", 6, 24, 4);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let mut args = vec!["train", "--data", &data, "--method", "efsvm", "--seed", "17", "--k-grid", "3,5,7"];
    let a_s = s(&a);
    args.extend(["--out-dir", &a_s]);
    args.extend(LABELS);
    run(&args);
    let cfg = s(&a.join("run.cfg"));
    run(&["train", "--config", &cfg, "--out-dir", &s(&b)]);
    assert_eq!(read(a.join("model.json")), read(b.join("model.json")));
    // flags override the file
    let c = tmp.path().join("c");
    run(&["train", "--config", &cfg, "--out-dir", &s(&c), "--seed", "18"]);
    let (ma, mc) = (json(a.join("model.json")), json(c.join("model.json")));
    assert_eq!(mc["meta"]["seed"], 18);
    assert_ne!(ma["meta"]["config_hash"], mc["meta"]["config_hash"]);
}

#[test]
fn svm_and_cssvm_agree_on_balanced_data() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_csv(tmp.path(), "bal", 15, 15, 5);
    let probe = tmp.path().join("probe.csv");
    let mut grid = String::from("x0,x1\n");
    for i in 0..7 {
        for j in 0..7 {
            grid.push_str(&format!("{},{}\n", -1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64));
        }
    }
    std::fs::write(&probe, grid).unwrap();
    let mut values = Vec::new();
    for method in ["svm", "cssvm"] {
        let out = tmp.path().join(method);
        let out_s = s(&out);
        let mut args = vec!["train", "--data", &data, "--method", method, "--out-dir", &out_s];
        args.extend(LABELS);
        run(&args);
        let pred = tmp.path().join(format!("{method}-pred"));
        let model = s(&out.join("model.json"));
        run(&["predict", "--data", &s(&probe), "--model", &model, "--out-dir", &s(&pred)]);
        let rows = csv_rows(pred.join("predictions.csv"));
        assert_eq!(rows.len(), 49);
        values.push(rows.iter().map(|r| r[1].clone()).collect::<Vec<_>>());
    }
    assert_eq!(values[0], values[1]);
}

#[test]
fn predict_reports_auc_with_labels() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_csv(tmp.path(), "toy", 6, 24, 6);
    let out = tmp.path().join("m");
    let out_s = s(&out);
    let mut args = vec!["train", "--data", &data, "--method", "cssvm", "--out-dir", &out_s];
    args.extend(LABELS);
    run(&args);
    let pred = tmp.path().join("p");
    let model = s(&out.join("model.json"));
    // minority label defaults to the one recorded in the model
    run(&["predict", "--data", &data, "--model", &model, "--label-col", "label", "--out-dir", &s(&pred)]);
    let doc = json(pred.join("predictions.json"));
    let auc = doc["auc"].as_f64().unwrap();
    assert!((50.0..=100.0).contains(&auc));
    let rows = csv_rows(pred.join("predictions.csv"));
    assert_eq!(rows[0].len(), 4);
}

#[test]
fn bench_reports_and_ranks() {
    let tmp = tempfile::tempdir().unwrap();
    let a = toy_csv(tmp.path(), "a", 8, 32, 1);
    let b = toy_csv(tmp.path(), "b", 10, 20, 2);
    let grids = ["--c-grid", "0.25,4", "--k-grid", "3,9", "--folds", "3", "--seed", "5"];

    let one = tmp.path().join("one");
    let one_s = s(&one);
    let mut args = vec!["bench", "--data", &a, "--method", "svm", "--reps", "1", "--out-dir", &one_s];
    args.extend(LABELS);
    args.extend(grids);
    run(&args);
    assert_eq!(csv_rows(one.join("bench_report.csv")).len(), 1);

    let mut outs = Vec::new();
    for name in ["five", "five-again"] {
        let out = tmp.path().join(name);
        let out_s = s(&out);
        let mut args = vec!["bench", "--data", &a, "--data", &b, "--reps", "2", "--out-dir", &out_s];
        args.extend(LABELS);
        args.extend(grids);
        run(&args);
        outs.push(out);
    }
    for file in ["bench_report.csv", "bench_report.json", "ranks.csv", "ranks.json"] {
        assert_eq!(read(outs[0].join(file)), read(outs[1].join(file)), "{file}");
    }
    let ranks = csv_rows(outs[0].join("ranks.csv"));
    assert_eq!(ranks.len(), 2 + 3);
    for row in &ranks[..2] {
        let total: f64 = row[2..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
        assert!((total - 15.0).abs() < 1e-12);
    }
    assert!(ranks[2][0].starts_with("average (all)"));
    let header = read(outs[0].join("ranks.csv"));
    assert!(header.lines().nth(1).unwrap().starts_with("dataset,ir,SVM,u-SVM,cs-SVM,EFSVM,IEFSVM"));
    let report = json(outs[0].join("bench_report.json"));
    assert_eq!(report["reports"].as_array().unwrap().len(), 10);
}

fn write_reports(path: &Path, reports: &[EvalReport]) {
    let doc = serde_json::json!({ "reports": reports });
    std::fs::write(path, serde_json::to_string(&doc).unwrap()).unwrap();
}

#[test]
fn compare_computes_holm_and_wilcoxon() {
    let tmp = tempfile::tempdir().unwrap();
    // IEFSVM always best, SVM always worst; the rest keep a fixed order -> fixed ranks
    let order = [Method::Iefsvm, Method::Efsvm, Method::Cssvm, Method::Usvm, Method::Svm];
    let mut reports = Vec::new();
    for d in 0..8 {
        let ir = if d < 4 { 10.0 } else { 2.0 };
        for (pos, m) in order.iter().enumerate() {
            let auc = 95.0 - 3.0 * pos as f64 - 0.1 * d as f64;
            reports.push(EvalReport::from_reps(format!("d{d}"), *m, ir, vec![auc], 1));
        }
    }
    let path = tmp.path().join("reports.json");
    write_reports(&path, &reports);
    let out = tmp.path().join("cmp");
    run(&["compare", "--report", &s(&path), "--out-dir", &s(&out)]);

    let holm = csv_rows(out.join("holm.csv"));
    let all: Vec<&Vec<String>> = holm.iter().filter(|r| r[0] == "all").collect();
    assert_eq!(all.len(), 4);
    // ranks 1..5, k = 5, N = 8: z = (R - 1) / sqrt(5 * 6 / 48)
    let se = (5.0f64 * 6.0 / 48.0).sqrt();
    let expect = [("SVM", 4.0), ("u-SVM", 3.0), ("cs-SVM", 2.0), ("EFSVM", 1.0)];
    for (row, (name, diff)) in all.iter().zip(expect) {
        assert_eq!(row[1], name);
        let z: f64 = row[2].parse().unwrap();
        assert!((z - diff / se).abs() < 1e-12);
    }
    let alphas: Vec<f64> = all.iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(alphas, vec![0.05 / 4.0, 0.05 / 3.0, 0.05 / 2.0, 0.05]);
    assert_eq!(holm.iter().filter(|r| r[0].starts_with("IR")).count(), 8);

    let wil = csv_rows(out.join("wilcoxon.csv"));
    // 8 pairs in "all", 4 per IR subset: the subsets are too small
    assert!(wil.iter().filter(|r| r[0] == "all").all(|r| r[8].is_empty()));
    assert!(wil.iter().filter(|r| r[0] != "all").all(|r| r[8] == "insufficient pairs"));
    let doc = json(out.join("compare.json"));
    assert_eq!(doc["champion"], "IEFSVM");
    assert_eq!(doc["subsets"].as_array().unwrap().len(), 3);
}

#[test]
fn compare_merges_report_files() {
    let tmp = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for d in 0..6 {
        for (pos, m) in Method::ALL.iter().rev().enumerate() {
            reports.push(EvalReport::from_reps(format!("d{d}"), *m, 5.0, vec![90.0 - pos as f64], 1));
        }
    }
    let (a, b) = (tmp.path().join("a.json"), tmp.path().join("b.json"));
    write_reports(&a, &reports[..15]);
    write_reports(&b, &reports[15..]);
    let out = tmp.path().join("cmp");
    // the champion ranks last, so nothing is rejected
    run(&["compare", "--report", &s(&a), "--report", &s(&b), "--champion", "svm", "--out-dir", &s(&out)]);
    let holm = csv_rows(out.join("holm.csv"));
    let all: Vec<&Vec<String>> = holm.iter().filter(|r| r[0] == "all").collect();
    assert_eq!(all.len(), 4);
    assert!(all.iter().all(|r| r[5] == "not rejected"));
}

#[test]
fn compare_champion_alone_gives_notice() {
    let tmp = tempfile::tempdir().unwrap();
    let reports: Vec<EvalReport> = (0..3)
        .map(|d| EvalReport::from_reps(format!("d{d}"), Method::Iefsvm, 4.0, vec![90.0], 1))
        .collect();
    let path = tmp.path().join("r.json");
    write_reports(&path, &reports);
    let out = tmp.path().join("cmp");
    let result = run(&["compare", "--report", &s(&path), "--out-dir", &s(&out)]);
    assert!(result.notices.iter().any(|n| n.contains("nothing to compare")));
    assert!(csv_rows(out.join("holm.csv")).is_empty());
    let doc = json(out.join("compare.json"));
    assert_eq!(doc["notices"].as_array().unwrap().len(), 1);
}

#[test]
fn binary_exit_status() {
    let exe = env!("CARGO_BIN_EXE_iefsvm");
    let tmp = tempfile::tempdir().unwrap();
    let ok = Command::new(exe)
        .args(["patterns", "--out-dir"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("atlas.csv"));

    let missing = Command::new(exe)
        .args(["train", "--data", "/nonexistent.csv", "--label-col", "y", "--minority-label", "1", "--out-dir"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nonexistent"));

    let bad = Command::new(exe).args(["bench", "--folds", "1"]).output().unwrap();
    assert!(!bad.status.success());
    let usage = Command::new(exe).args(["frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let help = Command::new(exe).args(["--help"]).output().unwrap();
    assert!(help.status.success());
}

#[test]
fn every_output_carries_provenance() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_csv(tmp.path(), "toy", 6, 24, 8);
    let out = tmp.path().join("t");
    let out_s = s(&out);
    let mut args = vec!["train", "--data", &data, "--dump-memberships", "--seed", "3", "--out-dir", &out_s];
    args.extend(LABELS);
    let result = run(&args);
    let hash = json(out.join("model.json"))["meta"]["config_hash"].as_str().unwrap().to_string();
    for file in result.files {
        let text = read(&file);
        if file.extension().unwrap() == "json" {
            let doc: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(doc["meta"]["config_hash"], hash.as_str());
            assert_eq!(doc["meta"]["seed"], 3);
            assert_eq!(doc["meta"]["version"], iefsvm::VERSION);
        } else {
            let first = text.lines().next().unwrap();
            assert!(first.contains(&format!("config_hash={hash}")) && first.contains("seed=3"), "{first}");
        }
    }
}
