//! End-to-end behavior of the `cfair` binary on small catalogs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn cfair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// One n = 200 pipeline shared by the read-only tests.
fn small_run() -> &'static Path {
    static RUN: OnceLock<PathBuf> = OnceLock::new();
    RUN.get_or_init(|| {
        let dir = scratch("small_run");
        let out = cfair(&["pipeline", "--n", "200", "--out", s(&dir)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        dir
    })
}

fn files_under(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn write_csv(path: &Path, rows: &[(f64, f64, u8, u8)]) {
    let mut text = String::from("x1,x2,group,label\n");
    for (a, b, g, y) in rows {
        text.push_str(&format!("{a},{b},{g},{y}\n"));
    }
    fs::write(path, text).unwrap();
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn generate_is_byte_reproducible() {
    let a = scratch("gen_a");
    let b = scratch("gen_b");
    for dir in [&a, &b] {
        let out = cfair(&["generate", "--n", "200", "--seed", "9", "--out", s(dir)]);
        assert_eq!(code(&out), 0);
    }
    let (fa, fb) = (files_under(&a), files_under(&b));
    assert_eq!(fa.len(), 73 + 2, "73 datasets, manifest, run config");
    assert_eq!(fa, fb);

    let manifest = read_json(&a.join("manifest.json"));
    let entries = manifest["datasets"].as_array().unwrap();
    assert_eq!(entries.len(), 73);
    for e in entries {
        let rows = fs::read_to_string(a.join(e["file"].as_str().unwrap())).unwrap().lines().count() - 1;
        let scenario = e["scenario_id"].as_str().unwrap();
        if scenario == "S1D" || scenario == "S1F" {
            assert!(rows <= 200, "{scenario}: {rows}");
        } else {
            assert_eq!(rows, 200, "{scenario}");
        }
    }

    let c = scratch("gen_c");
    cfair(&["generate", "--n", "200", "--seed", "10", "--out", s(&c)]);
    assert_ne!(fs::read(a.join("data/S1A.csv")).unwrap(), fs::read(c.join("data/S1A.csv")).unwrap());
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&cfair(&["frobnicate"])), 1);
    assert_eq!(code(&cfair(&["generate", "--n", "many"])), 1);
    let dir = scratch("usage");
    assert_eq!(code(&cfair(&["generate", "--min-support", "0", "--out", s(&dir)])), 1);
    assert_eq!(code(&cfair(&["generate", "--n", "50", "--out", s(&dir)])), 1);
    assert_eq!(code(&cfair(&["--help"])), 0);
}

#[test]
fn data_errors_exit_with_two() {
    let dir = scratch("data_errors");
    assert_eq!(code(&cfair(&["audit", s(&dir.join("absent.csv")), "--out", s(&dir)])), 2);

    let bad = dir.join("three_groups.csv");
    write_csv(&bad, &[(0.0, 1.0, 0, 1), (1.0, 0.0, 1, 0), (2.0, 2.0, 2, 1)]);
    let out = cfair(&["audit", s(&bad), "--protected", "group", "--target", "label", "--out", s(&dir)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-binary"));
}

#[test]
fn strict_mode_escalates_degenerate_groups() {
    let dir = scratch("strict");
    let one_group = dir.join("one_group.csv");
    let rows: Vec<(f64, f64, u8, u8)> = (0..40).map(|i| (i as f64, (i * 7 % 13) as f64, 1, (i % 2) as u8)).collect();
    write_csv(&one_group, &rows);
    let args = ["audit", s(&one_group), "--protected", "group", "--target", "label", "--out", s(&dir)];
    assert_eq!(code(&cfair(&args)), 0, "warnings alone do not fail");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(code(&cfair(&strict)), 3);

    let audit = read_json(&dir.join("audits/one_group.json"));
    assert!(audit["complexity"]["N1"]["cmd"].is_null());
    assert!(!audit["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn identical_groups_audit_to_zero_cmd_and_repeat_exactly() {
    let dir = scratch("identical");
    let csv = dir.join("twins.csv");
    let base: Vec<(f64, f64, u8)> = (0..30)
        .map(|i| ((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos(), u8::from(i % 3 == 0)))
        .collect();
    let rows: Vec<(f64, f64, u8, u8)> = base
        .iter()
        .map(|&(a, b, y)| (a, b, 1, y))
        .chain(base.iter().map(|&(a, b, y)| (a, b, 0, y)))
        .collect();
    write_csv(&csv, &rows);
    let args = ["audit", s(&csv), "--protected", "group", "--target", "label", "--folds", "5"];
    let first = dir.join("first");
    let second = dir.join("second");
    for out in [&first, &second] {
        let mut a = args.to_vec();
        a.extend(["--out", s(out)]);
        assert_eq!(code(&cfair(&a)), 0);
    }
    let report = read_json(&first.join("audits/twins.json"));
    for (metric, entry) in report["complexity"].as_object().unwrap() {
        assert_eq!(entry["cmd"].as_f64(), Some(0.0), "{metric}");
    }
    assert_eq!(
        fs::read(first.join("audits/twins.json")).unwrap(),
        fs::read(second.join("audits/twins.json")).unwrap()
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = scratch("config");
    let cfg = dir.join("run.toml");
    fs::write(&cfg, "seed = 5\nn = 150\nmin_support = 0.2\n").unwrap();
    let out = cfair(&["generate", "--config", s(&cfg), "--n", "120", "--out", s(&dir.join("out"))]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let record = read_json(&dir.join("out/run_config.json"));
    assert_eq!(record["config"]["seed"], 5);
    assert_eq!(record["config"]["n"], 120);
    assert_eq!(record["config"]["min_support"], 0.2);
    assert_eq!(record["config_hash"].as_str().unwrap().len(), 64);

    fs::write(&cfg, "sed = 5\n").unwrap();
    assert_eq!(code(&cfair(&["generate", "--config", s(&cfg), "--out", s(&dir)])), 1);
}

#[test]
fn pipeline_outputs_reference_config_and_inputs() {
    let run = small_run();
    let hash = read_json(&run.join("run_config.json"))["config_hash"].as_str().unwrap().to_string();
    assert_eq!(read_json(&run.join("manifest.json"))["config_hash"], hash.as_str());
    let audit = read_json(&run.join("audit/audits/S1A.json"));
    assert_eq!(audit["config_hash"], hash.as_str());
    assert_eq!(audit["input"]["path"], "data/S1A.csv");
    assert_eq!(audit["fairness"].as_array().unwrap().len(), 9);
    for sub in ["audit", "rules", "embedding"] {
        let rec = read_json(&run.join(sub).join("run_config.json"));
        assert_eq!(rec["config_hash"], hash.as_str(), "{sub}");
    }
    let corpus = fs::read_to_string(run.join("audit/corpus.csv")).unwrap();
    let header = corpus.lines().next().unwrap();
    assert!(header.starts_with("dataset_id,scenario_id,parameter,parameter_value,F1v,"));
    assert!(header.ends_with("SP_KN,EO_KN,PP_KN"));
    assert_eq!(corpus.lines().count(), 74);

    let embedding = fs::read_to_string(run.join("embedding/embedding.csv")).unwrap();
    assert!(embedding.starts_with("dataset_id,x,y,scenario_id,bias_parameter,"));
    assert_eq!(embedding.lines().count(), 74);
}

#[test]
fn rules_csv_has_table_layout() {
    let run = small_run();
    let csv = fs::read_to_string(run.join("rules/rules.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("Antecedent,Consequent,Sup_A,Sup_C,Sup,Confidence,Lift"));
    let rules = read_json(&run.join("rules/rules.json"));
    assert_eq!(rules.as_array().unwrap().len(), csv.lines().count() - 1);
}

#[test]
fn evaluating_on_the_mining_corpus_reproduces_the_rules() {
    let run = small_run();
    let out = scratch("self_eval");
    let r = cfair(&["evaluate", s(&run.join("rules/rules.json")), s(&run.join("audit")), "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let rules = read_json(&run.join("rules/rules.json"));
    let eval = read_json(&out.join("evaluation.json"));
    let evaluated = eval["rules"].as_array().unwrap();
    assert_eq!(evaluated.len(), rules.as_array().unwrap().len());
    for (m, e) in rules.as_array().unwrap().iter().zip(evaluated) {
        for key in ["antecedent", "consequent", "sup_a", "sup_c", "sup", "confidence", "lift"] {
            assert_eq!(m[key], e[key], "{key}");
        }
    }
}

#[test]
fn evaluation_on_half_the_corpus_stays_within_sampling_bounds() {
    let run = small_run();
    let dir = scratch("half");
    let corpus = fs::read_to_string(run.join("audit/corpus.csv")).unwrap();
    let mut lines = corpus.lines();
    let header = lines.next().unwrap();
    let half: Vec<&str> = lines.step_by(2).collect();
    let m = half.len() as f64;
    fs::write(dir.join("corpus.csv"), format!("{header}\n{}\n", half.join("\n"))).unwrap();
    let out = dir.join("eval");
    assert_eq!(code(&cfair(&["evaluate", s(&run.join("rules/rules.json")), s(&dir), "--out", s(&out)])), 0);
    let full = read_json(&run.join("rules/rules.json"));
    let eval = read_json(&out.join("evaluation.json"));
    for (f, h) in full.as_array().unwrap().iter().zip(eval["rules"].as_array().unwrap()) {
        let p = f["sup"].as_f64().unwrap();
        // sampling half of a finite population without replacement
        let sd = (p * (1.0 - p) / m * 0.5).sqrt();
        let got = h["sup"].as_f64().unwrap();
        assert!((got - p).abs() <= 4.0 * sd + 1.0 / m, "sup {got} vs {p}");
    }
}

#[test]
fn evaluate_rejects_unknown_items_and_reports_rules_that_never_fire() {
    let dir = scratch("eval_edge");
    let mut corpus = String::from("dataset_id,F1v,C2,SP_DT\n");
    for i in 0..6 {
        corpus.push_str(&format!("d{i},0.01,0.02,{}\n", if i % 2 == 0 { 0.3 } else { 0.0 }));
    }
    fs::write(dir.join("corpus.csv"), corpus).unwrap();
    let rules = r#"[{"antecedent":["C2"],"consequent":["SP_DT"],"sup_a":0.3,"sup_c":0.3,"sup":0.3,"confidence":1.0,"lift":3.3}]"#;
    fs::write(dir.join("rules.json"), rules).unwrap();
    let out = dir.join("out");
    assert_eq!(code(&cfair(&["evaluate", s(&dir.join("rules.json")), s(&dir), "--out", s(&out)])), 0);
    let eval = read_json(&out.join("evaluation.json"));
    let r = &eval["rules"][0];
    assert_eq!(r["sup_a"], 0.0);
    assert!(r["confidence"].is_null());
    assert!(r["lift"].is_null());
    assert_eq!(r["sup_c"], 0.5);

    let other = r#"[{"antecedent":["N1"],"consequent":["SP_DT"],"sup_a":0.3,"sup_c":0.3,"sup":0.3,"confidence":1.0,"lift":3.3}]"#;
    fs::write(dir.join("other.json"), other).unwrap();
    let r = cfair(&["evaluate", s(&dir.join("other.json")), s(&dir), "--out", s(&out)]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("N1"));
}

#[test]
fn all_fair_corpus_yields_no_rules_and_small_corpora_cannot_embed() {
    let dir = scratch("all_fair");
    let mut corpus = String::from("dataset_id,C2,N1,SP_LR,SP_DT\n");
    for i in 0..5 {
        corpus.push_str(&format!("d{i},0.5,0.3,0.01,-0.02\n"));
    }
    fs::write(dir.join("corpus.csv"), &corpus).unwrap();
    let out = dir.join("rules");
    assert_eq!(code(&cfair(&["mine", s(&dir), "--out", s(&out)])), 0);
    assert_eq!(read_json(&out.join("rules.json")), Value::Array(vec![]));

    let two: String = corpus.lines().take(3).map(|l| format!("{l}\n")).collect();
    fs::write(dir.join("corpus.csv"), two).unwrap();
    assert_eq!(code(&cfair(&["embed", s(&dir), "--out", s(&dir.join("emb"))])), 2);

    fs::write(dir.join("corpus.csv"), "dataset_id,C2\n").unwrap();
    assert_eq!(code(&cfair(&["mine", s(&dir), "--out", s(&out)])), 2);
}

#[test]
fn thread_count_does_not_change_outputs() {
    let run = small_run();
    let dir = scratch("jobs");
    let out = cfair(&["audit", s(&run.join("manifest.json")), "--n", "200", "--jobs", "3", "--out", s(&dir)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read(dir.join("corpus.csv")).unwrap(),
        fs::read(run.join("audit/corpus.csv")).unwrap()
    );
    assert_eq!(
        fs::read(dir.join("audits/S3A12.json")).unwrap(),
        fs::read(run.join("audit/audits/S3A12.json")).unwrap()
    );
}
