use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIG1_Y: [u8; 10] = [1, 0, 0, 1, 0, 0, 1, 0, 1, 1];
const FIG1_C1: [u8; 10] = [1, 0, 0, 0, 1, 1, 1, 0, 1, 0];
const FIG1_C2: [u8; 10] = [0, 1, 1, 0, 0, 0, 0, 1, 1, 1];
const FIG1_GROUPS: [&str; 10] = ["g1", "g1", "g2", "g2", "g2", "g2", "g3", "g3", "g3", "g3"];

fn fairineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn fig1_file(dir: &Path, name: &str, pred: &[u8]) -> PathBuf {
    let mut text = String::from("id,y_true,y_pred,score,group\n");
    for i in 0..10 {
        text += &format!("p{i},{},{},,{}\n", FIG1_Y[i], pred[i], FIG1_GROUPS[i]);
    }
    write(dir, name, &text)
}

fn value_of(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no `{key}` in {out}"))
        .parse()
        .unwrap()
}

fn audit_json(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("audit.json")).unwrap()).unwrap()
}

#[test]
fn index_on_fig1_benefits() {
    let dir = TempDir::new().unwrap();
    let b = [1, 1, 1, 0, 2, 2, 1, 1, 1, 0];
    let text: String = std::iter::once("id,benefit\n".to_string())
        .chain(b.iter().enumerate().map(|(i, v)| format!("p{i},{v}\n")))
        .collect();
    let input = write(dir.path(), "b.csv", &text);
    let o = fairineq(&["index", "--input", input.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.2");
}

#[test]
fn index_constant_and_all_measures() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "b.csv", "id,benefit\na,3\nb,3\nc,3\n");
    let o = fairineq(&["index", "--input", input.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = fairineq(&["index", "--input", input.to_str().unwrap(), "--measure", "all"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn index_rejects_negative_benefit_with_row() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "b.csv", "id,benefit\na,1\nb,-2\n");
    let o = fairineq(&["index", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("row 2"), "{err}");
}

#[test]
fn audit_fig1_classifiers() {
    let dir = TempDir::new().unwrap();
    let c1 = fig1_file(dir.path(), "c1.csv", &FIG1_C1);
    let out = dir.path().join("out1");
    let o = fairineq(&[
        "audit", "--pred", c1.to_str().unwrap(), "--groups", "group", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!((value_of(&s, "overall") - 0.2).abs() < 1e-12);
    assert!((value_of(&s, "between") - 0.025).abs() < 1e-12);
    assert!((value_of(&s, "within") - 0.175).abs() < 1e-12);
    let report = audit_json(&out);
    assert_eq!(report["group_terms"].as_array().unwrap().len(), 3);
    assert!(out.join("manifest.json").exists());

    let c2 = fig1_file(dir.path(), "c2.csv", &FIG1_C2);
    let o = fairineq(&["audit", "--pred", c2.to_str().unwrap(), "--groups", "group"]);
    assert!((value_of(&stdout(&o), "overall") - 0.3).abs() < 1e-12);
}

#[test]
fn audit_fpr_scenario() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("id,y_true,y_pred,score,group\n");
    for (g, size, pos) in [("A", 70, 56), ("B", 30, 18)] {
        for i in 0..size {
            text += &format!("{g}{i},0,{},,{g}\n", u8::from(i < pos));
        }
    }
    let pred = write(dir.path(), "fpr.csv", &text);
    let o = fairineq(&["audit", "--pred", pred.to_str().unwrap(), "--groups", "group", "--notion", "equal-fpr"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let between = value_of(&stdout(&o), "between");
    assert!((between - 0.062_130_177_514_8).abs() < 1e-9);
}

#[test]
fn sweep_oracle_has_perfect_row() {
    let dir = TempDir::new().unwrap();
    let c1 = fig1_file(dir.path(), "c1.csv", &FIG1_C1);
    let out = dir.path().join("sweep");
    let o = fairineq(&["sweep", "--pred", c1.to_str().unwrap(), "--oracle", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let perfect = csv.lines().skip(1).any(|l| {
        let f: Vec<&str> = l.split(',').collect();
        f[1] == "1" && f[2] == "0"
    });
    assert!(perfect, "{csv}");
    assert_eq!(csv.lines().count(), 102);
}

#[test]
fn shares_default_sets() {
    let dir = TempDir::new().unwrap();
    let c1 = fig1_file(dir.path(), "c1.csv", &FIG1_C1);
    let o = fairineq(&["shares", "--pred", c1.to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("attributes,n_groups,between_share\n"));
    assert!(s.contains("none,1,0"), "{s}");
    assert!(s.contains("group,3,0.125"), "{s}");
}

#[test]
fn constrain_synthetic_grid_has_21_rows() {
    let o = fairineq(&["constrain", "--synthetic", "1500", "--factors", "1.0:0.0:0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 22);
}

#[test]
fn train_then_audit_from_config() {
    let dir = TempDir::new().unwrap();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/toy.json");
    let out = dir.path().join("train");
    let o = fairineq(&["train", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let preds = out.join("predictions.csv");
    let o = fairineq(&["audit", "--pred", preds.to_str().unwrap(), "--groups", "race,sex"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    let total = value_of(&s, "overall");
    assert!((value_of(&s, "between") + value_of(&s, "within") - total).abs() < 1e-12);
}

#[test]
fn verify_passes() {
    let o = fairineq(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("10 passed, 0 failed"));
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = fairineq(&["train", "--synthetic", "400", "--seed", "5", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(dir_bytes(&a), dir_bytes(&b));
    let preds = a.join("predictions.csv");
    let (c, d) = (dir.path().join("c"), dir.path().join("d"));
    for out in [&c, &d] {
        let o = fairineq(&[
            "sweep", "--pred", preds.to_str().unwrap(), "--groups", "race", "--seed", "9",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(dir_bytes(&c), dir_bytes(&d));
}

#[test]
fn seed_changes_synthetic_split() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, seed) in [(&a, "1"), (&b, "2")] {
        assert!(fairineq(&["train", "--synthetic", "200", "--seed", seed, "--out", out.to_str().unwrap()]).status.success());
    }
    assert_ne!(fs::read(a.join("predictions.csv")).unwrap(), fs::read(b.join("predictions.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(fairineq(&["bogus"]).status.code(), Some(2));
    assert_eq!(fairineq(&["audit"]).status.code(), Some(2));
    let c1 = fig1_file(dir.path(), "c1.csv", &FIG1_C1);
    let c1 = c1.to_str().unwrap();
    assert_eq!(fairineq(&["audit", "--pred", c1, "--notion", "nonsense"]).status.code(), Some(2));
    assert_eq!(fairineq(&["sweep", "--pred", c1, "--taus", "1:0:x"]).status.code(), Some(2));
    assert_eq!(fairineq(&["constrain", "--synthetic", "100", "--factors", "2"]).status.code(), Some(2));
    assert_eq!(fairineq(&["audit", "--pred", "/nonexistent.csv"]).status.code(), Some(3));
    assert_eq!(fairineq(&["audit", "--pred", c1, "--groups", "missing"]).status.code(), Some(3));
    // equal-fpr excludes positives, so an all-positive file has no benefits left
    let zero = write(dir.path(), "z.csv", "id,y_true,y_pred,score,group\na,1,1,,x\nb,1,1,,y\n");
    assert_eq!(
        fairineq(&["audit", "--pred", zero.to_str().unwrap(), "--notion", "equal-fpr"]).status.code(),
        Some(4)
    );
}

#[test]
fn failed_run_leaves_no_outputs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("never");
    let bad = write(dir.path(), "b.csv", "id,benefit\na,1\nb,-1\n");
    let o = fairineq(&["index", "--input", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}
