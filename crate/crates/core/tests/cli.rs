use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn mlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlie"))
        .args(args)
        .env_remove("MLIE_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Value of a `key   value` line in a text report.
fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).map(|rest| rest.trim().to_string()))
        .unwrap_or_else(|| panic!("no `{key}` line in:\n{report}"))
}

fn export(dir: &TempDir, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(file);
    let mut full = vec!["catalog"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = mlie(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

fn write(dir: &TempDir, file: &str, text: &str) -> PathBuf {
    let path = dir.path().join(file);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn catalog_list_has_fourteen_names() {
    let o = mlie(&["catalog", "--list"]);
    assert_eq!(code(&o), 0);
    let mut names: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    names.dedup();
    assert_eq!(names.len(), 14, "{names:?}");
}

#[test]
fn l32_export_is_flat() {
    let dir = TempDir::new().unwrap();
    let f = export(&dir, "l32.json", &["L3_2", "m32", "alpha=1"]);
    let o = mlie(&["ricci", p(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "verdict"), "Flat");
}

#[test]
fn l56_export_is_ricci_flat() {
    let dir = TempDir::new().unwrap();
    let f = export(
        &dir,
        "l56.json",
        &["L5_6", "m56", "mu=1", "x=1", "y=0", "a=0", "b=0", "eps=1"],
    );
    let o = mlie(&["ricci", p(&f)]);
    assert_eq!(code(&o), 0);
    let verdict = field(&stdout(&o), "verdict");
    assert!(verdict == "RicciFlat" || verdict == "Flat", "{verdict}");
}

#[test]
fn constraint_violation_exits_2() {
    let o = mlie(&["catalog", "L3_2", "m32", "alpha=0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("alpha"));
}

#[test]
fn unknown_name_exits_2() {
    assert_eq!(code(&mlie(&["catalog", "L9_9"])), 2);
    assert_eq!(code(&mlie(&["catalog", "L3_2", "m32", "beta=1"])), 2);
}

#[test]
fn ex8_is_einstein_with_nondegenerate_ideals() {
    let dir = TempDir::new().unwrap();
    let f = export(&dir, "ex8.json", &["EX8"]);
    let o = mlie(&["ricci", p(&f)]);
    let report = stdout(&o);
    assert_eq!(field(&report, "verdict"), "Einstein");
    let lambda: f64 = field(&report, "lambda").parse().unwrap();
    assert!((lambda - 0.5).abs() < 1e-8, "{lambda}");

    let o = mlie(&["classify", p(&f)]);
    let report = stdout(&o);
    assert!(field(&report, "center").contains("EuclideanNondegenerate"), "{report}");
    assert!(
        field(&report, "derived ideal").contains("LorentzianNondegenerate"),
        "{report}"
    );
}

#[test]
fn ex6_decompose_is_not_applicable() {
    let dir = TempDir::new().unwrap();
    let f = export(&dir, "ex6.json", &["EX6"]);
    let o = mlie(&["decompose", p(&f)]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn abelian_file() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "ab.json",
        r#"{"dim": 3, "brackets": [], "metric": [[-1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let o = mlie(&["ricci", p(&f)]);
    let report = stdout(&o);
    assert_eq!(field(&report, "verdict"), "Flat");
    assert_eq!(field(&report, "lambda").parse::<f64>().unwrap(), 0.0);

    let o = mlie(&["classify", p(&f), "--subspace", "center"]);
    assert!(field(&stdout(&o), "center").starts_with("dim 3"), "{}", stdout(&o));
}

#[test]
fn ricci_without_metric_exits_2() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "nometric.json",
        r#"{"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1}}]}"#,
    );
    assert_eq!(code(&mlie(&["ricci", p(&f)])), 2);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.json",
        "{\"dim\": 3,\n\"brackets\": [\n{\"i\": 1, \"j\": 2, \"coeffs\": {\"7\": 1}}]}",
    );
    let o = mlie(&["ricci", p(&f)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let f = write(&dir, "syntax.json", "{\"dim\": 3,\n\"brackets\": [,]}");
    let o = mlie(&["ricci", p(&f)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn l32_derivation_with_trace_two() {
    let dir = TempDir::new().unwrap();
    let f = export(&dir, "l32.json", &["L3_2"]);
    let o = mlie(&["derivations", p(&f)]);
    assert_eq!(code(&o), 0);
    let report = stdout(&o);
    assert!(report.contains("diag(1, 0, 1), trace 2"), "{report}");
}

#[test]
fn double_extension_of_four_dimensional_data_is_ricci_flat() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "ext.json",
        r#"{"v_dim": 2, "K": [[0, -1], [1, 0]], "D": [[0, 1], [0, 0]], "mu": 0, "b": [0.5, -2]}"#,
    );
    let out = dir.path().join("g.json");
    let o = mlie(&["double-extend", p(&f), "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = mlie(&["ricci", p(&out)]);
    let report = stdout(&o);
    assert_eq!(field(&report, "dim"), "4");
    assert_eq!(field(&report, "signature"), "(1,3,0)");
    let verdict = field(&report, "verdict");
    assert!(verdict == "RicciFlat" || verdict == "Flat", "{verdict}");
}

#[test]
fn zero_extension_data_gives_abelian_algebra() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "zero.json",
        r#"{"v_dim": 2, "K": [[0, 0], [0, 0]], "D": [[0, 0], [0, 0]], "mu": 0, "b": [0, 0]}"#,
    );
    let o = mlie(&["double-extend", p(&f)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["brackets"].as_array().unwrap().len(), 0);
}

#[test]
fn non_lie_extension_data_exits_2() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.json",
        r#"{"v_dim": 2, "K": [[0, -1], [1, 0]], "D": [[1, 0], [0, 0]], "mu": 0, "b": [0, 0]}"#,
    );
    assert_eq!(code(&mlie(&["double-extend", p(&f)])), 2);
}

#[test]
fn decompose_then_extend_round_trip() {
    let dir = TempDir::new().unwrap();
    let f = export(&dir, "l56.json", &["L5_6", "m56", "mu=1", "x=1", "eps=-1"]);
    let ext = dir.path().join("ext.json");
    let o = mlie(&["decompose", p(&f), "-o", p(&ext)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let back = dir.path().join("back.json");
    assert_eq!(code(&mlie(&["double-extend", p(&ext), "-o", p(&back)])), 0);
    let verdict = field(&stdout(&mlie(&["ricci", p(&back)])), "verdict");
    assert!(verdict == "RicciFlat" || verdict == "Flat", "{verdict}");
}

#[test]
fn verify_only_filters_and_tight_tolerance_fails() {
    let o = mlie(&["verify-paper", "--only", "flatness"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| l.starts_with(char::is_numeric) && !l.contains("checks,"))
        .collect();
    assert!(!rows.is_empty());
    assert!(
        rows.iter().all(|l| l.split_whitespace().nth(1) == Some("flatness")),
        "{rows:?}"
    );

    let o = mlie(&["--tol", "1e-15", "verify-paper", "--only", "routes"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));

    assert_eq!(code(&mlie(&["verify-paper", "--only", "nonsense"])), 2);
}

#[test]
fn tolerance_env_fallback() {
    let o = Command::new(env!("CARGO_BIN_EXE_mlie"))
        .args(["verify-paper", "--only", "routes"])
        .env("MLIE_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn search_is_deterministic() {
    let args = [
        "search",
        "--catalog",
        "L3_2",
        "--restarts",
        "2",
        "--max-iters",
        "300",
        "--seed",
        "5",
    ];
    let a = mlie(&args);
    let b = mlie(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_writes_metric_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("found.json");
    let o = mlie(&["search", "--catalog", "L3_2", "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "converged"), "true");
    // Converged means Ricci-flat at ten times the residual threshold.
    let verdict = field(&stdout(&mlie(&["--tol", "1e-5", "ricci", p(&out)])), "verdict");
    assert!(verdict == "RicciFlat" || verdict == "Flat", "{verdict}");
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(code(&mlie(&["ricci"])), 2);
    assert_eq!(code(&mlie(&["--tol", "-1", "catalog", "--list"])), 2);
    assert_eq!(code(&mlie(&["search", "--catalog", "L3_2", "--minus", "9"])), 2);
}
