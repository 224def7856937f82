use std::path::PathBuf;
use std::process::{Command, Output};

fn algpat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algpat")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a json report")
}

#[test]
fn sound_pattern_exits_zero() {
    let out = algpat(&["sound", "fin_star:k=3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["tool"], "algpat");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "Holds"));
}

#[test]
fn failing_check_exits_one_with_a_witness() {
    let out = algpat(&["extendable", "fin_star:k=2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let row = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "extendable").unwrap();
    assert_eq!(row["status"], "Fails");
    assert!(!row["witness"].as_array().unwrap().is_empty());
}

#[test]
fn non_sound_document_fails() {
    let out = algpat(&["sound", &data("non_sound.toml")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_table_is_an_input_error() {
    let out = algpat(&["validate", &data("broken_table.toml")]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("pattern.compose[0]"), "{err}");
}

#[test]
fn unknown_fixture_and_usage_errors_exit_three() {
    assert_eq!(algpat(&["sound", "no_such_family:k=1"]).status.code(), Some(3));
    assert_eq!(algpat(&["sound"]).status.code(), Some(3));
    assert_eq!(algpat(&["--help"]).status.code(), Some(0));
}

#[test]
fn explicit_segal_diagram_holds() {
    let out = algpat(&["segal", &data("segal_pair.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["relative-segal", "delta_op:n=2,m=2,flavor=natural", "--seed", "11", "--samples", "6"];
    let a = algpat(&args);
    let b = algpat(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = algpat(&["relative-segal", "delta_op:n=2,m=2,flavor=natural", "--seed", "12", "--samples", "6"]);
    assert_ne!(report(&a)["input_digest"], report(&other)["input_digest"]);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("algpat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = algpat(&["validate", "fin_star:k=2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"command\""));
    let bad = algpat(&["validate", "fin_star:k=2", "-o", dir.join("missing/r.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(4));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_format_lists_rows() {
    let out = algpat(&["homotopy", "circle", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.lines().any(|l| l.starts_with("Fails") && l.contains("contractible")), "{s}");
}
