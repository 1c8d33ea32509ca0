use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyp2mzv"))
        .args(args)
        .env_remove("HYP2MZV_FORMAT")
        .env_remove("HYP2MZV_PREC")
        .env_remove("HYP2MZV_DB")
        .env_remove("HYP2MZV_TABLE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyp2mzv-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/identities.jsonl")
}

#[test]
fn reduce_prints_closed_form() {
    let o = run(&["reduce", "binom(1; 1/(2n+1))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/2*pi");
}

#[test]
fn reduce_trace_lists_rules() {
    let o = run(&["reduce", "binom(1; 1/((2n+3)^2*(2n+5)))", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for rule in ["INIT-TERMS", "PF", "R1", "BASE"] {
        assert!(out.contains(rule), "{out}");
    }
}

#[test]
fn reduce_json() {
    let o = run(&["--format", "json", "reduce", "pfq(1/2,1/2;3/2;1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "1/2*pi");
}

#[test]
fn exit_codes_by_error_class() {
    // syntax
    assert_eq!(run(&["reduce", "pfq(1,1;"]).status.code(), Some(2));
    // divergent
    assert_eq!(run(&["reduce", "pfq(1,1;2;1)"]).status.code(), Some(3));
    // terminating
    assert_eq!(run(&["reduce", "pfq(-2,1;3;1)"]).status.code(), Some(3));
    // pole off the quarter lattice
    assert_eq!(run(&["reduce", "binom(1; 1/(3n+1)^2)"]).status.code(), Some(4));
    // unknown record
    let o = run(&["verify", "--id", "nonexistent"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UNKNOWN_ID"));
}

#[test]
fn json_errors_are_objects() {
    let o = run(&["--format", "json", "reduce", "pfq(1,1;2;1)"]);
    assert_eq!(o.status.code(), Some(3));
    let text = format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["error"], "DIVERGENT");
}

#[test]
fn eval_prints_digits() {
    let o = run(&["--prec", "30", "eval", "zeta(3)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1.20205690315959428539973816"), "{}", stdout(&o));
    let o = run(&["--prec", "30", "eval", "binom(0; 1/n^3; start=1)"]);
    assert!(stdout(&o).starts_with("1.20205690315959428539973816"), "{}", stdout(&o));
}

#[test]
fn verify_one_record() {
    let o = run(&["verify", "--id", "ex01"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_all_and_tampered_database() {
    let dir = scratch("verify");
    let db = dir.join("identities.jsonl");
    std::fs::copy(corpus_path(), &db).unwrap();
    let o = run(&["--db", db.to_str().unwrap(), "verify", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("26/26"), "{}", stdout(&o));

    let text = std::fs::read_to_string(&db).unwrap().replace("217/4*zeta(5)", "219/4*zeta(5)");
    std::fs::write(&db, text).unwrap();
    let o = run(&["--db", db.to_str().unwrap(), "verify", "--all"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("25/26"), "{}", stdout(&o));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_record_is_idempotent() {
    let dir = scratch("record");
    let db = dir.join("identities.jsonl");
    std::fs::copy(corpus_path(), &db).unwrap();
    let args = ["--db", db.to_str().unwrap(), "verify", "--id", "ex05", "--record"];
    assert_eq!(run(&args).status.code(), Some(0));
    let once = std::fs::read_to_string(&db).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"ex05\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&once), strip(&std::fs::read_to_string(&db).unwrap()));
    assert!(dir.join("atom_cache.jsonl").exists());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn fit_recovers_arcsine_square() {
    let o = run(&["fit", "binom(-1; 1/n^2; start=1)", "--weight", "2", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/2*pi^2");
}

#[test]
fn fit_reports_missing_relation() {
    let o = run(&["--prec", "30", "fit", "pfq(1/3,1;2;1/2)", "--weight", "1", "--level", "1"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fl_check_passes() {
    let o = run(&["fl-check", "--terms", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
