use std::path::Path;
use std::process::{Command, Output};

use descartes_core::constructors::{from_roots, Method, WitnessClaim};
use descartes_core::exactpoly::parse_rational;
use descartes_core::{Rational, SignPattern};

fn descartes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descartes"))
        .args(args)
        .env_remove("DESCARTES_JOBS")
        .env_remove("DESCARTES_BUDGET_RANDOM")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn p3_claim(pos: u32, neg: u32) -> WitnessClaim {
    let roots = [q("0.6056"), q("2.6105"), q("2.6696")];
    let quads = [(q("0.5493"), q("0.3305")), (q("5.3465"), q("7.1672"))];
    WitnessClaim {
        coefficients: from_roots(&roots, &quads).coeffs().to_vec(),
        pattern: SignPattern::parse("(1,+,-,+,+,+,+,-)").unwrap(),
        pos,
        neg,
        method: Method::Fixture,
        trace: Vec::new(),
        seed: None,
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) {
    std::fs::write(path, serde_json::to_string(value).unwrap()).unwrap();
}

#[test]
fn realize_exit_codes() {
    let o = descartes(&["realize", "--pattern", "+----+", "--pos", "0", "--neg", "3"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("three_block_kappa"));

    let o = descartes(&[
        "realize",
        "--pattern",
        "+---+++",
        "--pos",
        "0",
        "--neg",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("REALIZABLE"));

    let o = descartes(&["realize", "--pattern", "+++", "--pos", "1", "--neg", "0"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("INADMISSIBLE"));

    assert_eq!(
        code(&descartes(&[
            "realize",
            "--pattern",
            "+x+",
            "--pos",
            "0",
            "--neg",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&descartes(&[
            "realize",
            "--pattern",
            "-++",
            "--pos",
            "0",
            "--neg",
            "0"
        ])),
        2
    );
    let o = descartes(&[
        "realize",
        "--pattern",
        "+++",
        "--degree",
        "3",
        "--pos",
        "0",
        "--neg",
        "0",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn realize_accepts_both_pattern_syntaxes() {
    let compact = descartes(&[
        "realize",
        "--pattern",
        "+---++",
        "--pos",
        "2",
        "--neg",
        "1",
        "--format",
        "json",
    ]);
    let commas = descartes(&[
        "realize",
        "--pattern",
        "+,-,-,-,+,+",
        "--pos",
        "2",
        "--neg",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&compact), 0);
    assert_eq!(compact.stdout, commas.stdout);
}

#[test]
fn printed_degree_five_entry_has_a_witness() {
    let o = descartes(&[
        "realize",
        "--pattern",
        "+---++",
        "--pos",
        "0",
        "--neg",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "realizable");
    let again = descartes(&[
        "realize",
        "--pattern",
        "+---++",
        "--pos",
        "0",
        "--neg",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn realize_reports_unknown_when_budgets_run_out() {
    let o = descartes(&[
        "realize",
        "--pattern",
        "(1,+,-,+,-,-,-,+,+)",
        "--pos",
        "4",
        "--neg",
        "0",
        "--budget-random",
        "200",
        "--budget-dfs",
        "1000",
    ]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).starts_with("UNKNOWN"));
}

#[test]
fn check_witness_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("p3.json");
    write_json(&good, &p3_claim(3, 0));
    assert_eq!(code(&descartes(&["check", good.to_str().unwrap()])), 0);

    let wrong = dir.path().join("p3_wrong.json");
    write_json(&wrong, &p3_claim(1, 0));
    assert_eq!(code(&descartes(&["check", wrong.to_str().unwrap()])), 1);

    let text = std::fs::read_to_string(&good).unwrap();
    let truncated = dir.path().join("truncated.json");
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&descartes(&["check", truncated.to_str().unwrap()])), 2);
    assert_eq!(code(&descartes(&["check", "/nonexistent/witness.json"])), 2);
}

#[test]
fn realize_output_checks_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = descartes(&[
        "realize",
        "--pattern",
        "+--+-++",
        "--pos",
        "2",
        "--neg",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let path = dir.path().join("w.json");
    std::fs::write(&path, &o.stdout).unwrap();
    assert_eq!(code(&descartes(&["check", path.to_str().unwrap()])), 0);
}

#[test]
fn count_figures() {
    let o = descartes(&["count", "--degree", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1472 raw"));
    assert!(stdout(&descartes(&["count", "--degree", "8"])).contains("3648 raw"));
    let o = descartes(&["count", "--degree", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["raw"], 12);
    assert_eq!(code(&descartes(&["count", "--degree", "0"])), 2);
}

#[test]
fn classify_verify_and_report_degree_six() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("d6.jsonl");
    let s = store.to_str().unwrap();

    assert_eq!(
        code(&descartes(&["classify", "--degree", "0", "--out", s])),
        2
    );
    assert!(!store.exists());

    let o = descartes(&[
        "classify", "--degree", "6", "--out", s, "--jobs", "2", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["non_realizable"], 4);
    assert_eq!(v["unknown"], 0);

    // An existing store is only touched with --resume, and then nothing is left to do.
    assert_eq!(
        code(&descartes(&["classify", "--degree", "6", "--out", s])),
        2
    );
    let before = std::fs::read(&store).unwrap();
    let o = descartes(&[
        "classify", "--degree", "6", "--out", s, "--resume", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["processed"], 0);
    assert_eq!(std::fs::read(&store).unwrap(), before);

    let o = descartes(&["verify-paper", "--degree", "6", "--store", s]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("MATCH"));

    let o = descartes(&["report", "--store", s]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("degree 6:"));

    // Drop one record: the store is now incomplete.
    let text = String::from_utf8(before).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(5);
    std::fs::write(&store, lines.join("\n") + "\n").unwrap();
    assert_eq!(
        code(&descartes(&["verify-paper", "--degree", "6", "--store", s])),
        6
    );
}

#[test]
fn locked_store_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("d3.jsonl");
    std::fs::write(dir.path().join("d3.jsonl.lock"), "1").unwrap();
    let o = descartes(&[
        "classify",
        "--degree",
        "3",
        "--out",
        store.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("locked"));
}

#[test]
fn empty_store_report() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("empty.jsonl");
    std::fs::write(
        &store,
        "{\"format\":\"descartes-classification\",\"version\":1}\n",
    )
    .unwrap();
    let o = descartes(&["report", "--store", store.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "empty store\n");
}

#[test]
fn jobs_from_environment_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("d2.jsonl");
    let o = Command::new(env!("CARGO_BIN_EXE_descartes"))
        .args([
            "classify",
            "--degree",
            "2",
            "--out",
            store.to_str().unwrap(),
        ])
        .env("DESCARTES_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
