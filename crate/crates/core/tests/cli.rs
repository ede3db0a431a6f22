use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use apn_search::cli::{Manifest, Outcome};
use apn_search::vbf::{monomial_lut, FiniteField, Lut};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apn-search"))
        .arg("--dir")
        .arg(dir)
        .args(args)
        .env_remove("APN_CHECKPOINT_DIR")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_writes_versioned_classes() {
    let dir = tempfile::tempdir().unwrap();
    for (n, count) in [(6, 17), (7, 27)] {
        let o = run(dir.path(), &["classify", "--n", &n.to_string()]);
        assert_eq!(code(&o), 0);
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("n{n}/classes.json"))).unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["classes"].as_array().unwrap().len(), count);
    }
    assert_eq!(code(&run(dir.path(), &["classify", "--n", "13"])), 4);
    assert_eq!(code(&run(dir.path(), &["classify", "--n", "0"])), 4);
}

#[test]
fn prune_table_has_no_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["6", "7", "8"] {
        let o = run(dir.path(), &["prune", "--n", n, "--table1"]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("mismatches 0"), "{}", stdout(&o));
        assert!(!stdout(&o).contains("MISMATCH"));
    }
    let o = run(dir.path(), &["prune", "--n", "8", "--table1"]);
    assert!(stdout(&o).contains("pruned 15"));
    assert!(dir.path().join("n8/verdicts.json").exists());
}

#[test]
fn n4_search_is_empty_and_rerun_is_a_no_op() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["search", "--n", "4", "--class", "*"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let manifest = Manifest::new(dir.path().join("manifest.jsonl"));
    let first = manifest.entries().unwrap();
    assert!(!first.is_empty());
    assert!(first.iter().all(|e| match &e.outcome {
        Outcome::Exhausted { count } => *count == 0,
        Outcome::Pruned { .. } => true,
        _ => false,
    }));
    let o = run(dir.path(), &["search", "--n", "4", "--class", "*"]);
    assert_eq!(code(&o), 0);
    let second = manifest.entries().unwrap();
    // pruned classes are re-logged, searched ones are skipped
    assert!(second.iter().skip(first.len()).all(|e| matches!(e.outcome, Outcome::Pruned { .. })));
}

#[test]
fn search_streams_solutions_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["search", "--n", "5", "--class", "5", "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(!lines.is_empty());
    let class = dir.path().join("n5/class5");
    let stored = fs::read_to_string(class.join("solutions.txt")).unwrap();
    assert_eq!(stored.lines().count(), lines.len());
    for (i, l) in lines.iter().enumerate() {
        assert!(Lut::parse_hex_line(l, i + 1).unwrap().is_permutation());
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(class.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["exhausted"], true);
    assert_eq!(report["solution_count"], lines.len());
    let groups: serde_json::Value = serde_json::from_str(&fs::read_to_string(class.join("groups.json")).unwrap()).unwrap();
    for g in groups["groups"].as_array().unwrap() {
        assert_eq!(g["status"], "matches-fingerprint-of");
    }
    let o = run(dir.path(), &["report", "--n", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fingerprint group"));
}

#[test]
fn budget_expiry_checkpoints_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["search", "--n", "5", "--class", "4", "--jobs", "1", "--nodes", "20000", "--quiet"];
    let o = run(dir.path(), &args);
    assert_eq!(code(&o), 2);
    assert!(dir.path().join("checkpoints/n5-class4.ckpt").exists());
    let manifest = Manifest::new(dir.path().join("manifest.jsonl"));
    let last = manifest.entries().unwrap().pop().unwrap();
    assert!(matches!(last.outcome, Outcome::RunningCheckpointed { .. }));
    let mut rounds = 1;
    loop {
        let o = run(dir.path(), &args);
        rounds += 1;
        if code(&o) == 0 {
            break;
        }
        assert_eq!(code(&o), 2);
        assert!(rounds < 50);
    }
    let last = manifest.entries().unwrap().pop().unwrap();
    assert_eq!(last.outcome, Outcome::Exhausted { count: 0 });
    assert!(last.nodes_visited > 20_000);
    let o = run(dir.path(), &["search", "--n", "5", "--class", "4", "--force", "--quiet"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn random_mode_reports_budget_expiry() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["search", "--n", "7", "--class", "16", "--mode", "random", "--budget", "0.5", "--jobs", "2"],
    );
    assert_eq!(code(&o), 2);
    let last = Manifest::new(dir.path().join("manifest.jsonl")).entries().unwrap().pop().unwrap();
    assert!(matches!(last.outcome, Outcome::BudgetExpired { .. }));
    assert_eq!(code(&run(dir.path(), &["search", "--n", "7", "--class", "1", "--mode", "random"])), 4);
}

#[test]
fn verify_reports_each_check() {
    let dir = tempfile::tempdir().unwrap();
    let field = FiniteField::with_default_modulus(7).unwrap();
    let f = dir.path().join("x5.txt");
    fs::write(&f, monomial_lut(&field, 5).to_hex_line() + "\n").unwrap();
    let o = run(dir.path(), &["verify", f.to_str().unwrap(), "--n", "7", "--power", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["apn"], true);
    assert_eq!(v["self_equivalence"], true);
    assert_eq!(v["known_match"], "x^5 n=7");

    let id = dir.path().join("id.txt");
    fs::write(&id, Lut::identity(4).to_hex_line() + "\n").unwrap();
    let o = run(dir.path(), &["verify", id.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["apn"], false);
    assert_eq!(v["apn_witness"].as_array().unwrap().len(), 3);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, format!("{}\n0 1 2\n", Lut::identity(3).to_hex_line())).unwrap();
    let o = run(dir.path(), &["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn fingerprint_groups_monomials() {
    let dir = tempfile::tempdir().unwrap();
    let field = FiniteField::with_default_modulus(5).unwrap();
    let f = dir.path().join("m.txt");
    let text: String = [3u64, 5, 7].iter().map(|&d| monomial_lut(&field, d).to_hex_line() + "\n").collect();
    fs::write(&f, text).unwrap();
    let g = dir.path().join("groups.json");
    let o = run(dir.path(), &["fingerprint", f.to_str().unwrap(), "--groups", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(g).unwrap()).unwrap();
    assert_eq!(v["groups"].as_array().unwrap().len(), 2);
}
