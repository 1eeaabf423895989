use std::path::PathBuf;
use std::process::Command as Proc;

use tatesmith_cli::{load_document, run, run_texts, Command, Flags};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_tatesmith"))
}

#[test]
fn reports_are_deterministic() {
    for (cmd, file) in [(Command::Tate, "norm_quotient.json"), (Command::Smith, "flagship.json"), (Command::SimpSmith, "suspension.json")] {
        let a = run(cmd, &[data(file)], &Flags::default()).unwrap();
        let b = run(cmd, &[data(file)], &Flags::default()).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json(), "{file}");
    }
}

#[test]
fn tate_table_ignores_the_window() {
    for file in ["trivial.json", "regular.json", "norm_quotient.json", "mod_p.json"] {
        let base = run(Command::Tate, &[data(file)], &Flags::default()).unwrap();
        for w in [-3, 1, 4] {
            let r = run(Command::Tate, &[data(file)], &Flags { window: Some(w), ..Flags::default() }).unwrap();
            assert_eq!(r.tables, base.tables, "{file} at window {w}");
        }
    }
}

#[test]
fn point_values_through_the_front_end() {
    let want = [("trivial.json", (1, 0)), ("regular.json", (0, 0)), ("norm_quotient.json", (0, 1)), ("mod_p.json", (1, 1))];
    for (file, (t0, t1)) in want {
        let r = run(Command::Tate, &[data(file)], &Flags::default()).unwrap();
        assert_eq!(r.tables["tate"]["t0"], t0, "{file}");
        assert_eq!(r.tables["tate"]["t1"], t1, "{file}");
    }
}

#[test]
fn data_documents_round_trip() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let doc = load_document(&std::fs::read_to_string(&path).unwrap(), None).unwrap();
        let again = load_document(&doc.to_json(), None).unwrap();
        assert_eq!(doc.to_json(), again.to_json(), "{}", path.display());
    }
}

#[test]
fn prime_override_changes_the_digest() {
    let a = run(Command::Tate, &[data("trivial.json")], &Flags::default()).unwrap();
    let b = run(Command::Tate, &[data("trivial.json")], &Flags { p: Some(5), ..Flags::default() }).unwrap();
    assert_ne!(a.input_digest, b.input_digest);
    assert_eq!(a.tables, b.tables);
}

#[test]
fn arity_is_enforced() {
    let t = std::fs::read_to_string(data("trivial.json")).unwrap();
    let e = run_texts(Command::Stablehom, &[t], &Flags::default()).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn binary_exit_codes() {
    let ok = bin().args(["tate", "--json"]).arg(data("trivial.json")).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["command"], "tate");

    let dir = std::env::temp_dir().join(format!("tatesmith-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"type": "pi_complex", "p": 4, "terms": {}, "diffs": {}}"#).unwrap();
    let out = bin().arg("tate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let weights = dir.join("weights.json");
    std::fs::write(&weights, r#"{"type": "gr_weights", "p": 3, "entries": [{"weight": 3, "mult": 1, "pairing": 1}]}"#).unwrap();
    let out = bin().arg("demo-gr-weights").arg(&weights).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();

    let usage = bin().arg("no-such-command").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn weights_demo_from_file() {
    let r = run(Command::DemoGrWeights, &[data("weights.json")], &Flags::default()).unwrap();
    assert_eq!(r.verdicts["kept"], "1");
    assert_eq!(r.verdicts["dropped"], "1");
}
