use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn garside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_garside"))
        .args(args)
        .output()
        .expect("run garside")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn a2_path() -> String {
    format!("{}/../../germs/a2.germ", env!("CARGO_MANIFEST_DIR"))
}

fn counterexample_path() -> String {
    format!("{}/../../germs/counterexample.germ", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn check_passes_on_the_corpus() {
    for path in [a2_path(), counterexample_path()] {
        let out = garside(&["check", &path, "--g4", "search=6"]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("result: pass"));
    }
}

#[test]
fn check_reports_g4_mode() {
    let out = garside(&["check", &a2_path()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).to_lowercase().contains("assumed"));
}

#[test]
fn check_rejects_malformed_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{{ not json").unwrap();
    let out = garside(&["check", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_fails_on_axiom_violation() {
    // x*y = x is absorbing: the divisibility preorder has a cycle
    let text = r#"{
  "objects": ["*"],
  "elements": [
    {"name": "1", "source": "*", "target": "*", "identity": true},
    {"name": "x", "source": "*", "target": "*"},
    {"name": "y", "source": "*", "target": "*"}
  ],
  "products": [["x", "y", "x"], ["y", "y", "y"]]
}"#;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{text}").unwrap();
    let out = garside(&["check", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("result: fail"));
}

#[test]
fn nf_examples() {
    let out = garside(&["nf", &a2_path(), "a b a"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "[aba]\n");
    let out = garside(&["nf", &a2_path(), "a a b"]);
    assert_eq!(stdout(&out), "[a, ab]\n");
    let out = garside(&["nf", &a2_path(), "1"]);
    assert_eq!(stdout(&out), "[]\n");
}

#[test]
fn nf_rejects_unknown_letters() {
    let out = garside(&["nf", &a2_path(), "a z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lcm_and_gcd_examples() {
    let out = garside(&["lcm", &a2_path(), "a", "b"]);
    assert_eq!(stdout(&out), "[aba]\n");
    let out = garside(&["gcd", &a2_path(), "a b", "a b a"]);
    assert_eq!(stdout(&out), "[ab]\n");
    let out = garside(&["lcm", &counterexample_path(), "a", "b"]);
    assert_eq!(stdout(&out), "[c]\n");
    let out = garside(&["lcm", &counterexample_path(), "c u", "c v"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "no common multiple\n");
}

#[test]
fn atoms_listing() {
    let out = garside(&["atoms", &a2_path()]);
    assert_eq!(stdout(&out), "a\nb\n");
}

#[test]
fn coxeter_presets() {
    let out = garside(&["coxeter", "A2"]);
    assert_eq!(stdout(&out), "elements=6 objects=1 truncated=false\n");
    let out = garside(&["coxeter", "Atilde1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = garside(&["coxeter", "Atilde1", "--max-length", "4"]);
    assert_eq!(stdout(&out), "elements=9 objects=1 truncated=true\n");
}

#[test]
fn coxeter_out_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a3.germ");
    let out = garside(&["coxeter", "A3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let file = garside_core::germfile::GermFile::from_str(&text).unwrap();
    assert_eq!(file.to_string_pretty(), text);
    assert_eq!(file.build().unwrap().len(), 24);
}

#[test]
fn corpus_files_are_canonical() {
    for path in [a2_path(), counterexample_path()] {
        let text = std::fs::read_to_string(Path::new(&path)).unwrap();
        let file = garside_core::germfile::GermFile::from_str(&text).unwrap();
        assert_eq!(file.to_string_pretty(), text, "{path} round-trips");
    }
}

#[test]
fn ribbon_summary() {
    let out = garside(&["ribbon", "A3", "s1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("objects: {s1} {s2} {s3}\n"), "{text}");
    let out = garside(&["ribbon", "A3", "s9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conj_examples() {
    let out = garside(&["conj", &a2_path(), "a b a", "--family", "a"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "nf: [aba]\ntarget: [b]\n");
    let out = garside(&["conj", &a2_path(), "b", "--family", "a"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eposet_summary() {
    let out = garside(&["eposet", &a2_path(), "a b a", "--h1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "vertices=7 connected=true h1=0\n");
    let out = garside(&["eposet", &a2_path(), "a a b"]);
    assert_eq!(stdout(&out), "vertices=2 covers=1 connected=true\n");
}

#[test]
fn eposet_export_lists_vertices_and_edges() {
    let out = garside(&["eposet", &a2_path(), "a a b", "--export"]);
    let text = stdout(&out);
    assert!(text.contains("a a b\n"), "{text}");
    assert!(text.contains("a ab\n"), "{text}");
}

#[test]
fn fixed_subgerm_of_the_flip() {
    let out = garside(&["fixed", &a2_path(), "a:b,b:a,ab:ba,ba:ab"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.starts_with("fixed: 1 aba\n"), "{text}");
    assert!(text.contains("atoms: aba\n"), "{text}");
    // a non-automorphism map is a semantic failure
    let out = garside(&["fixed", &a2_path(), "a:ab,ab:a"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn determinism() {
    let a = garside(&["eposet", &a2_path(), "a b a b", "--h1", "--export"]);
    let b = garside(&["eposet", &a2_path(), "a b a b", "--h1", "--export"]);
    assert_eq!(a.stdout, b.stdout);
}
