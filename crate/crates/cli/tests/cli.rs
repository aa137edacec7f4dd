use std::path::{Path, PathBuf};
use tanglekit_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["tanglekit".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const K4: &str = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
/// K4 with 0-1 replaced by the path 0-4-5-1.
const SUBDIV_K4: &str = "0 4\n4 5\n5 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tangles_lists_the_k4_tangle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.edges", K4);
    let (code, out, _) = run(&["tangles", "--k", "3", s(&g)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 tangle(s) of order 3"));
    let (code, out, _) = run(&["tangles", "--k", "3", "--json", s(&g)]);
    assert_eq!(code, 0);
    let js: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(js.as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["tangles", "missing.edges"]).0, 2);
    assert_eq!(run(&["tangles", "--k", "2", "/nonexistent/x.edges"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.edges", "0 x\n");
    assert_eq!(run(&["tangles", "--k", "2", s(&g)]).0, 2);
    let g = write(dir.path(), "k4.edges", K4);
    assert_eq!(run(&["reduce", s(&g), "--k", "3", "--rules", "nope"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn verify_reports_violations_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.edges", K4);
    let (_, out, _) = run(&["tangles", "--k", "3", s(&g)]);
    let tangle_text = out.split_once("\n\n").unwrap().1;
    let t = write(dir.path(), "t.txt", tangle_text);
    let (code, out, _) = run(&["verify", s(&g), s(&t)]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("tangle true"));
    let (code, _, _) = run(&["verify", s(&g), s(&t), "--checker", "naive"]);
    assert_eq!(code, 0);
    // Turn (∅, V) around.
    let flipped = tangle_text.replace("[] [0, 1, 2, 3]", "[0, 1, 2, 3] []");
    let t2 = write(dir.path(), "t2.txt", &flipped);
    let (code, out, _) = run(&["verify", s(&g), s(&t2)]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("tangle false"));
}

#[test]
fn reduce_transfer_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "sk4.edges", SUBDIV_K4);
    let trace = dir.path().join("trace.txt");
    let (code, out, err) = run(&["reduce", s(&g), "--k", "3", "-o", s(&trace)]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.starts_with("2 steps"));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.matches("RULE suppress").count(), 2);

    let w = write(dir.path(), "w.txt", "0 1\n1 1\n2 1\n3 1\n");
    let (code, out, err) = run(&["transfer", s(&trace), s(&w)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("4 0\n") && out.contains("5 0\n"));

    let zero = write(dir.path(), "z.txt", "0 0\n");
    assert_eq!(run(&["transfer", s(&trace), s(&zero)]).0, 1);

    let (code, out, _) = run(&["witness", s(&trace)]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn induce_finds_sets_and_weights() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.edges", K4);
    let (code, out, _) = run(&["induce", s(&g), "--k", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("set [0, 1, 2]"), "{out}");
    assert!(out.contains("total 3"));
    let (code, _, _) = run(&["induce", s(&g), "--k", "3", "--max-size", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn p11_over_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let (code, out, _) = run(&["p11", "--k", "3", "--max-n", "5", "--summary", s(&summary)]);
    assert_eq!(code, 0, "{out}");
    let js: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(js["failures"], 0);
    assert!(js["tangles"].as_u64().unwrap() > 0);

    let stream = write(dir.path(), "g.g6", "C~\nnot graph6 !!\n");
    let (code, out, _) = run(&["p11", "--k", "3", "--stream", s(&stream)]);
    assert_eq!(code, 0);
    assert!(out.contains("malformed"));
}

#[test]
fn rc_synth_validate_extend() {
    let dir = tempfile::tempdir().unwrap();
    let (g, rc, t) = (dir.path().join("g.edges"), dir.path().join("rc.txt"), dir.path().join("t.txt"));
    let (code, _, err) = run(&[
        "rc", "synth", "--ell", "1", "--length", "18", "--graph-out", s(&g), "--rc-out", s(&rc), "--k", "1",
        "--tangle-out", s(&t),
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["rc", "validate", s(&g), s(&rc)]);
    assert_eq!(code, 0);
    assert!(out.contains("valid true"));
    let (code, out, err) = run(&["rc", "extend", s(&g), s(&rc), s(&t)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("edge "));

    // Drop a bag: the decomposition no longer covers the graph.
    let text = std::fs::read_to_string(&rc).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(2);
    let bad = write(dir.path(), "bad.txt", &lines.join("\n"));
    assert_eq!(run(&["rc", "validate", s(&g), s(&bad)]).0, 1);
}

#[test]
fn rc_extract_from_a_chain() {
    let dir = tempfile::tempdir().unwrap();
    let path: String = (0..9).map(|i| format!("{i} {}\n", i + 1)).collect();
    let g = write(dir.path(), "p10.edges", &path);
    let (code, out, err) = run(&["rc", "extract", s(&g), "--k", "2", "--window", "6"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("RAINBOW-BAGS"));
    assert_eq!(run(&["rc", "extract", s(&g), "--k", "2", "--chain", "tree-decomposition"]).0, 2);
}
