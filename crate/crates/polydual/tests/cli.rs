use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn polydual(args: &[&str], budget_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polydual"));
    cmd.args(args).env_remove("POLYDUAL_BUDGET");
    if let Some(b) = budget_env {
        cmd.env("POLYDUAL_BUDGET", b);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &Path, name: &str, args: &[&str]) -> (PathBuf, String) {
    let path = dir.join(name);
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", s(&path)]);
    let out = polydual(&full, None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    (path, stdout(&out).trim().to_string())
}

#[test]
fn construct_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (pent, f) = build(d, "p5.poly", &["ngon", "5"]);
    assert_eq!(f, "f = (5, 5)");
    assert_eq!(std::fs::read_to_string(&pent).unwrap().lines().count(), 6);
    let (seg, _) = build(d, "c1.poly", &["cube", "1"]);
    assert_eq!(build(d, "q.poly", &["product", s(&pent), s(&seg)]).1, "f = (10, 15, 7)");
    let (s3, _) = build(d, "s3.poly", &["simplex", "3"]);
    assert_eq!(build(d, "t.poly", &["truncate", s(&s3), "1/3"]).1, "f = (12, 18, 8)");
    assert_eq!(build(d, "x.poly", &["crosspolytope", "3"]).1, "f = (6, 12, 8)");
    assert_eq!(build(d, "b.poly", &["bipyramid", s(&pent)]).1, "f = (7, 15, 10)");
    let (c3, _) = build(d, "c3.poly", &["cube", "3"]);
    assert_eq!(build(d, "pc.poly", &["perturb", s(&c3), "100", "3"]).1, "f = (8, 12, 6)");
}

#[test]
fn construct_to_stdout() {
    let out = polydual(&["construct", "ngon", "4"], None);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("POLY 2 4\n"));
    assert_eq!(String::from_utf8(out.stderr).unwrap().trim(), "f = (4, 4)");
}

#[test]
fn construct_rejects_bad_input() {
    assert_eq!(code(&polydual(&["construct", "dodecahedron", "1"], None)), 2);
    assert_eq!(code(&polydual(&["construct", "ngon", "2"], None)), 2);
    assert_eq!(code(&polydual(&["construct", "ngon"], None)), 2);
    assert_eq!(code(&polydual(&["construct", "cube", "x"], None)), 2);
    assert_eq!(code(&polydual(&["construct", "prism", "/nonexistent.poly"], None)), 2);
}

#[test]
fn find_dual_subset_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c3, _) = build(d, "c3.poly", &["cube", "3"]);
    let out = polydual(&["find-dual-subset", s(&c3)], None);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("mode: witness"));

    let (pent, _) = build(d, "p5.poly", &["ngon", "5"]);
    let (pr, _) = build(d, "pr.poly", &["prism", s(&pent)]);
    let out = polydual(&["find-dual-subset", s(&pr), "--no-prune"], None);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("examined: 120"));

    assert_eq!(code(&polydual(&["find-dual-subset", s(&pr), "--budget", "119"], None)), 4);
    assert_eq!(code(&polydual(&["find-dual-subset", s(&pr)], Some("119"))), 4);
    assert_eq!(code(&polydual(&["find-dual-subset", s(&pr), "--budget", "120"], Some("1"))), 3);
    assert_eq!(code(&polydual(&["find-dual-subset", s(&pr)], Some("lots"))), 2);
    assert_eq!(code(&polydual(&["find-dual-subset", s(&pr), "--jobs", "0"], None)), 2);

    let bad = d.join("bad.poly");
    std::fs::write(&bad, "POLY 2 3\n0 0\n1 x\n0 1\n").unwrap();
    assert_eq!(code(&polydual(&["find-dual-subset", s(&bad)], None)), 2);
}

#[test]
fn check_equiv_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c3, _) = build(d, "c3.poly", &["cube", "3"]);
    let (x3, _) = build(d, "x3.poly", &["crosspolytope", "3"]);
    assert_eq!(code(&polydual(&["check-equiv", s(&c3), s(&x3)], None)), 3);

    let text = std::fs::read_to_string(&c3).unwrap();
    let mut lines: Vec<&str> = text.lines().skip(1).collect();
    lines.reverse();
    lines.swap(1, 4);
    let shuffled = d.join("shuffled.poly");
    std::fs::write(&shuffled, format!("POLY 3 8\n{}\n", lines.join("\n"))).unwrap();
    let out = polydual(&["check-equiv", s(&c3), s(&shuffled)], None);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("vertex map: ("));

    let (pent, _) = build(d, "p5.poly", &["ngon", "5"]);
    let (pr, _) = build(d, "pr.poly", &["prism", s(&pent)]);
    let (dual, _) = build(d, "dual.poly", &["dual", s(&pr)]);
    let (bp, _) = build(d, "bp.poly", &["bipyramid", s(&pent)]);
    assert_eq!(code(&polydual(&["check-equiv", s(&dual), s(&bp)], None)), 0);
    assert_eq!(code(&polydual(&["check-equiv", s(&dual), "/nonexistent.poly"], None)), 2);
}

#[test]
fn verify_theorem_outcomes() {
    let out = polydual(&["verify-theorem", "--ngon", "4", "--cube-dim", "1"], None);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("hypothesis_ok: false"));
    assert!(text.contains("theorem makes no claim"));

    let out = polydual(&["verify-theorem", "--ngon", "6", "--cube-dim", "1"], None);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("prediction confirmed: true"));

    assert_eq!(code(&polydual(&["verify-theorem", "--ngon", "2", "--cube-dim", "1"], None)), 2);
    assert_eq!(code(&polydual(&["verify-theorem", "--ngon", "5", "--cube-dim", "0"], None)), 2);
}

#[test]
fn certificates_recheck_and_detect_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c3, _) = build(d, "c3.poly", &["cube", "3"]);
    let cert = d.join("c3.json");
    assert_eq!(code(&polydual(&["find-dual-subset", s(&c3), "--out", s(&cert)], None)), 0);
    assert_eq!(code(&polydual(&["check-cert", s(&cert)], None)), 0);

    let text = std::fs::read_to_string(&cert).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["search"]["subset"][0] = serde_json::json!(7);
    let tampered = d.join("tampered.json");
    std::fs::write(&tampered, v.to_string()).unwrap();
    assert_eq!(code(&polydual(&["check-cert", s(&tampered)], None)), 3);

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["realization_hash"] = serde_json::json!("00");
    std::fs::write(&tampered, v.to_string()).unwrap();
    assert_eq!(code(&polydual(&["check-cert", s(&tampered)], None)), 2);

    std::fs::write(&tampered, "not json").unwrap();
    assert_eq!(code(&polydual(&["check-cert", s(&tampered)], None)), 2);

    let theorem = d.join("theorem.json");
    assert_eq!(code(&polydual(&["verify-theorem", "--ngon", "4", "--cube-dim", "1", "--out", s(&theorem)], None)), 3);
    assert_eq!(code(&polydual(&["check-cert", s(&theorem)], None)), 0);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&theorem).unwrap()).unwrap();
    v["theorem"]["bounds"]["bound"] = serde_json::json!(2);
    std::fs::write(&tampered, v.to_string()).unwrap();
    assert_eq!(code(&polydual(&["check-cert", s(&tampered)], None)), 3);
}

#[test]
fn realization_search_on_standard_cube() {
    let dir = tempfile::tempdir().unwrap();
    let (c3, _) = build(dir.path(), "c3.poly", &["cube", "3"]);
    let cert = dir.path().join("r.json");
    let out = polydual(&["realization-search", s(&c3), "--trials", "2", "--out", s(&cert)], None);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&polydual(&["check-cert", s(&cert)], None)), 0);
}
