use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.tm"))
}

fn harp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_on_the_immediate_halt() {
    let o = harp(&["demo", "-m", s(&fixture("halt_now"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("halt_time=0"), "{out}");
    assert!(out.contains("tiles=1 "), "{out}");
    assert!(out.contains("check=OK"), "{out}");
    assert!(out.contains("equivalence=witnessed"), "{out}");
}

#[test]
fn demo_on_a_looping_machine() {
    let o = harp(&["demo", "-m", s(&fixture("loop_stay"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("NONE radius=3"), "{out}");
    assert!(out.contains("equivalence=witnessed within bounds"), "{out}");
}

#[test]
fn files_flow_through_the_pipeline() {
    let dir = TempDir::new().unwrap();
    let ts = dir.path().join("inc.ts");
    let cfg = dir.path().join("inc.cfg");
    let svg = dir.path().join("inc.svg");
    let m = fixture("incrementer");
    assert_eq!(harp(&["compile", "-m", s(&m), "-o", s(&ts)]).status.code(), Some(0));
    let o = harp(&["harp", "-m", s(&m), "--max-steps", "50", "-o", s(&cfg), "-t", s(&ts)]);
    assert_eq!(o.status.code(), Some(0));
    let o = harp(&["check", "-c", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o), "OK tiles=33\n");
    let o = harp(&["check", "-t", s(&ts), "-c", s(&cfg), "--radius", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = harp(&["render", "-c", s(&cfg), "--depth", "4", "-o", s(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("data-role=").count(), 33);
}

#[test]
fn corrupted_configuration_fails_the_check() {
    let dir = TempDir::new().unwrap();
    let ts = dir.path().join("b.ts");
    let cfg = dir.path().join("b.cfg");
    harp(&["harp", "-m", s(&fixture("bounce")), "-o", s(&cfg), "-t", s(&ts)]);
    let text = std::fs::read_to_string(&cfg).unwrap();
    let broken = text.replacen("rot=0", "rot=3", 2);
    std::fs::write(&cfg, broken).unwrap();
    let o = harp(&["check", "-c", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("VIOLATION ")).collect();
    assert!(!lines.is_empty());
    for l in lines {
        assert!(l.split(' ').count() >= 5, "{l}");
    }
}

#[test]
fn looping_harp_is_a_budget_failure() {
    let o = harp(&["harp", "-m", s(&fixture("loop_right")), "--max-steps", "200"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not halt"));
}

#[test]
fn search_verdicts_and_codes() {
    let dir = TempDir::new().unwrap();
    let halting = dir.path().join("h.ts");
    let looping = dir.path().join("l.ts");
    harp(&["compile", "-m", s(&fixture("stay_halt")), "-o", s(&halting)]);
    harp(&["compile", "-m", s(&fixture("loop_zigzag")), "-o", s(&looping)]);

    let found = dir.path().join("found.cfg");
    let o = harp(&[
        "search",
        "-t",
        s(&halting),
        "--max-cells",
        "20",
        "--radius",
        "2",
        "-o",
        s(&found),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "FOUND 4\n");
    let o = harp(&["check", "-c", s(&found)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = harp(&[
        "search",
        "-t",
        s(&looping),
        "--max-cells",
        "20",
        "--radius",
        "3",
        "--threads",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NONE radius=3\n");

    let o = harp(&[
        "search",
        "-t",
        s(&looping),
        "--max-cells",
        "200",
        "--radius",
        "4",
        "--max-nodes",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("EXHAUSTED nodes="));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.tm");
    std::fs::write(&bad, "states: a\n").unwrap();
    let o = harp(&["compile", "-m", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = harp(&["check", "-c", s(&dir.path().join("missing.cfg"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = harp(&["harp", "-m", s(&fixture("left_edge"))]);
    assert_eq!(o.status.code(), Some(2));

    // a patch too small for the configuration
    let cfg = dir.path().join("i.cfg");
    let ts = dir.path().join("i.ts");
    harp(&["harp", "-m", s(&fixture("incrementer")), "-o", s(&cfg), "-t", s(&ts)]);
    let o = harp(&["check", "-c", s(&cfg), "--radius", "2"]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(harp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn version_names_the_formats() {
    let o = harp(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("tileset v1") && out.contains("config v1"), "{out}");
}

#[test]
fn render_without_configuration() {
    let o = harp(&["render", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("<polygon ").count(), 85);
}
