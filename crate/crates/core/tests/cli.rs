mod common;

use std::path::Path;
use std::process::{Command, Output};

use online_coloring::game::Transcript;
use tempfile::TempDir;

fn intcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intcolor"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn play_to(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut all = vec!["play"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = intcolor(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn verify_code(path: &Path) -> (i32, String) {
    let out = intcolor(&["verify", "--in", path.to_str().unwrap()]);
    (code(&out), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn play_prints_summary_and_verifies() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.json");
    let out = intcolor(&[
        "play",
        "--strategy",
        "sm",
        "--m",
        "2",
        "--d",
        "16",
        "--k",
        "4",
        "--algorithm",
        "first-fit",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.contains("guarantee=21"), "{line}");
    let (c, report) = verify_code(&path);
    assert_eq!(c, 0, "{report}");
    assert!(report.contains(r#""witness_valid":true"#));
    assert!(report.contains(r#""paper_colorability_bound":22"#));
}

#[test]
fn graph_game_from_the_command_line() {
    let dir = TempDir::new().unwrap();
    let path = play_to(
        dir.path(),
        "g.json",
        &[
            "--strategy",
            "hs-graph",
            "--n",
            "64",
            "--k",
            "2",
            "--algorithm",
            "graph-first-fit",
        ],
    );
    let t = Transcript::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(t.summary.algorithm_colors >= 16);
    assert_eq!(verify_code(&path).0, 0);
}

#[test]
fn same_flags_same_bytes() {
    let dir = TempDir::new().unwrap();
    let flags = [
        "--strategy",
        "unit",
        "--m",
        "2",
        "--d",
        "8",
        "--k",
        "inf",
        "--algorithm",
        "random",
        "--seed",
        "7",
    ];
    let a = std::fs::read(play_to(dir.path(), "a.json", &flags)).unwrap();
    let b = std::fs::read(play_to(dir.path(), "b.json", &flags)).unwrap();
    assert_eq!(a, b);
    let mut other = flags;
    other[11] = "8";
    let c = std::fs::read(play_to(dir.path(), "c.json", &other)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn corruptions_have_their_exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = play_to(
        dir.path(),
        "t.json",
        &["--strategy", "unit", "--m", "2", "--d", "4", "--k", "2"],
    );
    let clean = Transcript::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();

    let write = |name: &str, t: &Transcript| {
        let p = dir.path().join(name);
        std::fs::write(&p, t.to_json()).unwrap();
        p
    };

    let mut t = clean.clone();
    let round = common::corrupt_color(&mut t);
    let (c, report) = verify_code(&write("color.json", &t));
    assert_eq!(c, 2);
    assert!(report.contains(&format!(r#""round":{round}"#)), "{report}");

    let mut t = clean.clone();
    common::corrupt_eps(&mut t);
    let (c, report) = verify_code(&write("eps.json", &t));
    assert_eq!(c, 1);
    assert!(report.contains("share eps index"), "{report}");

    let mut t = clean.clone();
    common::overstate(&mut t);
    let (c, report) = verify_code(&write("summary.json", &t));
    assert_eq!(c, 1, "{report}");

    std::fs::write(dir.path().join("junk.json"), "{\"version\": 1").unwrap();
    assert_eq!(verify_code(&dir.path().join("junk.json")).0, 3);
    assert_eq!(verify_code(&dir.path().join("missing.json")).0, 3);
}

#[test]
fn configuration_errors_exit_3() {
    assert_eq!(code(&intcolor(&["play", "--strategy", "nope"])), 3);
    assert_eq!(code(&intcolor(&["play", "--strategy", "sm", "--k", "zero"])), 3);
    assert_eq!(code(&intcolor(&["play", "--strategy", "sm", "--d", "1"])), 3);
    assert_eq!(
        code(&intcolor(&["play", "--strategy", "sm", "--algorithm", "psychic"])),
        3
    );
    assert_eq!(code(&intcolor(&["frobnicate"])), 3);
    assert_eq!(code(&intcolor(&["--help"])), 0);
}

#[test]
fn misbehaving_external_algorithm_exits_2() {
    let out = intcolor(&[
        "play",
        "--strategy",
        "hs-call",
        "--d",
        "4",
        "--algorithm",
        r#"external:read h; while read l; do echo '{"color":0}'; done"#,
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn table_csv_shape() {
    let out = intcolor(&[
        "table",
        "--strategy",
        "sm",
        "--d",
        "4,8,16",
        "--m",
        "1,2",
        "--k",
        "inf",
        "--algorithms",
        "first-fit",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let used: usize = r[4].parse().unwrap();
        let guarantee: usize = r[5].parse().unwrap();
        assert!(used >= guarantee);
    }
}

#[test]
fn table_ratio_for_sm_cell() {
    let out = intcolor(&[
        "table",
        "--strategy",
        "sm",
        "--d",
        "16",
        "--m",
        "2",
        "--k",
        "4",
        "--algorithms",
        "first-fit",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ratio = rows[0]["ratio"].as_str().unwrap();
    let q = online_coloring::rational::parse(ratio).unwrap();
    assert!(q >= online_coloring::rational::ratio(21, 22), "{ratio}");
}

#[test]
fn oracle_on_a_short_transcript() {
    let dir = TempDir::new().unwrap();
    let path = play_to(dir.path(), "t.json", &["--strategy", "hs-call", "--d", "8", "--k", "2"]);
    let out = intcolor(&["oracle", "--in", path.to_str().unwrap(), "--max-n", "12"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["sandwich_holds"], true);
    let out = intcolor(&["oracle", "--in", path.to_str().unwrap(), "--max-n", "40"]);
    assert_eq!(code(&out), 3);
}
