//! End-to-end checks of the `evc` binary: output schema, exit codes, the
//! interactive session, and the generator files.

use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evc"))
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = bin().args(args).output().expect("spawn evc");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn tmp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("evc-cli-{}-{name}", std::process::id()))
}

#[test]
fn solve_reports_the_closed_forms() {
    let (stdout, _, code) = run(&["solve", "--melon", "3,3,3"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        r#"{"vertices":8,"edge_count":9,"family":"melon","case":"odd","vc":4,"evc":4,"class_size":2}"#
    );

    let (stdout, _, code) = run(&["solve", "--melon", "2,2,2"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        r#"{"vertices":5,"edge_count":6,"family":"melon","case":"even","vc":2,"evc":3,"class_size":3}"#
    );
}

#[test]
fn solve_unrecognized_family_exits_3() {
    let k4 = tmp_path("k4.txt");
    std::fs::write(&k4, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let (stdout, _, code) = run(&["solve", "--edges", k4.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stdout.contains(r#""family":"unrecognized""#));
    assert!(stdout.contains(r#""vc":3"#));
    assert!(!stdout.contains("evc"));
}

#[test]
fn solve_usage_errors_exit_2() {
    let (_, stderr, code) = run(&["solve", "--melon", "1,1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("multi-edge"));

    let (_, _, code) = run(&["solve"]);
    assert_eq!(code, 2);

    let missing = tmp_path("missing.txt");
    let (_, _, code) = run(&["solve", "--edges", missing.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn oracle_matches_fixed_points() {
    let (stdout, _, code) = run(&["oracle", "--melon", "2,2,3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""evc":4"#));

    let c6 = tmp_path("c6.txt");
    std::fs::write(&c6, "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n").unwrap();
    let (stdout, _, code) = run(&["oracle", "--edges", c6.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""evc":3"#));
    assert!(stdout.contains(r#""family":"cycle""#));
}

#[test]
fn oracle_limit_exits_4() {
    let g3 = tmp_path("g3.txt");
    let (_, _, code) = run(&["gen", "gk", "3", "--out", g3.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, stderr, code) = run(&["oracle", "--edges", g3.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(stderr.contains("exceeds"));
}

#[test]
fn verify_examples() {
    let (stdout, _, code) = run(&["verify", "--melon", "2,2,3,3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""configs":4"#));
    assert!(stdout.contains(r#""edges":10"#));
    assert!(stdout.contains(r#""ok":true"#));

    let (stdout, _, code) = run(&["verify", "--melon", "2,3,3", "--oracle-cross-check"]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""evc":4"#));
    assert!(stdout.contains(r#""oracle_evc":4"#));

    // single path: the dedicated rotation class
    let (stdout, _, code) = run(&["verify", "--melon", "5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""ok":true"#));
}

#[test]
fn gen_files_round_trip_through_solve() {
    let out = tmp_path("gen.txt");
    let (stdout, _, code) = run(&["gen", "melon", "2,2,3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""vertices":6"#));
    let (stdout, _, code) = run(&["solve", "--edges", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""case":"mixed_one_odd""#));

    let g2 = tmp_path("g2.txt");
    let (stdout, _, code) = run(&["gen", "gk", "2", "--out", g2.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains(r#""vertices":21"#));
    assert!(stdout.contains(r#""edge_count":34"#));
}

#[test]
fn alt_outputs_plain_integers() {
    let (stdout, _, code) = run(&["alt", "--sp", "S(P(S(e,e),S(e,e)),P(S(e,e),S(e,e)))"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "2");

    let (stdout, _, code) = run(&["alt", "--melon", "2,4,6"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "1");

    let (_, stderr, code) = run(&["alt", "--sp", "S(e"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("offset 4"));
}

#[test]
fn play_scripted_rounds_stay_in_the_class() {
    let (stdout, _, code) = run(&[
        "play", "--melon", "3,3,3", "--auto", "100", "--seed", "7",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 101); // banner + 100 rounds
    let last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    let config = last["configuration"].as_array().unwrap();
    let config: Vec<u64> = config.iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(
        config == [0, 3, 5, 7] || config == [1, 2, 4, 6],
        "final configuration {config:?} outside the bipartition family"
    );
}

#[test]
fn play_interactive_session_matches_the_worked_example() {
    let mut child = bin()
        .args(["play", "--melon", "2,2,2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn evc play");
    {
        use std::io::Write as _;
        let stdin = child.stdin.as_mut().unwrap();
        stdin
            .write_all(b"show\nattack 0 3\nattack 9 9\nlog\nquit\n")
            .unwrap();
    }
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    // guards start on the first class member {0,1,2}; the attack on (0,3)
    // moves 0 -> 3 and 2 -> 0
    assert!(stdout.contains(r#""configuration":[0,1,3]"#));
    assert!(stdout.contains(r#""moves":[[0,3],[2,0]]"#));
    assert!(stdout.contains("not an edge"));
    // the log replays the single defended round
    assert_eq!(
        stdout.matches(r#""attack":[0,3]"#).count(),
        2,
        "round plus its log entry"
    );
}

#[test]
fn play_oracle_defender_works_on_non_melons() {
    let k4 = tmp_path("k4-play.txt");
    std::fs::write(&k4, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let (stdout, _, code) = run(&[
        "play", "--edges", k4.to_str().unwrap(), "--defender", "oracle",
        "--auto", "25", "--seed", "3",
    ]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert_eq!(stdout.lines().count(), 26);
}
