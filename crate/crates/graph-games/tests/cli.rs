//! End-to-end tests of the `ggs` binary: file formats, outputs, exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use graph_games::{fixtures, parse_game, render_game};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ggs"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    for a in args {
        if let Some(name) = a.strip_prefix("fx:") {
            cmd.arg(fixture(name));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn shipped_game_files_match_the_programmatic_fixtures() {
    for (name, game, goal) in fixtures::all_valid() {
        let path = fixture(&format!("{name}.game"));
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let (parsed, parsed_goal) = parse_game(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            render_game(&parsed, &parsed_goal),
            render_game(&game, &goal),
            "fixture file {name}.game drifted from the library fixture"
        );
    }
}

#[test]
fn solve_reports_region_and_strategy() {
    let out = run(&["solve", "fx:direct_or_detour.game"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("region: s0 s2"), "{text}");
    assert!(text.contains("s0 -> s2"), "{text}");
}

#[test]
fn solve_cooperative_handles_composite_goals() {
    let out = run(&["solve", "fx:coop_handoff.game", "--cooperative"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("region: s0\n"), "{text}");

    // adversarial mode refuses composite goals: precondition exit code
    let out = run(&["solve", "fx:coop_handoff.game"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_output_is_byte_stable() {
    for args in [
        vec!["solve", "fx:direct_or_detour.game", "--json"],
        vec!["mdp", "fx:lottery.game", "--json"],
        vec![
            "check",
            "fx:win_not_strong.game",
            "--strategy",
            "fx:win_not_strong_counting.strat",
            "--json",
        ],
        vec!["admissible", "fx:persist.game", "--json"],
        vec!["oracle", "fx:persist.game", "--what", "dominance", "--json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "unstable output for {args:?}");
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("valid json");
        for key in ["version", "command", "game", "result"] {
            assert!(v.get(key).is_some(), "missing {key} in {args:?}");
        }
    }
}

#[test]
fn mdp_exact_values_are_fraction_strings() {
    let out = run(&["mdp", "fx:lottery.game", "--exact", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["values"]["s0"], "1/2");
    assert_eq!(v["result"]["values"]["s2"], "1/3");
    assert_eq!(v["result"]["strategy"]["s0"], "s1");
}

#[test]
fn mdp_iterative_mode_agrees_with_exact() {
    let out = run(&["mdp", "fx:lottery.game", "--tol", "1e-9", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["mode"], "iterative");
    let s0 = v["result"]["values"]["s0"].as_f64().unwrap();
    assert!((s0 - 0.5).abs() < 1e-6);
}

#[test]
fn check_grades_strategy_files() {
    let out = run(&[
        "check",
        "fx:win_not_strong.game",
        "--strategy",
        "fx:win_not_strong_return.strat",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("winning: holds"), "{text}");
    assert!(
        text.contains("strongly-winning: fails (witness: s0 s1"),
        "{text}"
    );
}

#[test]
fn check_honors_criteria_subset() {
    let out = run(&[
        "check",
        "fx:two_routes.game",
        "--strategy",
        "fx:two_routes_left.strat",
        "--criteria",
        "strongly-winning,subgame-perfect",
    ]);
    let text = stdout(&out);
    assert!(text.contains("strongly-winning: holds"), "{text}");
    assert!(text.contains("subgame-perfect: fails (witness: s0 s2"), "{text}");
    assert!(!text.contains("c-winning"), "{text}");

    let bad = run(&[
        "check",
        "fx:two_routes.game",
        "--strategy",
        "fx:two_routes_left.strat",
        "--criteria",
        "glorp",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn admissible_emits_certificate_and_verdicts() {
    let out = run(&["admissible", "fx:persist.game", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["strategy"]["s0"], "s1");
    assert_eq!(v["result"]["verdicts"]["admissible"]["status"], "holds");
    assert_eq!(v["result"]["certificate"]["winning_region"], serde_json::json!([]));
    assert_eq!(
        v["result"]["certificate"]["c_winning_region"],
        serde_json::json!(["s0", "s1"])
    );
}

#[test]
fn admissible_requires_force_on_unsupported_goals() {
    let out = run(&["admissible", "fx:twice_one.game"]);
    assert_eq!(out.status.code(), Some(3));
    let forced = run(&["admissible", "fx:twice_one.game", "--force", "--json"]);
    assert!(forced.status.success());
    let v: serde_json::Value = serde_json::from_slice(&forced.stdout).unwrap();
    assert_eq!(v["result"]["supported"], false);
    assert_eq!(
        v["result"]["certificate"]["winning_region"],
        serde_json::json!(["s0", "s3"])
    );
}

#[test]
fn oracle_labels_its_scope() {
    let out = run(&["oracle", "fx:persist.game", "--what", "region", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["scope"], "positional adversaries");
    assert_eq!(v["result"]["region"], serde_json::json!([]));
}

#[test]
fn oracle_budget_exceeded_is_exit_four() {
    let out = run(&["oracle", "fx:lottery.game", "--what", "region", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn classify_prints_goal_flags() {
    let out = run(&["classify", "fx:persist.game"]);
    let text = stdout(&out);
    assert!(text.contains("prefix-independent: yes"), "{text}");
    assert!(text.contains("solver-class: buchi"), "{text}");
}

#[test]
fn dot_draws_circles_and_boxes() {
    let out = run(&["dot", "fx:persist.game"]);
    let text = stdout(&out);
    assert!(text.contains("\"s0\" [shape=circle, label=\"s0 [1]\"];"), "{text}");
    assert!(text.contains("\"s2\" [shape=box, label=\"s2 [0]\"];"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.dot");
    let out = run(&["dot", "fx:persist.game", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.game");
    std::fs::write(&path, "state s0 player=1 color=0\nedge s0 sX\ngoal ev(0)\n").unwrap();
    let out = bin().args(["solve", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2:6"), "{err}");
    assert!(err.contains("sX"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
