use std::path::Path;
use std::process::Command;

use yui_teleop::config::Config;
use yui_teleop::scenario::Scenario;
use yui_teleop::Error;

fn yui(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_yui"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    (
        out.status.success(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn record_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let session = dir.path().join("g.session");
    let s = session.to_str().unwrap();
    let (ok, out, err) = yui(&["record", "greeting", s]);
    assert!(ok, "{err}");
    assert!(out.contains("recorded"));
    let (ok, out, err) = yui(&["replay", s]);
    assert!(ok, "{err}");
    assert!(out.contains("matched"), "{out}");

    let text = std::fs::read_to_string(&session).unwrap();
    std::fs::write(&session, &text[..text.len() / 2]).unwrap();
    let (ok, _, err) = yui(&["replay", s]);
    assert!(!ok);
    assert!(err.contains("at byte"), "{err}");
}

#[test]
fn sweep_prints_csv() {
    let (ok, out, err) = yui(&["sweep-audio", "--duration-ms", "200"]);
    assert!(ok, "{err}");
    assert_eq!(out.lines().count(), 9);
}

#[test]
fn default_config_round_trips_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let (ok, out, _) = yui(&["config", "default"]);
    assert!(ok);
    let path = dir.path().join("yui.toml");
    std::fs::write(&path, &out).unwrap();
    assert_eq!(Config::load(&path).unwrap(), Config::default());
    let (ok, out, err) = yui(&["--config", path.to_str().unwrap(), "config", "check"]);
    assert!(ok, "{err}");
    assert!(out.contains("config ok"));
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[bus]\ncycle_ms = 10\nbogus = 1\n").unwrap();
    assert!(Config::load(&path).is_err());
    let (ok, _, err) = yui(&["--config", path.to_str().unwrap(), "config", "check"]);
    assert!(!ok);
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn exported_tables_match_the_shipped_copies() {
    let dir = tempfile::tempdir().unwrap();
    let (ok, _, err) = yui(&["tables", "export", dir.path().to_str().unwrap()]);
    assert!(ok, "{err}");
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for f in ["rig.toml", "au_table.toml", "presets.toml"] {
        assert_eq!(
            std::fs::read_to_string(dir.path().join(f)).unwrap(),
            std::fs::read_to_string(shipped.join(f)).unwrap(),
            "{f}"
        );
    }
    let (ok, out, _) = yui(&["tables", "check", shipped.to_str().unwrap()]);
    assert!(ok);
    assert!(out.contains("21 motors, 31 motions"));
}

#[test]
fn scenario_files_report_the_bad_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    std::fs::write(
        &path,
        "# comment\n{\"t_ms\": 0, \"event\": \"clear\"}\n{\"t_ms\": 5, \"event\": \"wave\"}\n",
    )
    .unwrap();
    match Scenario::load(&path) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let (ok, _, err) = yui(&["scenario", "play", path.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains(":3:"), "{err}");
}

#[test]
fn builtin_scenarios_play_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let (ok, jsonl, _) = yui(&["scenario", "show", "greeting"]);
    assert!(ok);
    let path = dir.path().join("greeting.jsonl");
    std::fs::write(&path, &jsonl).unwrap();
    assert_eq!(Scenario::load(&path).unwrap().events, Scenario::builtin("greeting").unwrap().events);
    let csv = dir.path().join("t.csv");
    let (ok, out, err) = yui(&["scenario", "play", path.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert!(ok, "{err}");
    assert!(out.contains("431 cycles"), "{out}");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 432);
}

#[test]
fn operator_runs_offline_without_a_socket() {
    let (ok, out, err) = yui(&["--offline", "operator", "run", "greeting"]);
    assert!(ok, "{err}");
    assert!(out.contains("431 cycles"), "{out}");
    let (ok, _, err) = yui(&["--offline", "avatar", "run"]);
    assert!(!ok);
    assert!(err.contains("--offline"), "{err}");
}
