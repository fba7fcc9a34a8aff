use std::path::Path;
use std::process::{Command, Output};

fn k0count(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k0count"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_scenario(dir: &Path, body: &str) -> String {
    let p = dir.join("scenario.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn zeta_of_the_projective_line() {
    let o = k0count(&[
        "zeta", "--class", "1+L", "--N", "4", "--q", "3", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let counts: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(counts, ["1", "4", "13", "40", "121"]);
}

#[test]
fn polydiagonal_count_of_the_plane() {
    let o = k0count(&[
        "count",
        "--X",
        "projective:2",
        "--n",
        "2",
        "--q",
        "2",
        "--tower",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("49") && text.contains("35"), "{text}");
}

#[test]
fn class_reports_symmetric_powers() {
    let o = k0count(&["class", "1 + L", "--n", "3", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("1 + L + L^2 + L^3"), "{s}");
    assert!(s.contains("15"), "{s}");
}

#[test]
fn verify_json_is_reproducible() {
    let args = [
        "verify",
        "--suite",
        "quotients",
        "--suite",
        "oracle",
        "--q",
        "5",
        "--q",
        "7",
        "--format",
        "json",
    ];
    let a = k0count(&args);
    let b = k0count(&args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["pass"], true);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = k0count(&[
        "verify",
        "--suite",
        "polydiagonal",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.starts_with("check,scenario,q,"));
    assert_eq!(
        k0count(&["verify", "--suite", "polydiagonal", "--format", "csv"]).stdout,
        written.as_bytes()
    );
}

#[test]
fn scenario_files_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(
        dir.path(),
        r#"{"schema":"1","scenarios":[{"check":"torsor","q":[7],"V":{"weights":[1,1],"k":3}}]}"#,
    );
    let o = k0count(&["verify", "--scenario", &path, "--format", "csv"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains(",7,48,48,"), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    assert_eq!(k0count(&["explain", "torsor"]).status.code(), Some(0));
    assert_eq!(
        k0count(&["explain", "no-such-check"]).status.code(),
        Some(2)
    );
    assert_eq!(
        k0count(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(k0count(&["verify", "--q", "6"]).status.code(), Some(2));
    assert_eq!(k0count(&["class", "1 + * L"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let not_tame = write_scenario(
        dir.path(),
        r#"[{"check":"torsor","q":[5],"V":{"weights":[1,1],"k":3}}]"#,
    );
    assert_eq!(
        k0count(&["verify", "--scenario", &not_tame]).status.code(),
        Some(3)
    );
    let unknown = write_scenario(dir.path(), r#"[{"check":"torsor","q":[7],"W":{}}]"#);
    assert_eq!(
        k0count(&["verify", "--scenario", &unknown]).status.code(),
        Some(2)
    );

    let o = k0count(&[
        "count",
        "--X",
        "projective:1",
        "--n",
        "3",
        "--q",
        "3",
        "--oracle",
        "--budget",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(4));
}
