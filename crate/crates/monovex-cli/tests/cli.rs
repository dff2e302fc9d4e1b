//! End-to-end checks of the command-line surface: pipelines, file
//! outputs, byte-determinism, and the exit-code contract.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_monovex");

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .expect("piped stdin")
            .write_all(text.as_bytes())
            .expect("write stdin");
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary runs")
}

fn stdout_of(args: &[&str], stdin: Option<&str>) -> String {
    let out = run(args, stdin);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn staircase_pipeline_check() {
    let complex = stdout_of(&["examples", "example1", "--k", "3"], None);
    let verdict = stdout_of(&["check"], Some(&complex));
    let parsed: serde_json::Value = serde_json::from_str(&verdict).unwrap();
    assert_eq!(parsed["is_monovex"], serde_json::Value::Bool(true));
}

#[test]
fn closed_model_pipeline_betti() {
    let complex = stdout_of(&["examples", "example2-closed", "--eps", "1/2^2"], None);
    let betti = stdout_of(&["betti", "--resolution", "1/2^2"], Some(&complex));
    let parsed: serde_json::Value = serde_json::from_str(&betti).unwrap();
    assert_eq!(parsed["betti"][0], 1);
    assert_eq!(parsed["betti"][1], 1);
    assert_eq!(parsed["betti"][2], 0);
}

#[test]
fn emitted_complexes_reparse_to_equal_values() {
    for name in ["example1", "example2", "lshape", "sshape"] {
        let text = stdout_of(&["examples", name], None);
        let complex = monovex::format::parse_complex(&text).unwrap();
        let again = monovex::format::complex_to_json(&complex);
        assert_eq!(text.trim(), again.trim(), "round-trip drift for {name}");
    }
}

#[test]
fn path_subcommand_finds_the_corner_turn() {
    let complex = stdout_of(&["examples", "lshape"], None);
    let path = stdout_of(
        &["path", "--from", "2,1/2^1", "--to", "1/2^1,2"],
        Some(&complex),
    );
    let parsed: serde_json::Value = serde_json::from_str(&path).unwrap();
    assert_eq!(parsed["signs"], serde_json::json!([-1, 1]));

    // a frozen disconnected slice yields null
    let sshape = stdout_of(&["examples", "sshape"], None);
    let missing = stdout_of(
        &["path", "--from", "1/2^1,1/2^1", "--to", "1/2^1,5/2^1"],
        Some(&sshape),
    );
    assert_eq!(missing.trim(), "null");
}

#[test]
fn minkowski_subcommand_sums_boxes() {
    let complex = stdout_of(&["examples", "lshape"], None);
    let summand = r#"[{"lo":0,"hi":1,"lo_closed":true,"hi_closed":true},{"lo":0,"hi":1,"lo_closed":true,"hi_closed":true}]"#;
    let sum = stdout_of(&["minkowski", "--box", summand], Some(&complex));
    let parsed = monovex::format::parse_complex(&sum).unwrap();
    assert!(parsed.contains(&monovex::geom::Point::from_ints(&[3, 2])));
}

#[test]
fn fuzz_reports_are_byte_identical_for_a_seed() {
    let dir_a = tempdir("fuzz-a");
    let dir_b = tempdir("fuzz-b");
    let args_a = [
        "fuzz", "--mode", "closed", "--trials", "12", "--seed", "9", "--out",
    ];
    let out_a = stdout_of(&[&args_a[..], &[dir_a.to_str().unwrap()]].concat(), None);
    let out_b = stdout_of(&[&args_a[..], &[dir_b.to_str().unwrap()]].concat(), None);
    assert_eq!(out_a, out_b, "stdout must be deterministic");
    let file_a = std::fs::read(dir_a.join("report.json")).unwrap();
    let file_b = std::fs::read(dir_b.join("report.json")).unwrap();
    assert_eq!(file_a, file_b, "report files must be byte-identical");
}

#[test]
fn retract_writes_the_decay_table() {
    let dir = tempdir("retract");
    let complex = stdout_of(&["examples", "example1"], None);
    let report = stdout_of(
        &[
            "retract",
            "--from",
            "2,2",
            "--iterations",
            "3",
            "--probes",
            "5",
            "--out",
            dir.to_str().unwrap(),
        ],
        Some(&complex),
    );
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed["decay_certified"], serde_json::Value::Bool(true));
    let csv = std::fs::read_to_string(dir.join("decay.csv")).unwrap();
    assert!(csv.starts_with("k,distance,bound\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn exit_codes_follow_the_contract() {
    // parse error
    let out = run(&["check"], Some("{not json"));
    assert_eq!(out.status.code(), Some(2));

    // dimension mismatch
    let complex = stdout_of(&["examples", "lshape"], None);
    let out = run(
        &["path", "--from", "0,0,0", "--to", "1,1,1"],
        Some(&complex),
    );
    assert_eq!(out.status.code(), Some(3));

    // precondition: retracting from a point inside the set
    let out = run(
        &["retract", "--from", "1/2^1,1/2^1", "--probes", "1"],
        Some(&complex),
    );
    assert_eq!(out.status.code(), Some(4));

    // betti on a non-closed complex is a precondition failure
    let half_open = stdout_of(&["examples", "example2"], None);
    let out = run(&["betti", "--resolution", "1"], Some(&half_open));
    assert_eq!(out.status.code(), Some(4));
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("monovex-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
