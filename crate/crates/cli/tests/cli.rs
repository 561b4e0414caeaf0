use std::path::Path;
use std::process::{Command, Output};

fn linopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linopt")).args(args).output().unwrap()
}

fn data_lines(stdout: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(stdout).lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect()
}

fn fixture(dir: &Path, permanent: f64) -> String {
    let path = dir.join("fixture.json");
    let body = format!(
        r#"{{"cases":[{{"name":"two-by-two","matrix":{{"rows":2,"cols":2,"re":[1,2,3,4],"im":[0,0,0,0]}},"permanent":[{permanent},0]}}]}}"#
    );
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn identity_preset_reproduces_its_input() {
    let out = linopt(&["sample", "--matrix", "identity:4", "--input", "2,0,1,1", "--count", "50"]);
    assert!(out.status.success());
    let lines = data_lines(&out.stdout);
    assert_eq!(lines.len(), 50);
    assert!(lines.iter().all(|l| l == "2,0,1,1"));
}

#[test]
fn header_records_the_run() {
    let out = linopt(&["baselines", "--model", "qufti_global", "--seed", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tool: linopt"));
    assert!(text.contains("# subcommand: baselines"));
    assert!(text.contains("# seed: 5"));
}

#[test]
fn seeds_change_samples_but_reruns_do_not() {
    let run = |seed: &str| linopt(&["sample", "--matrix", "haar:5:1", "--input", "1,1,1,0,0", "--count", "200", "--seed", seed]).stdout;
    assert_eq!(run("3"), run("3"));
    assert_ne!(data_lines(&run("3")), data_lines(&run("4")));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dist.json");
    let args = ["distribution", "--matrix", "mzi:0.3", "--input", "1,1", "--format", "json"];
    let stdout = linopt(&args).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--out", file.to_str().unwrap()]);
    assert!(linopt(&with_file).status.success());
    assert_eq!(std::fs::read(&file).unwrap(), stdout);
    let doc: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(doc["meta"]["subcommand"], "distribution");
    assert_eq!(doc["data"]["m"], 2);
}

#[test]
fn guard_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("samples.csv");
    let input = format!("{}{}", "1,".repeat(12), "0,".repeat(17) + "0");
    let out = linopt(&["sample", "--matrix", "haar:30:1", "--input", &input, "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
    assert!(!file.exists());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(linopt(&["sample", "--matrix", "identity:3", "--input", "1,0"]).status.code(), Some(2));
    assert_eq!(linopt(&["sensitivity", "--family", "nonsense"]).status.code(), Some(2));
    assert_eq!(linopt(&["reck", "--matrix", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(linopt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn strict_mode_rejects_crowded_instances() {
    let args = ["sample", "--matrix", "haar:4:0", "--input", "1,1,0,0", "--count", "3"];
    assert!(linopt(&args).status.success());
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(linopt(&strict).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["permanents", "mordor", "qufti", "pacs"] {
        let out = linopt(&["verify", "--suite", suite, "--trials", "20"]);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn correct_fixture_passes_and_corrupted_fixture_fails() {
    let dir = tempfile::tempdir().unwrap();
    let good = fixture(dir.path(), 10.0);
    assert!(linopt(&["verify", "--suite", "permanents", "--trials", "5", "--fixture", &good]).status.success());

    let bad = fixture(dir.path(), 10.5);
    let out = linopt(&["verify", "--suite", "permanents", "--trials", "5", "--fixture", &bad, "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("two-by-two"));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["data"]["passed"], false);
}

#[test]
fn csv_floats_round_trip() {
    let out = linopt(&["baselines", "--model", "orc", "--n-max", "4"]);
    let lines = data_lines(&out.stdout);
    assert_eq!(lines[0], "n,N,snl,hl");
    let row: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(row[..2], ["4", "7"]);
    let snl: f64 = row[2].parse().unwrap();
    assert_eq!(snl, 1.0 / 7f64.sqrt());
}
