//! End-to-end checks of the command-line interface and its exit codes
//! (0 success, 1 usage, 2 config, 3 runtime).

use std::fs;
use std::path::Path;
use std::process::Command;

fn gmee() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gmee"))
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn list_algorithms_names_all_seven() {
    let out = gmee().arg("list-algorithms").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["lms", "lmf", "gmcc", "rls", "mee", "gmee", "qgmee"] {
        assert!(text.contains(name), "missing {name} in {text}");
    }
}

#[test]
fn complexity_subcommand_prints_table_rows() {
    let out = gmee()
        .args(["complexity", "--M", "10", "--L", "10", "--H", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("gmee,723,920,602"), "{text}");
    assert!(text.contains("qgmee,233,230,92"), "{text}");
    assert!(text.contains("lms,21,20,0"), "{text}");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = gmee().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = gmee().args(["validate", "/nonexistent/nope.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_reports_field_paths_and_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    write(
        &path,
        r#"
kind = "sysid"

[noise]
kind = "gaussian"
variance = 1.0

[[algorithms]]
kind = "lms"
eta = -0.5
"#,
    );
    let out = gmee().args(["validate"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("algorithms[0].eta"), "{text}");
}

#[test]
fn runtime_failure_exits_with_code_three() {
    // valid config whose referenced far-end recording does not exist
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aec.toml");
    write(
        &path,
        &format!(
            r#"
kind = "aec"
output_dir = "{}"

[aec]
far_end_wav = "{}"

[[algorithms]]
kind = "lms"
eta = 0.01
"#,
            dir.path().join("out").display(),
            dir.path().join("missing.wav").display()
        ),
    );
    let out = gmee().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validate_then_run_a_complexity_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("artifacts");
    let path = dir.path().join("complexity.toml");
    write(
        &path,
        &format!(
            r#"
kind = "complexity"
output_dir = "{}"

[complexity]
filter_len = 5
window_len = 8
codebook_len = 2
"#,
            out_dir.display()
        ),
    );
    let out = gmee().args(["validate"]).arg(&path).output().unwrap();
    assert!(out.status.success());

    let out = gmee().args(["run"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(out_dir.join("complexity.csv").exists());
    assert!(out_dir.join("metadata.json").exists());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("config fingerprint:"), "{text}");
}
