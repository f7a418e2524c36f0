use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sqa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqa"))
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "0")
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

const ISING: &str = r#"
command = "susceptibility"
[model]
n_qubits = 3
[model.interaction]
kind = "short_range_ising"
g = -0.2
[disorder]
sigma = 0.2
seed = 7
"#;

#[test]
fn negative_photon_dim_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        r#"
command = "spectrum"
[model]
n_qubits = 2
[model.interaction]
kind = "cavity_coupled"
gamma = 0.1
omega0 = 1.3
photon_dim = -1
[disorder]
sigma = 0.1
seed = 1
"#,
    );
    let out = sqa(dir.path(), &["--config", "run.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("model.interaction.photon_dim"), "{err}");
    assert!(!dir.path().join("o").exists());
}

#[test]
fn oversized_spread_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        &ISING.replace("sigma = 0.2", "sigma = 0.6"),
    );
    let out = sqa(dir.path(), &["--config", "run.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disorder.sigma"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn unknown_keys_are_reported_with_their_path() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        &ISING.replace("g = -0.2", "g = -0.2\ncoupling = 1"),
    );
    let out = sqa(dir.path(), &["--config", "run.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("model.interaction"));
}

#[test]
fn strong_coupling_only_warns() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        &ISING.replace("g = -0.2", "g = 2.0"),
    );
    let out = sqa(dir.path(), &["--config", "run.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let out = sqa(dir.path(), &["--config", "run.toml", "--validate-only"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], true);
    assert!(!report["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn validate_only_lists_errors_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        &ISING.replace("sigma = 0.2", "sigma = -0.1"),
    );
    let out = sqa(
        dir.path(),
        &["--config", "run.toml", "--validate-only", "--out", "o"],
    );
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], false);
    assert_eq!(report["errors"][0]["field"], "disorder.sigma");
    assert!(!dir.path().join("o").exists());
}

#[test]
fn bad_flags_exit_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sqa(dir.path(), &["--format", "xml"]).status.code(), Some(2));
    assert_eq!(
        sqa(dir.path(), &["reproduce-figure", "pic99"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sqa(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn preset_writes_every_panel() {
    let dir = tempfile::tempdir().unwrap();
    let out = sqa(dir.path(), &["reproduce-figure", "pic3", "--out", "both"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let files = listing(&dir.path().join("both"));
    assert_eq!(files.len(), 12, "{files:?}");
    for panel in ["a", "b", "c", "d"] {
        for stem in ["lines.csv", "correlation.csv", "susceptibility.json"] {
            assert!(files.contains(&format!("pic3_{panel}_{stem}")));
        }
    }
    sqa(
        dir.path(),
        &[
            "reproduce-figure",
            "pic3",
            "--out",
            "csv",
            "--format",
            "csv",
        ],
    );
    assert_eq!(listing(&dir.path().join("csv")).len(), 8);
}

#[test]
fn echoed_config_reproduces_the_data() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "run.toml", ISING);
    let out = sqa(
        dir.path(),
        &["--config", "run.toml", "--out", "first", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let first = fs::read_to_string(dir.path().join("first/lines.csv")).unwrap();
    let echo = first
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .expect("config echo");
    write(dir.path(), "echo.json", echo);

    let out = sqa(dir.path(), &["--config", "echo.json", "--out", "second"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let second = fs::read_to_string(dir.path().join("second/lines.csv")).unwrap();
    assert_eq!(data_rows(&first), data_rows(&second));
    assert!(data_rows(&first).len() > 1);
}

#[test]
fn failed_write_leaves_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "run.toml", ISING);
    fs::create_dir_all(dir.path().join("o/susceptibility.json")).unwrap();
    let out = sqa(dir.path(), &["--config", "run.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(listing(&dir.path().join("o")), vec!["susceptibility.json"]);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        r#"
command = "sweep"
[model]
n_qubits = 4
[model.interaction]
kind = "short_range_ising"
[disorder]
sigma = 0.2
seed = 3
[sweep]
axis = "g"
start = -0.3
stop = 0.3
points = 13
"#,
    );
    for (name, threads) in [("one", "1"), ("four", "4")] {
        let out = sqa(
            dir.path(),
            &["--config", "run.toml", "--out", name, "--threads", threads],
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = listing(&dir.path().join("one"));
    assert_eq!(a, listing(&dir.path().join("four")));
    for f in a {
        let x = fs::read_to_string(dir.path().join("one").join(&f)).unwrap();
        let y = fs::read_to_string(dir.path().join("four").join(&f)).unwrap();
        assert_eq!(x.replace("\"one\"", "\"four\""), y, "{f}");
    }
}
