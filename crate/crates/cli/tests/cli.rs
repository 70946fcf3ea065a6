//! End-to-end runs of the `qat` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qat")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn run_to(dir: &Path, file: &str, args: &[&str]) -> (Output, PathBuf) {
    let out = dir.join(file);
    let mut all = args.to_vec();
    let p = out.display().to_string();
    all.extend(["--out", &p]);
    (qat(&all), out)
}

#[test]
fn shipped_configs_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &str); 7] = [
        ("eval", "fig1_spreading.toml"),
        ("eval", "polar_annulus.toml"),
        ("sling", "sling_capture.toml"),
        ("sling", "sling_squeeze.toml"),
        ("sling", "schedule.toml"),
        ("uncertainty", "squeezed_number.toml"),
        ("qat-roundtrip", "squeezed_number.toml"),
    ];
    for (i, (cmd, cfg)) in cases.iter().enumerate() {
        let (o, path) = run_to(dir.path(), &format!("out{i}"), &[cmd, "--config", &config(cfg)]);
        assert_eq!(o.status.code(), Some(0), "{cmd} {cfg}: {}", stderr(&o));
        assert!(std::fs::metadata(&path).unwrap().len() > 0);
    }
    // only the outputs, no temporaries
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), cases.len());
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cfg, fmt) in [
        ("eval", "fig1_spreading.toml", "csv"),
        ("eval", "polar_annulus.toml", "json"),
        ("sling", "sling_capture.toml", "csv"),
        ("qat-roundtrip", "squeezed_number.toml", "json"),
    ] {
        let (a, pa) = run_to(dir.path(), "a", &[cmd, "--config", &config(cfg), "--format", fmt]);
        let (b, pb) = run_to(dir.path(), "b", &[cmd, "--config", &config(cfg), "--format", fmt, "--seed", "7"]);
        assert!(a.status.success() && b.status.success());
        assert_eq!(std::fs::read(pa).unwrap(), std::fs::read(pb).unwrap(), "{cmd} {cfg}");
    }
}

#[test]
fn fig1_csv_has_documented_header_and_seventeen_digits() {
    let o = qat(&["eval", "--config", &config("fig1_spreading.toml")]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# qat eval"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,density_0,density_1,density_2,density_3");
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(100).unwrap();
    for field in row.split(',') {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
    }
}

#[test]
fn default_audit_passes_and_reports_json() {
    let o = qat(&["audit"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.iter().filter(|n| n.starts_with("commutator")).count(), 20);
}

#[test]
fn coarse_audit_exits_with_tolerance_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coarse.toml");
    std::fs::write(&cfg, "[grid]\nlo = [-25.0]\nhi = [25.0]\npoints = [64]\n").unwrap();
    let (o, out) = run_to(dir.path(), "report.json", &["audit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tolerance exceeded"));
    // the report is still written for inspection
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn literal_switch_on_is_not_stationary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("literal.toml");
    std::fs::write(&cfg, "[sling]\nmatched = false\n").unwrap();
    let o = qat(&["sling", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("stationarity"));
}

#[test]
fn validation_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[scales]\nmass = 1.0\nomega = -2.0\n", 3, "scales.omega"),
        ("[state]\nindices = [1, 2]\n", 2, "state.indices"),
        ("\n[grid]\nlo = [0.0]\nhi = [1.0]\npoints = [1]\n", 5, "grid.points.0"),
        (
            "[[schedule]]\nstart = 0.0\nend = 1.0\npotential = \"free\"\n\n[[schedule]]\nstart = 2.0\nend = 3.0\npotential = \"free\"\n",
            7,
            "schedule.1.start",
        ),
        ("[eval]\ntimes = [0.0]\nlayuot = \"wide\"\n", 3, "unknown field"),
        ("[scales]\nomega = \"fast\"\n", 2, "invalid type"),
        ("[qat_roundtrip]\nprime_times = [0.0, 2.0]\n", 2, "focal point"),
    ];
    for (text, line, needle) in cases {
        let cfg = dir.path().join("bad.toml");
        std::fs::write(&cfg, text).unwrap();
        let o = qat(&["eval", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{text}");
        let err = stderr(&o);
        assert!(err.contains(&format!("bad.toml:{line}:")), "{text}\n{err}");
        assert!(err.contains(needle), "{text}\n{err}");
    }
}

#[test]
fn command_specific_validation_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("nd.toml");
    std::fs::write(&cfg, "[state]\nfamily = \"spherical\"\nindices = [1, 1, 0]\n").unwrap();
    let o = qat(&["uncertainty", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nd.toml:2:"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_and_missing_files_are_validation_failures() {
    assert_eq!(qat(&["eval", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(qat(&["frobnicate"]).status.code(), Some(1));
    let o = qat(&["eval", "--config", "/nonexistent/config.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(qat(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_block_and_flags_compose() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config.json");
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        format!("[output]\npath = {:?}\nformat = \"json\"\n\n[eval]\ntimes = [0.5]\n", target.display().to_string()),
    )
    .unwrap();
    let o = qat(&["eval", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&target).unwrap()).unwrap();
    assert_eq!(v["columns"][0], "t");
    // flags override the block
    let (o, flagged) = run_to(dir.path(), "flagged.csv", &["eval", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(flagged).unwrap();
    assert!(text.starts_with("# qat eval"));
}
