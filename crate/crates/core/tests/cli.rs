//! Behaviour of the `susyhier` binary at its edges.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.cfg"));
    p.to_str().unwrap().to_owned()
}

fn susyhier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susyhier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"], &["spectrum", "--help"]] {
        let out = susyhier(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn bad_arguments_exit_one() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["spectrum"],
        &["spectrum", "--config"],
        &["spectrum", "--config", "x.cfg", "--mode", "sideways"],
    ] {
        let out = susyhier(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn missing_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent.cfg");
    let out = susyhier(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("cannot read"));
}

#[test]
fn spectrum_csv_shape() {
    let out = susyhier(&["spectrum", "--config", &fixture("spectrum_morse")]);
    assert_eq!(out.status.code(), Some(0));
    let body = text(&out.stdout);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("n,l,E_re,E_im,formula,admissible"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    // λq = 5: E(0, 0) = -(5 - 1/2)²
    assert_eq!(rows[0], "0,0,-20.25,0,morse_general,true");
    assert_eq!(rows[1], "1,0,-16,0,morse_general,true");
}

#[test]
fn mode_flag_overrides_config() {
    let cfg = fixture("spectrum_morse");
    let literal = text(&susyhier(&["spectrum", "--config", &cfg]).stdout);
    let out = susyhier(&["spectrum", "--config", &cfg, "--mode", "self-consistent"]);
    assert_eq!(out.status.code(), Some(0));
    let sc = text(&out.stdout);
    assert_ne!(literal, sc);
    assert!(sc
        .lines()
        .skip(1)
        .all(|l| l.contains("self_consistent_morse")));
}

#[test]
fn out_flag_writes_file_and_silences_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let cfg = fixture("spectrum_morse");
    let direct = susyhier(&["spectrum", "--config", &cfg]).stdout;
    let out = susyhier(&[
        "spectrum",
        "--config",
        &cfg,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct);
}

#[test]
fn unwritable_out_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no/such/dir/out.csv");
    let out = susyhier(&[
        "spectrum",
        "--config",
        &fixture("spectrum_morse"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn errors_name_their_kind() {
    let out = susyhier(&["spectrum", "--config", &fixture("zero_omega")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        text(&out.stderr).contains("ZeroOmega"),
        "{}",
        text(&out.stderr)
    );
    let out = susyhier(&["spectrum", "--config", &fixture("unknown_key")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("unknown key"));
}

#[test]
fn empty_spectrum_warns_and_succeeds() {
    let out = susyhier(&["spectrum", "--config", &fixture("spectrum_empty")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stderr.is_empty());
}
