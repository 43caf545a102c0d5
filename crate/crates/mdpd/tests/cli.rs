use std::path::Path;
use std::process::{Command, Output};

fn mdpd(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdpd")).args(args).current_dir(dir).output().unwrap()
}

fn generate(dir: &Path) {
    let out = mdpd(
        &[
            "gen-onecoin",
            "--k",
            "3",
            "--abilities",
            "0.9,0.7,0.5,0.4,0.33",
            "--items",
            "300",
            "--missing",
            "0.2",
            "--seed",
            "7",
            "--out",
            "labels.txt",
        ],
        dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_reports_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let run = |threads: &str, out: &str| {
        let o = mdpd(
            &[
                "sweep",
                "--labels",
                "labels.txt",
                "--truth",
                "labels.txt.truth",
                "--select",
                "score,submatrix",
                "--learner",
                "mv,mv-em",
                "--report-gof",
                "--seed",
                "3",
                "--threads",
                threads,
                "--out",
                out,
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.path().join(out).join("sweep.csv")).unwrap()
    };
    let a = run("1", "a");
    let b = run("4", "b");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("method,learner,l,error_rate,gof,best,selected\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 5);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 3);
    assert_eq!(manifest["data"]["n_workers"], 5);
    assert_eq!(manifest["best"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("a/scores.csv").exists());
}

#[test]
fn generation_is_reproducible_and_reparses() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let first = std::fs::read(dir.path().join("labels.txt")).unwrap();
    generate(dir.path());
    assert_eq!(std::fs::read(dir.path().join("labels.txt")).unwrap(), first);

    let out = mdpd(&["mi", "--labels", "labels.txt", "--classes", "1,2,3", "--out", "mi.csv"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("mi.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.lines().next().unwrap().ends_with(",score"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    std::fs::write(dir.path().join("dup.txt"), "a w 1\na w 2\n").unwrap();
    std::fs::write(dir.path().join("bad_truth.txt"), "nope 1\n").unwrap();
    let cases: &[&[&str]] = &[
        &["mi", "--labels", "missing.txt", "--out", "x.csv"],
        &["mi", "--labels", "dup.txt", "--out", "x.csv"],
        &["sweep", "--labels", "labels.txt", "--truth", "bad_truth.txt", "--out", "o"],
        &["sweep", "--labels", "labels.txt", "--truth", "labels.txt.truth", "--l-grid", "0-2", "--out", "o"],
        &["sweep", "--labels", "labels.txt", "--truth", "labels.txt.truth", "--learner", "em", "--out", "o"],
        &["sweep", "--labels", "labels.txt", "--truth", "labels.txt.truth", "--tol", "-1", "--out", "o"],
        &["mi", "--labels", "labels.txt", "--k", "2", "--out", "x.csv"],
        &["gen-onecoin", "--k", "1", "--abilities", "0.5", "--items", "3", "--out", "g.txt"],
    ];
    for args in cases {
        let out = mdpd(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let dup = mdpd(&["mi", "--labels", "dup.txt", "--out", "x.csv"], dir.path());
    assert!(String::from_utf8_lossy(&dup.stderr).contains("line 2"));
}

#[test]
fn numerical_failures_exit_with_three() {
    let e = mdpd::Error::from(mdpd_core::Error::NumericalFailure("test"));
    assert_eq!(e.exit_code(), 3);
    assert_eq!(mdpd::Error::from(mdpd_core::Error::NoEntries).exit_code(), 2);
}
