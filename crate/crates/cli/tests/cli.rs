use std::path::Path;
use std::process::Command;

fn fracscat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracscat"))
}

fn write_manifest(dir: &Path, t_end: f64, extra: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    let out = dir.join("out");
    std::fs::write(
        &path,
        format!(
            "n = 8\nL = 8.0\nalpha = 1.8\nt_end = {t_end:?}\ndt = 0.1\nsample_interval = 0.5\noutput_dir = {:?}\n{extra}",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    path
}

#[test]
fn run_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_manifest(dir.path(), 2.0, "");
    let status = fracscat().arg("run").arg(&manifest).output().unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(String::from_utf8_lossy(&status.stdout).contains("schema_version = 1"));
    for f in [
        "series.csv",
        "gaps.csv",
        "checkpoint.bin",
        "manifest.toml",
        "status.txt",
    ] {
        assert!(dir.path().join("out").join(f).exists(), "{f} missing");
    }
    let series = std::fs::read_to_string(dir.path().join("out/series.csv")).unwrap();
    assert_eq!(series.lines().count(), 1 + 5);
}

#[test]
fn resume_matches_straight_run() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_manifest(dir.path(), 1.0, "");
    assert!(fracscat().arg("run").arg(&manifest).output().unwrap().status.success());
    let resumed = dir.path().join("resumed");
    let ok = fracscat()
        .args([
            "resume",
            dir.path().join("out/checkpoint.bin").to_str().unwrap(),
            "--until",
            "2.0",
            "--output",
        ])
        .arg(&resumed)
        .output()
        .unwrap();
    assert!(ok.status.success());

    let straight = tempfile::tempdir().unwrap();
    let manifest = write_manifest(straight.path(), 2.0, "");
    assert!(fracscat().arg("run").arg(&manifest).output().unwrap().status.success());
    // the checkpoints embed different manifests (t_end, output_dir)
    for f in ["series.csv", "gaps.csv"] {
        assert_eq!(
            std::fs::read(resumed.join(f)).unwrap(),
            std::fs::read(straight.path().join("out").join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn bad_manifest_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_manifest(dir.path(), 1.0, "epsilon0 = -1.0\n");
    let out = fracscat().arg("run").arg(&manifest).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon0"));
    let manifest = write_manifest(dir.path(), 1.0, "colour = 3\n");
    assert!(!fracscat().arg("run").arg(&manifest).output().unwrap().status.success());
}

#[test]
fn verify_lemmas_and_selftest_succeed() {
    let out = fracscat()
        .args(["verify-lemmas", "--alpha", "1.8", "--samples", "20000"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("samples = 20000"));
    let out = fracscat().arg("selftest").output().unwrap();
    assert!(out.status.success());
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
