use std::path::Path;
use std::process::{Command, Output};

fn kmsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmsq")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn out_arg(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn rejects_characteristic_two_and_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = kmsq(&["seed", "--p", "3", "--r", "2", "--k", "2", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let o = kmsq(&["seed", "--p", "2", "--k", "5", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn rejects_k_divisible_by_p() {
    let dir = tempfile::tempdir().unwrap();
    let o = kmsq(&["seed", "--p", "5", "--k", "5", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("error"));
}

#[test]
fn seed_then_verify_passes_and_is_append_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    let o = kmsq(&["seed", "--p", "7", "--k", "5", "--variant", "sp", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let seed = dir.path().join("seeds/sp-p7-r1-k5.txt");
    assert!(seed.exists());

    let seed_arg = seed.display().to_string();
    for _ in 0..2 {
        let o = kmsq(&["verify", "--p", "7", "--k", "5", "--variant", "sp", "--seed", &seed_arg, "--out", &out]);
        assert_eq!(code(&o), 0, "{}\n{}", String::from_utf8_lossy(&o.stdout), stderr(&o));
    }
    let a = std::fs::read(dir.path().join("verify-v1/report.txt")).unwrap();
    let b = std::fs::read(dir.path().join("verify-v2/report.txt")).unwrap();
    assert_eq!(a, b);

    // reseeding the same parameters leaves the stored seed untouched
    let before = std::fs::read(&seed).unwrap();
    assert_eq!(code(&kmsq(&["seed", "--p", "7", "--k", "5", "--variant", "sp", "--out", &out])), 0);
    assert_eq!(std::fs::read(&seed).unwrap(), before);
    assert!(dir.path().join("seed-v2.txt").exists());

    let manifest = std::fs::read_to_string(dir.path().join("MANIFEST.sha256")).unwrap();
    assert!(manifest.lines().any(|l| l.ends_with("  verify-v2/report.txt")));
    assert!(manifest.lines().all(|l| l.split("  ").next().unwrap().len() == 64));

    let o = kmsq(&["report", "--out", &out]);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("summary-v1.txt").exists());
}

#[test]
fn corrupted_seed_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert_eq!(code(&kmsq(&["seed", "--p", "5", "--k", "7", "--out", &out])), 0);
    let seed = dir.path().join("seeds/sl-p5-r1-k7.txt");
    let text = std::fs::read_to_string(&seed).unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, text.replacen("M_b", "M_q", 1)).unwrap();
    let o = kmsq(&["verify", "--p", "5", "--k", "7", "--seed", &bad.display().to_string(), "--out", &out]);
    assert_ne!(code(&o), 0);
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn seed_for_other_parameters_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert_eq!(code(&kmsq(&["seed", "--p", "5", "--k", "7", "--out", &out])), 0);
    let seed = dir.path().join("seeds/sl-p5-r1-k7.txt").display().to_string();
    let o = kmsq(&["verify", "--p", "7", "--k", "5", "--seed", &seed, "--out", &out]);
    assert_eq!(code(&o), 2);
}

#[test]
fn full_complex_needs_k_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = kmsq(&["complex", "--p", "5", "--k", "7", "--mode", "full", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("# links at q = 7\np = 11\nk = 1\nout = {}\n", dir.path().display())).unwrap();
    let o = kmsq(&["complex", "--config", &cfg.display().to_string(), "--p", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("complex-v1/report.txt")).unwrap();
    assert!(report.contains("descriptor 7^1^1"), "{report}");
    let csv = std::fs::read_to_string(dir.path().join("complex-v1/spectra.csv")).unwrap();
    assert!(csv.starts_with("link,nodes,edges,lambda2,bound,pass"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "p = 5\nk = 7\nfield = 9\n").unwrap();
    let o = kmsq(&["seed", "--config", &cfg.display().to_string(), "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 2);
}
