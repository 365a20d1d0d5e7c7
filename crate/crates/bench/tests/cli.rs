use std::process::Command;

fn cwyinvit() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cwyinvit"));
    c.env_remove("CWYINVIT_THREADS");
    c
}

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("cwyinvit-cli-{}-{name}", std::process::id()))
}

#[test]
fn run_prints_summary_and_succeeds() {
    let out = cwyinvit().args(["run", "--family", "glued", "--blocks", "2", "--verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("glued n=42 backend=cwy_packed threads=1"));
    assert!(text.contains("max |QtQ - I|"));
}

#[test]
fn compare_writes_csv() {
    let csv = temp("compare.csv");
    let _ = std::fs::remove_file(&csv);
    let out = cwyinvit()
        .args(["compare", "--family", "type2", "--n", "64", "--backend", "mgs,householder,cwy_packed"])
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    let _ = std::fs::remove_file(&csv);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["run", "--family", "cubic"],
        vec!["run", "--backend", "qr"],
        vec!["run", "--backend", "mgs,cwy_packed"],
        vec!["run", "--family", "glued", "--n", "42"],
        vec!["run", "--threads", "0"],
        vec!["compare", "--backend", "mgs"],
        vec!["frobnicate"],
    ] {
        let out = cwyinvit().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verification_failure_exits_with_one() {
    // shifts from a very loose bisection never pass the growth test
    let out = cwyinvit().args(["run", "--family", "type2", "--n", "40", "--tol", "0.05", "--verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verify failed"));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = temp("run.conf");
    std::fs::write(&cfg, "# small run\nfamily = type1\nn = 30\nseed = 5\nthreads = 2\n").unwrap();
    let out = cwyinvit().args(["run", "--threads", "1", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("type1 n=30 backend=cwy_packed threads=1"), "{text}");
    let _ = std::fs::remove_file(&cfg);
}

#[test]
fn environment_sets_default_threads() {
    let out = cwyinvit().env("CWYINVIT_THREADS", "3").args(["run", "--n", "20"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("threads=3"));
    let out = cwyinvit().env("CWYINVIT_THREADS", "3").args(["run", "--n", "20", "--threads", "2"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("threads=2"));
}
