use std::path::PathBuf;
use std::process::Command;

fn ffjac() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ffjac"))
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ffjac-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn gen_writes_field_files() {
    let dir = scratch_dir("gen");
    let out = ffjac()
        .args(["gen", "--method", "tang", "--p", "32771", "--n", "3", "--cf", "2", "--count", "5", "--seed", "7", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 5);
    let first = std::fs::read_to_string(dir.join("tang_p32771_n3_cf2_s7.json")).unwrap();
    let f = ffjac::field::FunctionField::from_json(&first).unwrap();
    assert_eq!(f.genus(), 4);

    let again = scratch_dir("gen2");
    let out = ffjac()
        .args(["gen", "--method", "tang", "--p", "32771", "--n", "3", "--cf", "2", "--count", "1", "--seed", "7", "--out"])
        .arg(&again)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(again.join("tang_p32771_n3_cf2_s7.json")).unwrap(), first);
    let _ = std::fs::remove_dir_all(dir);
    let _ = std::fs::remove_dir_all(again);
}

#[test]
fn reduce_zero_prints_r0() {
    let out = ffjac().arg("reduce").output().unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l == "r=0"), "{s}");
}

#[test]
fn selftest_quick_passes() {
    let out = ffjac().args(["selftest", "--level", "quick"]).output().unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{s}");
    assert!(s.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn bench_writes_dat_with_header() {
    let dir = scratch_dir("bench");
    let path = dir.join("fig1.dat");
    let out = ffjac()
        .args(["bench", "--preset", "fig1-small", "--chain-length", "3", "--seed", "4", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dat = std::fs::read_to_string(&path).unwrap();
    let mut lines = dat.lines();
    let comments: Vec<_> = lines.by_ref().take_while(|l| l.starts_with('#')).collect();
    assert!(comments.iter().any(|l| l.contains("seed 4")));
    let rows: Vec<Vec<f64>> = dat
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("genus"))
        .map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 9));
    assert!(dat.lines().any(|l| l.starts_with("genus linear_no_caching_milliseconds_per_addition")));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn usage_errors_exit_2() {
    for args in [vec!["bench", "--sweep", "colour=3"], vec!["bench"], vec!["frobnicate"], vec!["bench", "--preset", "nope"]] {
        let out = ffjac().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
