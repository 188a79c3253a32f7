use std::path::Path;
use std::process::{Command, Output};

fn kcfrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcfrc")).args(args).env_remove("KCFRC_THREADS").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&kcfrc(&[])), 2);
    assert_eq!(code(&kcfrc(&["frobnicate"])), 2);
    assert_eq!(code(&kcfrc(&["check", "--robot", "hexapod"])), 2);
    assert_eq!(code(&kcfrc(&["bench", "--methods", "kcfrc_key,astar"])), 2);
    assert_eq!(code(&kcfrc(&["scaling", "--cases", "99"])), 2);
    assert_eq!(code(&kcfrc(&["check", "--format", "yaml"])), 2);
    assert_eq!(code(&kcfrc(&["check", "--resolution", "-0.05"])), 2);
    assert_eq!(code(&kcfrc(&["check", "--cell", "40", "40"])), 2);
}

#[test]
fn thread_cap_must_be_positive() {
    let out = Command::new(env!("CARGO_BIN_EXE_kcfrc")).args(["check"]).env("KCFRC_THREADS", "0").output().unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_kcfrc")).args(["check"]).env("KCFRC_THREADS", "1").output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn missing_scenario_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.bin");
    assert_eq!(code(&kcfrc(&["check", "--scenario", path(&missing)])), 1);
}

#[test]
fn generated_scenarios_load_back() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, file) in [("confined", "nested/confined.json"), ("u_clamp", "u.bin")] {
        let map = dir.path().join(file);
        let out = kcfrc(&["generate", "--kind", kind, "--seed", "3", "--out", path(&map)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(map.exists());
        let check = kcfrc(&["check", "--scenario", path(&map), "--format", "json"]);
        assert_eq!(code(&check), 0, "{}", String::from_utf8_lossy(&check.stderr));
        let v: serde_json::Value = serde_json::from_slice(&check.stdout).unwrap();
        assert!(v.get("reachable").is_some_and(|r| r.is_boolean()), "{v}");
    }
}

#[test]
fn bench_writes_one_csv_row_per_method() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = kcfrc(&[
        "bench", "--kind", "sparse", "--seed", "2", "--methods", "kcfrc_key,fec", "--subsample", "6", "--format", "csv",
        "--out", path(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3, "{text}");
    assert!(rows[1].starts_with("kcfrc_key") && rows[2].starts_with("fec"), "{text}");
}

#[test]
fn trajectory_csv_has_increasing_time() {
    let out = kcfrc(&["traj", "--kind", "sparse", "--seed", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("stage,t,x,y,z"));
    let mut last: Option<(String, f64)> = None;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5);
        let t: f64 = fields[1].parse().unwrap();
        if let Some((stage, prev)) = &last {
            if stage == fields[0] {
                assert!(t > *prev);
            }
        }
        last = Some((fields[0].to_string(), t));
    }
}

#[test]
fn scaling_report_ends_with_the_fit() {
    let out = kcfrc(&["scaling", "--cases", "100", "--seed", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("border_length,check_time_ms\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 101);
    assert!(text.lines().last().unwrap().starts_with("# fit"));
}
