use std::process::Command;

fn kit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_petersson-kit"))
}

#[test]
fn verify_kloosterman_exits_zero() {
    let out = kit().args(["verify", "kloosterman", "--max-c", "60"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
    let csv = String::from_utf8_lossy(&out.stdout);
    assert!(csv.starts_with("name,passed,detail"));
    assert!(csv.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn experiment_csv_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("thm1.csv");
    let status = kit().args(["thm1", "--p", "3", "--N", "5", "--n-max", "4", "--out"]).arg(&path).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("n,k_n,window_ok,delta_mid,delta_rad,tail_bound,proxy,bound,pass,reason"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn petersson_prints_json() {
    let out = kit().args(["petersson", "--k", "12", "--N", "1", "--m", "1", "--n", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mid: f64 = v["value_mid"].as_str().map(|s| s.parse().unwrap()).or_else(|| v["value_mid"].as_f64()).unwrap();
    assert!((mid - 2.840287375167500).abs() < 1e-9);
}

#[test]
fn measures_moments() {
    let out = kit().args(["measures", "--measure", "p:3", "--what", "moment", "--max-degree", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).lines().count() >= 5);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kit().arg("frobnicate").status().unwrap().code(), Some(2));
    assert_eq!(kit().args(["petersson", "--k", "12"]).status().unwrap().code(), Some(2));
}
