use std::process::{Command, Output};

fn sga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sga")).args(args).output().expect("run sga")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_json_has_every_potential() {
    let o = sga(&["list", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
    assert!(stdout(&o).contains("\"id\": \"rosen_morse\""));
}

#[test]
fn eval_coulomb() {
    let o = sga(&["eval", "--potential", "coulomb3d", "--params", "Ze2=1,lambda=0", "--mu", "0.5,4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5.0000000000000000e-1 -2.0000000000000000e0\n4.0000000000000000e0 -2.5000000000000000e-1\n");
}

#[test]
fn verify_is_byte_deterministic() {
    let args = ["verify", "--potential", "morse", "--params", "alpha=1,A=3,B=1", "--n", "400", "--k", "3"];
    let a = sga(&args);
    let b = sga(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["schema"], "sga-report/1");
    assert_eq!(v["numeric_E"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_writes_csv_and_export_converts_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let o = sga(&[
        "verify", "--potential", "morse", "--params", "alpha=1,A=3,B=1", "--n", "400", "--k", "3", "--out",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = sga(&["export", "--report", json.to_str().unwrap(), "--format", "csv", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# meta: "));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn curve_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = sga(&[
        "export", "--potential", "coulomb3d", "--params", "Ze2=1,lambda=0", "--grid", "0.5,10,32", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert!((v[2] + 1.0 / v[1]).abs() < 1e-15);
    }
}

#[test]
fn spectrum_with_ordering_and_mu_window() {
    let o = sga(&[
        "spectrum", "--potential", "coulomb3d", "--params", "Ze2=1,lambda=0", "--profile", "exponential:0.5",
        "--ordering", "-0.5,0,-0.5", "--mu-window", "0.0001,200", "--n", "1000", "--k", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e0 = v["eigenvalues"][0].as_f64().unwrap();
    assert!((e0 + 0.5).abs() < 1e-3, "{e0}");
}

#[test]
fn algebra_check_table() {
    let o = sga(&["algebra-check", "--q", "1", "--delta", "2", "--window", "0.2,2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r["value"].as_f64().unwrap() < 1e-8));
}

#[test]
fn exit_codes() {
    // validation
    let o = sga(&["verify", "--potential", "morse", "--params", "alpha=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing parameter"));
    // μ-image mismatch is a configuration error
    let o = sga(&["verify", "--potential", "morse", "--params", "alpha=1,A=3,B=1", "--profile", "exponential:1"]);
    assert_eq!(o.status.code(), Some(2));
    // unwritable output
    let o = sga(&[
        "verify", "--potential", "morse", "--params", "alpha=1,A=3,B=1", "--n", "200", "--k", "2", "--out",
        "/nonexistent/dir/r.json",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = sga(&["eval", "--potential", "nope", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tabulated_profile_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("m.csv");
    let mut s = String::from("x,m\n");
    for i in 0..=400 {
        s.push_str(&format!("{},1\n", -10.0 + 50.0 * i as f64 / 400.0));
    }
    std::fs::write(&table, s).unwrap();
    let o = sga(&[
        "verify", "--potential", "morse", "--params", "alpha=1,A=3,B=1", "--profile", "tabulated", "--mass-table",
        table.to_str().unwrap(), "--anchor", "0,0", "--n", "800", "--k", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
