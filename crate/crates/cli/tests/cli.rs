use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buchsbaum-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("buchsbaum-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn check_skew_lines() {
    let o = lab(&["check", data("skew.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    for line in ["quasi-B: yes", "arith-B: yes", "reg: 2", "aCM: no", "e(X): -2"] {
        assert!(s.contains(line), "{line} missing in\n{s}");
    }
}

#[test]
fn golden_expectations_hold() {
    for f in ["skew.ideal", "cubic.ideal", "quartic.ideal", "ci23.ideal", "double_line.ideal"] {
        let o = lab(&["check", data(f).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn failed_expectation_exits_4() {
    let p = write_tmp("wrong.ideal", "ring p 32003 vars x0 x1 x2 x3\nexpect acm yes\nideal\nx0*x2\nx0*x3\nx1*x2\nx1*x3\n");
    let o = lab(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn omega_expand_recovers_the_betti_table() {
    let o = lab(&["omega", "--expand", "--json", data("skew.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "buchsbaum-lab/1");
    assert_eq!(v["result"]["cone"]["minimal"], serde_json::json!([[0, 2, 4], [1, 3, 4], [2, 4, 1]]));
    assert_eq!(v["result"]["resolution"]["omega"], serde_json::json!([[1, 0, 1]]));
}

#[test]
fn json_output_is_deterministic() {
    let f = data("quartic.ideal");
    for cmd in ["check", "omega", "hyperplane"] {
        let a = lab(&[cmd, "--json", "--seed", "5", f.to_str().unwrap()]);
        let b = lab(&[cmd, "--json", "--seed", "5", f.to_str().unwrap()]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn parse_errors_exit_3_with_position() {
    let p = write_tmp("bad.ideal", "ring p 32003 vars x y z\nideal\nx*y + \n");
    let o = lab(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let p = write_tmp("inhom.ideal", "ring p 32003 vars x y z\nideal\nx^2 + y\n");
    let o = lab(&["check", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["exit_code"], 3);
    assert!(v["error"]["message"].as_str().unwrap().contains("not homogeneous"));

    let p = write_tmp("prime.ideal", "ring p 32004 vars x y\nideal\nx\n");
    assert_eq!(lab(&["betti", p.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn empty_ideal_and_missing_file_exit_2() {
    let p = write_tmp("empty.ideal", "ring p 32003 vars x0 x1 x2\nideal\n");
    assert_eq!(lab(&["check", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lab(&["check", "/nonexistent/file.ideal"]).status.code(), Some(2));
}

#[test]
fn weak_omega_rejects_non_quasi_buchsbaum_input() {
    let o = lab(&["weak-omega", data("double_line.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not quasi-Buchsbaum"));
}

#[test]
fn cohomology_window_accepts_negative_bounds() {
    let o = lab(&["cohomology", "--json", "--window", "-3:2", data("skew.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["window"], serde_json::json!([-3, 2]));
    let rows = v["result"]["table"]["rows"].as_array().unwrap();
    // H^1 is a single copy of K in degree 0; H^2 runs off to minus infinity.
    assert_eq!(rows[1]["window_limited"], false);
    assert_eq!(rows[2]["window_limited"], true);
}

#[test]
fn qpres_and_hyperplane_run() {
    let o = lab(&["qpres", "--json", data("skew.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["q"], 1);
    assert_eq!(v["result"]["minimal"], true);
    let o = lab(&["hyperplane", "--json", data("skew.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["betti"], serde_json::json!([[0, 1, 1], [0, 2, 1], [1, 3, 1]]));
}

#[test]
fn surface_lift_reports_the_obstruction() {
    let o = lab(&["surface-lift", data("b115.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "not arithmetically Buchsbaum: obstruction Hom(Ω^3(\u{2212}1), O(\u{2212}5)) = 0");
    let o = lab(&["surface-lift", data("ab_surface.ideal").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("arithmetically Buchsbaum"));
}

#[test]
fn construct_is_seed_deterministic() {
    let f = data("skew.json");
    let a = lab(&["construct", f.to_str().unwrap()]);
    let b = lab(&["construct", f.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let p = write_tmp("constructed.ideal", &stdout(&a));
    let o = lab(&["check", p.to_str().unwrap()]);
    assert!(stdout(&o).contains("arith-B: yes"));
    let bad = write_tmp("bad.json", "{\"n\":3,");
    assert_eq!(lab(&["construct", bad.to_str().unwrap()]).status.code(), Some(3));
}
