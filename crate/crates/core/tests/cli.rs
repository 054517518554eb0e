use std::process::Command;

fn airy4(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_airy4")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn spec_csv_schema() {
    let (code, out, _) = airy4(&["spec", "--n-max", "10", "--tol", "1e-8", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,parity,lambda,mu,c1,c2,gamma,residual");
    assert_eq!(lines.len(), 11);
    assert!(lines[1].starts_with("1,odd,0.97842694"));
    assert!(lines[2].starts_with("2,even,2.35819511"));
}

#[test]
fn output_is_deterministic() {
    let args = ["spec", "--n-max", "6", "--format", "json"];
    let (_, a, _) = airy4(&args);
    let (_, b, _) = airy4(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["meta"]["version"], airy4::VERSION);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn heat_scan_approaches_limit_monotonically() {
    let (code, out, _) = airy4(&["heat", "--n-max", "200", "--tscan", "0.05:0.4:0.05", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let limit = airy4::heat::trace_limit();
    let dist: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["scaled"].as_f64().unwrap() - limit).abs())
        .collect();
    assert_eq!(dist.len(), 8);
    assert!(dist.windows(2).all(|w| w[0] < w[1]), "{dist:?}");
}

#[test]
fn eig_samples_are_odd_for_even_index() {
    let (code, out, _) = airy4(&["eig", "--n", "2", "--grid", "-1.5:1.5:0.5"]);
    assert_eq!(code, 0);
    let psi: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for i in 0..psi.len() {
        assert!((psi[i] + psi[psi.len() - 1 - i]).abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(airy4(&["spec", "--tol", "0"]).0, 2);
    assert_eq!(airy4(&["eig", "--grid", "0:1:0.5"]).0, 2);
    let (code, _, err) = airy4(&["heat", "--n-max", "5", "--tscan", "0:1:0.5"]);
    assert_eq!(code, 1);
    assert!(err.contains("\"version\""), "{err}");
}

#[test]
fn verify_subset_reports_each_criterion() {
    let (code, out, err) = airy4(&["verify", "--only", "2,4,5", "--n-max", "1", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["passed"] == true && r["measured"].is_number()));
    assert_eq!(err.lines().filter(|l| l.contains("PASS")).count(), 3);
}
