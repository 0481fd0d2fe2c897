use std::process::Command;

use polybound::cli::{main_with_args, EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["polybound"];
    full.extend_from_slice(args);
    let code = main_with_args(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const SMALL: [&str; 4] = ["--points", "40", "--random-points", "10"];

#[test]
fn eval_polygamma_prints_zeta_two() {
    let (code, out, _) = run(&["eval", "--fn", "polygamma", "--n", "1", "--x", "1", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("1.6449340668"), "{out}");
    assert!(out.contains(" ± "));
}

#[test]
fn eval_bounds_at_a_point() {
    let (code, out, _) = run(&["eval", "--bounds", "B03", "--n", "2", "--x", "0.5"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = doc["result"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["status"] == "certified"));
}

#[test]
fn verify_embeds_version_and_config() {
    let mut args = vec!["verify", "--bounds", "B01,B02"];
    args.extend(SMALL);
    let (code, out, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["tool"], "polybound");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["bounds"], "B01,B02");
    assert_eq!(doc["config"]["points"], 40);
    assert_eq!(doc["result"]["summary"]["violated"], 0);
}

#[test]
fn verify_counterexample_exits_two() {
    let (code, out, _) = run(&[
        "verify", "--bounds", "B06", "--exploratory", "--n", "40", "--x-min", "1e-3", "--x-max", "0.1",
        "--points", "40", "--random-points", "0",
    ]);
    assert_eq!(code, EXIT_COUNTEREXAMPLE);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["summary"]["cases_with_counterexamples"][0], "B06[n=40]*");
}

#[test]
fn outputs_are_byte_identical() {
    let mut args = vec!["verify", "--bounds", "B05", "--n-max", "4", "--format", "csv", "--seed", "9"];
    args.extend(SMALL);
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.1, b.1);
    assert!(a.1.starts_with("# polybound "));
    assert!(a.1.contains("\nbound_id,n,k,x,lhs,rhs,margin,certified\n"));
    let search = ["search", "--points", "12", "--random-points", "0"];
    assert_eq!(run(&search).1, run(&search).1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["verify", "--bounds", "B99"]).0, EXIT_ERROR);
    assert_eq!(run(&["frobnicate"]).0, EXIT_ERROR);
    assert_eq!(run(&["verify", "--x-min", "5", "--x-max", "1"]).0, EXIT_ERROR);
    assert_eq!(run(&["eval", "--fn", "polygamma", "--x", "1"]).0, EXIT_ERROR);
    assert_eq!(run(&["threshold", "--n-cap", "2"]).0, EXIT_ERROR);
    let (code, _, err) = run(&["verify", "--bounds", "B01", "--out", "/nonexistent-dir/report.json"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("/nonexistent-dir/report.json"));
}

#[test]
fn out_file_and_csv_curve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["search", "--format", "csv", "--points", "5", "--random-points", "0", "--out", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "x,q_crit");
    assert_eq!(rows.len(), 6);
}

#[test]
fn report_and_threshold_commands() {
    let (code, out, _) = run(&["report", "--points", "20", "--random-points", "0", "--n-max", "4", "--k-max", "3"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"]["chain"]["violated_count"], 0);
    assert_eq!(doc["result"]["bounds"].as_array().unwrap().len(), 21);

    let (code, out, err) = run(&["threshold", "--x-max", "1", "--points", "200", "--random-points", "0"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["result"]["smallest_failing_n"].as_u64().unwrap() > 2);
    assert!(err.contains("smallest failing n"));
}

#[test]
fn binary_honours_digits_environment() {
    let bin = env!("CARGO_BIN_EXE_polybound");
    let run_bin = |digits: &str| {
        let o = Command::new(bin)
            .args(["eval", "--fn", "digamma", "--x", "1"])
            .env("POLYBOUND_DIGITS", digits)
            .output()
            .unwrap();
        assert!(o.status.success());
        let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        (doc["config"]["digits"].as_u64().unwrap(), doc["result"]["value"].as_str().unwrap().to_string())
    };
    let (d20, v20) = run_bin("20");
    let (d60, v60) = run_bin("60");
    assert_eq!((d20, d60), (20, 60));
    assert!(v60.len() > v20.len());
    assert!(v60.starts_with("-5.772156649015328606"));
    let o = Command::new(bin).arg("verify").arg("--bounds").arg("nope").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
