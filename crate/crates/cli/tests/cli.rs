use std::process::{Command, Output};

use serde_json::Value;

const ONE_DIM: [&str; 10] = ["--k0", "2", "--k1", "3", "--u0", "5", "--u1", "0.016666666666666666", "--q-half", "2"];
// k0 k1 u0 u1 = q^{-3/2}
const N1: [&str; 10] = ["--k0", "2", "--k1", "3", "--u0", "5", "--u1", "0.004166666666666667", "--q-half", "2"];
const GENERIC: [&str; 10] = ["--k0", "1.1+0.3i", "--k1", "0.9-0.2i", "--u0", "-1.05+0.1i", "--u1", "0.2+0.95i", "--q-half", "1.2+0.4i"];

fn daha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_daha")).args(args).output().expect("run daha")
}

fn with(params: &[&str], rest: &[&str]) -> Output {
    let mut v = params.to_vec();
    v.extend_from_slice(rest);
    daha(&v)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_reports() {
    let out = with(&GENERIC, &["classify"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["command"], "classify");
    assert_eq!(report["exit_code"], 0);
    assert_eq!(report["results"]["roots"].as_array().unwrap().len(), 0);
    for key in ["tool_version", "params", "command", "results", "residuals", "exit_code"] {
        assert!(report.get(key).is_some(), "{key}");
    }

    let out = with(&ONE_DIM, &["classify", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "T2[++,++;n=0] (1,0,0,0,0)");

    let out = daha(&["--k0", "1", "--k1", "1", "--u0", "1", "--u1", "1", "--q-half", "i", "classify"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("RootOfUnity(2)"));
}

#[test]
fn classify_explain_lists_near_misses() {
    // k0^2 = -q together with the n = 2 product equation
    let args = ["--k0", "0+2i", "--k1", "3", "--u0", "5", "--u1", "0-0.0010416666666666667i", "--q-half", "2"];
    let out = with(&args, &["classify", "--explain", "--n-max", "2"]);
    let report = json(&out);
    let near = report["results"]["near_misses"].as_array().unwrap();
    assert!(near.iter().any(|v| v["kind"] == "T2[++,++;n=2]"
        && v["verdict"]["failed"].as_array().unwrap().contains(&Value::from("neq.k0.m1"))));
}

#[test]
fn construct_one_dimensional() {
    let out = with(&ONE_DIM, &["construct", "--kind", "T2[++,++;n=0]"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["results"]["dim"], 1);
    for (name, v) in r["residuals"].as_object().unwrap() {
        assert!(v.as_f64().unwrap() < 1e-12, "{name}");
    }
    assert_eq!(r["results"]["matrices"]["T0"][0][0][0], 2.0);
    assert_eq!(r["results"]["ds"]["existence"], true);
}

#[test]
fn construct_three_dimensional() {
    let out = with(&N1, &["construct", "--kind", "T2[++,++;n=1]", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json(&out)["results"];
    assert_eq!(r["dim_vector"], "(3,1,1,1,1)");
    assert_eq!(r["commutant_dim"], 1);
    assert_eq!(r["rigidity_D"], 0);
    assert_eq!(r["spectrum_z"].as_array().unwrap().len(), 3);
}

#[test]
fn construct_off_stratum_and_bad_input() {
    assert_eq!(code(&with(&GENERIC, &["construct", "--kind", "T2[++,++;n=1]"])), 3);
    assert_eq!(code(&with(&N1, &["construct", "--kind", "IM[n=1]"])), 2);
    assert_eq!(code(&with(&N1, &["construct", "--kind", "T2[+;n=1]"])), 2);
    assert_eq!(code(&with(&N1, &["construct", "--kind", "T2[++,++;n=1]", "--signs", "+x"])), 2);
    assert_eq!(code(&with(&N1, &["--n-max", "21", "classify"])), 2);
    assert_eq!(code(&daha(&["classify"])), 2);
}

#[test]
fn spectrum_matches_rho() {
    let out = with(&N1, &["spectrum", "--kind", "T2[++,++;n=1]"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["results"];
    assert!(r["max_error"].as_f64().unwrap() < 1e-9);
    assert_eq!(r["rho"].as_array().unwrap().len(), 3);
}

#[test]
fn scan_grid_and_single_point() {
    let single = with(&ONE_DIM, &["scan", "--format", "csv"]);
    assert_eq!(code(&single), 0);
    let text = stdout(&single);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("idx,k0,k1,u0,u1,q_half,hits"));
    assert!(lines.next().unwrap().ends_with("\"T2[++,++;n=0]\""));

    // u1^2 = -q: the Type1F(1,+,1) stratum for every k0 on the segment
    let line = ["--k0", "2", "--k1", "3", "--u0", "5", "--u1", "0+2i", "--q-half", "2"];
    let out = with(&line, &["scan", "--grid", "k0=1.5:2.5+0.5i:11"]);
    let r = json(&out);
    let points = r["results"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 11);
    assert!(points.iter().all(|p| p["hits"] == serde_json::json!(["T1F[i=1,+;n=1]"])));

    // a swept parameter need not be given as a flag
    let out = daha(&["--k1", "3", "--u0", "5", "--u1", "0+2i", "--q-half", "2", "scan", "--grid", "k0=1.5:2.5:4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["results"]["points"].as_array().unwrap().len(), 4);
    assert_eq!(code(&daha(&["--k1", "3", "scan", "--grid", "k0=1.5:2.5:4"])), 2);

    assert_eq!(code(&with(&ONE_DIM, &["scan", "--grid", "k0=1:2"])), 2);
    assert_eq!(code(&with(&ONE_DIM, &["scan", "--grid", "z=1:2:3"])), 2);
}

#[test]
fn random_scan_is_generic() {
    let out = daha(&["--seed", "3", "--n-max", "3", "scan", "--random", "10000", "--jobs", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["results"]["total_hits"], 0);
}

#[test]
fn ds_check_round_trip() {
    let dir = std::env::temp_dir().join(format!("daha-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("rep.json");
    let path = file.to_str().unwrap();
    assert_eq!(code(&with(&N1, &["construct", "--kind", "T2[++,++;n=1]", "--out", path])), 0);
    let out = daha(&["ds-check", "--rep", path]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let r = json(&out);
    assert_eq!(r["results"]["ds"]["existence"], true);
    assert!(r["results"]["ds"]["rows"].as_array().unwrap().iter().all(|row| row["ok"] == true));

    // break the product relation
    let mut stored: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    stored["T1v"][0][0][0] = Value::from(7.0);
    std::fs::write(&file, stored.to_string()).unwrap();
    assert_eq!(code(&daha(&["ds-check", "--rep", path])), 4);
    assert_eq!(code(&daha(&["ds-check", "--rep", dir.join("missing.json").to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("daha-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# stratum point\nk0 = 2\nk1=3\nu0=5\nu1=0.016666666666666666\nq_half=2\nformat=text\n").unwrap();
    let out = daha(&["--config", cfg.to_str().unwrap(), "classify"]);
    assert_eq!(stdout(&out).trim(), "T2[++,++;n=0] (1,0,0,0,0)");
    let out = daha(&["--config", cfg.to_str().unwrap(), "--k0", "2.5", "classify"]);
    assert_eq!(stdout(&out).trim(), "no strict real root");
    std::fs::write(&cfg, "bogus=1\n").unwrap();
    assert_eq!(code(&daha(&["--config", cfg.to_str().unwrap(), "classify"])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_exit_codes() {
    let out = daha(&["selftest", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all properties passed"));

    let out = daha(&["selftest", "--inject-convention-flip", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    let first_failed = r["results"]["outcomes"].as_array().unwrap().iter().find(|o| o["passed"] == false).unwrap().clone();
    assert_eq!(first_failed["name"], "relation suite");

    let out = daha(&["selftest", "--tol", "0.5", "--format", "text"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("AmbiguousMatch"));
}

#[test]
fn identical_config_identical_bytes() {
    let a = with(&N1, &["construct", "--kind", "T2[++,++;n=1]"]);
    let b = with(&N1, &["construct", "--kind", "T2[++,++;n=1]", "--jobs", "8"]);
    assert_eq!(a.stdout, b.stdout);
}
