use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_confluence"));
    c.current_dir(env!("CARGO_MANIFEST_DIR"));
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    let v = run(&["--version"]);
    assert_eq!(code(&v), 0);
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["tau", "--bogus"])), 1);
    assert_eq!(code(&run(&["tau", "--kind", "VII_at_0"])), 1);
    assert_eq!(code(&run(&["degenerate", "--scheme", "rank2to5"])), 1);
    assert_eq!(code(&run(&["vo-solve", "--params", "does/not/exist.json"])), 1);
}

#[test]
fn unknown_keys_are_rejected_with_position() {
    let path = scratch("bad_key.json");
    std::fs::write(&path, "{\n  \"theta0\": \"1/3\",\n  \"thetat\": \"2/7\",\n  \"theta1\": \"-3/5\",\n  \"thetainf\": \"1/4\",\n  \"sigma\": \"2/9\",\n  \"theta_t\": \"1\"\n}\n").unwrap();
    let o = run(&["blocks-regular", "--params", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown field") && err.contains(":7:"), "{err}");
}

#[test]
fn report_carries_version_and_resolved_config() {
    let o = run(&["blocks-regular", "--order", "3", "--method", "agt"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["tool"], "confluence");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["command"], "blocks-regular");
    assert_eq!(r["config"]["order"], 3);
    assert_eq!(r["config"]["method"], "agt");
    assert_eq!(r["config"]["params"]["sigma"], "2/9");
    assert_eq!(r["config"]["digits"], 50);
    assert_eq!(r["result"]["coefficients"].as_array().unwrap().len(), 4);
}

#[test]
fn every_subcommand_runs_on_its_samples() {
    let cases: &[&[&str]] = &[
        &["blocks-regular"],
        &["blocks-irregular"],
        &["blocks-irregular", "--params", "samples/irregular_V_at_infty.json", "--mode", "-1", "--order", "3"],
        &["vo-solve", "--params", "samples/vo_regular.json"],
        &["vo-solve", "--params", "samples/vo_irregular.json"],
        &["degenerate", "--scheme", "rank0to1", "--k", "2"],
        &["degenerate", "--scheme", "rank1to2", "--k", "1", "--params", "samples/degenerate_rank1to2.json"],
        &["agt-crosscheck", "--order", "3"],
        &["tau", "--kind", "VI_at_0", "--order", "3"],
        &["tau", "--kind", "VI_at_infty", "--order", "3", "--eval", "t=20"],
        &["tau", "--kind", "IV_at_infty", "--order", "2"],
        &["residual", "--kind", "VI_at_0", "--nmax", "1", "--order", "4"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let r = json(&o);
        assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn verification_failures_exit_two() {
    let path = scratch("spoiled.json");
    std::fs::write(&path, r#"{"charges": ["1/3", "2/5"], "beta": "3/7", "delta": "1/4", "rho": "1/6", "a_shift": "1"}"#).unwrap();
    let o = run(&["degenerate", "--scheme", "rank0to1", "--k", "1", "--params", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "negative_valuation");

    let o = run(&["residual", "--kind", "VI_at_0", "--factor", "0.01"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "fail");
}

#[test]
fn asymptotic_series_refused_past_smallest_term() {
    let o = run(&["tau", "--kind", "V_at_infty", "--order", "4", "--eval", "s=2i"]);
    let r = json(&o);
    let e = &r["result"]["evaluations"][0];
    assert_eq!(e["truncation"]["past_optimal"], true);
    assert_eq!(e["status"], "refused");
    let forced = json(&run(&["tau", "--kind", "V_at_infty", "--order", "4", "--eval", "s=2i", "--force"]));
    assert_eq!(forced["result"]["evaluations"][0]["status"], "ok");
}

#[test]
fn output_identical_across_threads_and_runs() {
    let args = ["tau", "--kind", "VI_at_0", "--nmax", "2", "--order", "4", "--digits", "60"];
    let reference = run(&[&args[..], &["--threads", "1"]].concat()).stdout;
    for threads in ["1", "2", "4"] {
        let o = run(&[&args[..], &["--threads", threads]].concat());
        assert_eq!(o.stdout, reference, "threads = {threads}");
    }
    let a = run(&["agt-crosscheck", "--seed", "7", "--threads", "1"]).stdout;
    let b = run(&["agt-crosscheck", "--seed", "7", "--threads", "3"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn csv_and_out_files() {
    let (out, csv) = (scratch("block.json"), scratch("block.csv"));
    let o = run(&["blocks-regular", "--order", "2", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let mut rd = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["k", "coefficient"]);
    let rows: Vec<_> = rd.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][1], r["result"]["coefficients"][1]);
}
