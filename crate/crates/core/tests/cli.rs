//! End-to-end runs of the `stabmod` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn stabmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabmod")).args(args).env_remove("STABMOD_JOBS").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("stabmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cohomology_of_catalog_algebras() {
    let out = stabmod(&["cohomology", "--family", "K", "--n", "2", "--m", "2", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["report"]["total_rank"], 12);
    assert_eq!(v["report"]["poincare"]["one_var"], serde_json::json!([1, 3, 4, 3, 1]));

    let out = stabmod(&["cohomology", "--family", "E", "--n", "4", "--m", "4", "--level", "0", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["report"]["total_rank"], 80);

    let out = stabmod(&["cohomology", "--preset", "unit"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["report"]["total_rank"], 1);
}

#[test]
fn small_primes_warn() {
    let out = stabmod(&["cohomology", "--family", "K", "--n", "2", "--m", "2", "--prime", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2n+1"));
}

#[test]
fn i_adic_sequence_reaches_the_conjectured_rank() {
    let out = stabmod(&["ss", "--family", "K", "--n", "4", "--m", "4", "--filtration", "i-adic", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["report"]["e_infinity_total"], 3440);
    assert_eq!(v["report"]["converges"], true);
}

#[test]
fn ce_sequence_with_default_quotient_and_d1_table() {
    let out = stabmod(&["ss", "--family", "K", "--n", "2", "--m", "2", "--filtration", "ce", "--d1-table"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["report"]["e_infinity_total"], 12);
    // h(2,0), h(2,1) and their product each hit a product of h(1,*) classes.
    assert_eq!(v["report"]["d1_table"].as_array().unwrap().len(), 4);
    assert_eq!(
        v["report"]["sequence"]["pages"][0]["blocks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| b["d_rank"].as_u64().unwrap())
            .sum::<u64>(),
        2
    );
}

#[test]
fn conjecture_table() {
    let out = stabmod(&["conjecture", "--order", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let a: Vec<&str> = v["report"]["rows"].as_array().unwrap().iter().map(|r| r["a"].as_str().unwrap()).collect();
    assert_eq!(a, ["1", "1", "3", "19", "215", "4016", "119092", "5503205", "393154477"]);
    let out = stabmod(&["--format", "table", "conjecture", "--order", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().eq(["4", "3440", "215"])));
}

#[test]
fn cobar_report_is_consistent_with_exit_status() {
    for extra in [&[][..], &["--assume-coproduct-t4"][..]] {
        let mut args = vec!["cobar", "--prime", "7"];
        args.extend_from_slice(extra);
        let out = stabmod(&args);
        let v = json_of(&out);
        let passed = v["passed"].as_bool().unwrap();
        assert_eq!(out.status.code(), Some(if passed { 0 } else { 1 }));
        let checks = v["report"]["checks"].as_array().unwrap();
        let zeta = checks.iter().find(|c| c["name"] == "zeta4 lift").unwrap();
        assert_eq!(zeta["outcome"], if extra.is_empty() { "conditional" } else { "pass" });
    }
}

#[test]
fn emitted_presentations_round_trip() {
    let path = scratch("k33.json");
    let out = stabmod(&["emit", "--family", "K", "--n", "3", "--m", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = stabmod(&["cohomology", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["report"]["total_rank"], 152);
    // Emitting is canonical: a second emit is byte-identical.
    let again = stabmod(&["emit", "--family", "K", "--n", "3", "--m", "3"]);
    assert_eq!(std::fs::read(&path).unwrap(), again.stdout);
}

#[test]
fn invalid_presentations_exit_2() {
    let path = scratch("bad.json");
    for text in [
        "{ not json",
        r#"{"prime": 9, "internal_modulus": 1, "action_order": 1, "generators": []}"#,
        r#"{"prime": 7, "internal_modulus": 1, "action_order": 1,
            "generators": [{"name": "x", "coh": 1, "rav": 0, "internal": 0, "arith": 0}],
            "differential": {"x": [{"coeff": 1, "monomial": ["y"]}]}}"#,
    ] {
        std::fs::write(&path, text).unwrap();
        let out = stabmod(&["cohomology", "--input", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn configuration_errors_exit_3() {
    for args in [
        &["cohomology", "--family", "Q", "--n", "1", "--m", "1"][..],
        &["cohomology", "--family", "K", "--n", "2", "--m", "2", "--prime", "3"][..],
        &["cohomology", "--family", "K", "--n", "2"][..],
        &["cohomology", "--family", "K", "--n", "2", "--m", "2", "--preset", "unit"][..],
        &["cohomology", "--input", "/nonexistent/presentation.json"][..],
        &["--jobs", "0", "conjecture"][..],
        &["ss", "--family", "E", "--n", "4", "--m", "4", "--filtration", "i-adic"][..],
        &["no-such-command"][..],
    ] {
        assert_eq!(stabmod(args).status.code(), Some(3), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_stabmod"))
        .args(["conjecture", "--order", "3"])
        .env("STABMOD_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn jobs_fall_back_to_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_stabmod"))
        .args(["cohomology", "--family", "K", "--n", "2", "--m", "2"])
        .env("STABMOD_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, stabmod(&["cohomology", "--family", "K", "--n", "2", "--m", "2"]).stdout);
}

#[test]
fn table_format() {
    let out = stabmod(&["--format", "table", "cohomology", "--family", "K", "--n", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("total rank  4"));
    assert!(text.contains("one-variable  1 2 1"));
}
