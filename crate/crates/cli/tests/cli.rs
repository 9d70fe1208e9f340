use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn cmkit(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cmkit"));
    cmd.args(args).env_remove("CMKIT_CACHE");
    if let Some(c) = cache {
        cmd.env("CMKIT_CACHE", c);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_cm_data() {
    let out = cmkit(&["classify", "--curve", path(&data("e0.json"))], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["trace"], "2");
    assert_eq!(v["ordinary"], true);
    assert_eq!(v["cm_m"], "-1");
    assert_eq!(v["conductor"], "2");
    assert_eq!(v["alpha"]["x"], "1");
    assert_eq!(v["alpha"]["y"], "2");
}

#[test]
fn exit_codes_separate_domain_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let singular = dir.path().join("singular.json");
    fs::write(&singular, r#"{"p": "5", "e": "1", "model": "short-weierstrass", "A": "0", "B": "0"}"#).unwrap();
    let out = cmkit(&["classify", "--curve", path(&singular)], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "Singular");

    let extra = dir.path().join("extra.json");
    fs::write(&extra, r#"{"p": "5", "e": "1", "model": "short-weierstrass", "A": "1", "B": "0", "x": 1}"#).unwrap();
    let out = cmkit(&["classify", "--curve", path(&extra)], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["detail"].as_str().unwrap().contains("\"x\""));

    let missing = dir.path().join("absent.json");
    assert_eq!(cmkit(&["classify", "--curve", path(&missing)], None).status.code(), Some(1));

    assert_eq!(cmkit(&["classify"], None).status.code(), Some(2));
    assert_eq!(cmkit(&["no-such-command"], None).status.code(), Some(2));
    assert_eq!(cmkit(&["decompose", "--g", "two"], None).status.code(), Some(2));
}

#[test]
fn supersingular_curves_classify_but_fail_downstream() {
    let dir = tempfile::tempdir().unwrap();
    let ss = dir.path().join("ss.json");
    fs::write(&ss, r#"{"p": "7", "e": "1", "model": "short-weierstrass", "A": "1", "B": "0"}"#).unwrap();
    let out = cmkit(&["classify", "--curve", path(&ss)], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["classification"], "supersingular");
    let out = cmkit(&["weil-verify", "--curve", path(&ss)], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "NotOrdinary");
}

#[test]
fn rank_commands() {
    let e0 = data("e0.json");
    let line = data("p1_f5.json");
    let bb = |base: &Path, power: &str, codim: &str| {
        let out = cmkit(
            &["bb-rank", "--fiber", path(&e0), "--base", path(base), "--power", power, "--codim", codim],
            None,
        );
        assert_eq!(out.status.code(), Some(0));
        json(&out)["bb_rank"].as_str().unwrap().to_string()
    };
    assert_eq!(bb(&line, "1", "1"), "0");
    assert_eq!(bb(&e0, "1", "1"), "2");
    assert_eq!(bb(&e0, "2", "2"), "4");

    let out = cmkit(&["picard", "--curve", path(&e0), "--power", "3"], None);
    assert_eq!(json(&out)["picard"], "9");
    let out = cmkit(&["tate-rank", "--curve", path(&e0), "--power", "2", "--codim", "1"], None);
    assert_eq!(json(&out)["tate_dim"], "4");
}

#[test]
fn lcheck_detects_a_corrupted_base() {
    let e0 = data("e0.json");
    let line = data("p1_f5.json");
    let base = ["lcheck", "--fiber", path(&e0), "--base", path(&line), "--power", "1", "--codim", "1"];
    let out = cmkit(&base, None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    let mut args = base.to_vec();
    args.extend(["--override-p1", "1,-3,5"]);
    let out = cmkit(&args, None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn match_recovers_the_example_permutation() {
    let out = cmkit(&["match", "--input", path(&data("match_example.json"))], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matched"], true);
    assert_eq!(v["permutation"], serde_json::json!(["1", "2", "0"]));
}

#[test]
fn cache_is_used_and_survives_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("counts.jsonl");
    let e0 = data("e0.json");
    let args = ["zeta", "--curve", path(&e0), "--power", "2", "--counts", "4"];
    let first = cmkit(&args, Some(&cache));
    assert_eq!(first.status.code(), Some(0));
    let lines = fs::read_to_string(&cache).unwrap().lines().count();
    assert!(lines > 0);

    let again = cmkit(&args, Some(&cache));
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), lines);

    let mut text = fs::read_to_string(&cache).unwrap();
    text.push_str("not json\n");
    fs::write(&cache, text).unwrap();
    let corrupt = cmkit(&args, Some(&cache));
    assert_eq!(corrupt.status.code(), Some(0));
    assert_eq!(corrupt.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("warning"));

    // The --cache flag takes precedence over the environment.
    let flagged = dir.path().join("flag.jsonl");
    let mut with_flag = vec!["--cache", path(&flagged)];
    with_flag.extend(args);
    let out = cmkit(&with_flag, Some(&cache));
    assert_eq!(out.status.code(), Some(0));
    assert!(flagged.exists());
}

#[test]
fn decompose_output_round_trips_through_the_summand_count() {
    for (g, level) in [(3, "q"), (3, "f"), (4, "q")] {
        let out = cmkit(&["decompose", "--g", &g.to_string(), "--level", level], None);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        let total: u64 = v["summands"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["multiplicity"].as_str().unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(v["total_multiplicity"].as_str().unwrap().parse::<u64>().unwrap(), total);
        assert_eq!(v["dimension"].as_str().unwrap(), (1u64 << g).to_string());
    }
}
