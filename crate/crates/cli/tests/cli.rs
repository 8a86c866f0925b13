use std::fs;
use std::process::{Command, Output};

fn nss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nss")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn explore_depth_one() {
    let out = nss(&["explore", "--rank", "2", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let g: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(g["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(g["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn explore_dot_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dot");
    let b = dir.path().join("b.dot");
    for (path, threads) in [(&a, "1"), (&b, "2")] {
        let out = nss(&[
            "--threads",
            threads,
            "explore",
            "--rank",
            "2",
            "--depth",
            "2",
            "--format",
            "dot",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let dot = fs::read_to_string(&a).unwrap();
    assert_eq!(dot, fs::read_to_string(&b).unwrap());
    // 1 + 1 + 1 + 1 + 2 + 1 nodes of height <= 2
    assert_eq!(dot.matches("[label=\"").count() - dot.matches(" -> ").count(), 7);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nss(&["explore", "--rank", "1"]).status.code(), Some(2));
    assert_eq!(nss(&["explore", "--rank", "2", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(nss(&["oracle-check", "--rank", "2", "--mode", "random"]).status.code(), Some(2));
    assert_eq!(nss(&["oracle-check", "--rank", "2", "--seed", "3"]).status.code(), Some(2));
    assert_eq!(nss(&["eval", "--rank", "2", "--word", "0,5", "--diagram", "x.json"]).status.code(), Some(2));
    assert_eq!(nss(&["kostant", "--rank", "3", "--beta", "1,1"]).status.code(), Some(2));
    let out = nss(&["explore", "--rank", "2", "--output", "/nonexistent-dir/g.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_values() {
    let dir = tempfile::tempdir().unwrap();
    let box0 = dir.path().join("box.json");
    fs::write(&box0, r#"{"kind":"left-black","deviations":[[0,"white"],[-1,"black"]]}"#).unwrap();
    let path = box0.to_str().unwrap();
    let out = nss(&["eval", "--rank", "2", "--diagram", path]);
    assert_eq!(stdout(&out).trim(), "0");
    let out = nss(&["eval", "--rank", "2", "--word", "0", "--diagram", path]);
    assert_eq!(stdout(&out).trim(), "-1");

    let lambda0 = dir.path().join("lambda.json");
    fs::write(&lambda0, r#"{"kind":"right-black","deviations":[]}"#).unwrap();
    let out = nss(&["eval", "--rank", "2", "--word", "0", "--diagram", lambda0.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "-1");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(nss(&["eval", "--rank", "2", "--diagram", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_catches_corruption() {
    let out = nss(&["verify", "--rank", "2", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
    assert_eq!(nss(&["verify", "--rank", "3", "--depth", "3"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let out = nss(&["explore", "--rank", "2", "--depth", "3", "--output", graph.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(nss(&["verify", "--graph", graph.to_str().unwrap()]).status.code(), Some(0));

    let mut g: serde_json::Value = serde_json::from_str(&fs::read_to_string(&graph).unwrap()).unwrap();
    g["edges"].as_array_mut().unwrap().pop();
    fs::write(&graph, g.to_string()).unwrap();
    let out = nss(&["verify", "--graph", graph.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation"));
}

#[test]
fn oracle_check() {
    assert_eq!(nss(&["oracle-check", "--rank", "2"]).status.code(), Some(0));
    assert_eq!(nss(&["oracle-check", "--rank", "2", "--word", "0"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out =
        nss(&["oracle-check", "--rank", "2", "--word", "0,1,0,1", "--output", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["pass"], serde_json::json!(true));
    assert_eq!(r["word"], serde_json::json!([0, 1, 0, 1]));
    assert_eq!(r["results"].as_array().unwrap().len(), 60);
    let out = nss(&["oracle-check", "--rank", "3", "--word", "2,0", "--mode", "random", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn kostant_values() {
    assert_eq!(stdout(&nss(&["kostant", "--rank", "2", "--beta", "1,1"])).trim(), "2");
    assert_eq!(stdout(&nss(&["kostant", "--rank", "2", "--beta", "1,0"])).trim(), "1");
    assert_eq!(stdout(&nss(&["kostant", "--rank", "3", "--beta", "1,1,1"])).trim(), "6");
}
