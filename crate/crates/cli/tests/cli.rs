use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyclust"))
        .args(args)
        .env_remove("POLYCLUST_CATALOG_DIR")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // commands that fail early may close stdin before reading it
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn construct(spec: &str) -> String {
    let o = run(&["construct", "--spec", spec], "");
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn count_c4() {
    let o = run(&["count", "--kind", "is"], "Cl\n");
    assert_eq!(o.status.code(), Some(0));
    let v = json_lines(&o);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["coeffs"], serde_json::json!(["1", "4", "2"]));
    assert_eq!(v[0]["kind"], "is");
}

#[test]
fn construct_heawood() {
    let text = construct("heawood");
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let g = polyclust_core::graph6::parse_graph6(lines[0].as_bytes()).unwrap();
    assert_eq!((g.n(), g.edge_count()), (14, 21));
}

#[test]
fn construct_generated_corpus() {
    let o = run(&["construct", "--regular", "14", "--degree", "3", "--girth-min", "5"], "");
    assert_eq!(stdout(&o).lines().count(), 9);
    let o = run(&["construct", "--regular", "10", "--degree", "3", "--emit", "json"], "");
    assert_eq!(json_lines(&o).len(), 19);
}

#[test]
fn verify_empty_input() {
    let o = run(&["verify", "--ref", "kdd(3)"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let summary: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["summary"]["graphs"], 0);
}

#[test]
fn verify_alarms_exit_one() {
    // K_{3,3} unions maximise i_k, so asking for minimisation must alarm.
    let corpus = run(&["construct", "--regular", "12", "--degree", "3"], "");
    let input = stdout(&corpus);
    let ok = run(&["verify", "--ref", "kdd(3)", "--jobs", "2"], &input);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["verify", "--ref", "kdd(3)", "--direction", "min"], &input);
    assert_eq!(bad.status.code(), Some(1));
    // output order follows input order regardless of the worker count
    let seq = run(&["verify", "--ref", "kdd(3)", "--jobs", "1"], &input);
    assert_eq!(ok.stdout, seq.stdout);
    let idx: Vec<_> = json_lines(&ok).iter().map(|v| v["index"].as_u64().unwrap()).collect();
    assert_eq!(idx, (0..idx.len() as u64).collect::<Vec<_>>());
}

#[test]
fn exit_codes_for_bad_usage_and_input() {
    assert_eq!(run(&["count"], "not!graph6\n").status.code(), Some(3));
    assert_eq!(run(&["verify", "--ref", "wheel(5)"], "").status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(run(&["certify", "--ref", "kdd(3)", "--k", "5..2"], "").status.code(), Some(2));
    assert_eq!(run(&["--bits", "4", "count"], "Cl\n").status.code(), Some(2));
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["construct", "count", "census", "expand", "certify", "mdcert", "verify"] {
        let o = run(&[sub, "--help"], "");
        assert_eq!(o.status.code(), Some(0), "{sub}");
        let text = stdout(&o);
        assert!(text.contains("--jobs") && text.contains("--bits"), "{sub}");
    }
}

#[test]
fn census_csv() {
    let o = run(&["census", "--pattern", "cycle(4),edge"], &construct("kdd(3)"));
    let text = stdout(&o);
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows[0], "graph_id,F_id,hom,inj,sub,t_density_num,t_density_den");
    // K_{3,3} has 9 four-cycles (72 injective images) and 9 edges.
    let c4: Vec<_> = rows[1].split(',').collect();
    assert_eq!(&c4[..2], &["1", "cycle(4)"]);
    assert_eq!(&c4[3..5], &["72", "9"]);
    // hom into the looped graph: 18 ordered adjacent pairs plus 6 loops
    assert_eq!(rows[2], "1,edge,24,18,9,2,3");
}

#[test]
fn certify_on_large_unions() {
    let petersen = construct("petersen");
    let o = run(
        &["certify", "--ref", "kdd(3)", "--k", "4", "--t", "5", "--copies", "3000000000000"],
        &petersen,
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json_lines(&o);
    assert_eq!(v[0]["verdict"], "CERTIFIED_STRICT");
    let lower: f64 = v[0]["lower_bound_log_ratio"].as_str().unwrap().parse().unwrap();
    assert!(lower > 0.0);
}

#[test]
fn certify_refuses_divergent_regime() {
    let o = run(&["certify", "--ref", "cycle(4)", "--k", "2", "--t", "3"], &construct("cycle(8)"));
    assert_eq!(o.status.code(), Some(4));
    let v = json_lines(&o);
    assert_eq!(v[0]["error"], "DIVERGENT_REGIME");
}

#[test]
fn expand_reports_exact_xi() {
    let o = run(&["expand", "--k", "4", "--t", "3"], &construct("petersen"));
    let v = json_lines(&o);
    // exact values are reported even where the expansion is refused;
    // the Petersen graph has five independent 4-sets
    assert_eq!(v[0]["i_k"], "5");
    assert_eq!(v[0]["truncation"]["error"], "DIVERGENT_REGIME");
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn mdcert_modes() {
    let kdd = construct("kdd(3)");
    let o = run(&["mdcert", "--lambda", "1/500000"], &kdd);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["verdict"], "CERTIFIED_STRICT");
    let o = run(&["mdcert", "--lambda", "1/2000"], &kdd);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json_lines(&o)[0]["error"], "PRECONDITION");
    let o = run(&["mdcert", "--lambda", "1", "--mode", "exact"], &construct("clique(4)"));
    assert_eq!(json_lines(&o)[0]["verdict"], "CERTIFIED_NONSTRICT");
    assert_eq!(run(&["mdcert", "--lambda", "1/0"], &kdd).status.code(), Some(2));
}

#[test]
fn config_file_and_catalog_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("polyclust.toml");
    std::fs::write(&cfg, format!("bits = 96\ncatalog_dir = {:?}\n", dir.path().join("cache"))).unwrap();
    let args = ["--config", cfg.to_str().unwrap(), "expand", "--k", "3", "--t", "3"];
    let first = run(&args, &construct("petersen"));
    assert!(dir.path().join("cache").join("catalog-j3.txt").exists());
    let second = run(&args, &construct("petersen"));
    assert_eq!(first.stdout, second.stdout);
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "count"], "Cl\n").status.code(), Some(2));
}
