use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn scoredyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scoredyn")).args(args).output().unwrap()
}

fn scoredyn_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scoredyn")).args(args).env(key, value).output().unwrap()
}

/// Parses the `ok key=value ...` summary line.
fn summary(out: &Output) -> BTreeMap<String, String> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let line = lines.next().unwrap();
    assert!(lines.next().is_none(), "more than one summary line");
    let mut parts = line.split(' ');
    assert_eq!(parts.next(), Some("ok"));
    parts
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            (k.to_owned(), v.to_owned())
        })
        .collect()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn synth_nhl(dir: &Path, games: &str, seed: &str) -> String {
    let out = p(dir, "games.csv");
    summary(&scoredyn(&["synth", "--sport", "nhl", "--games", games, "--seed", seed, "--out", &out]));
    out
}

#[test]
fn fit_predict_eval_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let games = synth_nhl(dir.path(), "2000", "5");
    let model = p(dir.path(), "model.json");
    let s = summary(&scoredyn(&["fit", "--sport", "nhl", "--in", &games, "--out", &model]));
    assert_eq!(s["games"], "2000");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    let lambda: f64 = s["lambda_hat"].parse().unwrap();
    assert_eq!(json["tempo"]["lambda_hat"].as_f64().unwrap(), lambda);

    let s = summary(&scoredyn(&["predict", "--model", &model, "--lead", "2", "--t", "1800"]));
    let probs: Vec<f64> = ["p_win_r", "p_tie", "p_win_b"].iter().map(|k| s[*k].parse().unwrap()).collect();
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(probs[0] > probs[2]);
    let s = summary(&scoredyn(&["predict", "--model", &model, "--lead", "-2", "--t", "1800"]));
    assert_eq!(s["p_win_b"].parse::<f64>().unwrap(), probs[0]);

    let s = summary(&scoredyn(&["eval", "--model-dir", dir.path().to_str().unwrap(), "--splits", "20"]));
    assert_eq!(s["splits"], "20");
    let auc = std::fs::read_to_string(dir.path().join("auc.csv")).unwrap();
    let mut lines = auc.lines();
    assert_eq!(lines.next(), Some("event_index,auc_chain,auc_leader,n_games_scored"));
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], (i + 1).to_string());
        for c in &cols[1..3] {
            let v: f64 = c.parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let games = synth_nhl(dir.path(), "1500", "6");
    let model = p(dir.path(), "model.json");
    summary(&scoredyn(&["fit", "--sport", "nhl", "--in", &games, "--out", &model]));
    let run = |name: &str, threads: &str| {
        let out = p(dir.path(), name);
        let curves = p(dir.path(), &format!("{name}.curves.csv"));
        let args = [
            "simulate", "--model", &model, "--games", "1200", "--seed", "9", "--tempo", "markov", "--out", &out,
            "--curves", &curves, "--against", &games,
        ];
        summary(&scoredyn_env(&args, "SCOREDYN_THREADS", threads));
        (std::fs::read(&out).unwrap(), std::fs::read_to_string(&curves).unwrap())
    };
    let (a, ca) = run("a.jsonl", "1");
    let (b, cb) = run("b.jsonl", "4");
    assert_eq!(a, b);
    assert_eq!(ca, cb);
    assert!(ca.starts_with("t,sd_empirical,sd_model,"));
    let bad = scoredyn_env(&["validate", "--in", &games], "SCOREDYN_THREADS", "many");
    assert!(bad.status.success(), "validation does not touch the pool");
    let bad = scoredyn_env(&["eval", "--in", &games, "--sport", "nhl", "--splits", "2", "--out", &p(dir.path(), "x.csv")], "SCOREDYN_THREADS", "many");
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let games = synth_nhl(dir.path(), "1000", "7");
    let run = |name: &str| {
        let out = p(dir.path(), name);
        let s = summary(&scoredyn(&[
            "report", "--sport", "nhl", "--in", &games, "--out-dir", &out, "--sim-games", "1000", "--splits", "4",
            "--seed", "3",
        ]));
        assert_eq!(s["files"], "13");
        let mut files: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files
            .iter()
            .map(|f| (f.file_name().unwrap().to_owned(), std::fs::read(f).unwrap()))
            .collect::<Vec<_>>()
    };
    let a = run("r1");
    assert_eq!(a.len(), 13);
    assert_eq!(a, run("r2"));
}

#[test]
fn synth_writes_truth_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "league.jsonl");
    let s = summary(&scoredyn(&[
        "synth", "--sport", "nba", "--ratio", "2", "--games", "50", "--restoring-slope", "-0.001", "--out", &out,
    ]));
    assert_eq!(s["truth"], format!("{out}.truth.json"));
    let truth: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&s["truth"]).unwrap()).unwrap();
    assert_eq!(truth["ground_truth"]["restoring_slope"], -0.001);
    assert_eq!(truth["ground_truth"]["league"]["skills"], serde_json::json!([2.0, 1.0]));
    let v = summary(&scoredyn(&["validate", "--in", &out]));
    assert_eq!(v["games"], "50");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(scoredyn(&["fit", "--bogus"]).status.code(), Some(2));
    assert_eq!(scoredyn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(scoredyn(&["predict", "--model", "m.json", "--lead", "x", "--t", "1"]).status.code(), Some(2));
    assert_eq!(scoredyn(&["--help"]).status.code(), Some(0));

    let bad = p(dir.path(), "bad.csv");
    std::fs::write(&bad, "sport,game_id,team,t,points\nnhl,g,r,1,1\nnhl,g,r,2,-4\n").unwrap();
    let out = scoredyn(&["validate", "--in", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3: field `points`"), "{err}");
    assert!(out.stdout.is_empty());

    let missing = scoredyn(&["fit", "--sport", "nhl", "--in", &p(dir.path(), "none.csv"), "--out", &p(dir.path(), "m.json")]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(!dir.path().join("m.json").exists());
}

#[test]
fn custom_sport_via_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "bench.json");
    std::fs::write(
        &cfg,
        r#"{"sport":"bench","regulation_length":600,"period_ends":[300,600],"point_values":{"1":0.5,"2":0.5},"lead_truncation":20}"#,
    )
    .unwrap();
    let out = p(dir.path(), "bench.csv");
    let no_rate = scoredyn(&["synth", "--sport", "bench", "--sport-config", &cfg, "--out", &out]);
    assert_eq!(no_rate.status.code(), Some(1));
    summary(&scoredyn(&[
        "synth", "--sport", "bench", "--sport-config", &cfg, "--lambda", "0.02", "--games", "400", "--out", &out,
    ]));
    let model = p(dir.path(), "bench-model.json");
    let s = summary(&scoredyn(&["fit", "--sport", "bench", "--sport-config", &cfg, "--in", &out, "--out", &model]));
    let lambda: f64 = s["lambda_hat"].parse().unwrap();
    assert!((lambda - 0.02).abs() < 0.002, "{lambda}");
    assert_eq!(scoredyn(&["validate", "--in", &out]).status.code(), Some(1));
}
