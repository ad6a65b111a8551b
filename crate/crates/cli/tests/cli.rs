use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/toy")
        .canonicalize()
        .unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synaudit"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stdout)
        )
    })
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes target, holdout and a copy of target as CSV files.
fn audit_files(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let text = std::fs::read_to_string(toy().join("small.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let rows: Vec<&str> = lines.collect();
    let write = |name: &str, part: &[&str]| {
        let p = dir.join(name);
        std::fs::write(&p, format!("{header}\n{}\n", part.join("\n"))).unwrap();
        p
    };
    (
        write("target.csv", &rows[..200]),
        write("holdout.csv", &rows[200..300]),
        write("copy.csv", &rows[..200]),
    )
}

fn small_config(dir: &Path, extra: Value) -> PathBuf {
    let mut cfg = json!({
        "data": {"csv": toy().join("small.csv"), "schema": toy().join("schema.json")},
        "split": {"target_size": 100, "holdout_size": 60, "aux_size": 100, "seed": 2},
        "generator": {"kind": "indhist", "seed": 1},
        "game": {"n_shadow": 20, "n_eval": 20, "n_queries": 20, "seed": 3},
        "n_targets": 2,
        "output_dir": dir.join("out"),
    });
    for (k, v) in extra.as_object().unwrap() {
        cfg[k] = v.clone();
    }
    let path = dir.join("config.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    path
}

#[test]
fn audit_verdicts_are_data_not_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (target, holdout, copy) = audit_files(dir.path());
    let schema = toy().join("schema.json");
    let o = run(&[
        "audit",
        "--synthetic",
        s(&copy),
        "--target",
        s(&target),
        "--holdout",
        s(&holdout),
        "--schema",
        s(&schema),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = stdout_json(&o);
    assert_eq!(r["tau_combined"], 0);
    assert_eq!(r["mu_dcr"], 0.0);

    let o = run(&[
        "audit",
        "--synthetic",
        s(&holdout),
        "--target",
        s(&target),
        "--holdout",
        s(&holdout),
        "--schema",
        s(&schema),
        "--p",
        "0.1",
        "--scaling",
        "none",
    ]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["tau_combined"], 1);
    assert_eq!(r["p_used"], 0.1);
}

#[test]
fn audit_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let (target, holdout, copy) = audit_files(dir.path());
    let missing = dir.path().join("nope.json");
    let o = run(&[
        "audit",
        "--synthetic",
        s(&copy),
        "--target",
        s(&target),
        "--holdout",
        s(&holdout),
        "--schema",
        s(&missing),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("usage") && o.stdout.is_empty());

    let bad = dir.path().join("bad.csv");
    let text = std::fs::read_to_string(&copy)
        .unwrap()
        .replacen("United-States", "Atlantis", 1);
    std::fs::write(&bad, text).unwrap();
    let schema = toy().join("schema.json");
    let o = run(&[
        "audit",
        "--synthetic",
        s(&bad),
        "--target",
        s(&target),
        "--holdout",
        s(&holdout),
        "--schema",
        s(&schema),
    ]);
    assert_eq!(code(&o), 2);
    let msg = stderr(&o);
    assert!(
        msg.contains("bad.csv") && msg.contains("native_country") && msg.contains("row"),
        "{msg}"
    );

    assert_eq!(code(&run(&["audit", "--bogus-flag"])), 1);
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn generate_is_deterministic_and_validates_n() {
    let dir = tempfile::tempdir().unwrap();
    let train = toy().join("small.csv");
    let schema = toy().join("schema.json");
    let gen = |out: &Path, n: &str| {
        run(&[
            "generate",
            "--train",
            s(&train),
            "--schema",
            s(&schema),
            "--generator",
            "indhist",
            "--n",
            n,
            "--out",
            s(out),
            "--seed",
            "5",
        ])
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let o = gen(&a, "100");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["rows"], 100);
    assert_eq!(code(&gen(&b, "100")), 0);
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let d = synaudit::tabular::load_csv(&a, &schema).unwrap();
    assert_eq!(d.len(), 100);

    assert_eq!(code(&gen(&dir.path().join("c.csv"), "0")), 1);
    assert_eq!(code(&gen(&dir.path().join("missing/dir/c.csv"), "10")), 1);
}

#[test]
fn score_and_infer_schema_print_json() {
    let data = toy().join("small.csv");
    let o = run(&[
        "score",
        "--data",
        s(&data),
        "--schema",
        s(&toy().join("schema.json")),
        "--top",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let top = stdout_json(&o)["top"].as_array().unwrap().clone();
    assert_eq!(top.len(), 3);
    assert!(top[0]["score"].as_f64().unwrap() >= top[2]["score"].as_f64().unwrap());

    let o = run(&["infer-schema", "--csv", s(&data)]);
    assert_eq!(code(&o), 0);
    let schema = stdout_json(&o);
    assert_eq!(schema["features"][0]["name"], "age");
    assert_eq!(schema["features"][0]["kind"], "numeric");
    assert_eq!(schema["features"][1]["kind"], "categorical");
}

#[test]
fn attack_outcome_and_bad_index() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({}));
    let scores = dir.path().join("scores.csv");
    let o = run(&[
        "attack",
        "--config",
        s(&cfg),
        "--index",
        "3",
        "--scores",
        s(&scores),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let outcome = stdout_json(&o);
    assert_eq!(outcome["target_index"], 3);
    assert!((0.0..=1.0).contains(&outcome["auc"].as_f64().unwrap()));
    assert_eq!(
        std::fs::read_to_string(&scores).unwrap().lines().count(),
        21
    );

    let o = run(&["attack", "--config", s(&cfg), "--index", "100"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn experiment_artifacts_and_thread_independence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), json!({}));
    let report = |threads: &str| {
        let o = run(&["experiment", "--config", s(&cfg), "--threads", threads]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        stdout_json(&o);
        assert!(stderr(&o).contains("targets"));
        std::fs::read(dir.path().join("out/report.json")).unwrap()
    };
    let one = report("1");
    for f in [
        "report.json",
        "per_target.csv",
        "mu_dcr_vs_auc.csv",
        "margin_sweep.csv",
    ] {
        assert!(dir.path().join("out").join(f).is_file(), "{f}");
    }
    assert_eq!(one, report("3"));

    let o = run(&["sweep", "--config", s(&cfg), "--grid", "0,0.05,0.1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["datasets"], 40);
}

#[test]
fn experiment_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(
        dir.path(),
        json!({"output_dir": dir.path().join("no/such/out")}),
    );
    assert_eq!(code(&run(&["experiment", "--config", s(&cfg)])), 1);

    let cfg = small_config(dir.path(), json!({"auc_leak_threshold": 2.0}));
    assert_eq!(code(&run(&["experiment", "--config", s(&cfg)])), 1);

    // Shadow sets larger than the auxiliary data fail inside every game.
    let cfg = small_config(
        dir.path(),
        json!({"game": {"n_shadow": 20, "n_eval": 20, "shadow_size": 150, "seed": 1}}),
    );
    let o = run(&["experiment", "--config", s(&cfg)]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["status"], "failed");
    assert!(report["error"].is_string());
}
