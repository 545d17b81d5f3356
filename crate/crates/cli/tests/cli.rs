use std::path::Path;
use std::process::{Command, Output};

use domlearn::experiment::ExperimentConfig;

fn domlearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domlearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn checked_in_config_is_the_protocol() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/banana.toml");
    let cfg = ExperimentConfig::load(&path).unwrap();
    assert_eq!(cfg, ExperimentConfig::banana_protocol());
    let out = domlearn(&["curve", "--print-default-config"]);
    assert!(out.status.success());
    let printed = ExperimentConfig::from_toml(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(printed, cfg);
}

#[test]
fn generate_train_evaluate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("train.csv");
    let test = dir.path().join("test.csv");
    let model = dir.path().join("model.toml");
    let report = dir.path().join("report.csv");

    let out = domlearn(&["generate", "--per-class", "15", "--seed", "3", "--out", s(&train)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = domlearn(&["generate", "--per-class", "10", "--seed", "4", "-o", s(&test)]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&train).unwrap().lines().count(), 31);

    let out = domlearn(&["train", "--data", s(&train), "-c", "nmsvm-linear", "-o", s(&model)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&model).unwrap().contains("kind = \"negative_margin\""));

    let probe = dir.path().join("probe.toml");
    std::fs::write(&probe, "probes_per_test_object = 50\n").unwrap();
    let args = [
        "evaluate",
        "--model",
        s(&model),
        "--test",
        s(&test),
        "--reference",
        s(&train),
        "--probe-config",
        s(&probe),
        "-o",
        s(&report),
    ];
    let out = domlearn(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.starts_with("e_S="), "{summary}");
    assert!(summary.contains("objects=20"));
    assert!(!summary.contains("d_max=na"));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().count(), 21);
    assert!(csv.starts_with("index,true_label,predicted_label,signed_distance"));

    // same inputs, same report
    let again = domlearn(&args);
    assert_eq!(again.stdout, summary.as_bytes());
    assert_eq!(std::fs::read_to_string(&report).unwrap(), csv);
}

#[test]
fn curve_writes_csv_plot_and_twin() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(
        &cfg,
        r#"
master_seed = 5
train_sizes_per_class = [3, 6]
test_size_per_class = 10
repetitions = 2

[probe]
probes_per_test_object = 40

[[classifiers]]
name = "NCC"
kind = "ncc"

[[classifiers]]
name = "tree"
kind = "purity_tree"
"#,
    )
    .unwrap();
    let out_csv = dir.path().join("curve.csv");
    let out = domlearn(&["curve", "--config", s(&cfg), "--out", s(&out_csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let svg = std::fs::read_to_string(dir.path().join("curve-plot.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(dir.path().join("curve-plot.csv").exists());
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(domlearn(&[]).status.code(), Some(1));
    assert_eq!(domlearn(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(domlearn(&["train", "--data", "x.csv", "-c", "hexagon", "-o", "m.toml"]).status.code(), Some(1));
    assert_eq!(domlearn(&["generate", "--per-class", "many", "-o", "x.csv"]).status.code(), Some(1));
    assert_eq!(domlearn(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let model = dir.path().join("m.toml");
    let out = domlearn(&["train", "--data", s(&missing), "-c", "ncc", "-o", s(&model)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.csv"));

    let bad_cfg = dir.path().join("bad.toml");
    std::fs::write(&bad_cfg, "master_seed = 1\ntrain_sizes_per_class = [5, 2]\n").unwrap();
    let out = domlearn(&["curve", "--config", s(&bad_cfg), "-o", s(&dir.path().join("c.csv"))]);
    assert_eq!(out.status.code(), Some(2));

    let out = domlearn(&["generate", "--per-class", "0", "-o", s(&dir.path().join("g.csv"))]);
    assert_eq!(out.status.code(), Some(2));

    // a linear perceptron cannot separate XOR
    let xor = dir.path().join("xor.csv");
    std::fs::write(&xor, "x1,x2,label\n1,1,1\n-1,-1,1\n1,-1,-1\n-1,1,-1\n").unwrap();
    let out = domlearn(&["train", "--data", s(&xor), "-c", "inequality-linear", "-o", s(&model)]);
    assert_eq!(out.status.code(), Some(2));
}
