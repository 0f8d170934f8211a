use std::process::{Command, Output};

use serde_json::Value;

fn steerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerlab"))
        .args(args)
        .env_remove("STEERLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    assert!(out.status.success(), "stderr: {}", stderr(out));
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> usize {
    rows[0]
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn state_standard_form_round_trips() {
    let v = json(&steerlab(&["state", "--standard-form", "2", "1.5", "1.5"]));
    assert_eq!(v["n_modes"], 3);
    assert_eq!(v["pure"], true);
    let inv: Vec<f64> = serde_json::from_value(v["local_invariants"].clone()).unwrap();
    for (got, want) in inv.iter().zip([2.0, 1.5, 1.5]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn triangle_violation_exits_two() {
    let out = steerlab(&["state", "--standard-form", "3", "1", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[usage]:"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn network_at_one_third_is_symmetric() {
    let v = json(&steerlab(&[
        "state",
        "--ghz-network",
        "0.345",
        "0.3333333",
        "0.5",
    ]));
    let inv: Vec<f64> = serde_json::from_value(v["local_invariants"].clone()).unwrap();
    assert!(
        (inv[0] - inv[1]).abs() < 1e-6 && (inv[0] - inv[2]).abs() < 1e-6,
        "{inv:?}"
    );
}

#[test]
fn analyze_examples() {
    let v = json(&steerlab(&[
        "analyze",
        "--tmsv",
        "0.5",
        "--steering",
        "A",
        "B",
    ]));
    assert!((v["value"].as_f64().unwrap() - 1f64.cosh().ln()).abs() < 1e-12);
    assert!((v["value"].as_f64().unwrap() - 0.4338).abs() < 1e-4);

    let v = json(&steerlab(&[
        "analyze",
        "--standard-form",
        "2",
        "2",
        "2",
        "--rgs",
    ]));
    assert!((v["rgs"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-9);

    let v = json(&steerlab(&[
        "analyze",
        "--standard-form",
        "2",
        "2",
        "2",
        "--keyrate",
    ]));
    assert!(v["rgs"].as_f64().unwrap() > 0.614);
    assert!(v["mode_invariant"].as_f64().unwrap() > 0.0);
    assert_eq!(v["dealers"].as_array().unwrap().len(), 3);
}

#[test]
fn analyze_errors() {
    let out = steerlab(&["analyze", "--tmsv", "0.5", "--steering", "A", "C"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("thermal.json");
    std::fs::write(&path, r#"{"n_modes": 3, "matrix": [[2,0,0,0,0,0],[0,2,0,0,0,0],[0,0,2,0,0,0],[0,0,0,2,0,0],[0,0,0,0,2,0],[0,0,0,0,0,2]]}"#).unwrap();
    let out = steerlab(&["analyze", "--input", path.to_str().unwrap(), "--rgs"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[domain]:"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n_modes": 1, "matrix": [[0.5, 0], [0, 0.5]]}"#).unwrap();
    let out = steerlab(&[
        "analyze",
        "--input",
        bad.to_str().unwrap(),
        "--steering",
        "A",
        "A",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_examples() {
    let out = steerlab(&[
        "verify",
        "--suite",
        "monogamy",
        "--samples",
        "10000",
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let start = std::time::Instant::now();
    let out = steerlab(&["verify", "--suite", "all", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(start.elapsed().as_secs_f64() < 1.0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().last().unwrap().ends_with("PASS"));

    let out = steerlab(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_qss_bounds_large() {
    let out = steerlab(&["verify", "--suite", "qss-bounds", "--samples", "100000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_steerlab"));
        cmd.args(args).env_remove("STEERLAB_SEED");
        if let Some(s) = env {
            cmd.env("STEERLAB_SEED", s);
        }
        cmd.output().unwrap().stdout
    };
    let base = ["verify", "--suite", "ssa", "--samples", "50"];
    let env7 = run(Some("7"), &base);
    let flag7 = run(None, &[&base[..], &["--seed", "7"]].concat());
    let default = run(None, &base);
    assert_eq!(env7, flag7);
    assert_ne!(env7, default);
}

#[test]
fn config_file_sets_sampler() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sampler.toml");
    std::fs::write(
        &path,
        "seed = 7\ncount = 25\ndistribution = \"log-uniform\"\n",
    )
    .unwrap();
    let from_file = steerlab(&[
        "sweep",
        "--figure",
        "2",
        "--config",
        path.to_str().unwrap(),
        "--series-points",
        "0",
    ]);
    let from_flags = steerlab(&[
        "sweep",
        "--figure",
        "2",
        "--seed",
        "7",
        "--samples",
        "25",
        "--distribution",
        "log-uniform",
        "--series-points",
        "0",
    ]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, from_flags.stdout);
    assert_eq!(csv_rows(&from_file).len(), 26);

    std::fs::write(&path, "seed = 7\nbogus = 1\n").unwrap();
    let out = steerlab(&["sweep", "--figure", "2", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_1a() {
    let rows = csv_rows(&steerlab(&[
        "sweep", "--figure", "1a", "--a", "2", "--grid", "200",
    ]));
    assert_eq!(rows[0], ["b", "c", "rgs"]);
    let i = column(&rows, "rgs");
    let max = rows[1..]
        .iter()
        .map(|r| r[i].parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((max - 2f64.ln()).abs() < 1e-6);
}

#[test]
fn sweep_1b() {
    let rows = csv_rows(&steerlab(&[
        "sweep", "--figure", "1b", "--r", "0.345", "--grid", "1000",
    ]));
    assert_eq!(rows.len(), 1002);
    let (ir, ig) = (column(&rows, "R"), column(&rows, "rgs"));
    let best = rows[1..]
        .iter()
        .max_by(|x, y| {
            x[ig]
                .parse::<f64>()
                .unwrap()
                .total_cmp(&y[ig].parse::<f64>().unwrap())
        })
        .unwrap();
    assert!((best[ir].parse::<f64>().unwrap() - 0.333).abs() <= 1e-3);
}

#[test]
fn sweep_2_has_no_violations() {
    let rows = csv_rows(&steerlab(&[
        "sweep",
        "--figure",
        "2",
        "--samples",
        "1000",
        "--seed",
        "7",
    ]));
    let series = column(&rows, "series");
    let samples: Vec<_> = rows[1..].iter().filter(|r| r[series] == "sample").collect();
    assert_eq!(samples.len(), 1000);
    let (lo, hi) = (column(&rows, "slack_lower"), column(&rows, "slack_upper"));
    for r in &samples {
        assert!(r[lo].parse::<f64>().unwrap() >= -1e-9);
        assert!(r[hi].parse::<f64>().unwrap() >= -1e-9);
    }
    for s in ["lower", "upper", "ghz"] {
        assert_eq!(rows.iter().filter(|r| r[series] == s).count(), 200);
    }
}

#[test]
fn threshold_output() {
    let out = steerlab(&["threshold"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let db: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("db="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((db - 4.315).abs() < 0.02);
}

#[test]
fn outputs_independent_of_thread_count() {
    for cmd in [
        &["verify", "--suite", "all", "--samples", "2000"][..],
        &["sweep", "--figure", "2", "--samples", "5000"][..],
        &["sweep", "--figure", "1a", "--grid", "80"][..],
    ] {
        let one = steerlab(&[&["--threads", "1"][..], cmd].concat());
        let many = steerlab(&[&["--threads", "8"][..], cmd].concat());
        let again = steerlab(cmd);
        assert!(one.status.success());
        assert_eq!(one.stdout, many.stdout, "{cmd:?}");
        assert_eq!(one.stdout, again.stdout, "{cmd:?}");
    }
}

#[test]
fn state_out_file_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tmsv.json");
    let out = steerlab(&["state", "--tmsv", "0.3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n_modes"], 2);
    assert!(v.get("local_invariants").is_none());

    // a saved state feeds back into analyze
    let g = json(&steerlab(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--steering",
        "B",
        "A",
    ]));
    assert!((g["value"].as_f64().unwrap() - 0.6f64.cosh().ln()).abs() < 1e-12);

    let help = steerlab(&["sweep", "--help"]);
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("slack_lower"));
}
