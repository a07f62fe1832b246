use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tunnelcheck")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// All numbers of a report in document order, from either format.
fn numbers_json(text: &str) -> Vec<f64> {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    let mut out = Vec::new();
    for (_, x) in v["scalars"].as_object().unwrap() {
        out.extend(x.as_f64());
    }
    for row in v["rows"].as_array().into_iter().flatten() {
        out.extend(row.as_array().unwrap().iter().filter_map(|x| x.as_f64()));
    }
    out
}

fn numbers_csv(text: &str) -> Vec<f64> {
    let mut out = Vec::new();
    for line in text.lines() {
        let fields: Vec<&str> = match line.strip_prefix("# ") {
            Some(rest) => rest.splitn(2, ',').skip(1).collect(),
            None => line.split(',').collect(),
        };
        out.extend(fields.iter().filter_map(|f| f.parse::<f64>().ok()).filter(|x| x.is_finite()));
    }
    out
}

#[test]
fn barrier_example_transmission() {
    let text = stdout(&["barrier", "--energy", "0.5", "--v0", "1.0", "--width", "2.0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let t = v["scalars"]["T"].as_f64().unwrap();
    assert!((t - 0.070651).abs() < 5e-7, "T = {t}");
    let tm = v["scalars"]["T_transfer_matrix"].as_f64().unwrap();
    assert!((t - tm).abs() <= 1e-12 * t);
}

#[test]
fn squid_sweep_zeros_at_half_integer_flux() {
    let text = stdout(&["squid", "--ic", "1.0", "--flux-sweep", "0:2:0.01", "--format", "csv"]);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 200);
    for half in [0.5, 1.5] {
        let r = rows.iter().find(|r| (r[0] - half).abs() < 1e-12).expect("sample at half-integer flux");
        assert!(r[2].abs() < 1e-12 && r[3].abs() < 1e-12, "{r:?}");
    }
    assert!((rows[0][2] - 2.0).abs() < 1e-15);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["barrier", "--energy", "0.3", "--v0", "1", "--width", "1.5", "--grid=-1:3:41"][..],
        &["ks-inverted", "--format", "csv"][..],
        &["validate"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let cases: [&[&str]; 9] = [
        &["step", "--energy", "0.4", "--v0", "1", "--grid=-2:2:21"],
        &["barrier", "--energy", "0.5", "--v0", "1", "--width", "2", "--grid=-1:3:21"],
        &["madelung", "--potential", "barrier", "--energy", "0.5", "--v0", "1", "--width", "1"],
        &["coulomb-decay", "--energy", "0.5", "--z2", "2", "--grid", "0.5:12:50"],
        &["coulomb-fusion", "--energy", "0.5", "--z2", "2", "--grid", "0.5:12:50", "--s-re", "0.2"],
        &["ks-hydrogen"],
        &["berry", "--theta", "0.7"],
        &["josephson", "--u0", "2", "--energy", "1", "--d", "1"],
        &["squid", "--ic", "0.5"],
    ];
    for args in cases {
        let j = numbers_json(&stdout(&[args, &["--format", "json"]].concat()));
        let c = numbers_csv(&stdout(&[args, &["--format", "csv"]].concat()));
        assert!(!j.is_empty());
        assert_eq!(j, c, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["barrier", "--energy", "2", "--v0", "1", "--width", "1"]).status.code(), Some(1));
    assert_eq!(run(&["barrier", "--energy", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["barrier", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["josephson", "--u0", "1", "--energy", "2", "--d", "1"]).status.code(), Some(1));
    assert_eq!(run(&["validate"]).status.code(), Some(0));
}

#[test]
fn output_path_resolves_against_env_dir() {
    let dir = std::env::temp_dir().join(format!("tunnelcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tunnelcheck"))
        .args(["step", "--energy", "0.5", "--v0", "1", "--output", "step.json"])
        .env("TUNNELCHECK_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.join("step.json")).unwrap();
    assert_eq!(text, stdout(&["step", "--energy", "0.5", "--v0", "1"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn goldens_check_passes_on_committed_corpus() {
    let text = stdout(&["goldens", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["scalars"]["passed"], serde_json::Value::Bool(true));
}
