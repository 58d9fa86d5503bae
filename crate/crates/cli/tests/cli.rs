use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_plurinorm"));
    c.env_remove("PLURINORM_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn norm_of_monomial_and_exit_codes() {
    let o = run(&["norm", "--f", "z^2", "--alpha", "-1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let norm_p = v["result"]["value_p"].as_f64().unwrap();
    assert!((norm_p - std::f64::consts::TAU).abs() < 1e-7);

    assert_eq!(code(&run(&["norm", "--f", "z", "--alpha", "-2"])), 1);
    assert_eq!(code(&run(&["norm", "--f", "z +* 2"])), 1);
    assert_eq!(code(&run(&["norm", "--domain", "torus"])), 1);
    assert_eq!(code(&run(&["verify", "no-such-identity"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["bogus"])), 1);
}

#[test]
fn escaping_map_is_an_input_error_with_witness() {
    let o = run(&["compop", "diagnose", "--F", "2*z"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("containment violated: F(") && err.contains("not in the unit disk"), "{err}");
}

#[test]
fn identity_diagnostic_is_bounded() {
    let o = run(&["compop", "diagnose", "--F", "identity", "--alpha", "-1", "--beta", "-1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["classification"], "bounded-consistent");
}

#[test]
fn verify_table_passes_at_low_budget() {
    let o = run(&["verify", "proper-pushforward", "--budget", "low"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("# plurinorm "));
}

#[test]
fn outputs_embed_hash_and_version() {
    let version = env!("CARGO_PKG_VERSION");
    let csv = stdout(&run(&["counting", "--F", "z^2", "--w-count", "3"]));
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.ends_with("config_hash,version"), "{header}");
    for row in lines {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[cols.len() - 1], version);
        assert_eq!(cols[cols.len() - 2].len(), 64);
    }
    let json: serde_json::Value =
        serde_json::from_slice(&run(&["counting", "--F", "z^2", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["version"], version);
    assert_eq!(json["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(json["seed"], 7);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"norm": {"f": "z^3", "alpha": 0.0, "p": 2.0}}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&run(&["--config", cfg, "norm"]).stdout).unwrap();
    assert_eq!(v["config"]["f"], "z^3");
    let a = v["result"]["value_p"].as_f64().unwrap();
    // ‖z^3‖² at α = 0 is 2π/7.
    assert!((a - std::f64::consts::TAU / 7.0).abs() < 1e-9, "{a}");
    let v: serde_json::Value = serde_json::from_slice(&run(&["--config", cfg, "norm", "--p", "4"]).stdout).unwrap();
    assert_eq!(v["config"]["p"], 4.0);
    let b = v["result"]["value_p"].as_f64().unwrap();
    assert!((b - std::f64::consts::TAU / 13.0).abs() < 1e-9, "{b}");

    fs::write(dir.path().join("bad.json"), r#"{"norm": {"f": "z", "colour": 1}}"#).unwrap();
    let o = run(&["--config", dir.path().join("bad.json").to_str().unwrap(), "norm"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn reproducible_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["counting", "--domain", "ball", "--F", "z1^2 + z2^2", "--budget", "low", "--w-count", "4"],
        &["compop", "diagnose", "--F", "0.5*z^2 + 0.3*z", "--alpha", "0", "--beta", "-1"],
        &["verify", "subordination", "--budget", "low", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut outs = vec![];
        for (k, threads) in [None, Some("1"), None, Some("3")].into_iter().enumerate() {
            let path = dir.path().join(format!("{i}-{k}.out"));
            let mut c = bin();
            c.args(*args).arg("--out").arg(&path);
            if let Some(t) = threads {
                c.env("PLURINORM_THREADS", t);
            }
            let o = c.output().unwrap();
            assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
            outs.push(fs::read(&path).unwrap());
        }
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{args:?} differs between runs");
    }
}
