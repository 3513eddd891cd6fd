use std::path::Path;
use std::process::{Command, Output};

fn cohsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohsim"))
        .args(args)
        .env_remove("COHSIM_THREADS")
        .output()
        .expect("spawn cohsim")
}

fn ok(args: &[&str]) -> (String, String) {
    let out = cohsim(args);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(out.status.success(), "cohsim {args:?} failed: {stderr}");
    (String::from_utf8(out.stdout).unwrap(), stderr)
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn compile_matches_reference_listing() {
    let golden = include_str!("golden/reference_listing.quil");
    let (stdout, stderr) = ok(&["compile", "--n", "4", "--na", "1", "--phi", "pi/2"]);
    assert_eq!(stdout, golden);
    assert!(stderr.starts_with("6 two-qubit gates (budget 6)"), "{stderr}");
}

#[test]
fn compile_json_round_trips_through_the_circuit_format() {
    let (stdout, _) = ok(&["compile", "--n", "3", "--na", "2", "--format", "json", "--theta", "pi/4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["meta"]["command"], "compile");
    assert_eq!(v["n_qubits"], 5);
    let two_qubit = v["gates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| g["qubits"].as_array().unwrap().len() == 2)
        .count();
    assert_eq!(two_qubit, 2 * (3 * 2 - 1));
}

#[test]
fn observe_projected_ten() {
    let (stdout, _) = ok(&["observe", "--state", "projected", "--n", "10"]);
    assert!(stdout.starts_with("c2 = 0.3 "), "{stdout}");
}

#[test]
fn exact_sweep_ends_at_reference_value() {
    let (stdout, _) = ok(&["sweep", "--n", "4", "--na", "1", "--phi", "pi/2", "--postselect", "--exact", "--format", "csv"]);
    let rows = data_rows(&stdout);
    assert_eq!(rows.len(), 5);
    let last: f64 = rows[4][1].parse().unwrap();
    assert!((last - 0.349).abs() < 0.005, "{last}");
    assert_eq!(rows[4][4], "postselect");
}

#[test]
fn shot_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_cohsim"))
            .args(["sweep", "--n", "4", "--na", "1", "--phi", "pi/2", "--shots", "1000", "--seed", "11", "--out"])
            .arg(&path)
            .env("COHSIM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("# seed: 11"));
    assert!(text.contains("C2_std_error"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "state = \"projected\"\nn = 6\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (stdout, _) = ok(&["observe", "--config", cfg]);
    assert!(stdout.starts_with("c2 = 0.333333 "), "{stdout}");
    let (stdout, _) = ok(&["observe", "--config", cfg, "--n", "10"]);
    assert!(stdout.starts_with("c2 = 0.3 "), "{stdout}");
}

#[test]
fn unknown_config_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "n = 4\nshotz = 10\n").unwrap();
    let out = cohsim(&["observe", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("shotz"), "{err}");
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_cohsim"))
        .args(["observe", "--n", "2"])
        .env("COHSIM_THREADS", "zero")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("COHSIM_THREADS"));
}

#[test]
fn calibrate_sample_mitigate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
    let model: serde_json::Value = (0..5)
        .map(|q| (q.to_string(), serde_json::json!({"p00": 0.96, "p11": 0.91})))
        .collect::<serde_json::Map<_, _>>()
        .into();
    std::fs::write(p("noise.json"), model.to_string()).unwrap();

    ok(&["calibrate", "--noise", &p("noise.json"), "--seed", "2", "--out", &p("fit.json")]);
    let fit: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p("fit.json")).unwrap()).unwrap();
    for q in 0..5 {
        let e = &fit[q.to_string()];
        assert!((e["p00"].as_f64().unwrap() - 0.96).abs() < 0.01);
        assert!((e["p11"].as_f64().unwrap() - 0.91).abs() < 0.01);
    }

    ok(&[
        "sample", "--n", "4", "--na", "1", "--phi", "pi/2", "--shots", "2000", "--noise", &p("noise.json"), "--out",
        &p("raw.json"),
    ]);
    let (stdout, _) = ok(&["mitigate", "--input", &p("raw.json"), "--noise", &p("fit.json"), "--out", &p("fixed.json")]);
    assert!(stdout.contains("mitigated"));
    let fixed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p("fixed.json")).unwrap()).unwrap();
    assert_eq!(fixed["mitigated"], true);
    let total: f64 = fixed["counts"].as_object().unwrap().values().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 2000.0).abs() < 1e-6, "{total}");
}

#[test]
fn mitigated_sweep_is_closer_to_theory() {
    let dir = tempfile::tempdir().unwrap();
    let noise = dir.path().join("noise.json");
    let model: serde_json::Value = (0..5)
        .map(|q| (q.to_string(), serde_json::json!({"p00": 0.95, "p11": 0.9})))
        .collect::<serde_json::Map<_, _>>()
        .into();
    std::fs::write(&noise, model.to_string()).unwrap();
    let noise = noise.to_str().unwrap();
    let base = ["sweep", "--n", "4", "--na", "1", "--phi", "pi/2", "--exact", "--format", "csv"];
    let c2 = |extra: &[&str]| -> Vec<f64> {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        data_rows(&ok(&args).0).iter().map(|r| r[1].parse().unwrap()).collect()
    };
    let ideal = c2(&[]);
    let raw = c2(&["--noise", noise]);
    let fixed = c2(&["--noise", noise, "--mitigate"]);
    let dev = |v: &[f64]| v.iter().zip(&ideal).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev(&fixed) < 1e-9, "{fixed:?}");
    assert!(dev(&raw) > 1e-3);
}

#[test]
fn fcs_and_wigner_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let fcs = dir.path().join("fcs.json");
    let (stdout, _) = ok(&["fcs", "--state", "projected", "--n", "6", "--points", "16", "--out", fcs.to_str().unwrap()]);
    assert!(stdout.contains("even-outcome mass = 0 "), "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&fcs).unwrap()).unwrap();
    assert_eq!(v["thetas"].as_array().unwrap().len(), 16);
    assert!((v["c2"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-10);

    let w = dir.path().join("w.csv");
    let (stdout, _) = ok(&["wigner", "--n", "4", "--step", "0.5", "--out", w.to_str().unwrap()]);
    assert!(stdout.contains("at (sx, sy) = (2, 0)"), "{stdout}");
    assert!(Path::new(&w).exists());
}

#[test]
fn prepared_state_feeds_observe() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    ok(&["prepare", "--state", "dephased", "--n", "4", "--out", state.to_str().unwrap()]);
    let (stdout, _) = ok(&["observe", "--input", state.to_str().unwrap()]);
    assert!(stdout.starts_with("c2 = 0.3125 "), "{stdout}");
}
