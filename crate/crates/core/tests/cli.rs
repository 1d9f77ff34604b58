use std::path::PathBuf;
use std::process::{Command, Output};

fn optomech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optomech"))
        .args(args)
        .output()
        .expect("run optomech")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn steady_state_csv() {
    let o = optomech(&["steady-state", "--set", "detuning_over_omegam=1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("branch,beta,alpha,intensity,eff_detuning,stable"));
    assert!(lines.count() >= 1);
}

#[test]
fn json_format_parses() {
    let o = optomech(&["critical", "--method", "all", "--format", "json", "--set", "duffing_over_omegam=1e-4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["method"], "exact");
    assert!(rows[0]["detuning_crit"].as_f64().unwrap() > 0.0);
}

#[test]
fn fluctuations_both_methods() {
    let o = optomech(&[
        "fluctuations",
        "--set",
        "detuning_over_omegam=1",
        "--set",
        "input_power_mw=0.5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let methods: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(methods, ["lyapunov", "spectral"]);
    assert!(!String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn stability_lists_eigenvalues() {
    let o = optomech(&["stability", "--set", "detuning_over_omegam=1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().ends_with("eig3_re,eig3_im"));
}

#[test]
fn exit_codes() {
    assert_eq!(optomech(&["steady-state", "--set", "nonsense=1"]).status.code(), Some(2));
    assert_eq!(optomech(&["steady-state", "--set", "effective_mass=-1"]).status.code(), Some(2));
    assert_eq!(optomech(&["figure", "fig99"]).status.code(), Some(2));
    assert_eq!(optomech(&["--config", "/nonexistent/x.json", "steady-state"]).status.code(), Some(2));
    // blue-detuned with the default power has no stable branch
    let o = optomech(&["fluctuations", "--set", "detuning_over_omegam=-1"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_from_config_file_and_out() {
    let cfg = tmp("sweep.json");
    std::fs::write(
        &cfg,
        r#"{
            "duffing": 0.0,
            "sweep": {
                "axis": "detuning",
                "range": {"start": 0.5, "stop": 1.5, "points": 5, "scale": "linear"},
                "outputs": ["beta", "stable"]
            }
        }"#,
    )
    .unwrap();
    let out = tmp("sweep.csv");
    let o = optomech(&["--config", cfg.to_str().unwrap(), "sweep", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("axis_value") && header.contains("beta") && header.contains("stable"));
    assert!(!header.contains("var_q"));

    // flags override the config's sweep
    let o = optomech(&["--config", cfg.to_str().unwrap(), "sweep", "--points", "3"]);
    let xs: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    let mut uniq = xs.clone();
    uniq.dedup();
    assert_eq!(uniq, ["0.5", "1.0", "1.5"]);
}

#[test]
fn sweep_needs_an_axis() {
    assert_eq!(optomech(&["sweep"]).status.code(), Some(2));
    let o = optomech(&["sweep", "--axis", "input_power", "--start", "0", "--stop", "0.01", "--points", "3"]);
    assert!(o.status.success());
}

#[test]
fn figure_list_and_run() {
    let o = optomech(&["figure", "--list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 15);
    let o = optomech(&["figure", "fig3", "--points", "7", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 28);
}

#[test]
fn figure_output_is_deterministic() {
    let a = optomech(&["figure", "fig8", "--points", "13"]);
    let b = optomech(&["figure", "fig8", "--points", "13"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
