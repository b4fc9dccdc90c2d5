use std::path::Path;
use std::process::{Command, Output};

fn lvres(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lvres"));
    cmd.args(args).env_remove("LVRES_OUTPUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("LVRES_OUTPUT_DIR", d);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn analyze_reports_the_saddle() {
    let o = lvres(&["analyze", "--alpha", "2", "--beta", "2", "--delta", "1"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"A\": 0.3333333333333333"));
}

#[test]
fn dimensional_and_nondimensional_agree() {
    let dim = lvres(&["analyze", "--rn", "1", "--ri", "1", "--kn", "1", "--ki", "1", "--a", "2", "--b", "3"], None);
    let nondim = lvres(&["analyze", "--alpha", "2", "--beta", "3", "--delta", "1"], None);
    assert_eq!(dim.stdout, nondim.stdout);
}

#[test]
fn weak_regime_analyze_succeeds_with_warning() {
    let o = lvres(&["analyze", "--alpha", "0.5", "--beta", "2", "--delta", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "Other");
    assert_eq!(v["warning"], "alpha <= 1");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| lvres(args, None).status.code();
    assert_eq!(code(&["separatrix", "--alpha", "0.5", "--beta", "2", "--delta", "1"]), Some(3));
    assert_eq!(code(&["resilience", "--alpha", "2", "--beta", "1", "--delta", "1"]), Some(3));
    assert_eq!(code(&["separatrix", "--alpha", "-2", "--beta", "2", "--delta", "1"]), Some(2));
    assert_eq!(code(&["separatrix", "--alpha", "2", "--beta", "2"]), Some(2));
    assert_eq!(code(&["sweep", "--alpha", "1:2", "--beta", "2", "--delta", "1"]), Some(2));
    assert_eq!(code(&["limits", "--alpha", "2", "--beta", "3", "--ladder", "1,x"]), Some(2));
    assert_eq!(code(&["limits", "--alpha", "2", "--beta", "3", "--ladder", "1,3"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn separatrix_columns_and_options() {
    let o = lvres(&["separatrix", "--alpha", "2", "--beta", "3", "--delta", "1", "--with-model", "--xmax", "2"], None);
    let text = stdout(&o);
    assert!(text.starts_with("x,y,s_star\n"));
    let r = rows(&text);
    assert!(r.iter().all(|row| (row[1] - row[2]).abs() < 1e-6));
    assert_eq!(r.last().unwrap()[0], 2.0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "command = analyze\nalpha = 5\nbeta = 2\ndelta = 1\n").unwrap();
    let o = lvres(&["--config", cfg.to_str().unwrap(), "--alpha", "2"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["params"]["alpha"], 2.0);
    assert_eq!(v["params"]["beta"], 2.0);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = lvres(
        &["resilience", "--alpha", "2", "--beta", "2", "--delta", "1", "--mc-n", "500", "--grid", "101"],
        Some(dir.path()),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("resilience.json")).unwrap()).unwrap();
    assert!((report["latitude"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(report["latitude_mc"]["n"], 500);
    let grid = std::fs::read_to_string(dir.path().join("basin_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 1 + 101 * 101);
}

#[test]
fn sweep_orders_s_by_parameter() {
    let s_column = |args: &[&str]| -> Vec<f64> { rows(&stdout(&lvres(args, None))).iter().map(|r| r[4]).collect() };
    let alpha = s_column(&["sweep", "--alpha", "1.5,2,3", "--beta", "2", "--delta", "1", "--x", "0.3"]);
    assert!(alpha.windows(2).all(|w| w[1] < w[0]));
    let beta = s_column(&["sweep", "--alpha", "2", "--beta", "1.5,2,3", "--delta", "1", "--x", "0.3"]);
    assert!(beta.windows(2).all(|w| w[1] > w[0]));
    // A = 1/3 at alpha = beta = 2
    let delta = s_column(&["sweep", "--alpha", "2", "--beta", "2", "--delta", "0.5:2:4", "--x", "0.2"]);
    assert!(delta.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn limits_default_ladders_converge() {
    for dir in ["zero", "infinity"] {
        let r = rows(&stdout(&lvres(&["limits", "--alpha", "2", "--beta", "3", "--direction", dir], None)));
        assert_eq!(r.len(), 5);
        assert!(r.windows(2).all(|w| w[1][1] < w[0][1]));
    }
}

#[test]
fn phase_portrait_endpoints() {
    let o = lvres(&["phase-portrait", "--alpha", "2", "--beta", "3", "--delta", "2", "--ic", "0.9:0.05,0.05:0.9,0.5:0"], None);
    let text = stdout(&o);
    let mut last = std::collections::BTreeMap::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (x, y): (f64, f64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        if f[0] == "2" {
            assert_eq!(y, 0.0);
        }
        last.insert(f[0].to_string(), (x, y, f[4].to_string()));
    }
    let (x, y, label) = &last["0"];
    assert!((x - 1.0).abs() < 1e-6 && y.abs() < 1e-6 && label == "native");
    let (x, y, label) = &last["1"];
    assert!(x.abs() < 1e-6 && (y - 1.0).abs() < 1e-6 && label == "invader");
}
