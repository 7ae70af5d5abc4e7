use std::fs;
use std::process::{Command, Output};

fn fracq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn box_scan_classical_limit() {
    let o = fracq(&["box", "--alpha", "1", "--t-grid", "0:10:41"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("alpha,n,t,reT,imT,prob,prob_small_t,prob_large_t,energy\n"));
    let prob = column(&csv, "prob");
    assert_eq!(prob.len(), 41);
    for p in prob {
        assert!((p.parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
    assert!(column(&csv, "prob_large_t").iter().all(String::is_empty));
}

#[test]
fn box_scan_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "alpha = 0.5\nlambda = -1\nt-grid = 1e-2:1e4:25:log\n").unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let o = fracq(&["box", "--config", cfg.to_str().unwrap(), "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(&out1).unwrap();
    assert_eq!(a, fs::read(&out2).unwrap());
    let csv = String::from_utf8(a).unwrap();
    let last_prob: f64 = column(&csv, "prob").last().unwrap().parse().unwrap();
    let last_large: f64 = column(&csv, "prob_large_t").last().unwrap().parse().unwrap();
    let expected = 1.0 / (std::f64::consts::PI * 1e4);
    assert!((last_prob / expected - 1.0).abs() < 0.02, "{last_prob}");
    assert!((last_prob / last_large - 1.0).abs() < 0.02, "{last_prob} vs {last_large}");
    assert!(column(&csv, "prob_large_t")[0].is_empty());
}

#[test]
fn first_row_has_unit_probability() {
    let o = fracq(&["box", "--alpha", "0.3,0.7", "--n", "2", "--t-grid", "0:1:3"]);
    let csv = stdout(&o);
    let t = column(&csv, "t");
    let prob = column(&csv, "prob");
    for (t, p) in t.iter().zip(&prob) {
        if t.parse::<f64>().unwrap() == 0.0 {
            assert_eq!(p.parse::<f64>().unwrap(), 1.0);
        }
    }
    assert_eq!(prob.len(), 6);
}

#[test]
fn ml_sweep() {
    let o = fracq(&["ml", "--alpha", "0.5", "--lambda", "-1", "--t-grid", "0:1:2"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let re = column(&csv, "re");
    let im = column(&csv, "im");
    assert_eq!(re[0], "1.0000000000000000e0");
    assert!((re[1].parse::<f64>().unwrap() - 0.415_588_095_907_848_7).abs() < 1e-12);
    assert!((im[1].parse::<f64>().unwrap() + 0.230_319_787_554_910_64).abs() < 1e-12);
}

#[test]
fn veff_needs_positive_grid() {
    let o = fracq(&["veff", "--alpha", "0.5", "--t-grid", "0:1:5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fracq(&["veff", "--alpha", "0.5", "--t-grid", "0.5:1:2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("alpha,n,t,vR,vI,vR_series,vI_series\n"));
}

#[test]
fn foxh_matches_mittag_leffler() {
    let o = fracq(&["foxh", "--params", "H[1,1,1,2] upper=(0,1) lower=(0,1);(0,0.5)", "--z", "-1,0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    assert!(csv.starts_with("z_re,z_im,h_re,h_im,mu,verdict\n"));
    let h: f64 = column(&csv, "h_re")[0].parse().unwrap();
    assert!((h - 5.008_980_080_762_284).abs() < 1e-12);
    assert_eq!(column(&csv, "verdict")[0], "AllZ");
}

#[test]
fn foxh_errors() {
    let o = fracq(&["foxh", "--params", "H[1,1,1,2] upper=(0,1 lower=(0,1);(0,0.5)", "--z", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
    // mu = 0 and beta* = 1: |z| = 1 lies on the convergence boundary
    let o = fracq(&["foxh", "--params", "H[1,1,1,1] upper=(0,1) lower=(0,1)", "--z", "1,0"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(fracq(&["box", "--t-grid", "5:1:3"]).status.code(), Some(2));
    assert_eq!(fracq(&["box", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(fracq(&["box", "--config", "/nonexistent/x.cfg"]).status.code(), Some(2));
    assert_eq!(fracq(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_reports_forced_failures() {
    let o = fracq(&["verify", "--only", "1,9,11", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("criterion")).count(), 3);
    assert!(out.contains("criterion  1 FAIL"));

    let o = fracq(&["verify", "--only", "1,9,11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 of 3 criteria passed"));
}

#[test]
fn verify_with_empty_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.cfg");
    fs::write(&cfg, "").unwrap();
    let o = fracq(&["verify", "--config", cfg.to_str().unwrap(), "--only", "11"]);
    assert_eq!(o.status.code(), Some(0));
}
