use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use polar_cli::format::real;

fn polar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polar")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = polar(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    fs::read_to_string(path).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn spectrum_matches_golden() {
    assert_eq!(stdout(&["spectrum", "--m", "1", "--levels", "3"]), golden("spectrum_m1_levels3.csv"));
}

#[test]
fn density_matches_golden() {
    assert_eq!(stdout(&["density", "--l", "1", "--m", "1"]), golden("density_l1_m1.csv"));
}

#[test]
fn transform_matches_golden() {
    assert_eq!(stdout(&["transform", "--m", "1"]), golden("transform_m1.csv"));
}

#[test]
fn spectrum_golden_rows_follow_closed_form() {
    let rows = rows(&golden("spectrum_m1_levels3.csv"));
    let expected = [1.125, 3.125, 6.125];
    assert_eq!(rows.len(), 3);
    for (row, w) in rows.iter().zip(expected) {
        assert_eq!(row[2], 1.0);
        assert_eq!(row[4], w);
        assert!((row[3] - w).abs() / w < 1e-4);
    }
}

#[test]
fn density_golden_follows_hand_formula() {
    // l = 1, |m| = 1: Θ = −√(3/4) sin θ, density = ¾ sin³θ.
    let rows = rows(&golden("density_l1_m1.csv"));
    assert_eq!(rows.len(), 181);
    for row in &rows {
        let s = row[0].sin();
        assert!((row[1] + 0.75f64.sqrt() * s).abs() < 1e-14, "{row:?}");
        assert!((row[2] - 0.75 * s * s * s).abs() < 1e-14, "{row:?}");
    }
    assert_eq!(rows[0][2], 0.0);
    assert_eq!(rows[180][2], 0.0);
    assert_eq!(rows[180][0], std::f64::consts::PI);
    assert!((rows[90][2] - 0.75).abs() < 1e-12);
}

#[test]
fn transform_golden_follows_hand_formula() {
    let rows = rows(&golden("transform_m1.csv"));
    assert_eq!(rows.len(), 179);
    for row in &rows {
        let s2 = row[0].sin().powi(2);
        assert!((row[2] - 0.375 / s2).abs() <= 1e-12 * row[2]);
        assert!(row[3] < 1e-10);
    }
    assert!((rows[89][0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!((rows[89][2] - 0.375).abs() < 1e-15);
}

#[test]
fn transform_m0_potential_negative_everywhere() {
    let out = stdout(&["transform", "--m", "0", "--derivatives", "analytic"]);
    for row in rows(&out) {
        let s2 = row[0].sin().powi(2);
        assert!(row[2] < 0.0);
        assert!((row[2] + 0.125 / s2).abs() <= 1e-12 * row[2].abs());
    }
}

#[test]
fn transform_fd_mode_runs() {
    let out = stdout(&["transform", "--m", "2", "--derivatives", "fd", "--grid", "256"]);
    let max = rows(&out).iter().map(|r| r[3]).fold(0.0, f64::max);
    assert!(max > 0.0 && max < 1e-2, "{max}");
}

#[test]
fn sign_of_m_does_not_change_output() {
    for m in 1..=3 {
        for fmt in ["csv", "json"] {
            let plus = stdout(&["spectrum", "--m", &m.to_string(), "--levels", "2", "--grid", "256", "--format", fmt]);
            let minus =
                stdout(&["spectrum", "--m", &(-m).to_string(), "--levels", "2", "--grid", "256", "--format", fmt]);
            assert_eq!(plus, minus, "m={m} {fmt}");
        }
    }
    assert_eq!(stdout(&["density", "--l", "1", "--m", "-1"]), stdout(&["density", "--l", "1", "--m", "1"]));
}

#[test]
fn spectrum_json_has_documented_keys() {
    let out = stdout(&["spectrum", "--m", "0", "--levels", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_object().unwrap().len(), 5);
    assert_eq!(v["levels"][0]["W_exact"], 0.125);
    assert_eq!(v["lambda"], -0.125);
    let order: Vec<usize> = ["\"m\"", "\"lambda\"", "\"levels\"", "\"grid\"", "\"extrapolation\""]
        .iter()
        .map(|k| out.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]), "keys out of order in {out}");
}

#[test]
fn hft_reports_and_exit_codes() {
    let out = polar(&["hft", "--m", "1", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["dW_dlambda_fd", "expectation", "analytic"] {
        assert!((v[key].as_f64().unwrap() - 1.5).abs() < 1.5e-3, "{key}: {v}");
    }
    assert_eq!(v["pass"], true);

    let v: serde_json::Value = serde_json::from_str(&stdout(&["hft", "--m", "2", "--n", "0"])).unwrap();
    assert!((v["expectation"].as_f64().unwrap() - 1.25).abs() < 1.25e-3);

    let out = polar(&["hft", "--m", "0", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverges"));

    // A coarse grid cannot meet a tight tolerance: the report is still printed.
    let out = polar(&["hft", "--m", "1", "--n", "2", "--grid", "32", "--tolerance", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--m", "1"][..],
        &["spectrum", "--m", "x", "--levels", "1"],
        &["spectrum", "--m", "1", "--levels", "1", "--format", "xml"],
        &["density", "--l", "2", "--m", "-3"],
        &["transform", "--m", "1", "--grid", "4"],
        &["hft", "--m", "1", "--n", "0", "--delta", "-1"],
        &["verify", "--tol-quadrature", "-1e-10"],
        &[],
    ] {
        let out = polar(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_file_receives_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = polar(&["spectrum", "--m", "1", "--levels", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(path).unwrap(), golden("spectrum_m1_levels3.csv"));
}

#[test]
fn emit_plot_writes_data_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("rho");
    stdout(&["density", "--l", "2", "--m", "1", "--samples", "11", "--emit-plot", base.to_str().unwrap()]);
    let data = fs::read_to_string(dir.path().join("rho.dat")).unwrap();
    let script = fs::read_to_string(dir.path().join("rho.gp")).unwrap();
    let points: Vec<Vec<f64>> = data
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(points.len(), 11);
    assert!(points.iter().all(|p| p.len() == 2 && p[1] >= 0.0));
    assert!(script.contains("plot \"rho.dat\" using 1:2"));
}

#[test]
fn csv_reals_round_trip_exactly() {
    for out in [golden("spectrum_m1_levels3.csv"), golden("density_l1_m1.csv"), golden("transform_m1.csv")] {
        for line in out.lines().skip(1) {
            for cell in line.split(',').filter(|c| c.contains('e')) {
                let v: f64 = cell.parse().unwrap();
                assert_eq!(real(v), cell);
            }
        }
    }
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["density", "--l", "3", "--m", "-2", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn verify_fails_on_zero_tolerance() {
    let out = polar(&["verify", "--tol-spectrum-m-pos", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL eigenvalue-law"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() == 8);
}
