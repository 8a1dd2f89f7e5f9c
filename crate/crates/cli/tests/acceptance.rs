//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with the
//! measured values, then asserts. Run with `--nocapture` to see the lines.
//!
//! Oracles here are computed independently of the library wherever a value
//! is derived rather than stated: explicit Legendre polynomials, a dense
//! Jacobi eigensolver, and hand-written potentials.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use polar_cli::oracle::characteristic_roots;
use polar_cli::verify::{random_tridiagonals, ORACLE_SEED};
use polar_core::hft::{analytic_dw_dlambda, discrete_expectation, hft_verify};
use polar_core::legendre::{density, gauss_rule, normalized_theta, orthonormality};
use polar_core::liouville::{transform, DerivativeMode};
use polar_core::polar::{compute_spectrum, eigenstate, lambda_from_m, Scheme};
use polar_core::tridiag::{eigenvalue_kth, sturm_count};
use polar_core::{GridSpec, SturmLiouvilleProblem, SymTridiag};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("{} criterion {id} ({name}): {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n).unwrap()
}

fn polar_bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_polar")).args(args).output().unwrap()
}

// Legendre oracle from the explicit sum
// P_l(x) = 2^{-l} Σ_k (−1)^k C(l,k) C(2l−2k, l) x^{l−2k},
// differentiated m times and multiplied by (−1)^m (1 − x²)^{m/2}.

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn legendre_coefficients(l: u32) -> Vec<f64> {
    let mut c = vec![0.0; l as usize + 1];
    for k in 0..=l / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[(l - 2 * k) as usize] =
            sign * binomial(l as u64, k as u64) * binomial((2 * l - 2 * k) as u64, l as u64) / 2f64.powi(l as i32);
    }
    c
}

fn oracle_theta(l: u32, m: u32, theta: f64) -> f64 {
    let mut c = legendre_coefficients(l);
    for _ in 0..m {
        c = c.iter().enumerate().skip(1).map(|(p, a)| p as f64 * a).collect();
    }
    let x = theta.cos();
    let poly = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
    let phase = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let factorial_ratio: f64 = ((l - m + 1)..=(l + m)).map(f64::from).product();
    let norm = ((2 * l + 1) as f64 / 2.0 / factorial_ratio).sqrt();
    norm * phase * theta.sin().powi(m as i32) * poly
}

/// Cyclic Jacobi on a dense symmetric matrix; eigenvalues ascending.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn criterion_1_eigenvalue_law() {
    let start = Instant::now();
    let mut worst_pos: f64 = 0.0;
    let mut worst_zero: f64 = 0.0;
    let mut exact_ok = true;
    let mut finest = 0;
    for m in 0..=3 {
        let s = compute_spectrum(m, 5, grid(2048), 3).unwrap();
        finest = finest.max(*s.extrapolation.grids.last().unwrap());
        for (n, level) in s.levels.iter().enumerate() {
            let l = m as f64 + n as f64;
            let exact = 0.5 * (l + 0.5) * (l + 0.5);
            exact_ok &= level.w_exact == exact;
            let rel = (level.w_computed - exact).abs() / exact;
            if m == 0 {
                worst_zero = worst_zero.max(rel);
            } else {
                worst_pos = worst_pos.max(rel);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "eigenvalue law",
        worst_pos < 1e-4 && worst_zero < 5e-3 && exact_ok && finest == 8192 && elapsed < 60.0,
        format!(
            "max rel error m=1..3 {worst_pos:.3e} (< 1e-4), m=0 {worst_zero:.3e} (< 5e-3), finest grid {finest}, {elapsed:.2} s (< 60 s)"
        ),
    );
}

#[test]
fn criterion_2_sign_degeneracy() {
    let mut identical = true;
    for m in 1..=3 {
        for fmt in ["csv", "json"] {
            let run = |mm: i32| polar_bin(&["spectrum", "--m", &mm.to_string(), "--levels", "5", "--format", fmt]);
            let (plus, minus) = (run(m), run(-m));
            identical &= plus.status.success() && minus.status.success() && plus.stdout == minus.stdout;
        }
    }
    report(
        2,
        "sign degeneracy",
        identical,
        format!("spectrum output for m and -m byte-identical, m=1..3, csv and json: {identical}"),
    );
}

#[test]
fn criterion_3_hellmann_feynman() {
    let mut worst: f64 = 0.0;
    let mut positive = true;
    let mut min_expectation = f64::INFINITY;
    let mut spot = [0.0; 2];
    for m in 1..=3 {
        for n in 0..=2 {
            let r = hft_verify(m, n, grid(4096), Some(1e-4), 1e-3).unwrap();
            let closed = (n as f64 + m as f64 + 0.5) / m as f64;
            assert_eq!(analytic_dw_dlambda(m, n).unwrap(), closed);
            let values = [r.dw_dlambda_fd, r.expectation, closed];
            for i in 0..3 {
                for j in i + 1..3 {
                    worst = worst.max((values[i] - values[j]).abs() / values[i].abs().max(values[j].abs()));
                }
            }
            positive &= values.iter().all(|&v| v > 0.0);
            min_expectation = min_expectation.min(r.expectation);
            if n == 0 && m <= 2 {
                spot[m as usize - 1] = r.expectation;
            }
        }
    }
    let spot_ok = (spot[0] - 1.5).abs() / 1.5 < 1e-3 && (spot[1] - 1.25).abs() / 1.25 < 1e-3;
    report(
        3,
        "Hellmann-Feynman",
        worst < 1e-3 && positive && min_expectation >= 1.0 - 1e-3 && spot_ok,
        format!(
            "max pairwise rel discrepancy {worst:.3e} (< 1e-3), spot (1,0) {:.7} ~ 1.5, (2,0) {:.7} ~ 1.25, all positive {positive}, min expectation {min_expectation:.6}",
            spot[0], spot[1]
        ),
    );
}

#[test]
fn criterion_4_transformation_identity() {
    let gap = |m: i32, n: usize, mode| -> f64 {
        let nodes: Vec<f64> = (1..n).map(|j| j as f64 * PI / n as f64).collect();
        let u = transform(&SturmLiouvilleProblem::polar(m, nodes).unwrap(), mode).unwrap();
        u.theta_nodes
            .iter()
            .zip(&u.values)
            .map(|(&t, &v)| (v + 0.125 - (m as f64 * m as f64 - 0.25) / (2.0 * t.sin() * t.sin())).abs())
            .fold(0.0, f64::max)
    };
    let mut worst_analytic: f64 = 0.0;
    let mut worst_ratio = f64::INFINITY;
    for m in 0..=3 {
        worst_analytic =
            worst_analytic.max(gap(m, 180, DerivativeMode::Analytic)).max(gap(m, 1024, DerivativeMode::Analytic));
        let errs: Vec<f64> =
            [64, 128, 256, 512, 1024].iter().map(|&n| gap(m, n, DerivativeMode::FiniteDifference)).collect();
        for w in errs.windows(2) {
            worst_ratio = worst_ratio.min(w[0] / w[1]);
        }
    }
    report(
        4,
        "transformation identity",
        worst_analytic < 1e-10 && worst_ratio >= 3.0,
        format!("analytic max gap {worst_analytic:.3e} (< 1e-10), finite-difference min shrink per halving {worst_ratio:.3} (>= 3)"),
    );
}

#[test]
fn criterion_5_probability_densities() {
    // Gauss nodes in x = cos θ; checked first against monomials.
    let rule = gauss_rule(64).unwrap();
    for k in 0..=40 {
        let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        assert!((rule.integrate(|x| x.powi(k)) - exact).abs() < 1e-14, "x^{k}");
    }
    let mut worst_norm: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for l in 0..=10u32 {
        for m in -(l as i32)..=(l as i32) {
            let total = rule.integrate(|x| {
                let theta = x.acos();
                density(l, m, theta).unwrap() / theta.sin()
            });
            worst_norm = worst_norm.max((total - 1.0).abs());
            for j in 0..=50 {
                let theta = PI * j as f64 / 50.0;
                let want = oracle_theta(l, m.unsigned_abs(), theta);
                worst_oracle = worst_oracle.max((normalized_theta(l, m, theta).unwrap() - want).abs());
            }
        }
    }
    let ortho_rule = gauss_rule(32).unwrap();
    let mut worst_ortho: f64 = 0.0;
    for m in 0..=2 {
        for l in m..=10 {
            for lp in m..=10 {
                let v = orthonormality(l, lp, m, &ortho_rule).unwrap();
                worst_ortho = worst_ortho.max((v - if l == lp { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    let spot = density(1, 1, FRAC_PI_2).unwrap();
    report(
        5,
        "probability densities",
        worst_norm < 1e-10 && worst_ortho < 1e-10 && (spot - 0.75).abs() < 1e-12 && worst_oracle < 1e-10,
        format!(
            "max |norm - 1| {worst_norm:.3e}, max orthogonality gap {worst_ortho:.3e} (< 1e-10), density(1,1,pi/2) = {spot:.15}, max gap to explicit-sum oracle {worst_oracle:.3e}"
        ),
    );
}

#[test]
fn criterion_6_eigensolver_oracle() {
    let mut worst_poly: f64 = 0.0;
    let mut worst_jacobi: f64 = 0.0;
    let mut monotone = true;
    let matrices = random_tridiagonals(100, ORACLE_SEED);
    for (d, e) in &matrices {
        let n = d.len();
        let t = SymTridiag::new(d.clone(), e.clone()).unwrap();
        let bisection: Vec<f64> = (0..n).map(|k| eigenvalue_kth(&t, k, 1e-13).unwrap()).collect();
        let roots = characteristic_roots(d, e).expect("oracle separates all roots");
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = d[i];
            if i + 1 < n {
                dense[i][i + 1] = e[i];
                dense[i + 1][i] = e[i];
            }
        }
        let jacobi = jacobi_eigenvalues(dense);
        for k in 0..n {
            worst_poly = worst_poly.max((bisection[k] - roots[k]).abs());
            worst_jacobi = worst_jacobi.max((bisection[k] - jacobi[k]).abs());
        }
        let (lo, hi) = t.gershgorin();
        let counts: Vec<usize> =
            (0..=1000).map(|i| sturm_count(&t, lo - 1.0 + (hi - lo + 2.0) * i as f64 / 1000.0)).collect();
        monotone &= counts.windows(2).all(|w| w[0] <= w[1]) && counts[0] == 0 && counts[1000] == n;
    }
    report(
        6,
        "eigensolver oracle",
        matrices.len() == 100 && worst_poly < 1e-8 && worst_jacobi < 1e-8 && monotone,
        format!(
            "{} matrices: max |bisection - char-poly root| {worst_poly:.3e}, max |bisection - Jacobi| {worst_jacobi:.3e} (< 1e-8), Sturm counts monotone {monotone}",
            matrices.len()
        ),
    );
}

#[test]
fn criterion_7_eigenfunction_identity() {
    let diff = |m: i32, n: u32, g: GridSpec| -> f64 {
        let l = m.unsigned_abs() + n;
        let state = eigenstate(lambda_from_m(m), n, g, Scheme::default()).unwrap();
        let h = g.h();
        let mut analytic: Vec<f64> =
            g.nodes().iter().map(|&t| t.sin().sqrt() * oracle_theta(l, m.unsigned_abs(), t)).collect();
        let norm = (analytic.iter().map(|y| y * y).sum::<f64>() * h).sqrt();
        analytic.iter_mut().for_each(|y| *y /= norm);
        let numeric_norm = (state.y.iter().map(|y| y * y).sum::<f64>() * h).sqrt();
        let overlap: f64 = analytic.iter().zip(&state.y).map(|(a, b)| a * b).sum();
        let sign = overlap.signum();
        analytic.iter().zip(&state.y).map(|(a, b)| (a - sign * b / numeric_norm).abs()).fold(0.0, f64::max)
    };
    let mut worst: f64 = 0.0;
    let mut decreasing = true;
    for m in 0..=2 {
        for n in 0..=2 {
            let d: Vec<f64> = [1024, 2048, 4096].iter().map(|&k| diff(m, n, grid(k))).collect();
            decreasing &= d.windows(2).all(|w| w[1] < w[0]);
            worst = worst.max(d[2]);
        }
    }
    report(
        7,
        "eigenfunction identity",
        worst < 1e-2 && decreasing,
        format!("max sign-aligned |y_analytic - y_numeric| at N=4096 {worst:.3e} (< 1e-2), decreasing over N=1024,2048,4096 {decreasing}"),
    );
}

#[test]
fn criterion_8_m0_divergence() {
    let values: Vec<f64> =
        [512, 1024, 2048, 4096].iter().map(|&n| discrete_expectation(0, 0, grid(n)).unwrap()).collect();
    // Recomputed from the eigenvector: Σ y²/sin²θ h with Σ y² h = 1.
    let recomputed: Vec<f64> = [512, 1024, 2048, 4096]
        .iter()
        .map(|&n| {
            let g = grid(n);
            let y = eigenstate(lambda_from_m(0), 0, g, Scheme::Standard).unwrap().y;
            let norm: f64 = y.iter().map(|v| v * v).sum::<f64>() * g.h();
            g.nodes().iter().zip(&y).map(|(t, v)| v * v / (t.sin() * t.sin())).sum::<f64>() * g.h() / norm
        })
        .collect();
    let agree = values.iter().zip(&recomputed).all(|(a, b)| (a - b).abs() < 1e-9 * a);
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let out = polar_bin(&["hft", "--m", "0", "--n", "0"]);
    let refused = out.status.code() == Some(1) && String::from_utf8_lossy(&out.stderr).contains("diverges");
    report(
        8,
        "m = 0 divergence",
        increasing && agree && refused,
        format!(
            "<1/sin^2> for (0,0) at N=512,1024,2048,4096: {:.5} {:.5} {:.5} {:.5}, strictly increasing {increasing}, independent recomputation agrees {agree}, hft --m 0 exit 1 {refused}",
            values[0], values[1], values[2], values[3]
        ),
    );
}

#[test]
fn criterion_9_cli_determinism() {
    let golden_dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden"].iter().collect();
    let cases: [(&str, &[&str]); 3] = [
        ("spectrum_m1_levels3.csv", &["spectrum", "--m", "1", "--levels", "3"]),
        ("density_l1_m1.csv", &["density", "--l", "1", "--m", "1"]),
        ("transform_m1.csv", &["transform", "--m", "1"]),
    ];
    let mut goldens_ok = true;
    for (file, args) in cases {
        let out = polar_bin(args);
        goldens_ok &= out.status.success() && out.stdout == fs::read(golden_dir.join(file)).unwrap();
    }
    let verify = polar_bin(&["verify"]);
    let verify_ok = verify.status.code() == Some(0);
    let text = String::from_utf8_lossy(&verify.stdout);
    let summary = text.lines().last().unwrap_or("").to_owned();
    report(
        9,
        "CLI determinism",
        goldens_ok && verify_ok,
        format!("golden files byte-identical {goldens_ok}, verify exit 0 {verify_ok} ({summary})"),
    );
}
