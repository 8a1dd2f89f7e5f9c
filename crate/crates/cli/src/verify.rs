//! The one-shot verification suite behind `polar verify`.
//!
//! Each check returns a [`CheckOutcome`] carrying its measured values; the
//! suite passes only if every check does.

use std::f64::consts::FRAC_PI_2;

use polar_core::hft;
use polar_core::legendre::{self, gauss_rule, orthonormality};
use polar_core::liouville::DerivativeMode;
use polar_core::polar::{self, SpectrumOptions};
use polar_core::tridiag::{eigenvalue_kth, sturm_count};
use polar_core::{Error as CoreError, GridSpec, SymTridiag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::OutputFormat;
use crate::oracle::characteristic_roots;
use crate::report;

pub const MAX_L_LIMIT: u32 = 10;

/// Every default of the suite in one place.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Upper bound on `l` for the Legendre normalization and orthogonality
    /// checks.
    pub max_l: u32,
    pub tol_spectrum_m_pos: f64,
    pub tol_spectrum_m0: f64,
    pub tol_hft: f64,
    pub tol_quadrature: f64,
    /// Base grid for spectra; also the grid for the HFT and eigenfunction
    /// checks.
    pub grid: usize,
    pub richardson: u8,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_l: 5,
            tol_spectrum_m_pos: 1e-4,
            tol_spectrum_m0: 5e-3,
            tol_hft: 1e-3,
            tol_quadrature: 1e-10,
            grid: 4096,
            richardson: 3,
        }
    }
}

impl VerifyConfig {
    /// Rejects negative or non-finite tolerances, `max_l > 10`, and invalid
    /// grids. A zero tolerance is accepted (and cannot be met).
    pub fn validate(&self) -> Result<(), String> {
        if self.max_l > MAX_L_LIMIT {
            return Err(format!("--max-l must be at most {MAX_L_LIMIT}"));
        }
        for (name, tol) in [
            ("--tol-spectrum-m-pos", self.tol_spectrum_m_pos),
            ("--tol-spectrum-m0", self.tol_spectrum_m0),
            ("--tol-hft", self.tol_hft),
            ("--tol-quadrature", self.tol_quadrature),
        ] {
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(format!("{name} must be a finite nonnegative number"));
            }
        }
        if !(1..=3).contains(&self.richardson) {
            return Err("--richardson must be 1, 2 or 3".into());
        }
        // Eigenfunction check refines down to grid/4.
        GridSpec::new(self.grid / 4).map_err(|e| format!("--grid: {e}"))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Self { name, pass, detail }
    }

    fn failed(name: &'static str, err: impl std::fmt::Display) -> Self {
        Self { name, pass: false, detail: format!("error: {err}") }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn run_all(config: &VerifyConfig) -> Vec<CheckOutcome> {
    vec![
        check_eigenvalue_law(config),
        check_degeneracy(config),
        check_hellmann_feynman(config),
        check_transform_identity(config),
        check_densities(config),
        check_eigensolver_oracle(),
        check_eigenfunction_identity(config),
        check_m0_divergence(),
        check_determinism(),
    ]
}

fn check_eigenvalue_law(config: &VerifyConfig) -> CheckOutcome {
    const NAME: &str = "eigenvalue-law";
    let run = || -> Result<CheckOutcome, CoreError> {
        let grid = GridSpec::new(config.grid)?;
        let options = SpectrumOptions::with_richardson(config.richardson);
        let mut worst_pos: f64 = 0.0;
        let mut worst_zero: f64 = 0.0;
        for m in 0..=3 {
            let s = polar::compute_spectrum_with(m, 5, grid, &options)?;
            let worst = s.levels.iter().map(|l| l.rel_error).fold(0.0, f64::max);
            if m == 0 {
                worst_zero = worst;
            } else {
                worst_pos = worst_pos.max(worst);
            }
        }
        let pass = worst_pos < config.tol_spectrum_m_pos && worst_zero < config.tol_spectrum_m0;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!(
                "max rel error m>0 {worst_pos:.3e} (tol {:.1e}), m=0 {worst_zero:.3e} (tol {:.1e})",
                config.tol_spectrum_m_pos, config.tol_spectrum_m0
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_degeneracy(config: &VerifyConfig) -> CheckOutcome {
    const NAME: &str = "sign-degeneracy";
    let run = || -> Result<CheckOutcome, CoreError> {
        let grid = GridSpec::new(config.grid)?;
        let mut identical = true;
        for m in 1..=3 {
            for fmt in [OutputFormat::Csv, OutputFormat::Json] {
                let plus = report::render_spectrum(&polar::compute_spectrum(m, 3, grid, config.richardson)?, fmt);
                let minus = report::render_spectrum(&polar::compute_spectrum(-m, 3, grid, config.richardson)?, fmt);
                identical &= plus == minus;
            }
        }
        Ok(CheckOutcome::new(NAME, identical, format!("m vs -m output byte-identical for m=1..3: {identical}")))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_hellmann_feynman(config: &VerifyConfig) -> CheckOutcome {
    const NAME: &str = "hellmann-feynman";
    let run = || -> Result<CheckOutcome, CoreError> {
        let grid = GridSpec::new(config.grid)?;
        let mut worst: f64 = 0.0;
        let mut all_positive = true;
        let mut min_expectation = f64::INFINITY;
        let mut spots = Vec::new();
        for m in 1..=3 {
            for n in 0..=2 {
                let r = hft::hft_verify(m, n, grid, None, config.tol_hft.max(f64::MIN_POSITIVE))?;
                worst = worst.max(r.discrepancies.max());
                all_positive &= r.dw_dlambda_fd > 0.0 && r.expectation > 0.0 && r.analytic > 0.0;
                min_expectation = min_expectation.min(r.expectation);
                if n == 0 && m <= 2 {
                    spots.push(r.expectation);
                }
            }
        }
        let spot_ok = (spots[0] - 1.5).abs() < 1.5 * config.tol_hft && (spots[1] - 1.25).abs() < 1.25 * config.tol_hft;
        let pass = worst < config.tol_hft && all_positive && min_expectation >= 1.0 - 1e-3 && spot_ok;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!(
                "max pairwise rel discrepancy {worst:.3e} (tol {:.1e}), <1/sin^2> (1,0)={:.6} (2,0)={:.6}, min expectation {min_expectation:.6}",
                config.tol_hft, spots[0], spots[1]
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_transform_identity(_config: &VerifyConfig) -> CheckOutcome {
    const NAME: &str = "liouville-transform";
    let run = || -> Result<CheckOutcome, CoreError> {
        let mut worst_analytic: f64 = 0.0;
        let mut worst_ratio = f64::INFINITY;
        for m in 0..=3 {
            let t = report::transform_table(m, GridSpec::new(180)?, DerivativeMode::Analytic)?;
            worst_analytic = worst_analytic.max(t.max_abs_diff);
            let errs = [64, 128, 256, 512]
                .iter()
                .map(|&n| {
                    Ok(report::transform_table(m, GridSpec::new(n)?, DerivativeMode::FiniteDifference)?.max_abs_diff)
                })
                .collect::<Result<Vec<f64>, CoreError>>()?;
            for w in errs.windows(2) {
                worst_ratio = worst_ratio.min(w[0] / w[1]);
            }
        }
        let pass = worst_analytic < 1e-10 && worst_ratio >= 3.0;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!("analytic max |U_eff+1/8-U| {worst_analytic:.3e} (tol 1e-10), fd min shrink per halving {worst_ratio:.2} (need >= 3)"),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_densities(config: &VerifyConfig) -> CheckOutcome {
    const NAME: &str = "legendre-densities";
    let run = || -> Result<CheckOutcome, CoreError> {
        let rule = gauss_rule(64)?;
        let mut worst_norm: f64 = 0.0;
        for l in 0..=config.max_l {
            for m in -(l as i32)..=(l as i32) {
                // ∫₀^π ρ dθ with x = cos θ: ρ/sin θ is a polynomial in x.
                let mut err = None;
                let total = rule.integrate(|x| {
                    let theta = x.acos();
                    legendre::density(l, m, theta).unwrap_or_else(|e| {
                        err = Some(e);
                        0.0
                    }) / theta.sin()
                });
                if let Some(e) = err {
                    return Err(e);
                }
                worst_norm = worst_norm.max((total - 1.0).abs());
            }
        }
        let ortho_rule = gauss_rule(32)?;
        let mut worst_ortho: f64 = 0.0;
        for m in 0..=2u32.min(config.max_l) {
            for l in m..=config.max_l {
                for lp in m..=config.max_l {
                    let v = orthonormality(l, lp, m, &ortho_rule)?;
                    let expected = if l == lp { 1.0 } else { 0.0 };
                    worst_ortho = worst_ortho.max((v - expected).abs());
                }
            }
        }
        let spot = legendre::density(1, 1, FRAC_PI_2)?;
        let pass =
            worst_norm < config.tol_quadrature && worst_ortho < config.tol_quadrature && (spot - 0.75).abs() < 1e-12;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!(
                "l<={}: max |norm-1| {worst_norm:.3e}, max |<l|l'>-delta| {worst_ortho:.3e} (tol {:.1e}), density(1,1,pi/2)={spot:.15}",
                config.max_l, config.tol_quadrature
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

/// 100 random symmetric tridiagonals, order ≤ 8, entries in `[−2, 2]`,
/// from a fixed seed.
pub fn random_tridiagonals(count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            let d = (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            let e = (0..n - 1).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            (d, e)
        })
        .collect()
}

pub const ORACLE_SEED: u64 = 0x5eed_2010;

fn check_eigensolver_oracle() -> CheckOutcome {
    const NAME: &str = "eigensolver-oracle";
    let run = || -> Result<CheckOutcome, CoreError> {
        let mut worst: f64 = 0.0;
        let mut monotone = true;
        let mut oracle_failures = 0;
        for (d, e) in random_tridiagonals(100, ORACLE_SEED) {
            let t = SymTridiag::new(d.clone(), e.clone())?;
            match characteristic_roots(&d, &e) {
                Some(roots) => {
                    for (k, root) in roots.iter().enumerate() {
                        worst = worst.max((eigenvalue_kth(&t, k, 1e-13)? - root).abs());
                    }
                }
                None => oracle_failures += 1,
            }
            let (lo, hi) = t.gershgorin();
            let counts: Vec<usize> =
                (0..=400).map(|i| sturm_count(&t, lo - 1.0 + (hi - lo + 2.0) * i as f64 / 400.0)).collect();
            monotone &= counts.windows(2).all(|w| w[0] <= w[1]);
        }
        let pass = worst < 1e-8 && monotone && oracle_failures == 0;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!("100 random matrices: max |bisection-root| {worst:.3e} (tol 1e-8), sturm monotone {monotone}, unresolved oracles {oracle_failures}"),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_eigenfunction_identity(config: &VerifyConfig) -> CheckOutcome {
    const NAME: &str = "eigenfunction-identity";
    let run = || -> Result<CheckOutcome, CoreError> {
        let grids = [GridSpec::new(config.grid / 4)?, GridSpec::new(config.grid / 2)?, GridSpec::new(config.grid)?];
        let mut worst: f64 = 0.0;
        let mut decreasing = true;
        for m in 0..=2 {
            for n in 0..=2 {
                let diffs = grids
                    .iter()
                    .map(|&g| legendre::eigenfunction_consistency(m, n, g))
                    .collect::<Result<Vec<f64>, _>>()?;
                decreasing &= diffs.windows(2).all(|w| w[1] < w[0]);
                worst = worst.max(diffs[2]);
            }
        }
        let pass = worst < 1e-2 && decreasing;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!(
                "max |y_analytic - y_numeric| at N={} {worst:.3e} (tol 1e-2), decreasing under refinement {decreasing}",
                config.grid
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_m0_divergence() -> CheckOutcome {
    const NAME: &str = "m0-divergence";
    let run = || -> Result<CheckOutcome, CoreError> {
        let values = [512, 1024, 2048, 4096]
            .iter()
            .map(|&n| hft::discrete_expectation(0, 0, GridSpec::new(n)?))
            .collect::<Result<Vec<f64>, _>>()?;
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let refused =
            matches!(hft::hft_verify(0, 0, GridSpec::new(512)?, None, 1e-3), Err(CoreError::Divergence { .. }));
        Ok(CheckOutcome::new(
            NAME,
            increasing && refused,
            format!(
                "<1/sin^2> for (0,0) at N=512..4096: {:.4} {:.4} {:.4} {:.4}; hft refuses m=0: {refused}",
                values[0], values[1], values[2], values[3]
            ),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}

fn check_determinism() -> CheckOutcome {
    const NAME: &str = "determinism";
    let run = || -> Result<CheckOutcome, CoreError> {
        let grid = GridSpec::new(crate::cli::DEFAULT_SPECTRUM_GRID)?;
        let a = report::render_spectrum(&polar::compute_spectrum(1, 3, grid, 3)?, OutputFormat::Csv);
        let b = report::render_spectrum(&polar::compute_spectrum(1, 3, grid, 3)?, OutputFormat::Csv);
        let d1 = report::render_density(&report::density_table(1, 1, 181)?, OutputFormat::Csv);
        let d2 = report::render_density(&report::density_table(1, 1, 181)?, OutputFormat::Csv);
        let round_trip = a.lines().skip(1).all(|line| {
            line.split(',')
                .skip(3)
                .all(|cell| cell.parse::<f64>().map(|v| crate::format::real(v) == cell).unwrap_or(false))
        });
        let pass = a == b && d1 == d2 && round_trip;
        Ok(CheckOutcome::new(
            NAME,
            pass,
            format!("repeat runs identical {}, csv reals round-trip {round_trip}", a == b && d1 == d2),
        ))
    };
    run().unwrap_or_else(|e| CheckOutcome::failed(NAME, e))
}
