//! Hellmann–Feynman check of `dW/dλ = ⟨sin⁻²θ⟩ > 0` for
//! `Â = −½ d²/dθ² + λ/sin²θ`.
//!
//! Three independent estimates:
//!
//! 1. central difference of the extrapolated spectrum in `λ`;
//! 2. the discrete expectation `Σ yⱼ² sin⁻²θⱼ h` of the standard-scheme
//!    eigenvector, which is exactly the derivative of the matrix eigenvalue;
//! 3. the closed form `(n + |m| + ½)/|m|`, from `W = ½(n + s + ½)²`,
//!    `s = √(2λ + ¼)`.
//!
//! At `m = 0` (`s = 0`) the derivative diverges and every route refuses.

use crate::polar::{self, GridSpec, Scheme, SpectrumOptions};
use crate::{Error, Result};

/// Allowed deviation of `Σ yⱼ² h` from 1.
const NORMALIZATION_TOL: f64 = 1e-6;

/// Default pass threshold on pairwise relative discrepancies.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancies {
    pub fd_vs_expectation: f64,
    pub fd_vs_analytic: f64,
    pub expectation_vs_analytic: f64,
}

impl Discrepancies {
    pub fn max(&self) -> f64 {
        self.fd_vs_expectation.max(self.fd_vs_analytic).max(self.expectation_vs_analytic)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HftReport {
    pub m: i32,
    pub n: u32,
    pub lambda: f64,
    pub dw_dlambda_fd: f64,
    pub expectation: f64,
    pub analytic: f64,
    pub discrepancies: Discrepancies,
    pub grid: GridSpec,
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// `Σ yⱼ² sin⁻²θⱼ · h` for a grid-normalized eigenvector.
pub fn expectation_inv_sin2(eigvec: &[f64], grid: GridSpec) -> Result<f64> {
    if eigvec.len() != grid.interior_len() {
        return Err(Error::InvalidInput("eigenvector length must equal the interior node count"));
    }
    let h = grid.h();
    let norm: f64 = eigvec.iter().map(|y| y * y).sum::<f64>() * h;
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Precondition("eigenvector must satisfy sum(y^2) h = 1"));
    }
    Ok(eigvec
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let s = libm::sin(grid.theta(i + 1));
            y * y / (s * s)
        })
        .sum::<f64>()
        * h)
}

/// Discrete `⟨sin⁻²θ⟩` of the standard-scheme eigenstate `(m, n)`.
///
/// Unlike the Hellmann–Feynman routes this accepts `m = 0`, where the value
/// grows without bound as the grid is refined.
pub fn discrete_expectation(m: i32, n: u32, grid: GridSpec) -> Result<f64> {
    let state = polar::eigenstate(polar::lambda_from_m(m), n, grid, Scheme::Standard)?;
    expectation_inv_sin2(&state.y, grid)
}

/// `10⁻⁴ · max(1, |λ|)`.
pub fn default_delta(lambda: f64) -> f64 {
    1e-4 * lambda.abs().max(1.0)
}

/// `[W_n(λ+δ) − W_n(λ−δ)]/(2δ)` from extrapolated spectra on `grid`.
pub fn dw_dlambda_fd(m: i32, n: u32, delta: f64, grid: GridSpec) -> Result<f64> {
    if m == 0 {
        return Err(Error::Divergence { m });
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain { what: "finite-difference step must be positive", value: delta });
    }
    let lambda = polar::lambda_from_m(m);
    let options = SpectrumOptions::default();
    let level = |coupling: f64| -> Result<f64> {
        let (values, _) = polar::coupling_spectrum(coupling, n + 1, grid, &options)?;
        Ok(values[n as usize])
    };
    let up = level(lambda + delta)?;
    let down = level(lambda - delta)?;
    Ok((up - down) / (2.0 * delta))
}

/// `(n + |m| + ½)/|m|`.
pub fn analytic_dw_dlambda(m: i32, n: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Divergence { m });
    }
    let s = f64::from(m.unsigned_abs());
    Ok((f64::from(n) + s + 0.5) / s)
}

/// Runs all three routes and compares them pairwise against `tolerance`.
pub fn hft_verify(m: i32, n: u32, grid: GridSpec, delta: Option<f64>, tolerance: f64) -> Result<HftReport> {
    if m == 0 {
        return Err(Error::Divergence { m });
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain { what: "tolerance must be positive", value: tolerance });
    }
    let lambda = polar::lambda_from_m(m);
    let delta = delta.unwrap_or_else(|| default_delta(lambda));
    let dw_dlambda_fd = dw_dlambda_fd(m, n, delta, grid)?;
    let expectation = discrete_expectation(m, n, grid)?;
    let analytic = analytic_dw_dlambda(m, n)?;
    let discrepancies = Discrepancies {
        fd_vs_expectation: relative_gap(dw_dlambda_fd, expectation),
        fd_vs_analytic: relative_gap(dw_dlambda_fd, analytic),
        expectation_vs_analytic: relative_gap(expectation, analytic),
    };
    let positive = dw_dlambda_fd > 0.0 && expectation > 0.0 && analytic > 0.0;
    let pass = positive && discrepancies.max() < tolerance;
    Ok(HftReport { m, n, lambda, dw_dlambda_fd, expectation, analytic, discrepancies, grid, delta, tolerance, pass })
}
