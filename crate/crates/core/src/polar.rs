//! The discretized polar operator `Â = −½ d²/dθ² + λ/sin²θ` on `(0, π)` with
//! `y(0) = y(π) = 0`, its spectrum, and comparison with the closed form
//! `W = ½(n + |m| + ½)²`.
//!
//! The grid is uniform with `N` subintervals; only the interior nodes
//! `θⱼ = jπ/N`, `j = 1 … N−1`, carry unknowns, so the singular endpoints are
//! never evaluated.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::tridiag::{self, SymTridiag};
use crate::{Error, Result};

/// Smallest admissible number of subintervals.
pub const MIN_INTERVALS: usize = 16;

/// Smallest admissible coupling; attained at `m = 0`.
pub const MIN_COUPLING: f64 = -0.125;

/// Default bisection tolerance for spectrum computations.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

/// The triple `(l, m, n)` tied together by `l = |m| + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    l: u32,
    m: i32,
    n: u32,
}

impl QuantumNumbers {
    pub fn from_m_n(m: i32, n: u32) -> Self {
        Self { l: m.unsigned_abs() + n, m, n }
    }

    pub fn from_l_m(l: u32, m: i32) -> Result<Self> {
        let abs_m = m.unsigned_abs();
        if abs_m > l {
            return Err(Error::Domain { what: "|m| must not exceed l", value: f64::from(m) });
        }
        Ok(Self { l, m, n: l - abs_m })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }

    /// `½(l + ½)²`.
    pub fn exact_w(&self) -> f64 {
        let l = f64::from(self.l);
        0.5 * (l + 0.5) * (l + 0.5)
    }
}

/// Uniform grid on `[0, π]` with `intervals` subintervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    intervals: usize,
}

impl GridSpec {
    pub fn new(intervals: usize) -> Result<Self> {
        if intervals < MIN_INTERVALS {
            return Err(Error::InvalidGrid { intervals, minimum: MIN_INTERVALS });
        }
        Ok(Self { intervals })
    }

    #[cfg(test)]
    pub(crate) fn unchecked(intervals: usize) -> Self {
        Self { intervals }
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn h(&self) -> f64 {
        PI / self.intervals as f64
    }

    /// Number of interior nodes, the matrix order.
    pub fn interior_len(&self) -> usize {
        self.intervals - 1
    }

    /// `θⱼ` for `j = 1 … N−1`.
    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (1..self.intervals).map(|j| self.theta(j)).collect()
    }

    /// The grid with `factor` times as many subintervals.
    pub fn refined(&self, factor: usize) -> Self {
        Self { intervals: self.intervals * factor }
    }
}

/// Finite-difference scheme for `Â`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    /// Three-point second difference plus `λ/sin²θⱼ` on the diagonal.
    Standard,
    /// [`Scheme::Standard`] plus a diagonal correction that makes the
    /// discrete operator exact on the endpoint power law `θ^α`,
    /// `α(α − 1) = 2λ`. Restores `O(h²)` convergence at `λ = −⅛`, where
    /// the standard scheme converges only logarithmically.
    #[default]
    PowerLawCorrected,
}

/// `(m² − ¼)/2`.
pub fn lambda_from_m(m: i32) -> f64 {
    let m = f64::from(m);
    0.5 * (m * m - 0.25)
}

/// `½(l + ½)²`.
pub fn exact_w(l: i64) -> Result<f64> {
    if l < 0 {
        return Err(Error::Domain { what: "l must be nonnegative", value: l as f64 });
    }
    let l = l as f64;
    Ok(0.5 * (l + 0.5) * (l + 0.5))
}

/// `s = √(2λ + ¼)`; equals `|m|` when `λ = lambda_from_m(m)`.
pub fn coupling_root(lambda: f64) -> Result<f64> {
    check_coupling(lambda)?;
    Ok(libm::sqrt((2.0 * lambda + 0.25).max(0.0)))
}

/// `W_n(λ) = ½(n + s + ½)²`, the closed form continued to real couplings.
pub fn exact_w_for_coupling(lambda: f64, n: u32) -> Result<f64> {
    let v = f64::from(n) + coupling_root(lambda)? + 0.5;
    Ok(0.5 * v * v)
}

/// `|m| + ½`: the regular solution behaves as `θ^(|m|+½)` at both ends.
pub fn asymptotic_exponent(m: i32) -> f64 {
    f64::from(m.unsigned_abs()) + 0.5
}

fn check_coupling(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda < MIN_COUPLING {
        return Err(Error::UnphysicalCoupling { lambda });
    }
    Ok(())
}

/// Standard-scheme matrix: diagonal `1/h² + λ/sin²θⱼ`, off-diagonal
/// `−1/(2h²)`, order `N − 1`.
pub fn build_hamiltonian(lambda: f64, grid: GridSpec) -> Result<SymTridiag> {
    build_hamiltonian_with(lambda, grid, Scheme::Standard)
}

pub fn build_hamiltonian_with(lambda: f64, grid: GridSpec, scheme: Scheme) -> Result<SymTridiag> {
    check_coupling(lambda)?;
    let n = grid.intervals();
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let alpha = 0.5 + coupling_root(lambda)?;

    let diag = (1..n)
        .map(|j| {
            let s = libm::sin(grid.theta(j));
            let mut d = inv_h2 + lambda / (s * s);
            if scheme == Scheme::PowerLawCorrected {
                d += (power_law_defect(j, alpha) + power_law_defect(n - j, alpha)) * inv_h2;
            }
            d
        })
        .collect();
    let offdiag = alloc::vec![-0.5 * inv_h2; n - 2];
    SymTridiag::new(diag, offdiag)
}

/// `½[((j+1)^α − 2j^α + (j−1)^α)/j^α − α(α−1)/j²]`: the amount by which the
/// three-point stencil misses the second derivative of `θ^α` at node `j`,
/// in units of `1/h²`.
fn power_law_defect(j: usize, alpha: f64) -> f64 {
    let x = 1.0 / j as f64;
    let c2 = alpha * (alpha - 1.0);
    let defect = if j < 4 {
        libm::pow(1.0 + x, alpha) + libm::pow(1.0 - x, alpha) - 2.0 - c2 * x * x
    } else {
        // 2 Σ_{k≥2} C(α, 2k) x^{2k}; the direct form cancels badly here.
        let x2 = x * x;
        let mut binom = 1.0;
        let mut k = 0.0;
        let mut sum = 0.0;
        let mut power = 1.0;
        for step in 1..=80 {
            binom *= (alpha - k) / (k + 1.0);
            k += 1.0;
            if step % 2 == 0 {
                power *= x2;
                if step >= 4 {
                    let term = binom * power;
                    sum += term;
                    if term.abs() <= 1e-18 * sum.abs() {
                        break;
                    }
                }
            }
        }
        2.0 * sum
    };
    0.5 * defect
}

/// Richardson extrapolation with an empirically estimated order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub order_p: f64,
}

/// Extrapolation was refused; `finest` is the value on the finest grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrapolationRefused {
    pub finest: f64,
}

/// Combines values at spacings `h`, `h/2`, `h/4`:
/// `p = log₂((v₁ − v₂)/(v₂ − v₃))`, `v₃ + (v₃ − v₂)/(2ᵖ − 1)`.
///
/// Refuses when a difference vanishes, the differences change sign, or they
/// fail to shrink (`p ≤ 0`).
pub fn richardson(values: [f64; 3]) -> core::result::Result<Extrapolated, ExtrapolationRefused> {
    let [v1, v2, v3] = values;
    let refused = ExtrapolationRefused { finest: v3 };
    let d12 = v1 - v2;
    let d23 = v2 - v3;
    if d12 == 0.0 || d23 == 0.0 || (d12 > 0.0) != (d23 > 0.0) {
        return Err(refused);
    }
    let ratio = d12 / d23;
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(refused);
    }
    let order_p = libm::log2(ratio);
    let value = v3 + (v3 - v2) / (libm::exp2(order_p) - 1.0);
    Ok(Extrapolated { value, order_p })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Number of grids `N, 2N, 4N` combined: 1 (none), 2 (assumed order 2)
    /// or 3 (estimated order).
    pub richardson_levels: u8,
    pub scheme: Scheme,
    pub eigen_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { richardson_levels: 3, scheme: Scheme::default(), eigen_tol: DEFAULT_EIGEN_TOL }
    }
}

impl SpectrumOptions {
    pub fn with_richardson(richardson_levels: u8) -> Self {
        Self { richardson_levels, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub n: u32,
    pub l: u32,
    pub w_computed: f64,
    pub w_exact: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelExtrapolation {
    /// Estimated order; `None` unless three grids were combined successfully.
    pub order_p: Option<f64>,
    pub refused: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    /// Subinterval counts of the grids used, coarsest first.
    pub grids: Vec<usize>,
    pub per_level: Vec<LevelExtrapolation>,
}

/// Spectrum of `Â` for one `|m|`.
///
/// `m` holds `|m|`: the operator depends on `m²` only, so results for `m`
/// and `−m` are identical.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub m: u32,
    pub lambda: f64,
    pub levels: Vec<Level>,
    pub grid: GridSpec,
    pub extrapolation: Extrapolation,
}

/// Lowest `levels` eigenvalues for magnetic quantum number `m`, with default
/// scheme and tolerance.
pub fn compute_spectrum(m: i32, levels: u32, grid: GridSpec, richardson_levels: u8) -> Result<SpectrumResult> {
    compute_spectrum_with(m, levels, grid, &SpectrumOptions::with_richardson(richardson_levels))
}

pub fn compute_spectrum_with(m: i32, levels: u32, grid: GridSpec, options: &SpectrumOptions) -> Result<SpectrumResult> {
    let abs_m = m.unsigned_abs();
    // λ from |m| keeps the ±m payloads identical by construction.
    let lambda = lambda_from_m(abs_m as i32);
    let (values, extrapolation) = coupling_spectrum(lambda, levels, grid, options)?;
    let levels = values
        .into_iter()
        .enumerate()
        .map(|(n, w_computed)| {
            let qn = QuantumNumbers::from_m_n(abs_m as i32, n as u32);
            let w_exact = qn.exact_w();
            Level { n: qn.n(), l: qn.l(), w_computed, w_exact, rel_error: (w_computed - w_exact).abs() / w_exact }
        })
        .collect();
    Ok(SpectrumResult { m: abs_m, lambda, levels, grid, extrapolation })
}

/// Lowest `levels` eigenvalues of `Â` at an arbitrary admissible coupling,
/// extrapolated over `richardson_levels` grids starting at `grid`.
pub fn coupling_spectrum(
    lambda: f64,
    levels: u32,
    grid: GridSpec,
    options: &SpectrumOptions,
) -> Result<(Vec<f64>, Extrapolation)> {
    if levels == 0 {
        return Err(Error::Domain { what: "at least one level must be requested", value: 0.0 });
    }
    if !(1..=3).contains(&options.richardson_levels) {
        return Err(Error::Domain {
            what: "richardson levels must be 1, 2 or 3",
            value: f64::from(options.richardson_levels),
        });
    }
    let count = levels as usize;
    if count > grid.interior_len() {
        return Err(Error::IndexOutOfRange { index: count - 1, len: grid.interior_len() });
    }

    let grids: Vec<GridSpec> = (0..options.richardson_levels).map(|i| grid.refined(1 << i)).collect();
    let per_grid = grids
        .iter()
        .map(|&g| {
            let t = build_hamiltonian_with(lambda, g, options.scheme)?;
            tridiag::lowest_eigenvalues(&t, count, options.eigen_tol)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = Vec::with_capacity(count);
    let mut per_level = Vec::with_capacity(count);
    for k in 0..count {
        let (value, info) = match per_grid.as_slice() {
            [only] => (only[k], LevelExtrapolation { order_p: None, refused: false }),
            [coarse, fine] => {
                let (v1, v2) = (coarse[k], fine[k]);
                (v2 + (v2 - v1) / 3.0, LevelExtrapolation { order_p: None, refused: false })
            }
            [a, b, c] => match richardson([a[k], b[k], c[k]]) {
                Ok(e) => (e.value, LevelExtrapolation { order_p: Some(e.order_p), refused: false }),
                Err(r) => (r.finest, LevelExtrapolation { order_p: None, refused: true }),
            },
            _ => unreachable!("richardson level count validated above"),
        };
        values.push(value);
        per_level.push(info);
    }
    let extrapolation = Extrapolation { grids: grids.iter().map(GridSpec::intervals).collect(), per_level };
    Ok((values, extrapolation))
}

/// A discrete eigenstate on the interior nodes, normalized so that
/// `Σ yⱼ² h = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub value: f64,
    pub y: Vec<f64>,
    pub residual: f64,
}

/// The `n`-th eigenstate of the matrix for coupling `lambda` on `grid`.
pub fn eigenstate(lambda: f64, n: u32, grid: GridSpec, scheme: Scheme) -> Result<Eigenstate> {
    let t = build_hamiltonian_with(lambda, grid, scheme)?;
    let value = tridiag::eigenvalue_kth(&t, n as usize, DEFAULT_EIGEN_TOL)?;
    let pair = tridiag::eigenvector(&t, value)?;
    let scale = 1.0 / libm::sqrt(grid.h());
    let y = pair.vector.iter().map(|v| v * scale).collect();
    Ok(Eigenstate { value, y, residual: pair.residual })
}
