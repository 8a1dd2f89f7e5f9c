//! Associated Legendre functions, Gauss–Legendre quadrature and normalized
//! polar probability densities.
//!
//! Conventions: Condon–Shortley phase, `P_m^m(x) = (−1)^m (2m−1)!! (1−x²)^{m/2}`.
//! Normalization is over θ alone with weight `sin θ`:
//! `∫₀^π (N P_l^m(cos θ))² sin θ dθ = 1`.

use alloc::vec::Vec;

use crate::polar::{self, GridSpec, Scheme};
use crate::{Error, Result};

pub const MAX_GAUSS_ORDER: usize = 256;
const NEWTON_MAX_ITER: usize = 100;

/// `(l, m)` with `m ≥ 0`; functions with negative `m` reduce to `|m|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LegendreIndex {
    pub l: u32,
    pub m: u32,
}

impl LegendreIndex {
    /// Index for a signed magnetic quantum number.
    pub fn from_signed(l: u32, m: i32) -> Self {
        Self { l, m: m.unsigned_abs() }
    }
}

/// `P_l^m(x)` by upward recurrence in `l`. Zero when `m > l`.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::Domain { what: "|x| must not exceed 1", value: x });
    }
    if m > l {
        return Ok(0.0);
    }
    // P_m^m
    let mut pmm = 1.0;
    if m > 0 {
        let root = libm::sqrt((1.0 - x) * (1.0 + x));
        let mut odd = 1.0;
        for _ in 0..m {
            pmm *= -odd * root;
            odd += 2.0;
        }
    }
    if l == m {
        return Ok(pmm);
    }
    // P_{m+1}^m = (2m+1) x P_m^m
    let mut prev = pmm;
    let mut cur = x * f64::from(2 * m + 1) * pmm;
    for ll in (m + 1)..l {
        let lf = f64::from(ll);
        let mf = f64::from(m);
        let next = ((2.0 * lf + 1.0) * x * cur - (lf + mf) * prev) / (lf - mf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `N = √[(2l+1)/2 · (l−m)!/(l+m)!]`.
pub fn norm_factor(l: u32, m: u32) -> Result<f64> {
    if m > l {
        return Err(Error::Domain { what: "m must not exceed l", value: f64::from(m) });
    }
    // (l−m)!/(l+m)! = 1 / Π_{k=l−m+1}^{l+m} k
    let ratio = ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / f64::from(k));
    Ok(libm::sqrt(0.5 * f64::from(2 * l + 1) * ratio))
}

/// `Θ(θ) = N_l^{|m|} P_l^{|m|}(cos θ)`, normalized with weight `sin θ`.
pub fn normalized_theta(l: u32, m: i32, theta: f64) -> Result<f64> {
    let m = m.unsigned_abs();
    Ok(norm_factor(l, m)? * assoc_legendre(l, m, clamp_unit(libm::cos(theta)))?)
}

/// `|N P_l^{|m|}(cos θ)|² sin θ`, the probability density in θ.
pub fn density(l: u32, m: i32, theta: f64) -> Result<f64> {
    if !(0.0..=core::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain { what: "theta must lie in [0, pi]", value: theta });
    }
    let v = normalized_theta(l, m, theta)?;
    // sin π is ~1.2e-16 in floating point; the density vanishes there.
    let s = if theta == core::f64::consts::PI { 0.0 } else { libm::sin(theta) };
    Ok(v * v * s)
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Density samples for one `(l, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarDensity {
    pub index: LegendreIndex,
    pub theta_samples: Vec<f64>,
    pub density_values: Vec<f64>,
}

impl PolarDensity {
    pub fn sample(l: u32, m: i32, theta_samples: Vec<f64>) -> Result<Self> {
        let density_values = theta_samples.iter().map(|&t| density(l, m, t)).collect::<Result<_>>()?;
        Ok(Self { index: LegendreIndex::from_signed(l, m), theta_samples, density_values })
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl GaussRule {
    /// `∫_{−1}^{1} f(x) dx`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule of the given order via Newton iteration from the
/// cosine guesses `cos(π(i − ¼)/(n + ½))`.
pub fn gauss_rule(order: usize) -> Result<GaussRule> {
    if !(1..=MAX_GAUSS_ORDER).contains(&order) {
        return Err(Error::Domain { what: "gauss rule order must be in 1..=256", value: order as f64 });
    }
    let n = order;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
                // One more evaluation for a consistent derivative.
                dp = legendre_with_derivative(n, x).1;
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                iterations: NEWTON_MAX_ITER,
                residual: legendre_with_derivative(n, x).0,
            });
        }
        // Middle node of an odd rule is exactly zero.
        if 2 * i + 1 == n {
            x = 0.0;
            dp = legendre_with_derivative(n, 0.0).1;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(GaussRule { nodes, weights, order })
}

/// `∫₀^π Θ_l^m Θ_{l'}^m sin θ dθ`, computed as an integral over `x = cos θ`.
///
/// Requires `rule.order ≥ l + l' + 1`.
pub fn orthonormality(l: u32, l_prime: u32, m: u32, rule: &GaussRule) -> Result<f64> {
    if rule.order < (l + l_prime + 1) as usize {
        return Err(Error::Precondition("gauss rule order must be at least l + l' + 1"));
    }
    let (na, nb) = match (norm_factor(l, m), norm_factor(l_prime, m)) {
        (Ok(a), Ok(b)) => (a, b),
        // A function with m > l is identically zero.
        _ => return Ok(0.0),
    };
    let mut err = None;
    let value = rule.integrate(|x| match (assoc_legendre(l, m, x), assoc_legendre(l_prime, m, x)) {
        (Ok(a), Ok(b)) => na * a * nb * b,
        (Err(e), _) | (_, Err(e)) => {
            err = Some(e);
            0.0
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Max-norm distance between the analytic `y = sin^½θ · N P_l^{|m|}(cos θ)`,
/// `l = |m| + n`, and the discrete eigenvector of the polar operator for the
/// same `(m, n)` on `grid`.
///
/// Both are normalized with `Σ yⱼ² h = 1` and sign-aligned before comparing.
pub fn eigenfunction_consistency(m: i32, n: u32, grid: GridSpec) -> Result<f64> {
    eigenfunction_consistency_with(m, n, grid, Scheme::default())
}

pub fn eigenfunction_consistency_with(m: i32, n: u32, grid: GridSpec, scheme: Scheme) -> Result<f64> {
    let abs_m = m.unsigned_abs();
    if abs_m > 3 || n > 4 {
        return Err(Error::Precondition("eigenfunction comparison supports |m| <= 3, n <= 4"));
    }
    let l = abs_m + n;
    let state = polar::eigenstate(polar::lambda_from_m(m), n, grid, scheme)?;
    let h = grid.h();

    let mut analytic = grid
        .nodes()
        .iter()
        .map(|&t| Ok(libm::sqrt(libm::sin(t)) * normalized_theta(l, m, t)?))
        .collect::<Result<Vec<f64>>>()?;
    let norm = libm::sqrt(analytic.iter().map(|y| y * y).sum::<f64>() * h);
    analytic.iter_mut().for_each(|y| *y /= norm);

    let overlap: f64 = analytic.iter().zip(&state.y).map(|(a, b)| a * b).sum();
    let sign = if overlap < 0.0 { -1.0 } else { 1.0 };
    Ok(analytic.iter().zip(&state.y).map(|(a, b)| (a - sign * b).abs()).fold(0.0, f64::max))
}
