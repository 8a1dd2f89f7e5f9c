//! Symmetric tridiagonal eigenvalue engine.
//!
//! Eigenvalues come from bisection on Sturm counts inside the Gershgorin
//! interval; eigenvectors from shifted inverse iteration with a pivoted
//! tridiagonal LU.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Maximum inverse-iteration sweeps before giving up.
const MAX_INVERSE_ITERATIONS: usize = 12;

/// Residual tolerance used by [`eigenvector`].
pub const EIGENVECTOR_TOL: f64 = 1e-8;

/// Eigenvalues closer than this (relative to the matrix scale) share a
/// cluster and have their eigenvectors re-orthogonalized.
const CLUSTER_GAP: f64 = 1e-10;

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidInput("tridiagonal matrix must have order >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput("off-diagonal length must be order - 1"));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Largest absolute entry.
    pub fn scale(&self) -> f64 {
        self.diag.iter().chain(&self.offdiag).fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Gershgorin interval `[lo, hi]` containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// `out = T v`.
    pub fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        let n = self.order();
        debug_assert!(v.len() == n && out.len() == n);
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }

    fn pivot_floor(&self) -> f64 {
        f64::EPSILON * self.scale().max(f64::MIN_POSITIVE)
    }
}

/// Eigenvector with its eigenvalue and infinity-norm residual `‖Tv − μv‖∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit 2-norm.
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Number of eigenvalues of `t` strictly less than `x`.
///
/// Counts negative pivots of the LDLᵀ factorization of `T − xI`. A pivot of
/// magnitude below `ε·scale` is replaced by `±ε·scale`, zero counting as
/// positive, so the count is well defined when `x` hits an eigenvalue of a
/// leading submatrix.
pub fn sturm_count(t: &SymTridiag, x: f64) -> usize {
    let floor = t.pivot_floor();
    let guard = |q: f64| {
        if q.abs() < floor {
            if q < 0.0 {
                -floor
            } else {
                floor
            }
        } else {
            q
        }
    };

    let mut q = guard(t.diag[0] - x);
    let mut count = usize::from(q < 0.0);
    for i in 1..t.order() {
        let e = t.offdiag[i - 1];
        q = guard(t.diag[i] - x - e * e / q);
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (0-based) by bisection.
///
/// The bracket `[lo, hi]` always satisfies `count(lo) ≤ k < count(hi)`;
/// bisection stops once its width is at most `tol · max(1, |lo|, |hi|)`.
pub fn eigenvalue_kth(t: &SymTridiag, k: usize, tol: f64) -> Result<f64> {
    let n = t.order();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "bisection tolerance must be positive", value: tol });
    }
    let (glo, ghi) = t.gershgorin();
    let pad = f64::EPSILON * t.scale().max(1.0) * n as f64 + tol;
    Ok(bisect(t, k, glo - pad, ghi + pad, tol))
}

fn bisect(t: &SymTridiag, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    // 2^-1100 of any finite bracket is far below one ulp, so this bound is
    // never the binding constraint.
    for _ in 0..1100 {
        let width = hi - lo;
        if width <= tol * 1.0_f64.max(lo.abs()).max(hi.abs()) {
            break;
        }
        let mid = lo + 0.5 * width;
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(t, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + 0.5 * (hi - lo)
}

/// The `count` smallest eigenvalues in nondecreasing order.
pub fn lowest_eigenvalues(t: &SymTridiag, count: usize, tol: f64) -> Result<Vec<f64>> {
    (0..count).map(|k| eigenvalue_kth(t, k, tol)).collect()
}

/// `(vᵀ T v) / (vᵀ v)`.
pub fn rayleigh_quotient(t: &SymTridiag, v: &[f64]) -> Result<f64> {
    if v.len() != t.order() {
        return Err(Error::InvalidInput("vector length must match matrix order"));
    }
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(Error::Domain { what: "rayleigh quotient of the zero vector", value: 0.0 });
    }
    let mut tv = vec![0.0; v.len()];
    t.mul_vec(v, &mut tv);
    let num: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
    Ok(num / norm2)
}

/// Eigenvector for the eigenvalue approximated by `mu`, by inverse iteration.
pub fn eigenvector(t: &SymTridiag, mu: f64) -> Result<EigenPair> {
    eigenvector_with_tol(t, mu, EIGENVECTOR_TOL)
}

pub fn eigenvector_with_tol(t: &SymTridiag, mu: f64, tol: f64) -> Result<EigenPair> {
    inverse_iteration(t, mu, tol, &[])
}

/// Eigenpairs for the `count` smallest eigenvalues. Vectors whose
/// eigenvalues fall in the same cluster are re-orthogonalized against each
/// other.
pub fn lowest_eigenpairs(t: &SymTridiag, count: usize, tol: f64) -> Result<Vec<EigenPair>> {
    let values = lowest_eigenvalues(t, count, tol)?;
    let gap = CLUSTER_GAP * t.scale().max(1.0);
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(count);
    for (k, &mu) in values.iter().enumerate() {
        let cluster: Vec<&[f64]> =
            pairs.iter().take(k).filter(|p| (p.value - mu).abs() <= gap).map(|p| p.vector.as_slice()).collect();
        let pair = inverse_iteration(t, mu, EIGENVECTOR_TOL.max(tol), &cluster)?;
        pairs.push(pair);
    }
    Ok(pairs)
}

fn inverse_iteration(t: &SymTridiag, mu: f64, tol: f64, orthogonal_to: &[&[f64]]) -> Result<EigenPair> {
    let n = t.order();
    if n == 1 {
        let residual = (t.diag[0] - mu).abs();
        return finish(vec![1.0], mu, residual, tol, 0);
    }

    let lu = ShiftedLu::factor(t, mu);
    let mut v = seed_vector(n);
    let mut tv = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for iteration in 1..=MAX_INVERSE_ITERATIONS {
        lu.solve(&mut v);
        for q in orthogonal_to {
            let dot: f64 = v.iter().zip(q.iter()).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q.iter()).for_each(|(a, b)| *a -= dot * b);
        }
        normalize(&mut v);
        t.mul_vec(&v, &mut tv);
        residual = tv.iter().zip(&v).map(|(a, b)| (a - mu * b).abs()).fold(0.0, f64::max);
        if residual <= tol * (1.0 + mu.abs()) {
            return finish(v, mu, residual, tol, iteration);
        }
    }
    Err(Error::NoConvergence { iterations: MAX_INVERSE_ITERATIONS, residual })
}

fn finish(mut v: Vec<f64>, mu: f64, residual: f64, tol: f64, iterations: usize) -> Result<EigenPair> {
    if residual > tol * (1.0 + mu.abs()) {
        return Err(Error::NoConvergence { iterations, residual });
    }
    fix_sign(&mut v);
    Ok(EigenPair { value: mu, vector: v, residual })
}

/// Alternating signs with non-repeating magnitudes, so the seed has no
/// mirror symmetry and overlaps both even and odd eigenvectors.
fn seed_vector(n: usize) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..n)
        .map(|j| {
            let x = j as f64 * GOLDEN;
            let frac = x - libm::floor(x);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * (1.0 + 0.5 * frac)
        })
        .collect()
}

fn normalize(v: &mut [f64]) {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// First component above 1e-3 of the peak magnitude is made positive.
fn fix_sign(v: &mut [f64]) {
    let peak = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-3 * peak) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// LU factorization with partial pivoting of `T − μI`, in the layout of
/// LAPACK's `dgttrf`: `U` has two superdiagonals, `L` is unit lower
/// bidiagonal up to row interchanges.
struct ShiftedLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper1: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiag, mu: f64) -> Self {
        let n = t.order();
        let mut lower = t.offdiag.clone();
        let mut diag: Vec<f64> = t.diag.iter().map(|d| d - mu).collect();
        let mut upper1 = t.offdiag.clone();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        let floor = t.pivot_floor();

        for i in 0..n - 1 {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i].abs() < floor {
                    diag[i] = floor;
                }
                let fact = lower[i] / diag[i];
                lower[i] = fact;
                diag[i + 1] -= fact * upper1[i];
            } else {
                let fact = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = fact;
                let temp = upper1[i];
                upper1[i] = diag[i + 1];
                diag[i + 1] = temp - fact * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper1[i + 1];
                    upper1[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for d in diag.iter_mut() {
            if d.abs() < floor {
                *d = if *d < 0.0 { -floor } else { floor };
            }
        }
        Self { lower, diag, upper1, upper2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper1[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper1[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
        // Rescale so repeated solves near a singular shift stay finite.
        let peak = b.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if peak > 0.0 && peak.is_finite() {
            b.iter_mut().for_each(|x| *x /= peak);
        }
    }
}
