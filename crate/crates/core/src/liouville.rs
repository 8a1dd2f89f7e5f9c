//! Liouville transformation of the weighted polar equation.
//!
//! For `(1/w) d/dθ (w dΘ/dθ) − q(θ) Θ = −Λ Θ`, the substitution `y = w^½ Θ`
//! removes the first-derivative term and leaves
//!
//! ```text
//! −y'' + [q(θ) − c(θ)] y = Λ y,    c = ¼(w'/w)² − ½ w''/w.
//! ```
//!
//! Scaling by ½ gives the Schrödinger form `−½y'' + U_eff y = W y` with
//! `U_eff = ½(q − c)` and `W = ½Λ`. For `w = sin θ`, `c = ¼cot²θ + ½` and
//! `U_eff + ⅛ = (m² − ¼)/(2 sin²θ)`; the constant ⅛ is reported separately
//! as [`SIN_WEIGHT_SHIFT`] and never folded into `U_eff`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// `(m² − ¼)/(2 sin²θ) − U_eff` for the weight `sin θ`.
pub const SIN_WEIGHT_SHIFT: f64 = 0.125;

/// Relative tolerance on node spacing for finite-difference derivatives.
const UNIFORM_SPACING_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// `w = sin θ` with closed-form derivatives.
    AnalyticSin,
    Sampled {
        values: Vec<f64>,
        first: Option<Vec<f64>>,
        second: Option<Vec<f64>>,
    },
}

/// A positive weight function known on strictly increasing nodes in `(0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    nodes: Vec<f64>,
    kind: WeightKind,
}

impl WeightSpec {
    pub fn analytic_sin(nodes: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        Ok(Self { nodes, kind: WeightKind::AnalyticSin })
    }

    /// Sampled weight without derivatives.
    pub fn sampled(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if values.len() != nodes.len() {
            return Err(Error::InvalidInput("weight samples must match the node count"));
        }
        check_positive(&values)?;
        Ok(Self { nodes, kind: WeightKind::Sampled { values, first: None, second: None } })
    }

    /// `w ≡ 1` with exact (zero) derivatives.
    pub fn constant(nodes: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        Self::sampled(nodes, alloc::vec![1.0; n])?.with_derivatives(alloc::vec![0.0; n], alloc::vec![0.0; n])
    }

    /// Attaches first and second derivative samples to a sampled weight.
    pub fn with_derivatives(self, first: Vec<f64>, second: Vec<f64>) -> Result<Self> {
        match self.kind {
            WeightKind::AnalyticSin => Err(Error::InvalidInput("analytic weights carry their own derivatives")),
            WeightKind::Sampled { values, .. } => {
                if first.len() != values.len() || second.len() != values.len() {
                    return Err(Error::InvalidInput("derivative samples must match the weight sample count"));
                }
                if first.iter().chain(&second).any(|x| !x.is_finite()) {
                    return Err(Error::InvalidInput("derivative samples must be finite"));
                }
                Ok(Self {
                    nodes: self.nodes,
                    kind: WeightKind::Sampled { values, first: Some(first), second: Some(second) },
                })
            }
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn values(&self) -> Vec<f64> {
        match &self.kind {
            WeightKind::AnalyticSin => self.nodes.iter().map(|&t| libm::sin(t)).collect(),
            WeightKind::Sampled { values, .. } => values.clone(),
        }
    }

    fn value_at(&self, i: usize) -> f64 {
        match &self.kind {
            WeightKind::AnalyticSin => libm::sin(self.nodes[i]),
            WeightKind::Sampled { values, .. } => values[i],
        }
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("weight needs at least one node"));
    }
    if let Some(&bad) = nodes.iter().find(|&&t| !(t > 0.0 && t < PI)) {
        return Err(Error::Domain { what: "weight nodes must lie in the open interval (0, pi)", value: bad });
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("weight nodes must be strictly increasing"));
    }
    Ok(())
}

fn check_positive(values: &[f64]) -> Result<()> {
    match values.iter().find(|&&w| !(w > 0.0) || !w.is_finite()) {
        Some(&bad) => Err(Error::Domain { what: "weight must be positive and finite", value: bad }),
        None => Ok(()),
    }
}

/// Polar Sturm–Liouville problem on `(0, π)` with singular term
/// `coefficient / sin²θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SturmLiouvilleProblem {
    pub weight: WeightSpec,
    pub singular_term_coefficient: f64,
}

impl SturmLiouvilleProblem {
    pub fn new(weight: WeightSpec, singular_term_coefficient: f64) -> Result<Self> {
        if !(singular_term_coefficient >= 0.0) || !singular_term_coefficient.is_finite() {
            return Err(Error::Domain {
                what: "singular term coefficient must be finite and nonnegative",
                value: singular_term_coefficient,
            });
        }
        Ok(Self { weight, singular_term_coefficient })
    }

    /// The polar equation for magnetic quantum number `m`: weight `sin θ`,
    /// coefficient `m²`.
    pub fn polar(m: i32, nodes: Vec<f64>) -> Result<Self> {
        let m = f64::from(m);
        Self::new(WeightSpec::analytic_sin(nodes)?, m * m)
    }
}

/// `U_eff` sampled on the problem nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePotential {
    pub theta_nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// Factor turning the Sturm–Liouville eigenvalue Λ into `W`.
    pub eigenvalue_scale: f64,
}

impl EffectivePotential {
    /// `W` of `−½y'' + U_eff y = W y` for Sturm–Liouville eigenvalue Λ.
    pub fn schrodinger_eigenvalue(&self, sl_eigenvalue: f64) -> f64 {
        self.eigenvalue_scale * sl_eigenvalue
    }
}

/// `(m² − ¼)/(2 sin²θ)`, the effective polar potential with the ⅛ shift
/// absorbed.
pub fn polar_potential(m: i32, theta: f64) -> f64 {
    let m = f64::from(m);
    let s = libm::sin(theta);
    (m * m - 0.25) / (2.0 * s * s)
}

/// `c(θ) = ¼(w'/w)² − ½ w''/w` at one node, from analytic or supplied
/// derivatives.
pub fn curvature_term(weight: &WeightSpec, node_index: usize) -> Result<f64> {
    let len = weight.nodes.len();
    if node_index >= len {
        return Err(Error::IndexOutOfRange { index: node_index, len });
    }
    match &weight.kind {
        WeightKind::AnalyticSin => Ok(sin_curvature(weight.nodes[node_index])),
        WeightKind::Sampled { values, first: Some(d1), second: Some(d2) } => {
            Ok(curvature(values[node_index], d1[node_index], d2[node_index]))
        }
        WeightKind::Sampled { .. } => Err(Error::DerivativeUnavailable),
    }
}

/// `¼cot²θ + ½`.
fn sin_curvature(theta: f64) -> f64 {
    let cot = libm::cos(theta) / libm::sin(theta);
    0.25 * cot * cot + 0.5
}

fn curvature(w: f64, d1: f64, d2: f64) -> f64 {
    let r = d1 / w;
    0.25 * r * r - 0.5 * d2 / w
}

/// Curvature term at every node under the requested derivative mode.
pub fn curvature_terms(weight: &WeightSpec, mode: DerivativeMode) -> Result<Vec<f64>> {
    match mode {
        DerivativeMode::Analytic => (0..weight.nodes.len()).map(|i| curvature_term(weight, i)).collect(),
        DerivativeMode::FiniteDifference => {
            let values = weight.values();
            let (d1, d2) = finite_difference_derivatives(&weight.nodes, &values)?;
            Ok((0..values.len()).map(|i| curvature(values[i], d1[i], d2[i])).collect())
        }
    }
}

/// Maps the problem to `U_eff = ½(coefficient/sin²θ − c(θ))`.
pub fn transform(problem: &SturmLiouvilleProblem, mode: DerivativeMode) -> Result<EffectivePotential> {
    let weight = &problem.weight;
    check_positive(&weight.values())?;
    let c = curvature_terms(weight, mode)?;
    let values = weight
        .nodes
        .iter()
        .zip(&c)
        .map(|(&theta, &c)| {
            let s = libm::sin(theta);
            0.5 * (problem.singular_term_coefficient / (s * s) - c)
        })
        .collect();
    Ok(EffectivePotential { theta_nodes: weight.nodes.clone(), values, eigenvalue_scale: 0.5 })
}

/// `y = w^½ Θ` at the weight nodes.
pub fn theta_to_y(weight: &WeightSpec, theta_values: &[f64]) -> Result<Vec<f64>> {
    scale_by_weight(weight, theta_values, |w, v| libm::sqrt(w) * v)
}

/// Inverse of [`theta_to_y`]: `Θ = y / w^½`.
pub fn y_to_theta(weight: &WeightSpec, y_values: &[f64]) -> Result<Vec<f64>> {
    scale_by_weight(weight, y_values, |w, v| v / libm::sqrt(w))
}

fn scale_by_weight(weight: &WeightSpec, samples: &[f64], f: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
    if samples.len() != weight.nodes.len() {
        return Err(Error::InvalidInput("sample count must match the weight nodes"));
    }
    (0..samples.len())
        .map(|i| {
            let w = weight.value_at(i);
            if !(w > 0.0) {
                return Err(Error::Domain { what: "weight must be positive", value: w });
            }
            Ok(f(w, samples[i]))
        })
        .collect()
}

/// First and second derivatives of uniformly spaced samples.
///
/// Fourth-order stencils (five-point centered, five/six-point one-sided) with
/// at least six nodes; second-order stencils for three to five nodes.
pub fn finite_difference_derivatives(nodes: &[f64], values: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = nodes.len();
    if n < 3 {
        return Err(Error::InsufficientGrid { nodes: n, required: 3 });
    }
    if values.len() != n {
        return Err(Error::InvalidInput("sample count must match the node count"));
    }
    let h = (nodes[n - 1] - nodes[0]) / (n - 1) as f64;
    if nodes.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > UNIFORM_SPACING_RTOL * h) {
        return Err(Error::NonUniformGrid);
    }
    if n >= 6 {
        Ok(fourth_order(values, h))
    } else {
        Ok(second_order(values, h))
    }
}

fn fourth_order(w: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    const D1_EDGE: [[f64; 5]; 2] = [[-25.0, 48.0, -36.0, 16.0, -3.0], [-3.0, -10.0, 18.0, -6.0, 1.0]];
    const D2_EDGE: [[f64; 6]; 2] = [[45.0, -154.0, 214.0, -156.0, 61.0, -10.0], [10.0, -15.0, -4.0, 14.0, -6.0, 1.0]];
    let n = w.len();
    let mut d1 = alloc::vec![0.0; n];
    let mut d2 = alloc::vec![0.0; n];
    for j in 2..n - 2 {
        d1[j] = (w[j - 2] - 8.0 * w[j - 1] + 8.0 * w[j + 1] - w[j + 2]) / (12.0 * h);
        d2[j] = (-w[j - 2] + 16.0 * w[j - 1] - 30.0 * w[j] + 16.0 * w[j + 1] - w[j + 2]) / (12.0 * h * h);
    }
    for edge in 0..2 {
        let head: f64 = D1_EDGE[edge].iter().enumerate().map(|(k, c)| c * w[k]).sum();
        let tail: f64 = D1_EDGE[edge].iter().enumerate().map(|(k, c)| c * w[n - 1 - k]).sum();
        d1[edge] = head / (12.0 * h);
        d1[n - 1 - edge] = -tail / (12.0 * h);

        let head: f64 = D2_EDGE[edge].iter().enumerate().map(|(k, c)| c * w[k]).sum();
        let tail: f64 = D2_EDGE[edge].iter().enumerate().map(|(k, c)| c * w[n - 1 - k]).sum();
        d2[edge] = head / (12.0 * h * h);
        d2[n - 1 - edge] = tail / (12.0 * h * h);
    }
    (d1, d2)
}

fn second_order(w: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = w.len();
    let mut d1 = alloc::vec![0.0; n];
    let mut d2 = alloc::vec![0.0; n];
    for j in 1..n - 1 {
        d1[j] = (w[j + 1] - w[j - 1]) / (2.0 * h);
        d2[j] = (w[j - 1] - 2.0 * w[j] + w[j + 1]) / (h * h);
    }
    d1[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
    d1[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
    if n >= 4 {
        d2[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / (h * h);
        d2[n - 1] = (2.0 * w[n - 1] - 5.0 * w[n - 2] + 4.0 * w[n - 3] - w[n - 4]) / (h * h);
    } else {
        // Three nodes: only the first-order one-sided stencil fits.
        d2[0] = d2[1];
        d2[n - 1] = d2[1];
    }
    (d1, d2)
}
