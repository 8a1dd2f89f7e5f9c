//! Serializable views of the core results and their CSV/JSON renderings.

use std::f64::consts::PI;

use polar_core::liouville::{self, polar_potential, DerivativeMode, SIN_WEIGHT_SHIFT};
use polar_core::polar::SpectrumResult;
use polar_core::{legendre, GridSpec, HftReport, SturmLiouvilleProblem};
use serde::Serialize;

use crate::format::{self, Cell, Csv, OutputFormat};

#[derive(Debug, Serialize)]
pub struct GridJson {
    #[serde(rename = "N")]
    pub intervals: usize,
    pub h: f64,
}

impl From<GridSpec> for GridJson {
    fn from(g: GridSpec) -> Self {
        Self { intervals: g.intervals(), h: g.h() }
    }
}

/// Key order: `m, lambda, levels, grid, extrapolation`.
#[derive(Debug, Serialize)]
pub struct SpectrumJson {
    pub m: u32,
    pub lambda: f64,
    pub levels: Vec<LevelJson>,
    pub grid: GridJson,
    pub extrapolation: ExtrapolationJson,
}

#[derive(Debug, Serialize)]
pub struct LevelJson {
    pub n: u32,
    pub l: u32,
    #[serde(rename = "W_computed")]
    pub w_computed: f64,
    #[serde(rename = "W_exact")]
    pub w_exact: f64,
    pub rel_error: f64,
}

#[derive(Debug, Serialize)]
pub struct ExtrapolationJson {
    pub grids: Vec<usize>,
    pub order_p: Vec<Option<f64>>,
    pub refused: Vec<bool>,
}

impl From<&SpectrumResult> for SpectrumJson {
    fn from(s: &SpectrumResult) -> Self {
        Self {
            m: s.m,
            lambda: s.lambda,
            levels: s
                .levels
                .iter()
                .map(|l| LevelJson {
                    n: l.n,
                    l: l.l,
                    w_computed: l.w_computed,
                    w_exact: l.w_exact,
                    rel_error: l.rel_error,
                })
                .collect(),
            grid: s.grid.into(),
            extrapolation: ExtrapolationJson {
                grids: s.extrapolation.grids.clone(),
                order_p: s.extrapolation.per_level.iter().map(|e| e.order_p).collect(),
                refused: s.extrapolation.per_level.iter().map(|e| e.refused).collect(),
            },
        }
    }
}

pub fn render_spectrum(s: &SpectrumResult, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => format::json(&SpectrumJson::from(s)),
        OutputFormat::Csv => {
            let mut csv = Csv::with_header(&["n", "l", "m", "W_computed", "W_exact", "rel_error"]);
            for level in &s.levels {
                csv.row(&[
                    Cell::Int(level.n.into()),
                    Cell::Int(level.l.into()),
                    Cell::Int(s.m.into()),
                    Cell::Real(level.w_computed),
                    Cell::Real(level.w_exact),
                    Cell::Real(level.rel_error),
                ]);
            }
            csv.finish()
        }
    }
}

/// Density samples on `[0, π]`, endpoints included.
#[derive(Debug, Serialize)]
pub struct DensityJson {
    pub l: u32,
    pub m: u32,
    pub theta: Vec<f64>,
    #[serde(rename = "Theta_normalized")]
    pub theta_normalized: Vec<f64>,
    pub density: Vec<f64>,
}

/// `samples` equispaced angles on `[0, π]`; the last one is exactly `π`.
pub fn uniform_angles(samples: usize) -> Vec<f64> {
    let last = samples - 1;
    (0..samples).map(|j| if j == last { PI } else { PI * j as f64 / last as f64 }).collect()
}

pub fn density_table(l: u32, m: i32, samples: usize) -> polar_core::Result<DensityJson> {
    let theta = uniform_angles(samples);
    // `+ 0.0` folds the −0 produced by the phase factor at the poles.
    let theta_normalized =
        theta.iter().map(|&t| legendre::normalized_theta(l, m, t).map(|v| v + 0.0)).collect::<Result<Vec<_>, _>>()?;
    let density = theta.iter().map(|&t| legendre::density(l, m, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(DensityJson { l, m: m.unsigned_abs(), theta, theta_normalized, density })
}

pub fn render_density(d: &DensityJson, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => format::json(d),
        OutputFormat::Csv => {
            let mut csv = Csv::with_header(&["theta", "Theta_normalized", "density"]);
            for i in 0..d.theta.len() {
                csv.row(&[Cell::Real(d.theta[i]), Cell::Real(d.theta_normalized[i]), Cell::Real(d.density[i])]);
            }
            csv.finish()
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TransformJson {
    pub m: u32,
    pub derivatives: &'static str,
    pub grid: GridJson,
    pub max_abs_diff: f64,
    pub theta: Vec<f64>,
    #[serde(rename = "U_eff")]
    pub u_eff: Vec<f64>,
    #[serde(rename = "U_paper")]
    pub u_paper: Vec<f64>,
    pub abs_diff: Vec<f64>,
}

/// `U_eff` on the interior nodes of `grid`, next to `(m² − ¼)/(2 sin²θ)` and
/// `|U_eff + ⅛ − (m² − ¼)/(2 sin²θ)|`.
pub fn transform_table(m: i32, grid: GridSpec, mode: DerivativeMode) -> polar_core::Result<TransformJson> {
    let problem = SturmLiouvilleProblem::polar(m, grid.nodes())?;
    let u = liouville::transform(&problem, mode)?;
    let u_paper: Vec<f64> = u.theta_nodes.iter().map(|&t| polar_potential(m, t)).collect();
    let abs_diff: Vec<f64> = u.values.iter().zip(&u_paper).map(|(ue, up)| (ue + SIN_WEIGHT_SHIFT - up).abs()).collect();
    Ok(TransformJson {
        m: m.unsigned_abs(),
        derivatives: match mode {
            DerivativeMode::Analytic => "analytic",
            DerivativeMode::FiniteDifference => "fd",
        },
        grid: grid.into(),
        max_abs_diff: abs_diff.iter().copied().fold(0.0, f64::max),
        theta: u.theta_nodes,
        u_eff: u.values,
        u_paper,
        abs_diff,
    })
}

pub fn render_transform(t: &TransformJson, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => format::json(t),
        OutputFormat::Csv => {
            let mut csv = Csv::with_header(&["theta", "U_eff", "U_paper", "abs_diff"]);
            for i in 0..t.theta.len() {
                csv.row(&[
                    Cell::Real(t.theta[i]),
                    Cell::Real(t.u_eff[i]),
                    Cell::Real(t.u_paper[i]),
                    Cell::Real(t.abs_diff[i]),
                ]);
            }
            csv.finish()
        }
    }
}

/// Key order: `m, n, lambda, dW_dlambda_fd, expectation, analytic,
/// discrepancies, grid, delta, tolerance, pass`.
#[derive(Debug, Serialize)]
pub struct HftJson {
    pub m: i32,
    pub n: u32,
    pub lambda: f64,
    #[serde(rename = "dW_dlambda_fd")]
    pub dw_dlambda_fd: f64,
    pub expectation: f64,
    pub analytic: f64,
    pub discrepancies: DiscrepanciesJson,
    pub grid: GridJson,
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct DiscrepanciesJson {
    pub fd_vs_expectation: f64,
    pub fd_vs_analytic: f64,
    pub expectation_vs_analytic: f64,
}

impl From<&HftReport> for HftJson {
    fn from(r: &HftReport) -> Self {
        Self {
            m: r.m,
            n: r.n,
            lambda: r.lambda,
            dw_dlambda_fd: r.dw_dlambda_fd,
            expectation: r.expectation,
            analytic: r.analytic,
            discrepancies: DiscrepanciesJson {
                fd_vs_expectation: r.discrepancies.fd_vs_expectation,
                fd_vs_analytic: r.discrepancies.fd_vs_analytic,
                expectation_vs_analytic: r.discrepancies.expectation_vs_analytic,
            },
            grid: r.grid.into(),
            delta: r.delta,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

pub fn render_hft(r: &HftReport) -> String {
    format::json(&HftJson::from(r))
}
