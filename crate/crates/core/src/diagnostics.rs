//! Discrete counterparts of the a-priori estimates and limit relations:
//! pointwise and mass bounds, monotonicity in time, the graph and
//! complementarity residuals, `Σ`-regularity, and front tracking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FrontError, Result};
use crate::grid::{face_gradients, Field, Geometry, Grid};
use crate::model::ModelParams;
use crate::solver::{RunResult, Snapshot};

pub const DEFAULT_WINDOW: usize = 6;
pub const DEFAULT_FIT_FRACTION: f64 = 0.5;
/// Collar width of the complementarity residual, relative to `P_M`.
pub const DEFAULT_THETA_FRACTION: f64 = 0.05;

pub const DENSITY_TOL: f64 = 1e-6;
pub const PRESSURE_TOL: f64 = 1e-3;
pub const MASS_RTOL: f64 = 1e-8;
pub const DNDT_TOL: f64 = 1e-8;
pub const BOUNDARY_TOL: f64 = 1e-8;

/// A measured value checked against a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub value: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl BoundCheck {
    pub fn upper(value: f64, bound: f64, tolerance: f64) -> Self {
        BoundCheck {
            value,
            bound,
            tolerance,
            pass: value <= bound + tolerance,
        }
    }

    pub fn lower(value: f64, bound: f64, tolerance: f64) -> Self {
        BoundCheck {
            value,
            bound,
            tolerance,
            pass: value >= bound - tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceGradients {
    pub front: f64,
    pub max_grad_n: f64,
    pub max_grad_p: f64,
    /// Largest jump of the face gradient of `Σ` across a cell in the window.
    pub sigma_kink: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub max_density: BoundCheck,
    pub max_pressure: BoundCheck,
    pub mass_ratio_max: BoundCheck,
    pub min_time_derivative: BoundCheck,
    /// Largest density reached in the last cell; the domain is assumed to
    /// contain the support.
    pub boundary_density: BoundCheck,
    pub monotone_admissible: bool,
    pub graph_residual: f64,
    pub complementarity_residual: f64,
    /// `‖Δ_h Σ‖` in the discrete `L²(0, T; L²)` norm over the snapshots.
    pub sigma_l2_laplacian: f64,
    pub interface_gradients: Option<InterfaceGradients>,
    pub front_trajectory: Vec<(f64, f64)>,
}

impl DiagnosticsReport {
    pub fn bounds_pass(&self) -> bool {
        self.max_density.pass
            && self.max_pressure.pass
            && self.mass_ratio_max.pass
            && self.min_time_derivative.pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsOptions {
    pub front_threshold: f64,
    /// Absolute pressure collar of the complementarity residual.
    pub theta: f64,
    pub window: usize,
}

impl DiagnosticsOptions {
    pub fn for_params(params: &ModelParams) -> Self {
        DiagnosticsOptions {
            front_threshold: crate::solver::DEFAULT_FRONT_THRESHOLD,
            theta: DEFAULT_THETA_FRACTION * params.homeostatic_pressure(),
            window: DEFAULT_WINDOW,
        }
    }
}

/// Largest `x` at which the piecewise-linear interpolant of `(x_i, n_i)`
/// crosses `threshold`.
pub fn front_position(x: &[f64], n: &[f64], threshold: f64) -> Result<f64> {
    debug_assert_eq!(x.len(), n.len());
    for i in (0..n.len().saturating_sub(1)).rev() {
        let (a, b) = (n[i], n[i + 1]);
        let crosses = (a >= threshold && b < threshold) || (a < threshold && b >= threshold);
        if crosses {
            let s = (threshold - a) / (b - a);
            return Ok(x[i] + s * (x[i + 1] - x[i]));
        }
    }
    if n.iter().all(|&v| v >= threshold) {
        Err(Error::FrontUndefined(FrontError::AllAbove))
    } else {
        Err(Error::FrontUndefined(FrontError::AllBelow))
    }
}

pub(crate) fn front_on_grid(grid: &Grid, n: &[f64], threshold: f64) -> Result<f64> {
    front_position(grid.centers(), n, threshold)
}

/// `Σ_i w_i p_i |1 − n_i|`, the discrete distance to the monotone graph.
pub fn graph_residual(n: &Field, params: &ModelParams) -> f64 {
    let grid = n.grid();
    n.values()
        .iter()
        .zip(grid.volumes())
        .map(|(&v, w)| w * params.pressure(v.max(0.0)) * (1.0 - v).abs())
        .sum()
}

/// `Σ w_i |p_i (Δ_h p_i + G(p_i))|` over cells where the pressure and
/// the pressure of every neighbor exceed `theta`.
pub fn complementarity_residual(n: &Field, params: &ModelParams, theta: f64) -> f64 {
    let grid = n.grid();
    let p: Vec<f64> = n
        .values()
        .iter()
        .map(|&v| params.pressure(v.max(0.0)))
        .collect();
    let mut lap = vec![0.0; p.len()];
    grid.flux_laplacian(&p, &mut lap);
    let m = p.len();
    let law = params.growth();
    (0..m)
        .filter(|&i| {
            p[i] > theta && (i == 0 || p[i - 1] > theta) && (i + 1 == m || p[i + 1] > theta)
        })
        .map(|i| grid.volumes()[i] * (p[i] * (lap[i] + law.rate(p[i]))).abs())
        .sum()
}

/// Least-squares front speed with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedFit {
    pub speed: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Fits `R = a + σ t` over the last `fraction` of the trajectory's time span.
pub fn fit_speed(trajectory: &[(f64, f64)], fraction: f64) -> Result<SpeedFit> {
    if trajectory.is_empty() {
        return Err(Error::DegenerateFit("empty trajectory"));
    }
    let t0 = trajectory.first().unwrap().0;
    let t1 = trajectory.last().unwrap().0;
    let start = t1 - fraction.clamp(0.0, 1.0) * (t1 - t0);
    let window: Vec<(f64, f64)> = trajectory
        .iter()
        .copied()
        .filter(|&(t, _)| t >= start)
        .collect();
    let count = window.len();
    if count < 3 {
        return Err(Error::DegenerateFit(
            "fewer than three points in the fit window",
        ));
    }
    let nf = count as f64;
    let t_mean = window.iter().map(|p| p.0).sum::<f64>() / nf;
    let r_mean = window.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = window.iter().map(|p| (p.0 - t_mean).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all samples share the same time"));
    }
    let sxy: f64 = window.iter().map(|p| (p.0 - t_mean) * (p.1 - r_mean)).sum();
    let speed = sxy / sxx;
    let intercept = r_mean - speed * t_mean;
    let ssr: f64 = window
        .iter()
        .map(|p| (p.1 - intercept - speed * p.0).powi(2))
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(SpeedFit {
        speed,
        intercept,
        stderr,
        points: count,
    })
}

pub fn estimate_speed(trajectory: &[(f64, f64)]) -> Result<f64> {
    fit_speed(trajectory, DEFAULT_FIT_FRACTION).map(|f| f.speed)
}

/// Right-hand side of the one-dimensional interface relation
/// `σ = −p′(R⁻) + G(0) ∫_R^∞ n dx`.
///
/// `p′(R⁻)` is the face gradient between the two cells just inside `R`;
/// the tail integral counts the part of each cell lying beyond `R`.
pub fn tw_formula_rhs(snapshot: &Snapshot, params: &ModelParams, front: f64) -> Result<f64> {
    let grid = &snapshot.grid;
    if grid.geometry() != Geometry::Line {
        return Err(Error::Param {
            name: "geometry",
            reason: "the interface relation is one-dimensional; use a line grid".into(),
        });
    }
    if !front.is_finite() {
        return Err(Error::FrontUndefined(FrontError::AllBelow));
    }
    let dx = grid.dx();
    let inside = grid.centers().iter().rposition(|&x| x < front);
    let i = match inside {
        Some(i) if i >= 1 => i,
        _ => return Err(Error::FrontUndefined(FrontError::AllBelow)),
    };
    let slope = (snapshot.p[i] - snapshot.p[i - 1]) / dx;
    let tail: f64 = (0..grid.cells())
        .map(|j| {
            let lo = grid.face_position(j).max(front);
            let hi = grid.face_position(j + 1);
            (hi - lo).max(0.0) * snapshot.n[j]
        })
        .sum();
    Ok(-slope + params.growth().g0() * tail)
}

/// Spatial `Σ_i w_i (Δ_h Σ_i)²` of one snapshot.
pub fn sigma_laplacian_sq(snapshot: &Snapshot, params: &ModelParams) -> f64 {
    let grid = &snapshot.grid;
    let sigma: Vec<f64> = snapshot
        .n
        .iter()
        .map(|&v| params.sigma_value(v.max(0.0)))
        .collect();
    let mut lap = vec![0.0; sigma.len()];
    grid.flux_laplacian(&sigma, &mut lap);
    lap.iter().zip(grid.volumes()).map(|(l, w)| w * l * l).sum()
}

/// Time-trapezoid of `‖Δ_h Σ‖²_{L²}` over the snapshots.
pub fn sigma_regularity(snapshots: &[Snapshot], params: &ModelParams) -> f64 {
    let values: Vec<f64> = snapshots
        .iter()
        .map(|s| sigma_laplacian_sq(s, params))
        .collect();
    snapshots
        .windows(2)
        .zip(values.windows(2))
        .map(|(s, v)| 0.5 * (s[1].t - s[0].t) * (v[0] + v[1]))
        .sum()
}

/// Gradient magnitudes of `n`, `p` and the kink of `∇Σ` within `window`
/// cells of the density front.
pub fn interface_gradients(
    snapshot: &Snapshot,
    params: &ModelParams,
    threshold: f64,
    window: usize,
) -> Result<InterfaceGradients> {
    let grid = &snapshot.grid;
    let front = front_on_grid(grid, &snapshot.n, threshold)?;
    let dx = grid.dx();
    let m = grid.cells();
    // face nearest to the crossing
    let face = ((front / dx).round() as usize).clamp(1, m - 1);
    let lo = face.saturating_sub(window).max(1);
    let hi = (face + window).min(m - 1);

    let grad_n = face_gradients(&snapshot.n, dx);
    let grad_p = face_gradients(&snapshot.p, dx);
    let sigma: Vec<f64> = snapshot
        .n
        .iter()
        .map(|&v| params.sigma_value(v.max(0.0)))
        .collect();
    let grad_s = face_gradients(&sigma, dx);

    let max_abs = |g: &[f64]| (lo..=hi).map(|j| g[j].abs()).fold(0.0, f64::max);
    // cell c sits between faces c and c+1; both must be interior faces
    let sigma_kink = (lo..hi)
        .map(|c| (grad_s[c + 1] - grad_s[c]).abs())
        .fold(0.0, f64::max);
    Ok(InterfaceGradients {
        front,
        max_grad_n: max_abs(&grad_n),
        max_grad_p: max_abs(&grad_p),
        sigma_kink,
    })
}

/// Worst-case bound checks and limit residuals for a finished run.
pub fn lemma_bounds_report(result: &RunResult, params: &ModelParams) -> DiagnosticsReport {
    lemma_bounds_report_with(result, params, &DiagnosticsOptions::for_params(params))
}

pub fn lemma_bounds_report_with(
    result: &RunResult,
    params: &ModelParams,
    options: &DiagnosticsOptions,
) -> DiagnosticsReport {
    let initial = &result.snapshots[0];
    let initial_max = initial.n.iter().copied().fold(0.0, f64::max);
    let max_n = result
        .series
        .iter()
        .map(|r| r.max_n)
        .fold(initial_max, f64::max);
    let max_p = params.pressure(max_n.max(0.0));
    let mass_ratio = result
        .series
        .iter()
        .map(|r| {
            if r.mass_bound > 0.0 {
                r.mass / r.mass_bound
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    let min_dndt = if result.series.is_empty() {
        result.initial_admissibility.min_rate
    } else {
        result
            .series
            .iter()
            .map(|r| r.min_dndt)
            .fold(f64::INFINITY, f64::min)
    };

    let last = result.final_snapshot();
    let final_n = result.final_state.n.clone();

    DiagnosticsReport {
        max_density: BoundCheck::upper(max_n, params.n_max(), DENSITY_TOL),
        max_pressure: BoundCheck::upper(max_p, params.homeostatic_pressure(), PRESSURE_TOL),
        mass_ratio_max: BoundCheck::upper(mass_ratio, 1.0, MASS_RTOL),
        min_time_derivative: BoundCheck::lower(min_dndt, 0.0, DNDT_TOL),
        boundary_density: BoundCheck::upper(result.boundary_density, 0.0, BOUNDARY_TOL),
        monotone_admissible: result.initial_admissibility.admissible,
        graph_residual: graph_residual(&final_n, params),
        complementarity_residual: complementarity_residual(&final_n, params, options.theta),
        sigma_l2_laplacian: sigma_regularity(&result.snapshots, params).sqrt(),
        interface_gradients: interface_gradients(
            last,
            params,
            options.front_threshold,
            options.window,
        )
        .ok(),
        front_trajectory: result.front_trajectory(),
    }
}
