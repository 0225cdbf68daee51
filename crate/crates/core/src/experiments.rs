//! Orchestrated studies: k-sweeps towards the Hele-Shaw limit,
//! comparisons across `ν`, and traveling-wave speed checks.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    complementarity_residual, fit_speed, front_position, graph_residual, sigma_regularity,
    tw_formula_rhs, SpeedFit, DEFAULT_FIT_FRACTION, DEFAULT_THETA_FRACTION,
};
use crate::error::{Error, Result};
use crate::grid::{Geometry, Grid};
use crate::solver::{run, InitialData, RunConfig, RunResult, Snapshot};

/// A front counts as formed once the density gets this close to `n_max`.
const SATURATION_FRACTION: f64 = 0.9;

/// Excess of the fitted speed over `σ₀`, in fit standard errors, that
/// counts as strictly faster.
const SPEEDUP_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: f64,
    pub graph_residual: f64,
    pub compl_residual: f64,
    pub sigma_l2: f64,
    /// Discrete L¹ distance of the final density to the previous row's.
    pub dist_prev_n: Option<f64>,
    pub dist_prev_p: Option<f64>,
    pub runtime_secs: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Full results, in row order.
    pub runs: Vec<RunResult>,
}

/// Runs `base` once per `k` on the same grid and initial data.
///
/// Rows come out sorted by `k`; a repeated `k` is allowed and yields a
/// zero distance to its twin.
pub fn k_sweep(base: &RunConfig, ks: &[f64]) -> Result<SweepResult> {
    if ks.is_empty() {
        return Err(Error::Param {
            name: "ks",
            reason: "at least one k is required".into(),
        });
    }
    let mut ks = ks.to_vec();
    if ks.iter().any(|k| !k.is_finite()) {
        return Err(Error::Param {
            name: "ks",
            reason: "values must be finite".into(),
        });
    }
    ks.sort_by(f64::total_cmp);

    let mut rows: Vec<SweepRow> = Vec::with_capacity(ks.len());
    let mut runs: Vec<RunResult> = Vec::with_capacity(ks.len());
    for &k in &ks {
        let wrap = |e: Error| Error::Sweep {
            k,
            source: Box::new(e),
        };
        let mut config = base.clone();
        config.params = base.params.with_k(k).map_err(wrap)?;
        let started = Instant::now();
        let result = run(&config).map_err(wrap)?;
        let runtime_secs = started.elapsed().as_secs_f64();

        let params = &config.params;
        let theta = DEFAULT_THETA_FRACTION * params.homeostatic_pressure();
        let n = &result.final_state.n;
        let last = result.final_snapshot();
        let (dist_prev_n, dist_prev_p) = match runs.last() {
            Some(prev) => {
                let other = prev.final_snapshot();
                (
                    Some(l1_distance(&result.grid, &last.n, &other.n)),
                    Some(l1_distance(&result.grid, &last.p, &other.p)),
                )
            }
            None => (None, None),
        };
        rows.push(SweepRow {
            k,
            graph_residual: graph_residual(n, params),
            compl_residual: complementarity_residual(n, params, theta),
            sigma_l2: sigma_regularity(&result.snapshots, params).sqrt(),
            dist_prev_n,
            dist_prev_p,
            runtime_secs,
        });
        runs.push(result);
    }
    Ok(SweepResult { rows, runs })
}

fn l1_distance(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(grid.volumes())
        .map(|((x, y), w)| w * (x - y).abs())
        .sum()
}

#[derive(Debug, Clone)]
pub struct NuRow {
    pub nu: f64,
    /// Front at `t_final`; NaN when undefined.
    pub front: f64,
    pub speed: Option<SpeedFit>,
    pub final_profile: Snapshot,
    pub result: RunResult,
}

/// Runs `base` once per `ν`, keeping the input order.
pub fn nu_compare(base: &RunConfig, nus: &[f64]) -> Result<Vec<NuRow>> {
    if nus.is_empty() {
        return Err(Error::Param {
            name: "nus",
            reason: "at least one nu is required".into(),
        });
    }
    nus.iter()
        .map(|&nu| {
            let wrap = |e: Error| Error::Compare {
                nu,
                source: Box::new(e),
            };
            let mut config = base.clone();
            config.params = base.params.with_nu(nu).map_err(wrap)?;
            let result = run(&config).map_err(wrap)?;
            let trajectory = result.front_trajectory();
            let front = result.series.last().map_or(f64::NAN, |r| r.front);
            Ok(NuRow {
                nu,
                front,
                speed: fit_speed(&trajectory, DEFAULT_FIT_FRACTION).ok(),
                final_profile: result.final_snapshot().clone(),
                result,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaveStudy {
    pub k: f64,
    pub nu: f64,
    pub sigma: SpeedFit,
    pub sigma0: f64,
    /// Interface relation evaluated at the final pressure front.
    pub formula_rhs: f64,
    pub pressure_front: f64,
    /// `σ − σ₀` exceeds three fit standard errors.
    pub faster_than_sigma0: bool,
    /// Distance covered by the density front, in initial bump widths.
    pub widths_traveled: Option<f64>,
    pub trajectory: Vec<(f64, f64)>,
}

/// Measures the asymptotic front speed of a one-dimensional run and
/// compares it with `σ₀` and with the interface relation.
pub fn wave_speed_check(config: &RunConfig) -> Result<WaveStudy> {
    if config.grid.geometry != Geometry::Line {
        return Err(Error::Param {
            name: "geometry",
            reason: "the wave study needs a line grid".into(),
        });
    }
    let result = run(config)?;
    wave_study(config, &result)
}

/// The analysis half of [`wave_speed_check`], for an existing result.
pub fn wave_study(config: &RunConfig, result: &RunResult) -> Result<WaveStudy> {
    let params = &config.params;
    let peak = result.series.iter().map(|r| r.max_n).fold(0.0, f64::max);
    if peak < SATURATION_FRACTION * params.n_max() {
        return Err(Error::NoFront { max_density: peak });
    }
    let trajectory = result.front_trajectory();
    let sigma = fit_speed(&trajectory, DEFAULT_FIT_FRACTION)?;
    let sigma0 = params.growth().sigma0_speed();

    let last = result.final_snapshot();
    let theta = DEFAULT_THETA_FRACTION * params.homeostatic_pressure();
    let pressure_front = front_position(last.grid.centers(), &last.p, theta)?;
    let formula_rhs = tw_formula_rhs(last, params, pressure_front)?;

    let widths_traveled = match (&config.initial, trajectory.first(), trajectory.last()) {
        (InitialData::Bump { width, .. }, Some(a), Some(b)) => Some((b.1 - a.1) / width),
        _ => None,
    };
    Ok(WaveStudy {
        k: params.k(),
        nu: params.nu(),
        faster_than_sigma0: sigma.speed - sigma0 > SPEEDUP_SIGMAS * sigma.stderr,
        sigma,
        sigma0,
        formula_rhs,
        pressure_front,
        widths_traveled,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GrowthLaw, ModelParams};
    use crate::solver::GridSpec;

    fn base(k: f64, nu: f64, length: f64, cells: usize, t_final: f64) -> RunConfig {
        let params = ModelParams::new(k, nu, GrowthLaw::standard()).unwrap();
        let initial = InitialData::Bump {
            amplitude: 0.5,
            center: 0.0,
            width: 1.5,
        };
        RunConfig::new(params, GridSpec::line(length, cells), initial, t_final)
    }

    #[test]
    fn singleton_sweep_has_no_distances() {
        let s = k_sweep(&base(25.0, 0.5, 6.0, 60, 0.5), &[25.0]).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert!(s.rows[0].dist_prev_n.is_none() && s.rows[0].dist_prev_p.is_none());
        assert!(s.rows[0].graph_residual.is_finite());
    }

    #[test]
    fn repeated_k_gives_zero_distance() {
        let s = k_sweep(&base(25.0, 0.5, 6.0, 60, 0.5), &[30.0, 30.0]).unwrap();
        assert_eq!(s.rows[1].dist_prev_n, Some(0.0));
        assert_eq!(s.rows[1].dist_prev_p, Some(0.0));
    }

    #[test]
    fn sweep_rows_are_sorted() {
        let s = k_sweep(&base(25.0, 0.5, 6.0, 60, 0.2), &[40.0, 10.0, 20.0]).unwrap();
        let ks: Vec<f64> = s.rows.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![10.0, 20.0, 40.0]);
    }

    #[test]
    fn sweep_failure_carries_k() {
        let err = k_sweep(&base(25.0, 0.5, 6.0, 60, 0.2), &[10.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Sweep { k, .. } if k == 1.0), "{err}");
    }

    #[test]
    fn identical_nus_give_identical_rows() {
        let rows = nu_compare(&base(25.0, 0.5, 6.0, 60, 0.5), &[0.5, 0.5]).unwrap();
        // fronts are NaN until one forms, so compare bit patterns
        let bits = |r: &NuRow| -> Vec<[u64; 8]> {
            r.result
                .series
                .iter()
                .map(|s| {
                    [
                        s.t,
                        s.dt,
                        s.mass,
                        s.mass_bound,
                        s.max_n,
                        s.max_p,
                        s.front,
                        s.min_dndt,
                    ]
                    .map(f64::to_bits)
                })
                .collect()
        };
        assert_eq!(bits(&rows[0]), bits(&rows[1]));
        assert_eq!(rows[0].final_profile, rows[1].final_profile);
    }

    #[test]
    fn negative_nu_is_reported_with_its_value() {
        let err = nu_compare(&base(25.0, 0.5, 6.0, 60, 0.2), &[-0.1]).unwrap_err();
        assert!(matches!(err, Error::Compare { nu, .. } if nu == -0.1));
    }

    #[test]
    fn wave_study_without_saturation_is_no_front() {
        let mut config = base(25.0, 0.5, 6.0, 60, 0.1);
        config.initial = InitialData::Bump {
            amplitude: 0.1,
            center: 0.0,
            width: 1.5,
        };
        assert!(matches!(
            wave_speed_check(&config),
            Err(Error::NoFront { .. })
        ));
    }

    #[test]
    fn wave_study_rejects_radial_grids() {
        let mut config = base(25.0, 0.5, 6.0, 60, 0.1);
        config.grid.geometry = Geometry::Radial { dim: 2 };
        assert!(matches!(
            wave_speed_check(&config),
            Err(Error::Param { .. })
        ));
    }
}
