//! Explicit finite-volume integration of `∂t n = ΔΣ(n) + n G(p(n))`.
//!
//! Each step evaluates `Σ`, `p` and the growth term from the current
//! density in a single pass, takes the largest CFL-admissible forward
//! Euler step (shortened to land on snapshot times), and checks the
//! a-priori bound `0 ≤ n ≤ n_max(k)` before accepting the new state.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagnostics::front_on_grid;
use crate::error::{Error, Result};
use crate::grid::{Field, Geometry, Grid};
use crate::model::ModelParams;

pub const DEFAULT_CFL_SAFETY: f64 = 0.9;
pub const DEFAULT_OVERSHOOT_TOL: f64 = 1e-6;
pub const DEFAULT_FRONT_THRESHOLD: f64 = 0.5;

/// Cap on `dt · G(0)`.
const REACTION_CAP: f64 = 0.1;

/// Relative slack accepted by [`step`] when comparing `dt` to the bound.
const DT_SLACK: f64 = 1e-12;

/// Resolution of the predicted-state step guard, as powers of two.
const GUARD_BISECTIONS: usize = 30;

/// Relative tolerance of the initial-rate sign check.
const ADMISSIBILITY_RTOL: f64 = 1e-10;

/// Whether the growth term is active. `Disabled` drops `n G(p)` entirely
/// and exists for conservation checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reaction {
    #[default]
    Growth,
    Disabled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunState {
    pub t: f64,
    pub n: Field,
    pub step_count: u64,
    pub dt_last: f64,
}

impl RunState {
    pub fn initial(n: Field) -> Self {
        RunState {
            t: 0.0,
            n,
            step_count: 0,
            dt_last: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub geometry: Geometry,
    pub length: f64,
    pub cells: usize,
}

impl GridSpec {
    pub fn line(length: f64, cells: usize) -> Self {
        GridSpec {
            geometry: Geometry::Line,
            length,
            cells,
        }
    }

    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.geometry, self.length, self.cells)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Bump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    Uniform(f64),
    Values(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub initial: InitialData,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    pub cfl_safety: f64,
    /// Allowed excess over `n_max(k)` before a run is aborted.
    pub overshoot_tol: f64,
    /// Record one series row every `series_stride` steps. Rows aggregate
    /// the steps in between (running max of `n`, min of `∂t n`).
    pub series_stride: usize,
    pub front_threshold: f64,
    pub reaction: Reaction,
}

impl RunConfig {
    pub fn new(params: ModelParams, grid: GridSpec, initial: InitialData, t_final: f64) -> Self {
        RunConfig {
            params,
            grid,
            initial,
            t_final,
            snapshot_times: Vec::new(),
            cfl_safety: DEFAULT_CFL_SAFETY,
            overshoot_tol: DEFAULT_OVERSHOOT_TOL,
            series_stride: 1,
            front_threshold: DEFAULT_FRONT_THRESHOLD,
            reaction: Reaction::Growth,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(param(
                "t_final",
                format!("must be >= 0 (got {})", self.t_final),
            ));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(param(
                "cfl_safety",
                format!("must lie in (0, 1) (got {})", self.cfl_safety),
            ));
        }
        if !(self.overshoot_tol >= 0.0) {
            return Err(param(
                "overshoot_tol",
                format!("must be >= 0 (got {})", self.overshoot_tol),
            ));
        }
        if self.series_stride == 0 {
            return Err(param("series_stride", "must be >= 1".into()));
        }
        if !(self.front_threshold > 0.0 && self.front_threshold < 1.0) {
            return Err(param(
                "front_threshold",
                format!("must lie in (0, 1) (got {})", self.front_threshold),
            ));
        }
        for w in self.snapshot_times.windows(2) {
            if w[1] < w[0] {
                return Err(param("snapshot_times", "must be sorted".into()));
            }
        }
        if let Some(&t) = self
            .snapshot_times
            .iter()
            .find(|&&t| !(t >= 0.0 && t <= self.t_final))
        {
            return Err(param(
                "snapshot_times",
                format!("{t} lies outside [0, t_final = {}]", self.t_final),
            ));
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Arc<Grid>> {
        Ok(Arc::new(self.grid.build()?))
    }

    pub fn initial_field(&self, grid: &Arc<Grid>) -> Result<Field> {
        let field = match &self.initial {
            InitialData::Bump {
                amplitude,
                center,
                width,
            } => make_bump(grid, *amplitude, *center, *width, &self.params)?,
            InitialData::Uniform(v) => Field::constant(Arc::clone(grid), *v)?,
            InitialData::Values(v) => Field::new(Arc::clone(grid), v.clone())?,
        };
        let bound = self.params.n_max() + self.overshoot_tol;
        if let Some((cell, &value)) = field
            .values()
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v >= 0.0 && v <= bound))
        {
            return Err(Error::BoundViolation {
                t: 0.0,
                cell,
                value,
                bound,
            });
        }
        Ok(field)
    }
}

fn param(name: &'static str, reason: String) -> Error {
    Error::Param { name, reason }
}

/// `n_i = A · max(0, 1 − ((x_i − c)/w)²)²`.
pub fn make_bump(
    grid: &Arc<Grid>,
    amplitude: f64,
    center: f64,
    width: f64,
    params: &ModelParams,
) -> Result<Field> {
    let n_max = params.n_max();
    if !(amplitude > 0.0 && amplitude <= n_max) {
        return Err(param(
            "amplitude",
            format!("must lie in (0, n_max = {n_max}] (got {amplitude})"),
        ));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(param("width", format!("must be positive (got {width})")));
    }
    if !center.is_finite() {
        return Err(param("center", format!("must be finite (got {center})")));
    }
    Field::from_fn(Arc::clone(grid), |x| {
        bump_profile(x, amplitude, center, width)
    })
}

pub(crate) fn bump_profile(x: f64, amplitude: f64, center: f64, width: f64) -> f64 {
    let s = (x - center) / width;
    let q = (1.0 - s * s).max(0.0);
    amplitude * q * q
}

/// Worker that owns scratch buffers for repeated rate evaluations.
pub(crate) struct Stepper<'a> {
    grid: &'a Grid,
    params: &'a ModelParams,
    reaction: Reaction,
    sigma: Vec<f64>,
    growth: Vec<f64>,
    rate: Vec<f64>,
    max_slope: f64,
    candidates: Vec<(f64, f64)>,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(grid: &'a Grid, params: &'a ModelParams, reaction: Reaction) -> Self {
        let m = grid.cells();
        Stepper {
            grid,
            params,
            reaction,
            sigma: vec![0.0; m],
            growth: vec![0.0; m],
            rate: vec![0.0; m],
            max_slope: 0.0,
            candidates: Vec::new(),
        }
    }

    /// Evaluates `ΔΣ(n) + n G(p(n))` into the internal buffer and records
    /// `max Σ′(n)`.
    pub(crate) fn evaluate(&mut self, n: &[f64]) -> &[f64] {
        let params = self.params;
        let k = params.k();
        let nu = params.nu();
        let p_factor = k / (k - 1.0);
        let law = params.growth();
        let mut max_pow = 0.0f64;
        for ((&v, s), g) in n
            .iter()
            .zip(self.sigma.iter_mut())
            .zip(self.growth.iter_mut())
        {
            let pk = params.pow_km1(v);
            max_pow = max_pow.max(pk);
            *s = v * pk + nu * v;
            *g = match self.reaction {
                Reaction::Growth => v * law.rate(p_factor * pk),
                Reaction::Disabled => 0.0,
            };
        }
        self.max_slope = k * max_pow + nu;
        self.grid.flux_laplacian(&self.sigma, &mut self.rate);
        for (r, g) in self.rate.iter_mut().zip(&self.growth) {
            *r += g;
        }
        &self.rate
    }

    /// CFL bound for the state last passed to [`evaluate`](Self::evaluate).
    pub(crate) fn stable_dt(&self, cfl_safety: f64) -> f64 {
        dt_bound(self.grid, self.params, self.max_slope, cfl_safety)
    }

    pub(crate) fn rates(&self) -> &[f64] {
        &self.rate
    }

    /// CFL step that also covers the predicted state `n + dt F(n)`.
    ///
    /// While `Σ′` is tiny (ν = 0, small densities) the bound of the current
    /// state allows steps across which `Σ′` grows by orders of magnitude,
    /// and the update stops being order-preserving. Shrinking `dt` until
    /// the bound also holds at the largest predicted density restores it.
    pub(crate) fn guarded_dt(&mut self, n: &[f64], cfl_safety: f64) -> f64 {
        let dt = self.stable_dt(cfl_safety);
        // Only cells that would rise above the current maximum can raise
        // max Σ′ beyond the value the bound was computed from.
        let current = n.iter().copied().fold(0.0, f64::max);
        self.candidates.clear();
        self.candidates.extend(
            n.iter()
                .zip(&self.rate)
                .filter(|(v, r)| **v + dt * **r > current)
                .map(|(v, r)| (*v, *r)),
        );
        if self.candidates.is_empty() {
            return dt;
        }
        // dt ≤ bound(max(n + dt F)) holds on an interval [0, dt*]: the
        // left side grows with dt and the right side shrinks.
        let admissible = |dt: f64| {
            let predicted = self
                .candidates
                .iter()
                .map(|(v, r)| v + dt * r)
                .fold(current, f64::max);
            let slope = self.max_slope.max(self.params.sigma_slope(predicted));
            dt <= dt_bound(self.grid, self.params, slope, cfl_safety)
        };
        if admissible(dt) {
            return dt;
        }
        let (mut lo, mut hi) = (0.0, dt);
        for _ in 0..GUARD_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if admissible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

fn dt_bound(grid: &Grid, params: &ModelParams, max_slope: f64, cfl_safety: f64) -> f64 {
    let dx = grid.dx();
    let d_eff = grid.geometry().effective_dim();
    let reaction_cap = REACTION_CAP / params.growth().g0();
    if max_slope > 0.0 {
        (cfl_safety * dx * dx / (2.0 * d_eff * max_slope)).min(reaction_cap)
    } else {
        reaction_cap
    }
}

/// Largest stable forward-Euler step for density `n`:
/// `cfl · dx² / (2 d_eff max Σ′(n))`, capped by `0.1 / G(0)`.
pub fn stable_dt(grid: &Grid, n: &[f64], params: &ModelParams, cfl_safety: f64) -> f64 {
    let max_slope = n
        .iter()
        .map(|&v| params.sigma_slope(v.max(0.0)))
        .fold(0.0, f64::max);
    dt_bound(grid, params, max_slope, cfl_safety)
}

/// One forward-Euler step. Refuses `dt` beyond the CFL bound.
pub fn step(state: &RunState, dt: f64, params: &ModelParams, cfl_safety: f64) -> Result<RunState> {
    step_with(state, dt, params, cfl_safety, Reaction::Growth)
}

pub fn step_with(
    state: &RunState,
    dt: f64,
    params: &ModelParams,
    cfl_safety: f64,
    reaction: Reaction,
) -> Result<RunState> {
    let grid = state.n.grid();
    let limit = stable_dt(grid, state.n.values(), params, cfl_safety);
    if !(dt >= 0.0) || dt > limit * (1.0 + DT_SLACK) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    if let Some(cell) = state.n.values().iter().position(|&v| v < 0.0) {
        return Err(Error::Domain {
            quantity: "density",
            value: state.n.values()[cell],
        });
    }
    let mut stepper = Stepper::new(grid, params, reaction);
    let rate = stepper.evaluate(state.n.values());
    let values: Vec<f64> = state
        .n
        .values()
        .iter()
        .zip(rate)
        .map(|(n, r)| n + dt * r)
        .collect();
    Ok(RunState {
        t: state.t + dt,
        n: Field::new(Arc::clone(grid), values)?,
        step_count: state.step_count + 1,
        dt_last: dt,
    })
}

/// Sign check of the discrete initial rate `ΔΣ(n₀) + n₀G(p(n₀))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub min_rate: f64,
    /// `max_i (|ΔΣ_i| + |n_i G_i|)`, the magnitude the tolerance is relative to.
    pub scale: f64,
    pub tolerance: f64,
    pub admissible: bool,
}

pub fn validate_initial(n0: &Field, params: &ModelParams) -> AdmissibilityReport {
    let grid = n0.grid();
    let mut stepper = Stepper::new(grid, params, Reaction::Growth);
    stepper.evaluate(n0.values());
    let mut scale = 0.0f64;
    let mut min_rate = f64::INFINITY;
    for i in 0..grid.cells() {
        let growth = stepper.growth[i];
        let diffusion = stepper.rate[i] - growth;
        scale = scale.max(diffusion.abs() + growth.abs());
        min_rate = min_rate.min(stepper.rate[i]);
    }
    let tolerance = ADMISSIBILITY_RTOL * scale;
    AdmissibilityReport {
        min_rate,
        scale,
        tolerance,
        admissible: min_rate >= -tolerance,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub grid: Arc<Grid>,
    pub n: Vec<f64>,
    pub p: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl Snapshot {
    pub fn from_density(t: f64, n: &Field, params: &ModelParams) -> Self {
        let values = n.values();
        Snapshot {
            t,
            grid: Arc::clone(n.grid()),
            n: values.to_vec(),
            p: values
                .iter()
                .map(|&v| params.pressure(v.max(0.0)))
                .collect(),
            sigma: values
                .iter()
                .map(|&v| params.sigma_value(v.max(0.0)))
                .collect(),
        }
    }

    pub fn density(&self) -> Result<Field> {
        Field::new(Arc::clone(&self.grid), self.n.clone())
    }
}

/// One row of the run time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    /// `e^{G(0) t} · mass(0)`.
    pub mass_bound: f64,
    /// Largest density over the steps aggregated in this row.
    pub max_n: f64,
    pub max_p: f64,
    /// NaN while the front is undefined.
    pub front: f64,
    /// Smallest cellwise `∂t n` over the steps aggregated in this row.
    pub min_dndt: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub grid: Arc<Grid>,
    pub snapshots: Vec<Snapshot>,
    pub series: Vec<SeriesRow>,
    pub final_state: RunState,
    pub initial_mass: f64,
    pub initial_admissibility: AdmissibilityReport,
    /// Largest density seen in the last cell over the whole run.
    pub boundary_density: f64,
}

impl RunResult {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("a run always holds the initial snapshot")
    }

    /// `(t, R)` pairs of the recorded front positions.
    pub fn front_trajectory(&self) -> Vec<(f64, f64)> {
        self.series
            .iter()
            .filter(|r| r.front.is_finite())
            .map(|r| (r.t, r.front))
            .collect()
    }
}

/// Integrates a configuration to `t_final`.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = config.build_grid()?;
    let n0 = config.initial_field(&grid)?;
    let params = &config.params;

    let initial_admissibility = validate_initial(&n0, params);
    let initial_mass = n0.mass();
    let g0 = params.growth().g0();
    let bound = params.n_max() + config.overshoot_tol;

    let mut targets: Vec<f64> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .chain(std::iter::once(config.t_final))
        .filter(|&t| t > 0.0)
        .collect();
    targets.dedup();

    let mut snapshots = vec![Snapshot::from_density(0.0, &n0, params)];
    let mut series = Vec::new();

    let mut n = n0.into_values();
    let mut t = 0.0;
    let mut step_count = 0u64;
    let mut dt_last = 0.0;
    let mut stepper = Stepper::new(&grid, params, config.reaction);
    let last = grid.cells() - 1;
    let mut boundary_density = n[last];

    let mut row_max_n = f64::NEG_INFINITY;
    let mut row_min_rate = f64::INFINITY;
    let mut steps_in_row = 0usize;

    for &target in &targets {
        while t < target {
            stepper.evaluate(&n);
            let mut dt = stepper.guarded_dt(&n, config.cfl_safety);
            let landing = t + dt >= target;
            if landing {
                dt = target - t;
            }
            let mut min_rate = f64::INFINITY;
            let mut max_n = f64::NEG_INFINITY;
            for (i, (v, &r)) in n.iter_mut().zip(stepper.rates()).enumerate() {
                let next = *v + dt * r;
                if !next.is_finite() {
                    return Err(Error::NonFinite { t: t + dt, cell: i });
                }
                if next < -config.overshoot_tol || next > bound {
                    return Err(Error::BoundViolation {
                        t: t + dt,
                        cell: i,
                        value: next,
                        bound,
                    });
                }
                *v = next;
                min_rate = min_rate.min(r);
                max_n = max_n.max(next);
            }
            t = if landing { target } else { t + dt };
            step_count += 1;
            dt_last = dt;
            boundary_density = boundary_density.max(n[last]);

            row_max_n = row_max_n.max(max_n);
            row_min_rate = row_min_rate.min(min_rate);
            steps_in_row += 1;
            if steps_in_row == config.series_stride || landing {
                let mass = grid.integrate(&n);
                series.push(SeriesRow {
                    t,
                    dt,
                    mass,
                    mass_bound: (g0 * t).exp() * initial_mass,
                    max_n: row_max_n,
                    max_p: params.pressure(row_max_n.max(0.0)),
                    front: front_on_grid(&grid, &n, config.front_threshold).unwrap_or(f64::NAN),
                    min_dndt: row_min_rate,
                });
                row_max_n = f64::NEG_INFINITY;
                row_min_rate = f64::INFINITY;
                steps_in_row = 0;
            }
        }
        let field = Field::new(Arc::clone(&grid), n.clone())?;
        snapshots.push(Snapshot::from_density(t, &field, params));
    }

    let final_state = RunState {
        t,
        n: Field::new(Arc::clone(&grid), n)?,
        step_count,
        dt_last,
    };
    Ok(RunResult {
        grid,
        snapshots,
        series,
        final_state,
        initial_mass,
        initial_admissibility,
        boundary_density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GrowthLaw;

    fn params(k: f64, nu: f64) -> ModelParams {
        ModelParams::new(k, nu, GrowthLaw::standard()).unwrap()
    }

    fn line(length: f64, cells: usize) -> Arc<Grid> {
        Arc::new(Grid::line(length, cells).unwrap())
    }

    #[test]
    fn stable_dt_examples() {
        // dx = 0.01, Σ′ = 100.5 at n = 1 for k = 100, ν = 0.5
        let g = line(0.1, 10);
        let p = params(100.0, 0.5);
        let dt = stable_dt(&g, &[1.0; 10], &p, 0.9);
        assert!((dt - 0.9 * 1e-4 / 201.0).abs() < 1e-18, "{dt}");
        assert!((dt - 4.4776e-7).abs() < 1e-10);

        let g = line(1.0, 10);
        let dt = stable_dt(&g, &[0.0; 10], &p, 0.5);
        assert!((dt - 5e-3).abs() < 1e-15, "{dt}");

        let fine = line(1.0, 20);
        let coarse = line(2.0, 20);
        let n = [0.8; 20];
        let ratio = stable_dt(&coarse, &n, &p, 0.9) / stable_dt(&fine, &n, &p, 0.9);
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn stable_dt_without_motility_on_empty_field_is_reaction_cap() {
        let g = line(1.0, 10);
        let p = ModelParams::new(50.0, 0.0, GrowthLaw::linear(2.0, 1.0).unwrap()).unwrap();
        assert_eq!(stable_dt(&g, &[0.0; 10], &p, 0.9), 0.05);
    }

    #[test]
    fn radial_cfl_covers_the_stencil_diagonal() {
        for dim in 1..=3u8 {
            let g = Grid::new(Geometry::Radial { dim }, 1.0, 50).unwrap();
            let p = params(10.0, 1.0);
            let n = vec![1.0; 50];
            let dt = stable_dt(&g, &n, &p, 0.99);
            let diag = g.max_diagonal();
            assert!(dt * diag * p.sigma_slope(1.0) <= 1.0, "dim {dim}");
        }
    }

    #[test]
    fn homeostatic_state_is_steady() {
        let g = line(2.0, 16);
        let p = params(2.0, 0.5);
        let state = RunState::initial(Field::constant(Arc::clone(&g), 0.5).unwrap());
        let dt = stable_dt(&g, state.n.values(), &p, 0.9);
        let next = step(&state, dt, &p, 0.9).unwrap();
        assert_eq!(next.n.values(), state.n.values());
        assert!((next.t - dt).abs() < 1e-18);
        assert_eq!(next.step_count, 1);
    }

    #[test]
    fn single_step_hand_value() {
        // k = 3: p = 1.5 · 0.25 = 0.375, G = 0.625, n ← 0.5 + 0.01 · 0.5 · 0.625
        let g = line(10.0, 10);
        let p = params(3.0, 0.5);
        let state = RunState::initial(Field::constant(Arc::clone(&g), 0.5).unwrap());
        let next = step(&state, 0.01, &p, 0.9).unwrap();
        for v in next.n.values() {
            assert!((v - 0.503_125).abs() < 1e-15, "{v}");
        }
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let g = line(10.0, 10);
        let p = params(5.0, 0.0);
        let state = RunState::initial(Field::constant(Arc::clone(&g), 0.0).unwrap());
        let next = step(&state, 0.1, &p, 0.9).unwrap();
        assert!(next.n.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn oversized_step_is_refused() {
        let g = line(1.0, 10);
        let p = params(100.0, 0.5);
        let state = RunState::initial(Field::constant(Arc::clone(&g), 0.9).unwrap());
        let limit = stable_dt(&g, state.n.values(), &p, 0.9);
        assert!(matches!(
            step(&state, 2.0 * limit, &p, 0.9),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(step(&state, limit, &p, 0.9).is_ok());
    }

    #[test]
    fn bump_profile_values() {
        let g = line(4.0, 400);
        let p = params(100.0, 0.5);
        assert_eq!(bump_profile(1.0, 0.5, 1.0, 0.8), 0.5);
        assert_eq!(bump_profile(1.8, 0.5, 1.0, 0.8), 0.0);
        assert_eq!(bump_profile(3.0, 0.5, 1.0, 0.8), 0.0);
        assert!((bump_profile(1.4, 0.5, 1.0, 0.8) - 0.5625 * 0.5).abs() < 1e-15);
        let f = make_bump(&g, 0.5, 2.0, 1.0, &p).unwrap();
        assert!(f.values().iter().all(|&v| (0.0..=0.5).contains(&v)));
        assert!(make_bump(&g, 1.0, 2.0, 1.0, &p).is_err());
        assert!(make_bump(&g, 0.5, 2.0, 0.0, &p).is_err());
        assert!(make_bump(&g, -0.1, 2.0, 1.0, &p).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let g = line(4.0, 40);
        let p = params(100.0, 0.5);
        let zero = Field::constant(Arc::clone(&g), 0.0).unwrap();
        let r = validate_initial(&zero, &p);
        assert!(r.admissible);
        assert_eq!(r.min_rate, 0.0);

        let uniform = Field::constant(Arc::clone(&g), 0.6).unwrap();
        let r = validate_initial(&uniform, &p);
        assert!(r.admissible);
        assert!(r.min_rate > 0.0);
    }

    #[test]
    fn steep_bump_is_inadmissible() {
        // amplitude n_max, width 3 cells, k = 100, ν = 0.5: evaluate the
        // discrete rate at the peak by hand
        let g = line(4.0, 80);
        let p = params(100.0, 0.5);
        let dx = g.dx();
        let amp = p.n_max();
        let bump = make_bump(&g, amp, 2.0 + 0.5 * dx, 3.0 * dx, &p).unwrap();
        let v = bump.values();
        let peak = v
            .iter()
            .enumerate()
            .fold(0, |b, (i, &x)| if x > v[b] { i } else { b });
        let sig = |x: f64| x.powi(100) + 0.5 * x;
        let lap = (sig(v[peak + 1]) - 2.0 * sig(v[peak]) + sig(v[peak - 1])) / (dx * dx);
        let pk = 100.0 / 99.0 * v[peak].powi(99);
        let hand = lap + v[peak] * (1.0 - pk);
        assert!(hand < -1.0, "oracle rate at the peak {hand}");

        let report = validate_initial(&bump, &p);
        assert!(!report.admissible);
        assert!(report.min_rate <= hand + 1e-9 * hand.abs());
    }

    #[test]
    fn zero_horizon_run_holds_only_the_initial_snapshot() {
        let p = params(10.0, 0.5);
        let cfg = RunConfig::new(
            p,
            GridSpec::line(4.0, 40),
            InitialData::Bump {
                amplitude: 0.5,
                center: 0.0,
                width: 1.5,
            },
            0.0,
        );
        let r = run(&cfg).unwrap();
        assert_eq!(r.snapshots.len(), 1);
        assert!(r.series.is_empty());
        assert_eq!(r.final_state.step_count, 0);
    }

    #[test]
    fn steady_run_keeps_the_initial_state() {
        let p = params(100.0, 0.5);
        let n_hom = p.density_of_pressure(1.0).unwrap();
        let mut cfg = RunConfig::new(
            p,
            GridSpec::line(1.0, 10),
            InitialData::Uniform(n_hom),
            0.05,
        );
        cfg.snapshot_times = vec![0.01, 0.02];
        let r = run(&cfg).unwrap();
        for v in r.final_state.n.values() {
            assert!((v - n_hom).abs() < 1e-12);
        }
        assert_eq!(r.snapshots.len(), 4);
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        let p = params(20.0, 0.5);
        let mut cfg = RunConfig::new(
            p,
            GridSpec::line(4.0, 40),
            InitialData::Bump {
                amplitude: 0.5,
                center: 0.0,
                width: 1.5,
            },
            0.3,
        );
        cfg.snapshot_times = vec![0.0, 0.1, 0.25];
        let r = run(&cfg).unwrap();
        let times: Vec<f64> = r.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.0, 0.1, 0.25, 0.3]);
        assert_eq!(r.series.len() as u64, r.final_state.step_count);
        assert!(r.series.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn config_validation() {
        let p = params(20.0, 0.5);
        let base = RunConfig::new(p, GridSpec::line(4.0, 40), InitialData::Uniform(0.1), 1.0);
        let mut c = base.clone();
        c.snapshot_times = vec![0.5, 2.0];
        assert!(run(&c).is_err());
        let mut c = base.clone();
        c.snapshot_times = vec![0.5, 0.2];
        assert!(run(&c).is_err());
        let mut c = base.clone();
        c.cfl_safety = 1.0;
        assert!(run(&c).is_err());
        let mut c = base.clone();
        c.initial = InitialData::Uniform(1.2);
        assert!(matches!(run(&c), Err(Error::BoundViolation { .. })));
        let mut c = base;
        c.initial = InitialData::Values(vec![0.1; 3]);
        assert!(matches!(run(&c), Err(Error::FieldLength { .. })));
    }

    #[test]
    fn bump_run_obeys_mass_gronwall() {
        let p = params(100.0, 0.5);
        let cfg = RunConfig::new(
            p,
            GridSpec::line(6.0, 120),
            InitialData::Bump {
                amplitude: 0.5,
                center: 0.0,
                width: 1.5,
            },
            0.5,
        );
        let r = run(&cfg).unwrap();
        let last = r.series.last().unwrap();
        assert!(last.mass <= (0.5f64).exp() * r.initial_mass);
        assert!(last.mass > r.initial_mass);
    }
}
