use std::sync::Arc;

use proptest::prelude::*;

use tumor_hele_shaw::diagnostics::lemma_bounds_report;
use tumor_hele_shaw::solver::{make_bump, stable_dt, step, validate_initial, GridSpec};
use tumor_hele_shaw::{
    run, Field, Geometry, Grid, GrowthLaw, InitialData, ModelParams, RunConfig, RunState,
};

fn params(k: f64, nu: f64) -> ModelParams {
    ModelParams::new(k, nu, GrowthLaw::standard()).unwrap()
}

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![
        Just(Geometry::Line),
        (1u8..=3).prop_map(|dim| Geometry::Radial { dim })
    ]
}

/// `(grid, params, lower field, upper field)` with lower ≤ upper ≤ n_max.
fn ordered_pair() -> impl Strategy<Value = (Arc<Grid>, ModelParams, Vec<f64>, Vec<f64>)> {
    (
        geometry(),
        8usize..48,
        0.5f64..6.0,
        2.0f64..150.0,
        0.0f64..1.0,
    )
        .prop_flat_map(|(g, m, l, k, nu)| {
            (
                Just((g, m, l, k, nu)),
                proptest::collection::vec(0.0f64..=1.0, m),
                proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..0.5], m),
            )
                .prop_map(|((g, m, l, k, nu), low, bump)| {
                    let grid = Arc::new(Grid::new(g, l, m).unwrap());
                    let params = params(k, nu);
                    let n_max = params.n_max();
                    let lo: Vec<f64> = low.iter().map(|v| v * n_max).collect();
                    let hi = lo
                        .iter()
                        .zip(&bump)
                        .map(|(v, d)| (v + d).min(n_max))
                        .collect();
                    (grid, params, lo, hi)
                })
        })
}

fn state(grid: &Arc<Grid>, values: Vec<f64>) -> RunState {
    RunState::initial(Field::new(Arc::clone(grid), values).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn step_preserves_order_and_sign((grid, params, lo, hi) in ordered_pair()) {
        let dt = stable_dt(&grid, &lo, &params, 0.9).min(stable_dt(&grid, &hi, &params, 0.9));
        let a = step(&state(&grid, lo), dt, &params, 0.9).unwrap();
        let b = step(&state(&grid, hi), dt, &params, 0.9).unwrap();
        for (x, y) in a.n.values().iter().zip(b.n.values()) {
            prop_assert!(*x >= 0.0);
            prop_assert!(x <= y);
        }
        prop_assert_eq!(a.t, dt);
        prop_assert_eq!(a.step_count, 1);
    }

    #[test]
    fn mass_obeys_discrete_gronwall((grid, params, lo, _hi) in ordered_pair()) {
        let s = state(&grid, lo);
        let dt = stable_dt(&grid, s.n.values(), &params, 0.9);
        let next = step(&s, dt, &params, 0.9).unwrap();
        let bound = s.n.mass() * (1.0 + params.growth().g0() * dt);
        // the fluxes telescope exactly; only summation roundoff remains
        let roundoff = 4.0 * f64::EPSILON * grid.cells() as f64 * bound.max(f64::MIN_POSITIVE);
        prop_assert!(next.n.mass() <= bound + roundoff, "{} > {}", next.n.mass(), bound);
    }

    #[test]
    fn admissible_bumps_grow_monotonically(
        k in 5.0f64..60.0,
        nu in 0.0f64..0.6,
        amplitude in 0.2f64..0.9,
        width in 1.6f64..2.5,
    ) {
        let p = params(k, nu);
        let amplitude = amplitude.min(p.n_max());
        let grid = GridSpec::line(8.0, 80);
        let initial = InitialData::Bump { amplitude, center: 0.0, width };
        let mut cfg = RunConfig::new(p.clone(), grid, initial, 0.5);
        cfg.series_stride = 1;
        let n0 = cfg.initial_field(&cfg.build_grid().unwrap()).unwrap();
        prop_assume!(validate_initial(&n0, &p).admissible);
        let result = run(&cfg).unwrap();
        let report = lemma_bounds_report(&result, &p);
        prop_assert!(report.min_time_derivative.pass, "{:?}", report.min_time_derivative);
        prop_assert!(report.max_density.pass);
        prop_assert!(report.mass_ratio_max.pass);
    }
}

#[test]
fn series_has_one_row_per_step_and_time_increases() {
    let cfg = RunConfig::new(
        params(50.0, 0.5),
        GridSpec::line(6.0, 60),
        InitialData::Bump {
            amplitude: 0.5,
            center: 0.0,
            width: 1.5,
        },
        0.3,
    );
    let result = run(&cfg).unwrap();
    assert_eq!(result.series.len() as u64, result.final_state.step_count);
    assert!(result.series.windows(2).all(|w| w[1].t > w[0].t));
    assert_eq!(result.final_state.t, 0.3);
}

#[test]
fn symmetric_data_stays_symmetric() {
    let cfg = RunConfig::new(
        params(100.0, 0.5),
        GridSpec::line(8.0, 160),
        InitialData::Bump {
            amplitude: 0.6,
            center: 4.0,
            width: 1.5,
        },
        1.0,
    );
    let result = run(&cfg).unwrap();
    for snap in &result.snapshots {
        let n = &snap.n;
        let worst = (0..n.len())
            .map(|i| (n[i] - n[n.len() - 1 - i]).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "asymmetry {worst} at t = {}", snap.t);
    }
}

#[test]
fn identical_configs_are_bit_identical() {
    let mut cfg = RunConfig::new(
        params(100.0, 0.0),
        GridSpec::line(6.0, 120),
        InitialData::Bump {
            amplitude: 0.5,
            center: 0.0,
            width: 1.5,
        },
        0.8,
    );
    cfg.snapshot_times = vec![0.2, 0.4];
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    let bits = |r: &tumor_hele_shaw::RunResult| -> Vec<u64> {
        r.series
            .iter()
            .flat_map(|s| [s.t, s.dt, s.mass, s.max_n, s.front, s.min_dndt])
            .chain(r.final_state.n.values().iter().copied())
            .map(f64::to_bits)
            .collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn radial_runs_respect_the_bounds() {
    // at r = 0 the rate is A(1 − 4 ν d / w²), so w² > 4 ν d keeps the bump admissible
    for dim in 1..=3u8 {
        let cfg = RunConfig::new(
            params(50.0, 0.5),
            GridSpec {
                geometry: Geometry::Radial { dim },
                length: 10.0,
                cells: 100,
            },
            InitialData::Bump {
                amplitude: 0.5,
                center: 0.0,
                width: 2.8,
            },
            1.0,
        );
        let result = run(&cfg).unwrap();
        let report = lemma_bounds_report(&result, &cfg.params);
        assert!(report.monotone_admissible, "dim {dim}");
        assert!(report.bounds_pass(), "dim {dim}: {report:?}");
        assert!(
            report.boundary_density.pass,
            "dim {dim}: {:?}",
            report.boundary_density
        );
    }
}

#[test]
fn bump_mass_matches_quadrature() {
    // ∫ A (1 − (x/w)²)² over [0, w] = 8 A w / 15
    let grid = Arc::new(Grid::line(4.0, 4000).unwrap());
    let bump = make_bump(&grid, 0.5, 0.0, 2.0, &params(10.0, 0.5)).unwrap();
    assert!((bump.mass() - 8.0 * 0.5 * 2.0 / 15.0).abs() < 1e-6);
}
