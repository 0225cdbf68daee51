//! Constitutive laws: the power-law pressure, the growth law, and the
//! combined diffusion potential `Σ(n) = n^k + νn`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of sample points used to check that a growth law decreases.
const MONOTONE_SAMPLES: usize = 128;

/// Absolute tolerance on `G(P_M) = 0` for closed-form laws.
const HOMEOSTATIC_TOL: f64 = 1e-12;

/// Relative tolerance of the adaptive quadrature behind [`GrowthLaw::sigma0_speed`].
const QUADRATURE_RTOL: f64 = 1e-10;

/// Below this value `n^(k-1)` is flushed to zero instead of drifting
/// through subnormals.
const POW_FLOOR: f64 = 1e-300;

/// Pressure-limited growth rate `G(p)`.
///
/// Every law is strictly decreasing on `[0, P_M]` with `G(P_M) = 0` and
/// `G(0) > 0`; the constructors refuse anything else.
#[derive(Clone)]
pub enum GrowthLaw {
    /// `G(p) = g0 · (1 − p/P_M)`.
    Linear { g0: f64, p_m: f64 },
    /// Monotone piecewise-linear interpolation of `(p, G)` samples.
    Tabulated(GrowthTable),
    /// Arbitrary closed-form law supplied by the caller.
    Custom(CustomGrowth),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pressures: Vec<f64>,
    rates: Vec<f64>,
    p_m: f64,
}

#[derive(Clone)]
pub struct CustomGrowth {
    p_m: f64,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomGrowth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomGrowth")
            .field("p_m", &self.p_m)
            .finish_non_exhaustive()
    }
}

impl fmt::Debug for GrowthLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthLaw::Linear { g0, p_m } => f
                .debug_struct("Linear")
                .field("g0", g0)
                .field("p_m", p_m)
                .finish(),
            GrowthLaw::Tabulated(t) => f.debug_tuple("Tabulated").field(t).finish(),
            GrowthLaw::Custom(c) => f.debug_tuple("Custom").field(c).finish(),
        }
    }
}

impl GrowthLaw {
    /// The affine law `G(p) = g0 (1 − p/P_M)`.
    pub fn linear(g0: f64, p_m: f64) -> Result<Self> {
        if !(g0.is_finite() && g0 > 0.0) {
            return Err(Error::GrowthLaw(format!(
                "G(0) must be positive (got {g0})"
            )));
        }
        if !(p_m.is_finite() && p_m > 0.0) {
            return Err(Error::GrowthLaw(format!(
                "P_M must be positive (got {p_m})"
            )));
        }
        Ok(GrowthLaw::Linear { g0, p_m })
    }

    /// `G(p) = 1 − p`, the law used throughout the reference experiments.
    pub fn standard() -> Self {
        GrowthLaw::Linear { g0: 1.0, p_m: 1.0 }
    }

    /// Tabulated law from `(pressure, rate)` samples.
    ///
    /// Pressures must start at 0 and increase strictly, rates must decrease
    /// strictly from a positive value and reach zero or below at the last
    /// sample. The homeostatic pressure is the zero of the interpolant.
    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::GrowthLaw("table needs at least two samples".into()));
        }
        if samples
            .iter()
            .any(|(p, g)| !p.is_finite() || !g.is_finite())
        {
            return Err(Error::GrowthLaw("table contains non-finite values".into()));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::GrowthLaw(format!(
                "table must start at p = 0 (starts at {})",
                samples[0].0
            )));
        }
        if samples[0].1 <= 0.0 {
            return Err(Error::GrowthLaw(format!(
                "G(0) must be positive (got {})",
                samples[0].1
            )));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::GrowthLaw(
                    "table pressures must increase strictly".into(),
                ));
            }
            if w[1].1 >= w[0].1 {
                return Err(Error::GrowthLaw(format!(
                    "table rates must decrease strictly (G({}) = {} >= G({}) = {})",
                    w[1].0, w[1].1, w[0].0, w[0].1
                )));
            }
        }
        let last = samples[samples.len() - 1];
        if last.1 > 0.0 {
            return Err(Error::GrowthLaw(
                "table never reaches G = 0, homeostatic pressure undefined".into(),
            ));
        }
        let p_m = samples
            .windows(2)
            .find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)
            .map(|w| {
                let (p0, g0) = w[0];
                let (p1, g1) = w[1];
                p0 + (p1 - p0) * g0 / (g0 - g1)
            })
            .expect("sign change located above");
        Ok(GrowthLaw::Tabulated(GrowthTable {
            pressures: samples.iter().map(|s| s.0).collect(),
            rates: samples.iter().map(|s| s.1).collect(),
            p_m,
        }))
    }

    /// Closed-form law with homeostatic pressure `p_m`. Monotonicity and
    /// `G(P_M) = 0` are checked by sampling.
    pub fn custom<F>(p_m: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(p_m.is_finite() && p_m > 0.0) {
            return Err(Error::GrowthLaw(format!(
                "P_M must be positive (got {p_m})"
            )));
        }
        let law = GrowthLaw::Custom(CustomGrowth {
            p_m,
            f: Arc::new(f),
        });
        let g0 = law.rate(0.0);
        if !(g0.is_finite() && g0 > 0.0) {
            return Err(Error::GrowthLaw(format!(
                "G(0) must be positive (got {g0})"
            )));
        }
        let at_pm = law.rate(p_m);
        if at_pm.abs() > HOMEOSTATIC_TOL {
            return Err(Error::GrowthLaw(format!(
                "G(P_M) must vanish (got {at_pm:e})"
            )));
        }
        law.check_decreasing()?;
        Ok(law)
    }

    /// Homeostatic pressure `P_M`.
    pub fn homeostatic_pressure(&self) -> f64 {
        match self {
            GrowthLaw::Linear { p_m, .. } => *p_m,
            GrowthLaw::Tabulated(t) => t.p_m,
            GrowthLaw::Custom(c) => c.p_m,
        }
    }

    /// `G(0)`, the maximal growth rate.
    pub fn g0(&self) -> f64 {
        self.rate(0.0)
    }

    /// Evaluates `G(p)`.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(p >= 0.0) {
            return Err(Error::Domain {
                quantity: "pressure",
                value: p,
            });
        }
        if let GrowthLaw::Tabulated(t) = self {
            let hi = t.pressures[t.pressures.len() - 1];
            if p > hi {
                return Err(Error::OutOfTable {
                    value: p,
                    lo: 0.0,
                    hi,
                });
            }
        }
        Ok(self.rate(p))
    }

    /// Unchecked evaluation used on the hot path. Tabulated laws clamp to
    /// their range.
    #[inline]
    pub(crate) fn rate(&self, p: f64) -> f64 {
        match self {
            GrowthLaw::Linear { g0, p_m } => g0 * (1.0 - p / p_m),
            GrowthLaw::Tabulated(t) => t.interpolate(p),
            GrowthLaw::Custom(c) => (c.f)(p),
        }
    }

    /// Re-checks the law invariants: `G(0) > 0`, strict decrease on
    /// `[0, P_M]` over a sample grid, and `G(P_M) = 0`.
    pub fn validate(&self) -> Result<()> {
        let g0 = self.g0();
        if !(g0 > 0.0) {
            return Err(Error::GrowthLaw(format!(
                "G(0) must be positive (got {g0})"
            )));
        }
        let at_pm = self.rate(self.homeostatic_pressure());
        let tol = match self {
            // the zero is located by interpolation, so allow a few ulps of G(0)
            GrowthLaw::Tabulated(_) => 1e-12 * g0.max(1.0),
            _ => HOMEOSTATIC_TOL,
        };
        if at_pm.abs() > tol {
            return Err(Error::GrowthLaw(format!(
                "G(P_M) must vanish (got {at_pm:e})"
            )));
        }
        self.check_decreasing()
    }

    fn check_decreasing(&self) -> Result<()> {
        let p_m = self.homeostatic_pressure();
        let mut prev = self.rate(0.0);
        for i in 1..=MONOTONE_SAMPLES {
            let p = p_m * i as f64 / MONOTONE_SAMPLES as f64;
            let g = self.rate(p);
            if !(g < prev) {
                return Err(Error::GrowthLaw(format!(
                    "G is not strictly decreasing near p = {p} ({g} >= {prev})"
                )));
            }
            prev = g;
        }
        Ok(())
    }

    /// Traveling-wave speed without active motion,
    /// `σ₀ = sqrt(2 ∫₀^{P_M} G(q) dq)`.
    pub fn sigma0_speed(&self) -> f64 {
        let integral = adaptive_simpson(
            |q| self.rate(q),
            0.0,
            self.homeostatic_pressure(),
            QUADRATURE_RTOL,
        );
        (2.0 * integral).sqrt()
    }
}

impl GrowthTable {
    fn interpolate(&self, p: f64) -> f64 {
        let ps = &self.pressures;
        let gs = &self.rates;
        let last = ps.len() - 1;
        if p <= 0.0 {
            return gs[0];
        }
        if p >= ps[last] {
            return gs[last];
        }
        // first index with ps[i] > p
        let i = ps.partition_point(|&q| q <= p);
        let (p0, p1) = (ps[i - 1], ps[i]);
        let (g0, g1) = (gs[i - 1], gs[i]);
        g0 + (g1 - g0) * (p - p0) / (p1 - p0)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pressures
            .iter()
            .copied()
            .zip(self.rates.iter().copied())
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    // a coarse 16-panel pass gives the magnitude the tolerance is relative to
    let coarse: f64 = (0..16)
        .map(|i| {
            let x0 = a + (b - a) * i as f64 / 16.0;
            let x1 = a + (b - a) * (i + 1) as f64 / 16.0;
            simpson(f(x0), f(0.5 * (x0 + x1)), f(x1), x0, x1)
        })
        .sum();
    let tol = (rtol * coarse.abs()).max(f64::MIN_POSITIVE);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Model parameters: stiffness `k`, motility `ν` and the growth law.
#[derive(Debug, Clone)]
pub struct ModelParams {
    k: f64,
    nu: f64,
    growth: GrowthLaw,
    k_int: Option<i32>,
    pow_cutoff: f64,
}

impl ModelParams {
    pub fn new(k: f64, nu: f64, growth: GrowthLaw) -> Result<Self> {
        if !(k.is_finite() && k >= 2.0) {
            return Err(Error::Param {
                name: "k",
                reason: format!("must be >= 2 (got {k})"),
            });
        }
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::Param {
                name: "nu",
                reason: format!("must be >= 0 (got {nu})"),
            });
        }
        growth.validate()?;
        let k_int = (k.fract() == 0.0 && k <= 10_000.0).then_some((k - 1.0) as i32);
        let pow_cutoff = (POW_FLOOR.ln() / (k - 1.0)).exp();
        Ok(ModelParams {
            k,
            nu,
            growth,
            k_int,
            pow_cutoff,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn growth(&self) -> &GrowthLaw {
        &self.growth
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        ModelParams::new(k, self.nu, self.growth.clone())
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        ModelParams::new(self.k, nu, self.growth.clone())
    }

    /// `n^(k-1)`, flushed to zero where it would underflow.
    #[inline]
    pub(crate) fn pow_km1(&self, n: f64) -> f64 {
        if n <= self.pow_cutoff {
            return 0.0;
        }
        match self.k_int {
            Some(e) => n.powi(e),
            None => n.powf(self.k - 1.0),
        }
    }

    #[inline]
    pub(crate) fn pressure(&self, n: f64) -> f64 {
        self.k / (self.k - 1.0) * self.pow_km1(n)
    }

    #[inline]
    pub(crate) fn sigma_value(&self, n: f64) -> f64 {
        n * self.pow_km1(n) + self.nu * n
    }

    #[inline]
    pub(crate) fn sigma_slope(&self, n: f64) -> f64 {
        self.k * self.pow_km1(n) + self.nu
    }

    /// `p = k/(k−1) · n^(k−1)`.
    pub fn pressure_of_density(&self, n: f64) -> Result<f64> {
        check_nonneg("density", n)?;
        Ok(self.pressure(n))
    }

    /// Inverse of [`pressure_of_density`](Self::pressure_of_density).
    pub fn density_of_pressure(&self, p: f64) -> Result<f64> {
        check_nonneg("pressure", p)?;
        if p == 0.0 {
            return Ok(0.0);
        }
        Ok(((self.k - 1.0) * p / self.k).powf(1.0 / (self.k - 1.0)))
    }

    /// `Σ(n) = n^k + νn`.
    pub fn sigma(&self, n: f64) -> Result<f64> {
        check_nonneg("density", n)?;
        Ok(self.sigma_value(n))
    }

    /// `Σ′(n) = k n^(k−1) + ν`.
    pub fn sigma_prime(&self, n: f64) -> Result<f64> {
        check_nonneg("density", n)?;
        Ok(self.sigma_slope(n))
    }

    /// Largest density compatible with `p ≤ P_M`:
    /// `((k−1) P_M / k)^(1/(k−1))`.
    pub fn n_max(&self) -> f64 {
        ((self.k - 1.0) * self.growth.homeostatic_pressure() / self.k).powf(1.0 / (self.k - 1.0))
    }

    pub fn homeostatic_pressure(&self) -> f64 {
        self.growth.homeostatic_pressure()
    }
}

fn check_nonneg(quantity: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { quantity, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(k: f64, nu: f64) -> ModelParams {
        ModelParams::new(k, nu, GrowthLaw::standard()).unwrap()
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(params(7.0, 0.5).pressure_of_density(0.0).unwrap(), 0.0);
        assert!((params(2.0, 0.5).pressure_of_density(0.5).unwrap() - 1.0).abs() < 1e-15);
        let p = params(100.0, 0.5).pressure_of_density(1.0).unwrap();
        assert!((p - 100.0 / 99.0).abs() < 1e-15);
        assert!(matches!(
            params(2.0, 0.0).pressure_of_density(-0.1),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn density_examples() {
        assert_eq!(params(3.0, 0.0).density_of_pressure(0.0).unwrap(), 0.0);
        assert!((params(2.0, 0.0).density_of_pressure(1.0).unwrap() - 0.5).abs() < 1e-15);
        // exp(ln(0.99)/99), evaluated in 50-digit arithmetic
        let frozen = 0.999_898_486_608_858_3;
        let n = params(100.0, 0.0).density_of_pressure(1.0).unwrap();
        assert!((n - frozen).abs() < 1e-15, "{n}");
        assert!(params(2.0, 0.0).density_of_pressure(-1.0).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(params(5.0, 0.5).sigma(0.0).unwrap(), 0.0);
        assert!((params(100.0, 0.5).sigma(1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((params(2.0, 0.5).sigma(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(params(2.0, 0.5).sigma(-1e-3).is_err());

        assert_eq!(params(4.0, 0.5).sigma_prime(0.0).unwrap(), 0.5);
        assert!((params(100.0, 0.5).sigma_prime(1.0).unwrap() - 100.5).abs() < 1e-12);
        assert!((params(2.0, 0.0).sigma_prime(0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn growth_examples() {
        let g = GrowthLaw::standard();
        assert_eq!(g.eval(0.0).unwrap(), 1.0);
        assert_eq!(g.eval(1.0).unwrap(), 0.0);
        let g2 = GrowthLaw::linear(2.0, 1.0).unwrap();
        assert!((g2.eval(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(g.eval(-0.5).is_err());
    }

    #[test]
    fn growth_law_rejections() {
        assert!(GrowthLaw::linear(0.0, 1.0).is_err());
        assert!(GrowthLaw::linear(1.0, -1.0).is_err());
        assert!(GrowthLaw::tabulated(&[(0.0, 1.0), (0.5, 1.0), (1.0, 0.0)]).is_err());
        assert!(GrowthLaw::tabulated(&[(0.0, 1.0), (0.5, 1.2), (1.0, 0.0)]).is_err());
        assert!(GrowthLaw::tabulated(&[(0.0, 1.0), (1.0, 0.5)]).is_err());
        assert!(GrowthLaw::tabulated(&[(0.1, 1.0), (1.0, 0.0)]).is_err());
        assert!(GrowthLaw::custom(1.0, |p| 1.0 - p * p + 0.1).is_err());
        assert!(GrowthLaw::custom(1.0, |p| (p - 0.5).powi(2) - 0.25).is_err());
        assert!(ModelParams::new(1.5, 0.5, GrowthLaw::standard()).is_err());
        assert!(ModelParams::new(2.0, -0.1, GrowthLaw::standard()).is_err());
    }

    #[test]
    fn tabulated_law_interpolates_and_bounds() {
        let g = GrowthLaw::tabulated(&[(0.0, 2.0), (1.0, 1.0), (2.0, -2.0)]).unwrap();
        assert!((g.homeostatic_pressure() - 4.0 / 3.0).abs() < 1e-15);
        assert!((g.eval(0.5).unwrap() - 1.5).abs() < 1e-15);
        assert!((g.eval(1.5).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(g.eval(2.5), Err(Error::OutOfTable { .. })));
        g.validate().unwrap();
    }

    // Composite Gauss-Legendre (5 points, 64 panels) as an independent check
    // of the adaptive Simpson rule.
    fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let nodes = [
            (0.0, 128.0 / 225.0),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189),
            (-0.906_179_845_938_664, 0.236_926_885_056_189),
        ];
        let panels = 64;
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let mid = a + (i as f64 + 0.5) * h;
                nodes
                    .iter()
                    .map(|(x, w)| w * f(mid + 0.5 * h * x))
                    .sum::<f64>()
                    * 0.5
                    * h
            })
            .sum()
    }

    #[test]
    fn sigma0_examples() {
        assert!((GrowthLaw::standard().sigma0_speed() - 1.0).abs() < 1e-10);
        let g2 = GrowthLaw::linear(2.0, 1.0).unwrap();
        assert!((g2.sigma0_speed() - 2f64.sqrt()).abs() < 1e-10);

        let quad = |p: f64| 1.0 - p * p;
        let oracle = gauss_legendre(quad, 0.0, 1.0);
        assert!((oracle - 2.0 / 3.0).abs() < 1e-14);
        let frozen = 1.154_700_538_379_251_5; // sqrt(4/3)
        assert!(((2.0 * oracle).sqrt() - frozen).abs() < 1e-14);
        let law = GrowthLaw::custom(1.0, quad).unwrap();
        assert!((law.sigma0_speed() - frozen).abs() < 1e-8);
    }

    #[test]
    fn sigma0_matches_polynomial_closed_forms() {
        // G(p) = (1 − p)^3 on [0,1]: ∫ = 1/4
        let cubic = GrowthLaw::custom(1.0, |p| (1.0 - p).powi(3)).unwrap();
        assert!((cubic.sigma0_speed() - 0.5f64.sqrt()).abs() < 1e-8);
        // G(p) = 3(2 − p) on [0,2]: ∫ = 6
        let lin = GrowthLaw::linear(6.0, 2.0).unwrap();
        assert!((lin.sigma0_speed() - 12f64.sqrt()).abs() < 1e-8);
        // piecewise-linear table: ∫ = 0.5·(2+1)·1 + 0.5·1·(1/3) = 1.5 + 1/6
        let tab = GrowthLaw::tabulated(&[(0.0, 2.0), (1.0, 1.0), (2.0, -2.0)]).unwrap();
        let exact = (2.0f64 * (1.5 + 1.0 / 6.0)).sqrt();
        assert!((tab.sigma0_speed() - exact).abs() < 1e-8);
    }

    #[test]
    fn n_max_is_the_pressure_bound() {
        let p = params(100.0, 0.5);
        let frozen = 0.999_898_486_608_858_3;
        assert!((p.n_max() - frozen).abs() < 1e-15);
        for i in 0..=400 {
            let n = 1.1 * i as f64 / 400.0;
            let below = n <= p.n_max();
            let pressure_ok = p.pressure_of_density(n).unwrap() <= 1.0;
            assert_eq!(below, pressure_ok, "n = {n}");
        }
    }

    #[test]
    fn underflow_is_flushed_to_zero() {
        let p = params(200.0, 0.5);
        assert_eq!(p.pressure(1e-5), 0.0);
        assert!((p.sigma_value(1e-5) - 0.5e-5).abs() < 1e-20);
    }

    proptest! {
        #[test]
        fn round_trip(n in 1e-6f64..1.1, k in 2u32..=200) {
            let p = params(k as f64, 0.5);
            let back = p.density_of_pressure(p.pressure_of_density(n).unwrap()).unwrap();
            // below the underflow cutoff the pressure is zero by construction
            if n > p.pow_cutoff {
                prop_assert!((back - n).abs() <= 1e-12 * n, "n={} back={}", n, back);
            }
        }

        #[test]
        fn pressure_monotone(a in 0.0f64..1.1, b in 0.0f64..1.1, k in 2u32..=120) {
            let p = params(k as f64, 0.0);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9 && lo > 0.2);
            prop_assert!(p.pressure(lo) < p.pressure(hi));
        }

        #[test]
        fn sigma_prime_at_least_nu(n in 0.0f64..1.1, nu in 0.0f64..2.0, k in 2u32..=200) {
            let p = ModelParams::new(k as f64, nu, GrowthLaw::standard()).unwrap();
            prop_assert!(p.sigma_prime(n).unwrap() >= nu);
        }
    }
}
