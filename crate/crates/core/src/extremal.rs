//! The minimal frequency–time uncertainty product `Δt Δω₊` over real
//! signals, its extremal spectrum built from `D_{μ-1/2}`, and the Gaussian
//! and Schwartz comparisons.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    derivative, find_root, integrate, integrate_line, parabolic_cylinder_d, parabolic_cylinder_d_prime,
    second_derivative, simpson_weights, QuadratureSpec, RootBracket,
};
use crate::report::{BoundReport, Relation};
use crate::spectral::{EnergyDistribution, Grid, SignalPair, SurvivalAmplitude};

/// Bracket for `ρ = √μ`.
pub const RHO_BRACKET: (f64, f64) = (0.5, 0.6);
/// Step of the central difference used to cross-check `D'_{μ-1/2}(-2√μ) = 0`.
pub const CROSS_CHECK_STEP: f64 = 1e-5;
/// Extent of the extremal spectrum in units of `c`.
pub const OMEGA_SPAN: f64 = 8.0;
/// Samples of the extremal spectrum on `[0, 8c]`.
pub const OMEGA_POINTS: usize = 4097;
/// Half-width of the reconstruction time grid in units of `1/c`.
pub const TIME_SPAN: f64 = 40.0;
pub const TIME_POINTS: usize = 1601;

/// Schwartz lower bound `1/√12`.
pub fn schwartz_bound() -> f64 {
    1.0 / 12f64.sqrt()
}

/// Gaussian product `√((π - 2)/(4π))`.
pub fn gaussian_product_exact() -> f64 {
    ((PI - 2.0) / (4.0 * PI)).sqrt()
}

/// `∫_0^∞ exp(2ρt - t²/2) t^{-ρ²-1/2} (t - ρ) dt`, whose root in `ρ` gives `μ = ρ²`.
///
/// With `a = ρ² + 1/2` the substitution `t = s^{1/(1-a)}` absorbs the
/// endpoint singularity.
pub fn mu_equation(rho: f64) -> Result<f64> {
    let a = rho * rho + 0.5;
    if !(a < 1.0) || !(rho > 0.0) {
        return Err(Error::domain(format!("rho = {rho} outside (0, 1/√2)")));
    }
    let kappa = 1.0 / (1.0 - a);
    let t_max = 2.0 * rho + 13.0;
    let spec = QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        ..QuadratureSpec::default()
    };
    let g = |s: f64| {
        let t = s.powf(kappa);
        (2.0 * rho * t - 0.5 * t * t).exp() * (t - rho)
    };
    Ok(kappa * integrate(g, 0.0, t_max.powf(1.0 / kappa), &spec)?)
}

/// Solves for `μ` without touching the cache.
pub fn solve_mu_uncached() -> Result<f64> {
    let bracket = RootBracket::with_tol(RHO_BRACKET.0, RHO_BRACKET.1, 1e-14)?;
    let mut failure = None;
    let rho = find_root(
        |r| match mu_equation(r) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        bracket,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(rho * rho)
}

static MU: OnceLock<f64> = OnceLock::new();

/// The extremal constant `μ ≈ 0.29505306`, computed once per process.
pub fn solve_mu() -> Result<f64> {
    if let Some(&mu) = MU.get() {
        return Ok(mu);
    }
    let mu = solve_mu_uncached()?;
    Ok(*MU.get_or_init(|| mu))
}

/// `D'_{μ-1/2}(-2√μ)` by central difference, which vanishes at the extremal `μ`.
pub fn derivative_condition(mu: f64) -> Result<f64> {
    let nu = mu - 0.5;
    let z = -2.0 * mu.sqrt();
    let h = CROSS_CHECK_STEP;
    Ok((parabolic_cylinder_d(nu, z + h)? - parabolic_cylinder_d(nu, z - h)?) / (2.0 * h))
}

/// `D'_{μ-1/2}(-2√μ)` differentiated under the integral sign.
pub fn derivative_condition_exact(mu: f64) -> Result<f64> {
    parabolic_cylinder_d_prime(mu - 0.5, -2.0 * mu.sqrt())
}

/// `A = 2∫_0^∞ F'²` and `N_m = 2∫_0^∞ ω^m F²` of an even real spectrum
/// sampled on `[0, ω_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralIntegrals {
    pub a: f64,
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
}

impl SpectralIntegrals {
    pub fn of(half: &Grid, values: &[f64]) -> Result<Self> {
        check_half_grid(half, values)?;
        let w = simpson_weights(half.len, half.step);
        let slope = derivative(values, half.step);
        let mut s = SpectralIntegrals { a: 0.0, n0: 0.0, n1: 0.0, n2: 0.0 };
        for (i, om) in half.points().enumerate() {
            let f2 = values[i] * values[i];
            s.a += 2.0 * w[i] * slope[i] * slope[i];
            s.n0 += 2.0 * w[i] * f2;
            s.n1 += 2.0 * w[i] * om * f2;
            s.n2 += 2.0 * w[i] * om * om * f2;
        }
        Ok(s)
    }

    /// The same integrals by adaptive quadrature of `F` and `F'`.
    pub fn of_fn(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, omega_max: f64) -> Result<Self> {
        let spec = QuadratureSpec::with_tol(1e-13);
        let m = |k: i32| integrate(|w| 2.0 * w.powi(k) * f(w).powi(2), 0.0, omega_max, &spec);
        Ok(SpectralIntegrals {
            a: integrate(|w| 2.0 * df(w).powi(2), 0.0, omega_max, &spec)?,
            n0: m(0)?,
            n1: m(1)?,
            n2: m(2)?,
        })
    }

    /// `Ω = A N₂/N₀² - A N₁²/N₀³ = (Δt Δω₊)²`.
    pub fn omega(&self) -> f64 {
        self.a * self.n2 / (self.n0 * self.n0) - self.a * self.n1 * self.n1 / self.n0.powi(3)
    }
}

fn check_half_grid(half: &Grid, values: &[f64]) -> Result<()> {
    if half.start.abs() > 1e-12 * half.step {
        return Err(Error::domain("frequency grid must start at ω = 0"));
    }
    if values.len() != half.len {
        return Err(Error::domain("samples do not match the frequency grid"));
    }
    if half.len < 6 {
        return Err(Error::GridTooShort("need at least 6 frequencies".into()));
    }
    Ok(())
}

/// `Ω{F}` of an even spectrum sampled on `[0, ω_max]`.
pub fn omega_functional(half: &Grid, values: &[f64]) -> Result<f64> {
    Ok(SpectralIntegrals::of(half, values)?.omega())
}

/// Mirrors a half-line spectrum into an even spectrum on `[-ω_max, ω_max]`.
pub fn even_extension(half: &Grid, values: &[f64]) -> Result<(Grid, Vec<Complex64>)> {
    check_half_grid(half, values)?;
    let n = half.len;
    let full = Grid::new(-half.end(), half.step, 2 * n - 1)?;
    let spectrum = (0..2 * n - 1)
        .map(|j| Complex64::new(values[j.abs_diff(n - 1)], 0.0))
        .collect();
    Ok((full, spectrum))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSolution {
    pub mu: f64,
    /// Frequency scale; equals the measured `ω̄₊`.
    pub c: f64,
    /// Normalized `F_μ` on `[0, ω_max]`.
    pub half: Grid,
    pub values: Vec<f64>,
    /// Even pair on the mirrored frequency grid.
    pub spectrum: SignalPair,
    /// `A = 2∫F'²` of the normalized spectrum.
    pub a: f64,
    /// `N₂ = 2∫ω²F²`, expected `3c²/2`.
    pub b: f64,
    /// Measured `N₁ = ω̄₊`.
    pub omega_plus: f64,
}

/// `F_μ(ω) = D_{μ-1/2}(2√μ(ω/c - 1))` on `half`, normalized to unit energy
/// after even reflection, and its reconstructed time signal.
pub fn extremal_spectrum(mu: f64, c: f64, half: &Grid) -> Result<ExtremalSolution> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("frequency scale c = {c} must be positive")));
    }
    if !(mu > 0.0 && mu < 0.5) {
        return Err(Error::domain(format!("mu = {mu} outside (0, 1/2)")));
    }
    let nu = mu - 0.5;
    let scale = 2.0 * mu.sqrt();
    let raw: Vec<f64> = half
        .to_vec()
        .par_iter()
        .map(|&w| parabolic_cylinder_d(nu, scale * (w / c - 1.0)))
        .collect::<Result<_>>()?;
    let norm = SpectralIntegrals::of(half, &raw)?.n0.sqrt();
    let values: Vec<f64> = raw.iter().map(|v| v / norm).collect();
    let integrals = SpectralIntegrals::of(half, &values)?;
    let (freq, full) = even_extension(half, &values)?;
    let time = Grid::linspace(-TIME_SPAN / c, TIME_SPAN / c, TIME_POINTS)?;
    let spectrum = SignalPair::from_spectrum(freq, &full, time)?;
    Ok(ExtremalSolution {
        mu,
        c,
        half: *half,
        values,
        spectrum,
        a: integrals.a,
        b: integrals.n2,
        omega_plus: integrals.n1,
    })
}

impl ExtremalSolution {
    /// Extremal spectrum with `ω̄₊ = c` on the default grid.
    pub fn new(c: f64) -> Result<Self> {
        let mu = solve_mu()?;
        let half = Grid::linspace(0.0, OMEGA_SPAN * c, OMEGA_POINTS)?;
        extremal_spectrum(mu, c, &half)
    }

    /// `Δt Δω₊` measured on the reconstructed pair.
    pub fn measured_product(&self) -> f64 {
        let m = self.spectrum.moments();
        m.delta_t * m.delta_omega_plus
    }

    /// `√Ω` from the spectral integrals.
    pub fn spectral_product(&self) -> Result<f64> {
        Ok(omega_functional(&self.half, &self.values)?.sqrt())
    }

    /// One-sided `F''(0⁺)` relative to `F(0) · 4μ/c²`. The even reflection
    /// has a third-derivative kink at the origin, so central stencils are
    /// avoided.
    pub fn curvature_at_origin(&self) -> f64 {
        let second = second_derivative(&self.values[..8], self.half.step)[0];
        second / (self.values[0] * 4.0 * self.mu / (self.c * self.c))
    }

    /// Largest `|(b - c²)F'' - a(ω² - 2cω + 3c² - 2b)F|` relative to the
    /// largest potential term, over `ω ≤ 6c`.
    pub fn euler_lagrange_residual(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.omega_plus);
        let curvature = second_derivative(&self.values, self.half.step);
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (i, w) in self.half.points().enumerate() {
            if w > 6.0 * self.c {
                break;
            }
            let potential = a * (w * w - 2.0 * c * w + 3.0 * c * c - 2.0 * b) * self.values[i];
            worst = worst.max(((b - c * c) * curvature[i] - potential).abs());
            scale = scale.max(potential.abs());
        }
        worst / scale
    }

    /// `F_μ(ω) / (z^ν e^{-z²/4})` at `ω`, which tends to a constant.
    pub fn asymptotic_ratio(&self, omega: f64) -> Result<f64> {
        let nu = self.mu - 0.5;
        let z = 2.0 * self.mu.sqrt() * (omega / self.c - 1.0);
        if !(z > 0.0) {
            return Err(Error::domain("asymptotic ratio needs ω > c"));
        }
        Ok(parabolic_cylinder_d(nu, z)? / (z.powf(nu) * (-z * z / 4.0).exp()))
    }
}

/// `f_μ(t)` relative to `f_μ(0)` and the Gaussian with the same `ω̄₊`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalSignal {
    pub time: Grid,
    /// `f_μ(t)/f_μ(0)`.
    pub ratio: Vec<f64>,
    /// `f_g(t)/f_g(0)` for `σ = c√π`.
    pub gaussian: Vec<f64>,
    pub min_ratio: f64,
    pub min_at: f64,
}

/// Real even time signal of the extremal spectrum.
pub fn extremal_time_signal(solution: &ExtremalSolution) -> ExtremalSignal {
    let s = &solution.spectrum;
    let origin = s.time.nearest(0.0).map_or(s.signal[s.time.len / 2], |i| s.signal[i]);
    let ratio: Vec<f64> = s.signal.iter().map(|v| v / origin).collect();
    let sigma = solution.omega_plus * PI.sqrt();
    let gaussian = s.time.points().map(|t| (-sigma * sigma * t * t / 2.0).exp()).collect();
    let (i_min, &min_ratio) = ratio
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty time grid");
    ExtremalSignal {
        time: s.time,
        ratio,
        gaussian,
        min_ratio,
        min_at: s.time.at(i_min),
    }
}

/// `(πσ²)^{-1/4} e^{-ω²/(2σ²)}`.
pub fn gaussian_spectrum(sigma: f64, omega: f64) -> f64 {
    (PI * sigma * sigma).powf(-0.25) * (-omega * omega / (2.0 * sigma * sigma)).exp()
}

/// `Δt Δω₊` of the Gaussian pair by quadrature of the closed forms.
pub fn gaussian_product_at(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain("sigma must be positive"));
    }
    let spec = QuadratureSpec::with_tol(1e-14).with_scale(1.0 / sigma);
    let f2 = |t: f64| (sigma * sigma / PI).sqrt() * (-sigma * sigma * t * t).exp();
    let var_t = integrate_line(|t| t * t * f2(t), 0.0, &spec)?;
    let spec_w = QuadratureSpec::with_tol(1e-14).with_scale(sigma);
    let s2 = |w: f64| gaussian_spectrum(sigma, w).powi(2);
    let mean = 2.0 * integrate(|w| w * s2(w), 0.0, f64::INFINITY, &spec_w)?;
    let var_w = 2.0 * integrate(|w| (w - mean).powi(2) * s2(w), 0.0, f64::INFINITY, &spec_w)?;
    Ok((var_t * var_w).sqrt())
}

/// Scales at which [`gaussian_product`] is evaluated.
pub const GAUSSIAN_SIGMAS: [f64; 3] = [0.5, 1.0, 2.0];

/// Common value of `Δt Δω₊` over [`GAUSSIAN_SIGMAS`], with the spread.
pub fn gaussian_product() -> Result<(f64, f64)> {
    let values: Vec<f64> = GAUSSIAN_SIGMAS.iter().map(|&s| gaussian_product_at(s)).collect::<Result<_>>()?;
    let hi = values.iter().copied().fold(f64::MIN, f64::max);
    let lo = values.iter().copied().fold(f64::MAX, f64::min);
    Ok((values.iter().sum::<f64>() / values.len() as f64, hi - lo))
}

/// `Δω₊ Δt ≥ |1/2 - |F(0)|² ω̄₊|` for a sampled pair; the time spread is
/// taken about `t̄`, which leaves both sides unchanged.
pub fn kay_silverman_bound(s: &SignalPair) -> Result<BoundReport> {
    let m = s.moments();
    let f0 = s
        .spectrum_at_zero()
        .ok_or_else(|| Error::domain("frequency grid does not cover ω = 0"))?;
    let energy = s.energy_freq();
    let rhs = (0.5 - f0.norm_sqr() / energy * m.omega_plus).abs();
    Ok(BoundReport::with_tolerance(
        "Kay-Silverman",
        m.delta_t * m.delta_omega_plus,
        Relation::Ge,
        rhs,
        "Kay & Silverman 1957",
        1e-6,
    ))
}

/// Gislason's extremal law `Q*(t) = 9(sin z - z cos z)²/z⁶`, `z = √5 tΔE/ħ`,
/// sampled on `times`.
pub fn gislason_extremal_q(delta_e: f64, times: &Grid, hbar: f64) -> Result<SurvivalAmplitude> {
    if times.start != 0.0 {
        return Err(Error::domain("time grid must start at t = 0"));
    }
    let p = EnergyDistribution::truncated_parabola(delta_e)?.with_hbar(hbar)?;
    SurvivalAmplitude::from_distribution(&p, times.end(), times.len)
}

/// `Δt Δω₊` of the even triangular spectrum `F = 1 - |ω|` on `|ω| ≤ 1`.
pub fn triangle_spectrum_product() -> Result<f64> {
    Ok(SpectralIntegrals::of_fn(|w| 1.0 - w, |_| -1.0, 1.0)?.omega().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mu_matches_oracle() {
        let mu = solve_mu().unwrap();
        // Root of D'_{μ-1/2}(-2√μ) from mpmath at 30 digits.
        assert!((mu - 0.295_053_062_475_117).abs() < 1e-12, "{mu}");
        assert!(derivative_condition(mu).unwrap().abs() < 1e-6);
        assert!(derivative_condition_exact(mu).unwrap().abs() < 1e-9);
    }

    #[test]
    fn sandwich() {
        let mu = solve_mu().unwrap();
        assert!(schwartz_bound() < mu && mu < gaussian_product_exact());
        assert!(mu - schwartz_bound() > 1e-3);
        assert!(gaussian_product_exact() - mu > 1e-3);
        assert!(triangle_spectrum_product().unwrap() - gaussian_product_exact() > 1e-3);
        assert_relative_eq!(triangle_spectrum_product().unwrap(), 0.1125f64.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn gaussian_product_invariant() {
        let (value, spread) = gaussian_product().unwrap();
        assert!((value - gaussian_product_exact()).abs() < 1e-10);
        assert!(spread < 1e-10);
    }

    #[test]
    fn extremal_solution_properties() {
        let s = ExtremalSolution::new(1.0).unwrap();
        assert!((s.omega_plus - 1.0).abs() < 1e-4, "{}", s.omega_plus);
        assert!((s.b - 1.5).abs() < 1e-6, "{}", s.b);
        assert!((s.spectral_product().unwrap() - s.mu).abs() < 1e-6);
        assert!((s.measured_product() - s.mu).abs() < 1e-4, "{}", s.measured_product());
        assert!(s.curvature_at_origin().abs() < 1e-4, "{}", s.curvature_at_origin());
        assert!(s.euler_lagrange_residual() < 1e-4, "{}", s.euler_lagrange_residual());
    }

    #[test]
    fn time_signal_dips_negative() {
        let s = ExtremalSolution::new(1.0).unwrap();
        let sig = extremal_time_signal(&s);
        assert!(sig.min_ratio < 0.0 && sig.min_ratio > -0.1, "{}", sig.min_ratio);
        assert!(sig.gaussian.iter().all(|&g| g >= 0.0));
        assert!(sig.time.points().zip(&sig.gaussian).all(|(t, &g)| t.abs() > 10.0 || g > 0.0));
        let n = sig.ratio.len();
        for i in 0..n / 2 {
            assert!((sig.ratio[i] - sig.ratio[n - 1 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn kay_silverman_cases() {
        let g = SignalPair::gaussian(1.0, 2001).unwrap();
        let r = kay_silverman_bound(&g).unwrap();
        assert_relative_eq!(r.rhs, 0.5 * (1.0 - 2.0 / PI), max_relative = 1e-6);
        assert_relative_eq!(r.lhs, gaussian_product_exact(), max_relative = 1e-6);
        let s = ExtremalSolution::new(1.0).unwrap();
        let r = kay_silverman_bound(&s.spectrum).unwrap();
        assert!(r.satisfied && (r.lhs - s.mu).abs() < 1e-4);
    }

    #[test]
    fn gislason_law() {
        let times = Grid::linspace(0.0, 40.0, 4001).unwrap();
        let q = gislason_extremal_q(1.0, &times, 1.0).unwrap();
        assert_eq!(q.probabilities()[0], 1.0);
        let tau0 = crate::decay::fleming_tau0_time(&q).unwrap();
        assert_relative_eq!(tau0, 3.0 * PI / (5.0 * 5f64.sqrt()), max_relative = 1e-7);
        let t = 0.7;
        let z = 5f64.sqrt() * t;
        assert_relative_eq!(z, 3.0 * PI * t / (5.0 * tau0), max_relative = 1e-7);
        let direct = 9.0 * (z.sin() - z * z.cos()).powi(2) / z.powi(6);
        assert_relative_eq!(q.probability(t).unwrap(), direct, max_relative = 1e-12);
    }
}
