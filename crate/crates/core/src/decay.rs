//! Decay times and energy widths of a nondecay law, and the exact
//! inequalities that tie them together.
//!
//! Functionals that diverge (the Lorentzian variance, the `1/t` tail of the
//! free-packet law, the undamped two-level law) are reported as
//! [`Error::Divergent`] by the individual functions and as
//! [`Extended::Infinite`] inside [`DecayTimes`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::numerics::{derivative, find_root, simpson_weights, RootBracket};
use crate::report::{BoundReport, PointwiseReport, Relation};
use crate::spectral::amplitude::TimeKernel;
use crate::spectral::{DistributionForm, EnergyDistribution, Grid, SurvivalAmplitude};

/// Relative agreement demanded between the time and spectral routes to `τ₀`.
pub const ROUTE_AGREEMENT: f64 = 1e-6;

fn divergent<T>(what: &str) -> Result<T> {
    Err(Error::Divergent(what.to_string()))
}

fn finite_integral(q: &SurvivalAmplitude, what: &str, kernel: TimeKernel) -> Result<f64> {
    match q.moment(kernel)? {
        Extended::Finite(v) => Ok(v),
        Extended::Infinite => divergent(what),
    }
}

fn extended<T>(r: Result<T>, f: impl FnOnce(T) -> f64) -> Result<Extended> {
    match r {
        Ok(v) => Ok(Extended::Finite(f(v))),
        Err(Error::Divergent(_)) => Ok(Extended::Infinite),
        Err(e) => Err(e),
    }
}

/// First time at which `Q(t)` falls to `level`: bracketed on the grid, then
/// refined by Brent's method on the exact (or interpolated) probability.
pub fn level_time(q: &SurvivalAmplitude, level: f64) -> Result<f64> {
    let probs = q.probabilities();
    let i = probs
        .iter()
        .position(|&v| v <= level)
        .ok_or(Error::LevelNotReached { level })?;
    if i == 0 {
        return Ok(0.0);
    }
    let (lo, hi) = (q.grid.at(i - 1), q.grid.at(i));
    if probs[i] == level {
        return Ok(hi);
    }
    let tol = 1e-14 * hi.max(q.time_scale());
    let f = |t: f64| q.probability(t).unwrap_or(f64::NAN) - level;
    match find_root(f, RootBracket::with_tol(lo, hi, tol)?) {
        Ok(t) => Ok(t),
        // The exact law may dip below the level between grid points.
        Err(Error::NoSignChange { .. }) => Ok(hi),
        Err(e) => Err(e),
    }
}

/// `T½`, the first time at which `Q = ½`.
pub fn half_life(q: &SurvivalAmplitude) -> Result<f64> {
    level_time(q, 0.5).map_err(|e| match e {
        Error::LevelNotReached { level } => Error::NoCrossing { level },
        e => e,
    })
}

/// `τ₀ = ∫₀^∞ Q dt` by quadrature of the nondecay law.
pub fn fleming_tau0_time(q: &SurvivalAmplitude) -> Result<f64> {
    finite_integral(q, "∫Q dt", TimeKernel::Zeroth)
}

/// `τ₀ = πħ ∫ P² dE`.
pub fn fleming_tau0_spectral(p: &EnergyDistribution) -> Result<f64> {
    match p.square_integral() {
        Extended::Finite(s) => Ok(PI * p.hbar * s),
        Extended::Infinite => divergent("∫P² dE"),
    }
}

/// `τ₀`, from the spectrum when the amplitude knows its distribution and
/// `∫P²` is finite, otherwise from the time integral.
pub fn fleming_tau0(q: &SurvivalAmplitude) -> Result<f64> {
    match q.source() {
        Some(p) => match fleming_tau0_spectral(p) {
            Ok(t) => Ok(t),
            Err(Error::Divergent(_)) => fleming_tau0_time(q),
            Err(e) => Err(e),
        },
        None => fleming_tau0_time(q),
    }
}

/// `∫₀^∞ t^k Q dt` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeMoments {
    pub zeroth: Extended,
    pub first: Extended,
    pub second: Extended,
    /// `∫₀^∞ √Q dt`.
    pub root: Extended,
}

impl TimeMoments {
    pub fn of(q: &SurvivalAmplitude) -> Result<Self> {
        Ok(TimeMoments {
            zeroth: q.moment(TimeKernel::Zeroth)?,
            first: q.moment(TimeKernel::First)?,
            second: q.moment(TimeKernel::Second)?,
            root: q.moment(TimeKernel::Root)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedTimes {
    #[serde(with = "crate::report::sig12")]
    pub tau_star: f64,
    #[serde(with = "crate::report::sig12")]
    pub delta_e_star: f64,
    #[serde(with = "crate::report::sig12")]
    pub tau_2star: f64,
    #[serde(with = "crate::report::sig12")]
    pub delta_e_2star: f64,
    /// Relative residuals of `τ* = τ**²/τ₀` and `ΔE* = ΔE**² τ₀/(πħ)`, with
    /// `τ₀` taken from the time integral.
    pub consistency: (f64, f64),
}

/// `τ*`, `ΔE*`, `τ**`, `ΔE**`.
pub fn modified_times(p: &EnergyDistribution, q: &SurvivalAmplitude) -> Result<ModifiedTimes> {
    let root = finite_integral(q, "∫√Q dt", TimeKernel::Root)?;
    let tau0 = fleming_tau0_time(q)?;
    let square = match p.square_integral() {
        Extended::Finite(s) => s,
        Extended::Infinite => return divergent("∫P² dE"),
    };
    let peak = match p.peak_density()? {
        Extended::Finite(m) => m,
        Extended::Infinite => return divergent("max P"),
    };
    let tau_star = root * root / (4.0 * tau0);
    let tau_2star = 0.5 * root;
    let delta_e_star = square / (peak * peak);
    let delta_e_2star = 1.0 / peak;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let consistency = (
        rel(tau_star, tau_2star * tau_2star / tau0),
        rel(delta_e_star, delta_e_2star * delta_e_2star * tau0 / (PI * p.hbar)),
    );
    Ok(ModifiedTimes {
        tau_star,
        delta_e_star,
        tau_2star,
        delta_e_2star,
        consistency,
    })
}

impl ModifiedTimes {
    pub fn star_report(&self, hbar: f64) -> BoundReport {
        BoundReport::new(
            "EqWidth-star",
            self.tau_star * self.delta_e_star,
            Relation::Ge,
            PI * hbar / 4.0,
            "equivalent-width relation with squared spectrum",
        )
    }

    pub fn double_star_report(&self, hbar: f64) -> BoundReport {
        BoundReport::new(
            "EqWidth-2star",
            self.tau_2star * self.delta_e_2star,
            Relation::Ge,
            PI * hbar / 2.0,
            "equivalent-width relation W(P) W(χ) = 2πħ",
        )
    }
}

/// Normalization, mean and variance of the weight `P(E)²`.
pub fn squared_spectrum_moments(p: &EnergyDistribution) -> Result<(f64, f64, f64)> {
    let off = p.offset;
    let (norm, mean, var) = match &p.form {
        DistributionForm::Lorentzian { e0, gamma } => (1.0 / (PI * gamma), e0 + off, gamma * gamma / 4.0),
        DistributionForm::Gaussian { mean, delta_e } => (
            1.0 / (2.0 * PI.sqrt() * delta_e),
            mean + off,
            delta_e * delta_e / 2.0,
        ),
        DistributionForm::TruncatedParabola { delta_e } => (
            3.0 / (5.0 * 5f64.sqrt() * delta_e),
            off,
            5.0 * delta_e * delta_e / 7.0,
        ),
        DistributionForm::Stepwise { delta_e } => (0.5 / (3f64.sqrt() * delta_e), off, delta_e * delta_e),
        DistributionForm::Bhattacharyya { .. } | DistributionForm::TwoPoint { .. } => {
            return divergent("∫P² dE")
        }
        DistributionForm::Sampled { grid, values } => {
            let (m0, m1, m2) = sampled_square_moments(grid, values);
            let mean = m1 / m0;
            (m0, mean + off, (m2 / m0 - mean * mean).max(0.0))
        }
    };
    Ok((norm, mean, var))
}

/// `∫E^k P² dE`, `k = 0, 1, 2`, for the piecewise-linear interpolant, with
/// three-point Gauss–Legendre per cell (exact for these degrees).
fn sampled_square_moments(grid: &Grid, values: &[f64]) -> (f64, f64, f64) {
    let nodes = [-(0.6f64.sqrt()), 0.0, 0.6f64.sqrt()];
    let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let h = grid.step;
    let mut m = (0.0, 0.0, 0.0);
    for (i, w) in values.windows(2).enumerate() {
        let x0 = grid.at(i);
        for (u, wt) in nodes.iter().zip(weights) {
            let s = 0.5 * (u + 1.0);
            let e = x0 + s * h;
            let p = w[0] + (w[1] - w[0]) * s;
            let c = 0.5 * h * wt * p * p;
            m.0 += c;
            m.1 += c * e;
            m.2 += c * e * e;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerFormTimes {
    #[serde(with = "crate::report::sig12")]
    pub tau_tilde: f64,
    #[serde(with = "crate::report::sig12")]
    pub epsilon: f64,
}

/// `τ̃` from `∫t²Q/∫Q` and `ε` from the `P²`-weighted variance.
pub fn wigner_form_times(p: &EnergyDistribution, q: &SurvivalAmplitude) -> Result<WignerFormTimes> {
    let tau0 = fleming_tau0_time(q)?;
    let second = finite_integral(q, "∫t²Q dt", TimeKernel::Second)?;
    let (_, _, var) = squared_spectrum_moments(p)?;
    Ok(WignerFormTimes {
        tau_tilde: (second / tau0).sqrt(),
        epsilon: var.sqrt(),
    })
}

impl WignerFormTimes {
    pub fn report(&self, hbar: f64) -> BoundReport {
        BoundReport::new(
            "Wigner-form",
            self.epsilon * self.tau_tilde,
            Relation::Ge,
            hbar / 2.0,
            "Wigner 1972 stay-time relation with P² weighting",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FujiwaraTimes {
    #[serde(with = "crate::report::sig12")]
    pub tau1: f64,
    #[serde(with = "crate::report::sig12")]
    pub delta1t: f64,
    /// `ε Δ₁t`, infinite when `ε` diverges.
    pub product: Extended,
}

/// Extremal constant bracketing the smallest known `ε Δ₁t / ħ` from below.
pub const FUJIWARA_LOWER_ENVELOPE: f64 = 0.295;
/// Gaussian value of `ε Δ₁t / ħ`, the upper end of the open interval.
pub const FUJIWARA_UPPER_ENVELOPE: f64 = 0.301;

/// `τ₁ = ∫tQ/∫Q` and `Δ₁t = √(τ̃² - τ₁²)`.
pub fn fujiwara_times(q: &SurvivalAmplitude, p: &EnergyDistribution) -> Result<FujiwaraTimes> {
    let tau0 = fleming_tau0_time(q)?;
    let first = finite_integral(q, "∫tQ dt", TimeKernel::First)?;
    let second = finite_integral(q, "∫t²Q dt", TimeKernel::Second)?;
    let tau1 = first / tau0;
    let delta1t = (second / tau0 - tau1 * tau1).max(0.0).sqrt();
    let product = extended(squared_spectrum_moments(p), |(_, _, var)| var.sqrt() * delta1t)?;
    Ok(FujiwaraTimes { tau1, delta1t, product })
}

impl FujiwaraTimes {
    /// Compares `ε Δ₁t` with the lower envelope constant. The sharp bound is
    /// open, so the report is informational.
    pub fn report(&self, hbar: f64) -> BoundReport {
        BoundReport::new(
            "Fujiwara",
            self.product.to_f64(),
            Relation::Ge,
            FUJIWARA_LOWER_ENVELOPE * hbar,
            "Fujiwara 1970; sharp constant open between 0.295 and 0.301",
        )
        .informational()
        .with_note(format!(
            "envelope [{FUJIWARA_LOWER_ENVELOPE}, {FUJIWARA_UPPER_ENVELOPE}]ħ"
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilgevoordUffink {
    #[serde(with = "crate::report::sig12")]
    pub w_alpha: f64,
    #[serde(with = "crate::report::sig12")]
    pub tau_beta: f64,
    pub bound: BoundReport,
}

/// `W_α`, `τ_β` and `τ_β W_α ≥ 2ħ arccos((β + 1 - α)/α)`.
pub fn hilgevoord_uffink(
    p: &EnergyDistribution,
    alpha: f64,
    q: &SurvivalAmplitude,
    beta: f64,
) -> Result<HilgevoordUffink> {
    if !(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} and beta = {beta} must lie in (0, 1)")));
    }
    if beta > 2.0 * alpha - 1.0 {
        return Err(Error::BoundInapplicable(format!(
            "beta = {beta} exceeds 2 alpha - 1 = {}",
            2.0 * alpha - 1.0
        )));
    }
    let w_alpha = p.shortest_interval(alpha)?;
    let tau_beta = level_time(q, beta * beta).map_err(|e| match e {
        Error::LevelNotReached { .. } => Error::LevelNotReached { level: beta },
        e => e,
    })?;
    let rhs = 2.0 * p.hbar * ((beta + 1.0 - alpha) / alpha).acos();
    let mut bound = BoundReport::new(
        "HU",
        tau_beta * w_alpha,
        Relation::Ge,
        rhs,
        "Hilgevoord & Uffink 1988",
    );
    if let DistributionForm::Lorentzian { gamma, .. } = p.form {
        bound = bound.with_note(format!(
            "exponential law: tau_beta = 2(ħ/Γ) ln(1/beta) = {:.9}; quoted in the literature as 4τ ln(1/beta)",
            2.0 * p.hbar / gamma * (1.0 / beta).ln()
        ));
    }
    Ok(HilgevoordUffink { w_alpha, tau_beta, bound })
}

/// Observed and predicted violation region of the rate form for an
/// exponential law with a finite nominal dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialWindow {
    /// `τ ln[1 + ħ²/(2τΔE)²]`.
    pub predicted: f64,
    /// Smallest and largest violating time, if any.
    pub observed: Option<(f64, f64)>,
    /// Spacing of the checked times.
    pub resolution: f64,
}

impl ExponentialWindow {
    /// Every violation lies below the predicted edge and the last one is
    /// within a grid spacing of it.
    pub fn matches(&self) -> bool {
        match self.observed {
            Some((_, hi)) => hi <= self.predicted && self.predicted - hi <= 2.0 * self.resolution,
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MandelstamTamm {
    /// `Q(t) ≥ cos²(ΔE t/ħ)` for `t ≤ πħ/(2ΔE)`.
    pub cosine: PointwiseReport,
    /// `|dQ/dt| ≤ (2ΔE/ħ) √(Q(1 - Q))`.
    pub rate: PointwiseReport,
    pub half_life: Option<BoundReport>,
    pub fleming: Option<BoundReport>,
    pub gislason: Option<BoundReport>,
    pub exponential_window: Option<ExponentialWindow>,
}

impl MandelstamTamm {
    pub fn reports(&self) -> Vec<BoundReport> {
        let mut out = vec![self.cosine.worst.clone(), self.rate.worst.clone()];
        out.extend(self.half_life.iter().cloned());
        out.extend(self.fleming.iter().cloned());
        out.extend(self.gislason.iter().cloned());
        out
    }
}

/// Number of times sampled by the pointwise Mandelstam–Tamm checks.
pub const MT_POINTS: usize = 2001;

/// Gislason constant `3π/(5√5)`.
pub fn gislason_constant() -> f64 {
    3.0 * PI / (5.0 * 5f64.sqrt())
}

/// Mandelstam–Tamm family for a nondecay law and an energy dispersion.
///
/// When `delta_e` disagrees with the dispersion of the amplitude's source
/// distribution (for instance a finite nominal width attached to the
/// exponential law) the reports are informational.
pub fn mandelstam_tamm_check(q: &SurvivalAmplitude, delta_e: f64) -> Result<MandelstamTamm> {
    if !(delta_e > 0.0) || !delta_e.is_finite() {
        return Err(Error::domain(format!("energy dispersion must be positive and finite, got {delta_e}")));
    }
    let hbar = q.hbar;
    let nominal = match q.source().map(EnergyDistribution::delta_e) {
        Some(Extended::Finite(d)) => (d - delta_e).abs() > 1e-9 * delta_e,
        Some(Extended::Infinite) => true,
        None => false,
    };
    let tag = |r: BoundReport| if nominal { r.informational() } else { r };

    let quarter = PI * hbar / (2.0 * delta_e);
    let t_end = quarter.min(q.grid.end());
    let step = t_end / (MT_POINTS - 1) as f64;
    let times: Vec<f64> = (0..MT_POINTS).map(|i| i as f64 * step).collect();
    let probs: Vec<f64> = times.iter().map(|&t| q.probability(t).unwrap_or(f64::NAN)).collect();

    let cosine = PointwiseReport::collect(
        "MT-cosine",
        Relation::Ge,
        "Mandelstam & Tamm 1945",
        1e-12,
        times
            .iter()
            .zip(&probs)
            .map(|(&t, &v)| (t, v, (delta_e * t / hbar).cos().powi(2))),
    )
    .ok_or_else(|| Error::GridTooShort("no times for the cosine check".into()))?;

    let rate_scale = 2.0 * delta_e / hbar;
    let (h, rate_tol) = if q.source().is_some() {
        (1e-6 * q.time_scale(), 1e-7 * rate_scale)
    } else {
        (q.grid.step, 1e-3 * rate_scale)
    };
    let rate_points: Vec<(f64, f64, f64)> = times
        .iter()
        .zip(&probs)
        .filter(|(&t, _)| t >= h)
        .filter_map(|(&t, &v)| {
            let up = q.probability(t + h)?;
            let down = q.probability(t - h)?;
            let slope = (up - down) / (2.0 * h);
            Some((t, slope.abs(), rate_scale * (v * (1.0 - v)).max(0.0).sqrt()))
        })
        .collect();
    let rate = PointwiseReport::collect("MT-rate", Relation::Le, "Mandelstam & Tamm 1945", rate_tol, rate_points)
        .ok_or_else(|| Error::GridTooShort("no times for the rate check".into()))?;
    let cosine = PointwiseReport { worst: tag(cosine.worst), ..cosine };
    let rate = PointwiseReport { worst: tag(rate.worst), ..rate };

    let half_life = half_life(q).ok().map(|t| {
        tag(BoundReport::new(
            "MT-halflife",
            t * delta_e,
            Relation::Ge,
            PI * hbar / 4.0,
            "Mandelstam & Tamm 1945",
        ))
    });
    let tau0 = fleming_tau0(q).ok();
    let fleming = tau0.map(|t| {
        tag(BoundReport::new(
            "MT-Fleming",
            t * delta_e,
            Relation::Ge,
            PI * hbar / 4.0,
            "Fleming 1973",
        ))
    });
    let gislason = tau0.map(|t| {
        tag(BoundReport::new(
            "Gislason",
            t * delta_e,
            Relation::Ge,
            gislason_constant() * hbar,
            "Gislason, Sabelli & Wood 1985",
        ))
    });

    let exponential_window = match q.source().map(|p| &p.form) {
        Some(DistributionForm::Lorentzian { gamma, .. }) => {
            let tau = hbar / gamma;
            Some(ExponentialWindow {
                predicted: tau * (1.0 + (hbar / (2.0 * tau * delta_e)).powi(2)).ln(),
                observed: rate.violation_window(),
                resolution: step,
            })
        }
        _ => None,
    };

    Ok(MandelstamTamm {
        cosine,
        rate,
        half_life,
        fleming,
        gislason,
        exponential_window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerStay {
    #[serde(with = "crate::report::sig12")]
    pub tau_w: f64,
    #[serde(with = "crate::report::sig12")]
    pub eps_w: f64,
    #[serde(with = "crate::report::sig12")]
    pub product: f64,
    pub bound: BoundReport,
}

/// Stay time `τ_W² = ħ² ∫|η'|²/∫|η|²` and width
/// `ε_W² = ∫(E - E0)²|η|²/∫|η|²` of a spectral overlap `η(E)` sampled on
/// `E ≥ 0` with `η(0) = 0`.
pub fn wigner_stay_time(grid: &Grid, eta: &[Complex64], e0: f64, hbar: f64) -> Result<WignerStay> {
    if grid.start.abs() > 1e-12 * grid.step {
        return Err(Error::domain("energy grid must start at E = 0"));
    }
    if eta.len() != grid.len {
        return Err(Error::domain("samples do not match the grid"));
    }
    if grid.len < 5 {
        return Err(Error::GridTooShort("stay time needs at least 5 energies".into()));
    }
    let scale = eta.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::domain("overlap vanishes identically"));
    }
    if eta[0].norm() > 1e-8 * scale {
        return Err(Error::NonzeroAtOrigin(eta[0].norm()));
    }
    let h = grid.step;
    let n = grid.len;
    let slope_samples = derivative(eta, h);
    let w = simpson_weights(n, h);
    let mut norm = 0.0;
    let mut slope = 0.0;
    let mut spread = 0.0;
    for i in 0..n {
        let e = grid.at(i);
        let a = eta[i].norm_sqr();
        norm += w[i] * a;
        slope += w[i] * slope_samples[i].norm_sqr();
        spread += w[i] * (e - e0).powi(2) * a;
    }
    let tau_w = hbar * (slope / norm).sqrt();
    let eps_w = (spread / norm).sqrt();
    let product = tau_w * eps_w;
    let bound = BoundReport::new("Wigner-stay", product, Relation::Ge, hbar / 2.0, "Wigner 1972");
    Ok(WignerStay { tau_w, eps_w, product, bound })
}

/// [`wigner_stay_time`] for `η` given as a function, sampled on
/// `[0, e_max]` with `n` points.
pub fn wigner_stay_time_fn(
    eta: impl Fn(f64) -> Complex64,
    e0: f64,
    hbar: f64,
    e_max: f64,
    n: usize,
) -> Result<WignerStay> {
    let grid = Grid::linspace(0.0, e_max, n)?;
    let samples: Vec<Complex64> = grid.points().map(eta).collect();
    wigner_stay_time(&grid, &samples, e0, hbar)
}

/// Every decay time and width of one distribution. `Infinite` marks a
/// divergent functional or a level that is never reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayTimes {
    pub delta_e: Extended,
    pub t_half: Extended,
    pub tau0: Extended,
    pub tau_star: Extended,
    pub delta_e_star: Extended,
    pub tau_2star: Extended,
    pub delta_e_2star: Extended,
    pub tau_tilde: Extended,
    pub epsilon: Extended,
    pub tau1: Extended,
    pub delta1t: Extended,
}

impl DecayTimes {
    pub fn compute(p: &EnergyDistribution, q: &SurvivalAmplitude) -> Result<Self> {
        q.prefetch_moments();
        let t_half = match half_life(q) {
            Ok(t) => Extended::Finite(t),
            Err(Error::NoCrossing { .. }) => Extended::Infinite,
            Err(e) => return Err(e),
        };
        let tau0 = extended(fleming_tau0(q), |t| t)?;
        let modified = match modified_times(p, q) {
            Ok(m) => Some(m),
            Err(Error::Divergent(_)) | Err(Error::NotApplicable(_)) => None,
            Err(e) => return Err(e),
        };
        let pick = |f: fn(&ModifiedTimes) -> f64| modified.as_ref().map_or(Extended::Infinite, |m| Extended::Finite(f(m)));
        let epsilon = extended(squared_spectrum_moments(p), |(_, _, v)| v.sqrt())?;
        let tau_tilde = extended(wigner_form_times(p, q).map(|w| w.tau_tilde).or_else(|e| match e {
            // τ̃ exists even when ε does not.
            Error::Divergent(_) => {
                let tau0 = fleming_tau0_time(q)?;
                let second = finite_integral(q, "∫t²Q dt", TimeKernel::Second)?;
                Ok((second / tau0).sqrt())
            }
            e => Err(e),
        }), |t| t)?;
        let fujiwara = match fujiwara_times(q, p) {
            Ok(f) => Some(f),
            Err(Error::Divergent(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(DecayTimes {
            delta_e: p.delta_e(),
            t_half,
            tau0,
            tau_star: pick(|m| m.tau_star),
            delta_e_star: pick(|m| m.delta_e_star),
            tau_2star: pick(|m| m.tau_2star),
            delta_e_2star: pick(|m| m.delta_e_2star),
            tau_tilde,
            epsilon,
            tau1: fujiwara.map_or(Extended::Infinite, |f| Extended::Finite(f.tau1)),
            delta1t: fujiwara.map_or(Extended::Infinite, |f| Extended::Finite(f.delta1t)),
        })
    }

    /// Relative residuals of `τ* = τ**²/τ₀` and `ΔE* = ΔE**² τ₀/(πħ)` when
    /// all entries are finite.
    pub fn consistency(&self, hbar: f64) -> Option<(f64, f64)> {
        let (ts, t2, t0) = (self.tau_star.finite()?, self.tau_2star.finite()?, self.tau0.finite()?);
        let (es, e2) = (self.delta_e_star.finite()?, self.delta_e_2star.finite()?);
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
        Some((rel(ts, t2 * t2 / t0), rel(es, e2 * e2 * t0 / (PI * hbar))))
    }

    /// Named entries in a fixed order.
    pub fn entries(&self) -> [(&'static str, Extended); 11] {
        [
            ("delta_e", self.delta_e),
            ("t_half", self.t_half),
            ("tau0", self.tau0),
            ("tau_star", self.tau_star),
            ("delta_e_star", self.delta_e_star),
            ("tau_2star", self.tau_2star),
            ("delta_e_2star", self.delta_e_2star),
            ("tau_tilde", self.tau_tilde),
            ("epsilon", self.epsilon),
            ("tau1", self.tau1),
            ("delta1t", self.delta1t),
        ]
    }
}
