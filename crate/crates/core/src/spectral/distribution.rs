//! Normalized energy distributions `P(E)` and their Fourier transforms.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erf_inv};
use statrs::function::gamma::gamma;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::numerics::{find_root, integrate, integrate_line, minimize_golden, QuadratureSpec, RootBracket};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum DistributionForm {
    /// Breit–Wigner line centred at `e0` with full width `gamma`.
    Lorentzian { e0: f64, gamma: f64 },
    Gaussian { mean: f64, delta_e: f64 },
    /// `P ∝ 1 - E²/(5ΔE²)` on `|E| ≤ √5 ΔE`.
    TruncatedParabola { delta_e: f64 },
    /// Uniform on `|E| ≤ √3 ΔE`.
    Stepwise { delta_e: f64 },
    /// Free Gaussian packet: `P = (√2 π E ΔE)^{-1/2} exp(-E/(√2 ΔE))`, `E > 0`.
    Bhattacharyya { delta_e: f64 },
    /// Point masses `weight` at `e1` and `1 - weight` at `e2`.
    TwoPoint { e1: f64, e2: f64, weight: f64 },
    /// Piecewise-linear density through the samples.
    Sampled { grid: Grid, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyDistribution {
    pub form: DistributionForm,
    /// Added to every energy of `form`.
    #[serde(default)]
    pub offset: f64,
    pub hbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: Extended,
    pub finite: bool,
}

impl Moments {
    pub fn delta_e(&self) -> Extended {
        self.variance.map(f64::sqrt)
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{name} must be positive and finite, got {x}")))
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `∫_0^h (1 - s/h) e^{-iks} ds`, the transform of a descending half hat.
fn half_hat(k: f64, h: f64) -> Complex64 {
    let x = k * h;
    if x.abs() < 0.5 {
        // h Σ (-ix)^n / (n! (n+1)(n+2))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.5, 0.0);
        for n in 1..20 {
            term *= Complex64::new(0.0, -x) / n as f64;
            sum += term / ((n + 1) * (n + 2)) as f64;
        }
        return sum * h;
    }
    let ik = Complex64::new(0.0, k);
    let e = Complex64::new(0.0, -x).exp();
    let i0 = (1.0 - e) / ik;
    let i1 = -h * e / ik + i0 / ik;
    i0 - i1 / h
}

impl EnergyDistribution {
    pub fn new(form: DistributionForm, hbar: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        let form = match form {
            DistributionForm::Lorentzian { e0, gamma } => {
                positive("gamma", gamma)?;
                if !e0.is_finite() {
                    return Err(Error::InvalidDistribution("E0 must be finite".into()));
                }
                DistributionForm::Lorentzian { e0, gamma }
            }
            DistributionForm::Gaussian { mean, delta_e } => {
                positive("deltaE", delta_e)?;
                if !mean.is_finite() {
                    return Err(Error::InvalidDistribution("mean must be finite".into()));
                }
                DistributionForm::Gaussian { mean, delta_e }
            }
            DistributionForm::TruncatedParabola { delta_e } => {
                positive("deltaE", delta_e)?;
                DistributionForm::TruncatedParabola { delta_e }
            }
            DistributionForm::Stepwise { delta_e } => {
                positive("deltaE", delta_e)?;
                DistributionForm::Stepwise { delta_e }
            }
            DistributionForm::Bhattacharyya { delta_e } => {
                positive("deltaE", delta_e)?;
                DistributionForm::Bhattacharyya { delta_e }
            }
            DistributionForm::TwoPoint { e1, e2, weight } => {
                if !(0.0..=1.0).contains(&weight) || !e1.is_finite() || !e2.is_finite() {
                    return Err(Error::InvalidDistribution(format!(
                        "two-point weight {weight} outside [0, 1] or non-finite energies"
                    )));
                }
                let (e1, e2, weight) = if e1 <= e2 { (e1, e2, weight) } else { (e2, e1, 1.0 - weight) };
                DistributionForm::TwoPoint { e1, e2, weight }
            }
            DistributionForm::Sampled { grid, values } => {
                return Self::sampled(grid, values, hbar);
            }
        };
        Ok(EnergyDistribution { form, offset: 0.0, hbar })
    }

    pub fn lorentzian(e0: f64, gamma: f64) -> Result<Self> {
        Self::new(DistributionForm::Lorentzian { e0, gamma }, 1.0)
    }

    pub fn gaussian(mean: f64, delta_e: f64) -> Result<Self> {
        Self::new(DistributionForm::Gaussian { mean, delta_e }, 1.0)
    }

    pub fn truncated_parabola(delta_e: f64) -> Result<Self> {
        Self::new(DistributionForm::TruncatedParabola { delta_e }, 1.0)
    }

    pub fn stepwise(delta_e: f64) -> Result<Self> {
        Self::new(DistributionForm::Stepwise { delta_e }, 1.0)
    }

    pub fn bhattacharyya(delta_e: f64) -> Result<Self> {
        Self::new(DistributionForm::Bhattacharyya { delta_e }, 1.0)
    }

    pub fn two_point(e1: f64, e2: f64, weight: f64) -> Result<Self> {
        Self::new(DistributionForm::TwoPoint { e1, e2, weight }, 1.0)
    }

    /// Piecewise-linear density through `values`, rescaled to unit mass.
    pub fn sampled(grid: Grid, values: Vec<f64>, hbar: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        if values.len() != grid.len {
            return Err(Error::InvalidDistribution(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite density {v}")));
        }
        let mass: f64 = trapezoid(&values, grid.step);
        if !(mass > 0.0) {
            return Err(Error::InvalidDistribution("density integrates to zero".into()));
        }
        let values = values.into_iter().map(|v| v / mass).collect();
        Ok(EnergyDistribution {
            form: DistributionForm::Sampled { grid, values },
            offset: 0.0,
            hbar,
        })
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        self.hbar = hbar;
        Ok(self)
    }

    /// Same distribution with every energy moved by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.offset += delta;
        out
    }

    /// Shifts so that the lowest energy in the support is zero. Returns the
    /// shifted distribution and the applied shift.
    pub fn ground_shifted(&self) -> Result<(Self, f64)> {
        let lo = self.min_energy();
        if !lo.is_finite() {
            return Err(Error::NotApplicable("spectrum is not bounded below".into()));
        }
        Ok((self.shifted(-lo), -lo))
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.form, DistributionForm::TwoPoint { .. })
    }

    /// Density at `e`. Point masses contribute nothing here.
    pub fn density(&self, e: f64) -> f64 {
        let x = e - self.offset;
        match &self.form {
            DistributionForm::Lorentzian { e0, gamma } => {
                gamma / (2.0 * PI) / ((x - e0).powi(2) + gamma * gamma / 4.0)
            }
            DistributionForm::Gaussian { mean, delta_e } => {
                let u = (x - mean) / delta_e;
                (-0.5 * u * u).exp() / ((2.0 * PI).sqrt() * delta_e)
            }
            DistributionForm::TruncatedParabola { delta_e } => {
                let a = 5f64.sqrt() * delta_e;
                if x.abs() > a {
                    0.0
                } else {
                    3.0 / (4.0 * a) * (1.0 - (x / a).powi(2))
                }
            }
            DistributionForm::Stepwise { delta_e } => {
                let b = 3f64.sqrt() * delta_e;
                if x.abs() > b {
                    0.0
                } else {
                    0.5 / b
                }
            }
            DistributionForm::Bhattacharyya { delta_e } => {
                if x < 0.0 {
                    0.0
                } else {
                    let theta = SQRT_2 * delta_e;
                    (PI * theta * x).powf(-0.5) * (-x / theta).exp()
                }
            }
            DistributionForm::TwoPoint { .. } => 0.0,
            DistributionForm::Sampled { grid, values } => {
                let u = (x - grid.start) / grid.step;
                if u < 0.0 || u > (grid.len - 1) as f64 {
                    return 0.0;
                }
                let i = (u.floor() as usize).min(grid.len - 2);
                let f = u - i as f64;
                values[i] * (1.0 - f) + values[i + 1] * f
            }
        }
    }

    /// Closed support `[lo, hi]`, possibly unbounded.
    pub fn support(&self) -> (f64, f64) {
        let (lo, hi) = match &self.form {
            DistributionForm::Lorentzian { .. } | DistributionForm::Gaussian { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            DistributionForm::TruncatedParabola { delta_e } => {
                let a = 5f64.sqrt() * delta_e;
                (-a, a)
            }
            DistributionForm::Stepwise { delta_e } => {
                let b = 3f64.sqrt() * delta_e;
                (-b, b)
            }
            DistributionForm::Bhattacharyya { .. } => (0.0, f64::INFINITY),
            DistributionForm::TwoPoint { e1, e2, weight } => {
                if *weight == 0.0 {
                    (*e2, *e2)
                } else if *weight == 1.0 {
                    (*e1, *e1)
                } else {
                    (*e1, *e2)
                }
            }
            DistributionForm::Sampled { grid, values } => {
                let first = values.iter().position(|v| *v > 0.0).unwrap_or(0);
                let last = values.iter().rposition(|v| *v > 0.0).unwrap_or(grid.len - 1);
                (grid.at(first.saturating_sub(1)), grid.at((last + 1).min(grid.len - 1)))
            }
        };
        (lo + self.offset, hi + self.offset)
    }

    pub fn min_energy(&self) -> f64 {
        self.support().0
    }

    /// Mean and variance. The Lorentzian mean is its centre (principal value).
    pub fn moments(&self) -> Moments {
        let (mean, variance) = match &self.form {
            DistributionForm::Lorentzian { e0, .. } => (*e0, Extended::Infinite),
            DistributionForm::Gaussian { mean, delta_e } => (*mean, Extended::Finite(delta_e * delta_e)),
            DistributionForm::TruncatedParabola { delta_e }
            | DistributionForm::Stepwise { delta_e } => (0.0, Extended::Finite(delta_e * delta_e)),
            DistributionForm::Bhattacharyya { delta_e } => {
                (delta_e / SQRT_2, Extended::Finite(delta_e * delta_e))
            }
            DistributionForm::TwoPoint { e1, e2, weight } => {
                let mean = weight * e1 + (1.0 - weight) * e2;
                (mean, Extended::Finite(weight * (1.0 - weight) * (e2 - e1).powi(2)))
            }
            DistributionForm::Sampled { grid, values } => sampled_moments(grid, values),
        };
        Moments {
            mean: mean + self.offset,
            variance,
            finite: variance.is_finite(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.moments().mean
    }

    pub fn delta_e(&self) -> Extended {
        self.moments().delta_e()
    }

    /// `⟨(E - ⟨E⟩)^k⟩`.
    pub fn central_moment(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        let kf = k as i32;
        match &self.form {
            DistributionForm::Lorentzian { .. } => {
                if k == 1 {
                    Ok(0.0)
                } else {
                    Err(Error::MomentDivergent(k))
                }
            }
            DistributionForm::Gaussian { delta_e, .. } => {
                if k % 2 == 1 {
                    Ok(0.0)
                } else {
                    let double_factorial: f64 = (1..k).step_by(2).map(|j| j as f64).product();
                    Ok(double_factorial * delta_e.powi(kf))
                }
            }
            DistributionForm::TruncatedParabola { delta_e } => {
                if k % 2 == 1 {
                    return Ok(0.0);
                }
                let a = 5f64.sqrt() * delta_e;
                Ok(3.0 * a.powi(kf) / ((k + 1) * (k + 3)) as f64)
            }
            DistributionForm::Stepwise { delta_e } => {
                if k % 2 == 1 {
                    return Ok(0.0);
                }
                let b = 3f64.sqrt() * delta_e;
                Ok(b.powi(kf) / (k + 1) as f64)
            }
            DistributionForm::TwoPoint { e1, e2, weight } => {
                let d = e2 - e1;
                let w = *weight;
                Ok(w * (-(1.0 - w) * d).powi(kf) + (1.0 - w) * (w * d).powi(kf))
            }
            _ => {
                let mean = self.mean();
                self.expectation(|e| (e - mean).powi(kf))
            }
        }
    }

    /// `⟨|E|^p⟩` for real `p > 0`.
    pub fn abs_moment(&self, p: f64) -> Result<Extended> {
        if !(p > 0.0) {
            return Err(Error::domain(format!("moment order {p} must be positive")));
        }
        match &self.form {
            DistributionForm::Lorentzian { .. } => Ok(Extended::Infinite),
            DistributionForm::Bhattacharyya { delta_e } if self.offset == 0.0 => {
                let theta = SQRT_2 * delta_e;
                Ok(Extended::Finite(theta.powf(p) * gamma(p + 0.5) / PI.sqrt()))
            }
            _ => Ok(Extended::Finite(self.expectation(|e| e.abs().powf(p))?)),
        }
    }

    /// `∫ g(E) P(E) dE` including point masses.
    pub fn expectation<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let spec = QuadratureSpec::with_tol(1e-12);
        let off = self.offset;
        match &self.form {
            DistributionForm::Lorentzian { e0, gamma } => {
                let spec = spec.with_scale(*gamma);
                integrate_line(|e| g(e) * self.density(e), e0 + off, &spec)
            }
            DistributionForm::Gaussian { mean, delta_e } => {
                let spec = spec.with_scale(*delta_e);
                integrate_line(|e| g(e) * self.density(e), mean + off, &spec)
            }
            DistributionForm::TruncatedParabola { .. } | DistributionForm::Stepwise { .. } => {
                let (lo, hi) = self.support();
                integrate(|e| g(e) * self.density(e), lo, hi, &spec)
            }
            DistributionForm::Bhattacharyya { delta_e } => {
                // E = s², which absorbs the E^{-1/2} singularity.
                let theta = SQRT_2 * delta_e;
                let spec = spec.with_scale(theta.sqrt());
                let c = 2.0 / (PI * theta).sqrt();
                let v = integrate(|s| g(s * s + off) * (-s * s / theta).exp(), 0.0, f64::INFINITY, &spec)?;
                Ok(c * v)
            }
            DistributionForm::TwoPoint { e1, e2, weight } => {
                Ok(weight * g(e1 + off) + (1.0 - weight) * g(e2 + off))
            }
            DistributionForm::Sampled { grid, values } => Ok(segment_integral(grid, values, |e| g(e + off))),
        }
    }

    /// Survival amplitude `χ(t) = ∫ P(E) e^{-iEt/ħ} dE`.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let k = t / self.hbar;
        let base = match &self.form {
            DistributionForm::Lorentzian { e0, gamma } => {
                Complex64::from_polar((-gamma * k.abs() / 2.0).exp(), -e0 * k)
            }
            DistributionForm::Gaussian { mean, delta_e } => {
                Complex64::from_polar((-(delta_e * k).powi(2) / 2.0).exp(), -mean * k)
            }
            DistributionForm::TruncatedParabola { delta_e } => {
                Complex64::new(parabola_transform(5f64.sqrt() * delta_e * k), 0.0)
            }
            DistributionForm::Stepwise { delta_e } => Complex64::new(sinc(3f64.sqrt() * delta_e * k), 0.0),
            DistributionForm::Bhattacharyya { delta_e } => {
                let theta = SQRT_2 * delta_e;
                Complex64::new(1.0, theta * k).powf(-0.5)
            }
            DistributionForm::TwoPoint { e1, e2, weight } => {
                Complex64::from_polar(*weight, -e1 * k) + Complex64::from_polar(1.0 - weight, -e2 * k)
            }
            DistributionForm::Sampled { grid, values } => sampled_transform(grid, values, k),
        };
        base * Complex64::from_polar(1.0, -self.offset * k)
    }

    /// Nondecay probability `Q(t) = |χ(t)|²`.
    pub fn survival_probability(&self, t: f64) -> f64 {
        match &self.form {
            DistributionForm::Lorentzian { gamma, .. } => (-gamma * (t / self.hbar).abs()).exp(),
            DistributionForm::Gaussian { delta_e, .. } => (-(delta_e * t / self.hbar).powi(2)).exp(),
            DistributionForm::Bhattacharyya { delta_e } => {
                (1.0 + 2.0 * (delta_e * t / self.hbar).powi(2)).powf(-0.5)
            }
            _ => self.amplitude(t).norm_sqr(),
        }
    }

    /// `max_E P(E)`.
    pub fn peak_density(&self) -> Result<Extended> {
        let v = match &self.form {
            DistributionForm::Lorentzian { gamma, .. } => 2.0 / (PI * gamma),
            DistributionForm::Gaussian { delta_e, .. } => 1.0 / ((2.0 * PI).sqrt() * delta_e),
            DistributionForm::TruncatedParabola { delta_e } => 3.0 / (4.0 * 5f64.sqrt() * delta_e),
            DistributionForm::Stepwise { delta_e } => 0.5 / (3f64.sqrt() * delta_e),
            DistributionForm::Bhattacharyya { .. } => return Ok(Extended::Infinite),
            DistributionForm::TwoPoint { .. } => {
                return Err(Error::NotApplicable("point masses have no density".into()))
            }
            DistributionForm::Sampled { values, .. } => parabolic_peak(values),
        };
        Ok(Extended::Finite(v))
    }

    /// `∫ P(E)² dE`.
    pub fn square_integral(&self) -> Extended {
        let v = match &self.form {
            DistributionForm::Lorentzian { gamma, .. } => 1.0 / (PI * gamma),
            DistributionForm::Gaussian { delta_e, .. } => 1.0 / (2.0 * PI.sqrt() * delta_e),
            DistributionForm::TruncatedParabola { delta_e } => 3.0 / (5.0 * 5f64.sqrt() * delta_e),
            DistributionForm::Stepwise { delta_e } => 0.5 / (3f64.sqrt() * delta_e),
            DistributionForm::Bhattacharyya { .. } | DistributionForm::TwoPoint { .. } => {
                return Extended::Infinite
            }
            DistributionForm::Sampled { grid, values } => values
                .windows(2)
                .map(|w| grid.step / 3.0 * (w[0] * w[0] + w[0] * w[1] + w[1] * w[1]))
                .sum(),
        };
        Extended::Finite(v)
    }

    /// Cumulative distribution `∫_{-∞}^E P`.
    pub fn cdf(&self, e: f64) -> f64 {
        let x = e - self.offset;
        match &self.form {
            DistributionForm::Lorentzian { e0, gamma } => 0.5 + (2.0 * (x - e0) / gamma).atan() / PI,
            DistributionForm::Gaussian { mean, delta_e } => {
                0.5 * (1.0 + erf((x - mean) / (SQRT_2 * delta_e)))
            }
            DistributionForm::TruncatedParabola { delta_e } => {
                let u = (x / (5f64.sqrt() * delta_e)).clamp(-1.0, 1.0);
                0.5 + 0.75 * (u - u * u * u / 3.0)
            }
            DistributionForm::Stepwise { delta_e } => {
                let b = 3f64.sqrt() * delta_e;
                ((x + b) / (2.0 * b)).clamp(0.0, 1.0)
            }
            DistributionForm::Bhattacharyya { delta_e } => {
                if x <= 0.0 {
                    0.0
                } else {
                    erf((x / (SQRT_2 * delta_e)).sqrt())
                }
            }
            DistributionForm::TwoPoint { e1, e2, weight } => {
                if x < *e1 {
                    0.0
                } else if x < *e2 {
                    *weight
                } else {
                    1.0
                }
            }
            DistributionForm::Sampled { grid, values } => sampled_cdf(grid, values, x),
        }
    }

    /// Inverse of [`cdf`](Self::cdf) for continuous distributions.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("probability {p} outside [0, 1]")));
        }
        let (lo, hi) = self.support();
        if p == 0.0 {
            return Ok(lo);
        }
        if p == 1.0 {
            return Ok(hi);
        }
        let off = self.offset;
        match &self.form {
            DistributionForm::Lorentzian { e0, gamma } => Ok(e0 + off + gamma / 2.0 * (PI * (p - 0.5)).tan()),
            DistributionForm::Gaussian { mean, delta_e } => {
                Ok(mean + off + SQRT_2 * delta_e * erf_inv(2.0 * p - 1.0))
            }
            DistributionForm::Stepwise { delta_e } => {
                let b = 3f64.sqrt() * delta_e;
                Ok(off - b + 2.0 * b * p)
            }
            DistributionForm::TwoPoint { .. } => {
                Err(Error::NotApplicable("quantile of a discrete distribution".into()))
            }
            _ => {
                let hi = if hi.is_finite() {
                    hi
                } else {
                    let mut h = lo + 1.0;
                    while self.cdf(h) < p {
                        h = lo + 2.0 * (h - lo);
                    }
                    h
                };
                let bracket = RootBracket::with_tol(lo, hi, 1e-13 * (hi - lo).abs().max(1.0))?;
                find_root(|e| self.cdf(e) - p, bracket)
            }
        }
    }

    /// Length of the shortest energy interval holding probability `alpha`.
    pub fn shortest_interval(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha {alpha} outside (0, 1)")));
        }
        if let DistributionForm::TwoPoint { e1, e2, weight } = &self.form {
            return Ok(if alpha <= weight.max(1.0 - weight) { 0.0 } else { e2 - e1 });
        }
        let width = |p0: f64| -> f64 {
            match (self.quantile(p0), self.quantile((p0 + alpha).min(1.0))) {
                (Ok(a), Ok(b)) => b - a,
                _ => f64::INFINITY,
            }
        };
        // Coarse slide over the window start, then golden refinement.
        let n = 256;
        let span = 1.0 - alpha;
        let mut best = (0usize, f64::INFINITY);
        for i in 0..=n {
            let w = width(span * i as f64 / n as f64);
            if w < best.1 {
                best = (i, w);
            }
        }
        let lo = span * best.0.saturating_sub(1) as f64 / n as f64;
        let hi = span * (best.0 + 1).min(n) as f64 / n as f64;
        let (_, w) = minimize_golden(width, lo, hi, 1e-12);
        Ok(w.min(best.1))
    }

    /// Natural time unit: `ħ/ΔE`, or `ħ/Γ` for the Lorentzian.
    pub fn time_scale(&self) -> f64 {
        match &self.form {
            DistributionForm::Lorentzian { gamma, .. } => self.hbar / gamma,
            DistributionForm::TwoPoint { e1, e2, .. } if e2 > e1 => 2.0 * self.hbar / (e2 - e1),
            _ => match self.delta_e() {
                Extended::Finite(d) if d > 0.0 => self.hbar / d,
                _ => self.hbar,
            },
        }
    }
}

fn trapezoid(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    step * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}

/// `3 (sin z - z cos z) / z³`.
pub(crate) fn parabola_transform(z: f64) -> f64 {
    if z.abs() < 0.5 {
        let z2 = z * z;
        1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0 + z2.powi(4) / 1_330_560.0
    } else {
        3.0 * (z.sin() - z * z.cos()) / (z * z * z)
    }
}

/// Exact transform of the piecewise-linear interpolant: interior nodes carry
/// full hats, the two end nodes half hats.
fn sampled_transform(grid: &Grid, values: &[f64], k: f64) -> Complex64 {
    let h = grid.step;
    let n = grid.len;
    let s = sinc(k * h / 2.0);
    // Phases advance by a fixed rotation, re-anchored every block so that
    // rounding cannot accumulate.
    const BLOCK: usize = 32;
    let rotation = Complex64::from_polar(1.0, -h * k);
    let mut interior = Complex64::new(0.0, 0.0);
    let mut phase = Complex64::new(1.0, 0.0);
    for i in 1..n - 1 {
        if (i - 1) % BLOCK == 0 {
            phase = Complex64::from_polar(1.0, -grid.at(i) * k);
        } else {
            phase *= rotation;
        }
        if values[i] != 0.0 {
            interior += values[i] * phase;
        }
    }
    let hat = half_hat(k, h);
    let left = values[0] * Complex64::from_polar(1.0, -grid.start * k) * hat;
    let right = values[n - 1] * Complex64::from_polar(1.0, -grid.end() * k) * hat.conj();
    interior * (h * s * s) + left + right
}

fn sampled_cdf(grid: &Grid, values: &[f64], x: f64) -> f64 {
    if x <= grid.start {
        return 0.0;
    }
    if x >= grid.end() {
        return 1.0;
    }
    let u = (x - grid.start) / grid.step;
    let i = (u.floor() as usize).min(grid.len - 2);
    let mut c = 0.0;
    for w in values[..=i].windows(2) {
        c += 0.5 * grid.step * (w[0] + w[1]);
    }
    let s = x - grid.at(i);
    let (p0, p1) = (values[i], values[i + 1]);
    (c + p0 * s + (p1 - p0) * s * s / (2.0 * grid.step)).clamp(0.0, 1.0)
}

/// `∫ g P` for the piecewise-linear density, by Simpson's rule on each
/// segment; exact when `g` is a polynomial of degree at most two.
fn segment_integral(grid: &Grid, values: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    let h = grid.step;
    let mut left = g(grid.start);
    let mut acc = 0.0;
    for (i, w) in values.windows(2).enumerate() {
        let a = grid.at(i);
        let right = g(a + h);
        if w[0] != 0.0 || w[1] != 0.0 {
            acc += left * w[0] + 2.0 * g(a + 0.5 * h) * (w[0] + w[1]) + right * w[1];
        }
        left = right;
    }
    acc * h / 6.0
}

/// Grid maximum refined by a parabola through its neighbours.
fn parabolic_peak(values: &[f64]) -> f64 {
    let (i, &m) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty samples");
    if i == 0 || i + 1 == values.len() {
        return m;
    }
    let (a, b, c) = (values[i - 1], m, values[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom >= 0.0 {
        return m;
    }
    let shift = 0.5 * (a - c) / denom;
    (b - 0.25 * (a - c) * shift).max(m)
}

/// Mean and variance of sampled data with a heavy-tail test: the variance is
/// reported infinite when the outer half of the range still adds more than
/// 1% to the partial second moment while the density there has fallen far
/// below its peak, which is the signature of a truncated algebraic tail.
fn sampled_moments(grid: &Grid, values: &[f64]) -> (f64, Extended) {
    let xs = grid.to_vec();
    let mean = segment_integral(grid, values, |x| x);
    let reach = (mean - grid.start).abs().max((grid.end() - mean).abs());
    let partial = |r: f64| -> f64 {
        segment_integral(grid, values, |x| if (x - mean).abs() <= r { (x - mean).powi(2) } else { 0.0 })
    };
    let full = partial(reach);
    let half = partial(reach / 2.0);
    let peak = values.iter().copied().fold(0.0, f64::max);
    let outer_peak = xs
        .iter()
        .zip(values)
        .filter(|(x, _)| (*x - mean).abs() > reach / 2.0)
        .map(|(_, p)| *p)
        .fold(0.0, f64::max);
    let heavy = full > 1.01 * half && outer_peak > 0.0 && outer_peak < 0.05 * peak;
    if heavy {
        (mean, Extended::Infinite)
    } else {
        (mean, Extended::Finite(full))
    }
}
