//! Real signals `f(t)` and their spectra `F(ω)` with the symmetric
//! `1/√(2π)` convention: `F(ω) = (2π)^{-1/2} ∫ f(t) e^{-iωt} dt`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::numerics::{integrate_line, simpson_weights, trapezoid_weights, QuadratureSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SignalPair {
    pub time: Grid,
    pub signal: Vec<f64>,
    pub freq: Grid,
    pub spectrum: Vec<Complex64>,
}

/// Time and frequency moments of a signal pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalMoments {
    pub t_mean: f64,
    pub delta_t: f64,
    /// Two-sided mean frequency, zero for any real signal.
    pub omega_mean: f64,
    pub delta_omega: f64,
    pub omega_plus: f64,
    pub delta_omega_plus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    pub time: Grid,
    pub values: Vec<Complex64>,
    pub t_mean: f64,
    pub delta_t: f64,
    /// Whether `F(0) = 0`, under which the moments coincide with those of `f`.
    pub zero_at_dc: bool,
}

fn weighted_sum(w: &[f64], v: impl Iterator<Item = f64>) -> f64 {
    w.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn forward(time: &Grid, f: &[f64], freq: &Grid) -> Vec<Complex64> {
    let w = trapezoid_weights(time.len, time.step);
    let norm = 1.0 / (2.0 * PI).sqrt();
    freq.to_vec()
        .par_iter()
        .map(|&om| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, (&fi, &wi)) in f.iter().zip(&w).enumerate() {
                acc += Complex64::from_polar(wi * fi, -om * time.at(i));
            }
            acc * norm
        })
        .collect()
}

fn inverse(freq: &Grid, spec: &[Complex64], time: &Grid) -> Vec<Complex64> {
    let w = trapezoid_weights(freq.len, freq.step);
    let norm = 1.0 / (2.0 * PI).sqrt();
    time.to_vec()
        .par_iter()
        .map(|&t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, (&fj, &wj)) in spec.iter().zip(&w).enumerate() {
                acc += fj * Complex64::from_polar(wj, freq.at(j) * t);
            }
            acc * norm
        })
        .collect()
}

impl SignalPair {
    /// Normalizes `f` to unit energy and computes its spectrum on `freq`.
    pub fn from_signal(time: Grid, f: &[f64], freq: Grid) -> Result<Self> {
        if f.len() != time.len {
            return Err(Error::domain("signal length does not match its grid"));
        }
        let w = trapezoid_weights(time.len, time.step);
        let energy = weighted_sum(&w, f.iter().map(|v| v * v));
        if !(energy > 0.0) {
            return Err(Error::domain("signal has zero energy"));
        }
        let signal: Vec<f64> = f.iter().map(|v| v / energy.sqrt()).collect();
        let spectrum = forward(&time, &signal, &freq);
        Ok(SignalPair {
            time,
            signal,
            freq,
            spectrum,
        })
    }

    /// Normalizes `spectrum` to unit energy and reconstructs the real signal on `time`.
    pub fn from_spectrum(freq: Grid, spectrum: &[Complex64], time: Grid) -> Result<Self> {
        if spectrum.len() != freq.len {
            return Err(Error::domain("spectrum length does not match its grid"));
        }
        let w = trapezoid_weights(freq.len, freq.step);
        let energy = weighted_sum(&w, spectrum.iter().map(|c| c.norm_sqr()));
        if !(energy > 0.0) {
            return Err(Error::domain("spectrum has zero energy"));
        }
        let spectrum: Vec<Complex64> = spectrum.iter().map(|c| c / energy.sqrt()).collect();
        let signal = inverse(&freq, &spectrum, &time).into_iter().map(|c| c.re).collect();
        Ok(SignalPair {
            time,
            signal,
            freq,
            spectrum,
        })
    }

    /// Pair built from closed forms of both `f` and `F`.
    pub fn from_functions(
        time: Grid,
        f: impl Fn(f64) -> f64,
        freq: Grid,
        spectrum: impl Fn(f64) -> Complex64,
    ) -> Self {
        SignalPair {
            signal: time.points().map(f).collect(),
            spectrum: freq.points().map(spectrum).collect(),
            time,
            freq,
        }
    }

    /// Gaussian pair `f = (σ²/π)^{1/4} e^{-σ²t²/2}`, `F = (πσ²)^{-1/4} e^{-ω²/(2σ²)}`.
    pub fn gaussian(sigma: f64, n: usize) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::domain("sigma must be positive"));
        }
        let time = Grid::linspace(-12.0 / sigma, 12.0 / sigma, n)?;
        let freq = Grid::linspace(-12.0 * sigma, 12.0 * sigma, n)?;
        let a = (sigma * sigma / PI).powf(0.25);
        let b = (PI * sigma * sigma).powf(-0.25);
        Ok(Self::from_functions(
            time,
            |t| a * (-sigma * sigma * t * t / 2.0).exp(),
            freq,
            |w| Complex64::new(b * (-w * w / (2.0 * sigma * sigma)).exp(), 0.0),
        ))
    }

    pub fn energy_time(&self) -> f64 {
        let w = trapezoid_weights(self.time.len, self.time.step);
        weighted_sum(&w, self.signal.iter().map(|v| v * v))
    }

    pub fn energy_freq(&self) -> f64 {
        let w = trapezoid_weights(self.freq.len, self.freq.step);
        weighted_sum(&w, self.spectrum.iter().map(|c| c.norm_sqr()))
    }

    pub fn moments(&self) -> SignalMoments {
        let wt = trapezoid_weights(self.time.len, self.time.step);
        let f2: Vec<f64> = self.signal.iter().map(|v| v * v).collect();
        let n_t = weighted_sum(&wt, f2.iter().copied());
        let t_mean = weighted_sum(&wt, self.time.points().zip(&f2).map(|(t, p)| t * p)) / n_t;
        let var_t = weighted_sum(&wt, self.time.points().zip(&f2).map(|(t, p)| (t - t_mean).powi(2) * p)) / n_t;

        let wf = trapezoid_weights(self.freq.len, self.freq.step);
        let s2: Vec<f64> = self.spectrum.iter().map(|c| c.norm_sqr()).collect();
        let n_f = weighted_sum(&wf, s2.iter().copied());
        let omega_mean = weighted_sum(&wf, self.freq.points().zip(&s2).map(|(w, p)| w * p)) / n_f;
        let var_w = weighted_sum(&wf, self.freq.points().zip(&s2).map(|(w, p)| (w - omega_mean).powi(2) * p)) / n_f;
        let (omega_plus, delta_omega_plus) = self.positive_frequency_moments();
        SignalMoments {
            t_mean,
            delta_t: var_t.sqrt(),
            omega_mean,
            delta_omega: var_w.sqrt(),
            omega_plus,
            delta_omega_plus,
        }
    }

    /// `ω̄₊ = 2∫_0^∞ ω|F|²` and `Δω₊² = 2∫_0^∞ (ω - ω̄₊)²|F|²`, with the
    /// spectrum normalized to unit energy.
    ///
    /// When `ω = 0` is a grid node the half line is integrated with Simpson
    /// weights, since `ω|F|²` has a kink there after even reflection.
    pub fn positive_frequency_moments(&self) -> (f64, f64) {
        let wf = trapezoid_weights(self.freq.len, self.freq.step);
        let s2: Vec<f64> = self.spectrum.iter().map(|c| c.norm_sqr()).collect();
        let n = weighted_sum(&wf, s2.iter().copied());
        let zero = self
            .freq
            .nearest(0.0)
            .filter(|&i| self.freq.at(i).abs() < 1e-9 * self.freq.step && i + 1 < self.freq.len);
        let (idx, w): (Vec<usize>, Vec<f64>) = match zero {
            Some(i0) => {
                let w = simpson_weights(self.freq.len - i0, self.freq.step);
                ((i0..self.freq.len).collect(), w.into_iter().map(|v| 2.0 * v).collect())
            }
            None => (0..self.freq.len)
                .filter(|&i| self.freq.at(i) > 0.0)
                .map(|i| (i, 2.0 * wf[i]))
                .unzip(),
        };
        let moment = |g: &dyn Fn(f64) -> f64| -> f64 {
            idx.iter().zip(&w).map(|(&i, &wi)| wi * g(self.freq.at(i)) * s2[i]).sum::<f64>() / n
        };
        let mean = moment(&|x| x);
        let var = moment(&|x| (x - mean).powi(2));
        (mean, var.sqrt())
    }

    /// Spectrum value at `ω = 0`, interpolated if the grid misses it.
    pub fn spectrum_at_zero(&self) -> Option<Complex64> {
        let u = -self.freq.start / self.freq.step;
        if u < 0.0 || u > (self.freq.len - 1) as f64 {
            return None;
        }
        let i = (u.floor() as usize).min(self.freq.len - 2);
        let f = u - i as f64;
        Some(self.spectrum[i] * (1.0 - f) + self.spectrum[i + 1] * f)
    }

    /// Largest `|F(ω) - F*(-ω)|` over mirrored grid pairs.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &w) in self.freq.to_vec().iter().enumerate() {
            if let Some(k) = self.freq.nearest(-w) {
                if (self.freq.at(k) + w).abs() < 1e-9 * self.freq.step {
                    worst = worst.max((self.spectrum[j] - self.spectrum[k].conj()).norm());
                }
            }
        }
        worst
    }

    /// Recomputes the spectrum from the stored signal.
    pub fn roundtrip_spectrum(&self) -> Vec<Complex64> {
        forward(&self.time, &self.signal, &self.freq)
    }

    /// Recomputes the signal from the stored spectrum.
    pub fn roundtrip_signal(&self) -> Vec<f64> {
        inverse(&self.freq, &self.spectrum, &self.time).into_iter().map(|c| c.re).collect()
    }
}

/// Gabor's analytic signal `f₊(t) = π^{-1/2} ∫_0^∞ F(ω) e^{iωt} dω`.
pub fn analytic_signal(s: &SignalPair) -> AnalyticSignal {
    let plus: Vec<Complex64> = s
        .freq
        .points()
        .zip(&s.spectrum)
        .map(|(w, &f)| {
            if w > 0.0 {
                f * 2f64.sqrt()
            } else if w == 0.0 {
                // Half weight at the cut keeps the trapezoid rule consistent.
                f * (0.5f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let values = inverse(&s.freq, &plus, &s.time);
    let wt = trapezoid_weights(s.time.len, s.time.step);
    let p: Vec<f64> = values.iter().map(|c| c.norm_sqr()).collect();
    let n = weighted_sum(&wt, p.iter().copied());
    let t_mean = weighted_sum(&wt, s.time.points().zip(&p).map(|(t, v)| t * v)) / n;
    let var = weighted_sum(&wt, s.time.points().zip(&p).map(|(t, v)| (t - t_mean).powi(2) * v)) / n;
    let scale = s.spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let zero_at_dc = s.spectrum_at_zero().map_or(false, |c| c.norm() <= 1e-8 * scale.max(1e-300));
    AnalyticSignal {
        time: s.time,
        values,
        t_mean,
        delta_t: var.sqrt(),
        zero_at_dc,
    }
}

/// `W(φ) = ∫ φ / φ(0)` from samples on a grid containing `x = 0`.
pub fn equivalent_width(grid: &Grid, phi: &[f64]) -> Result<f64> {
    let i0 = grid
        .nearest(0.0)
        .filter(|&i| grid.at(i).abs() < 1e-9 * grid.step)
        .ok_or_else(|| Error::domain("grid does not contain the origin"))?;
    let origin = phi[i0];
    if origin == 0.0 || !origin.is_finite() {
        return Err(Error::ZeroAtOrigin);
    }
    let w = trapezoid_weights(grid.len, grid.step);
    Ok(weighted_sum(&w, phi.iter().copied()) / origin)
}

/// `W(φ)` for a function on the whole line, by quadrature.
pub fn equivalent_width_fn(phi: impl Fn(f64) -> f64, scale: f64) -> Result<f64> {
    let origin = phi(0.0);
    if origin == 0.0 || !origin.is_finite() {
        return Err(Error::ZeroAtOrigin);
    }
    let spec = QuadratureSpec::with_tol(1e-12).with_scale(scale);
    Ok(integrate_line(phi, 0.0, &spec)? / origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_moments_match_closed_forms() {
        for &sigma in &[0.5, 1.0, 2.0] {
            let s = SignalPair::gaussian(sigma, 2001).unwrap();
            let m = s.moments();
            assert_relative_eq!(s.energy_time(), 1.0, epsilon = 1e-10);
            assert_relative_eq!(s.energy_freq(), 1.0, epsilon = 1e-10);
            assert_relative_eq!(m.delta_t, 1.0 / (sigma * 2f64.sqrt()), max_relative = 1e-9);
            assert_relative_eq!(m.omega_plus, sigma / PI.sqrt(), max_relative = 1e-7);
            assert_relative_eq!(m.delta_omega_plus, sigma * ((PI - 2.0) / (2.0 * PI)).sqrt(), max_relative = 1e-7);
            assert!(m.omega_mean.abs() < 1e-12);
        }
    }

    #[test]
    fn transform_of_gaussian_signal() {
        let g = SignalPair::gaussian(1.0, 801).unwrap();
        let s = SignalPair::from_signal(g.time, &g.signal, g.freq).unwrap();
        for (a, b) in s.spectrum.iter().zip(&g.spectrum) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!(s.hermitian_defect() < 1e-12);
    }

    #[test]
    fn narrow_pulse_has_flat_spectrum() {
        let time = Grid::linspace(-1.0, 1.0, 2001).unwrap();
        let f: Vec<f64> = time.points().map(|t| (-t * t / (2.0 * 1e-4)).exp()).collect();
        let freq = Grid::linspace(-5.0, 5.0, 11).unwrap();
        let s = SignalPair::from_signal(time, &f, freq).unwrap();
        let mags: Vec<f64> = s.spectrum.iter().map(|c| c.norm()).collect();
        let max = mags.iter().copied().fold(0.0, f64::max);
        let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(min / max > 0.99);
    }

    #[test]
    fn equivalent_width_of_gaussian() {
        let grid = Grid::linspace(-12.0, 12.0, 2401).unwrap();
        let phi: Vec<f64> = grid.points().map(|x| (-x * x / 2.0).exp()).collect();
        assert_relative_eq!(equivalent_width(&grid, &phi).unwrap(), (2.0 * PI).sqrt(), epsilon = 1e-10);
        let zero = vec![0.0; grid.len];
        assert!(matches!(equivalent_width(&grid, &zero), Err(Error::ZeroAtOrigin)));
    }

    #[test]
    fn lorentzian_equivalent_width() {
        let gamma = 1.3;
        let p = |e: f64| gamma / (2.0 * PI) / (e * e + gamma * gamma / 4.0);
        assert_relative_eq!(equivalent_width_fn(p, gamma).unwrap(), PI * gamma / 2.0, epsilon = 1e-8);
    }
}
