//! Survival amplitudes `χ(t)` on a non-negative time grid.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::distribution::EnergyDistribution;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::numerics::{integrate_decaying, simpson_weights, QuadratureSpec};

/// Default grid length in units of the natural time scale.
pub const DEFAULT_SPAN: f64 = 40.0;
pub const DEFAULT_POINTS: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalAmplitude {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub hbar: f64,
    /// Distribution the samples came from; enables exact off-grid evaluation.
    source: Option<EnergyDistribution>,
    moments: MomentCache,
}

/// Integrands of the standard time moments `∫ g(t, Q) dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeKernel {
    /// `Q`
    Zeroth,
    /// `t Q`
    First,
    /// `t² Q`
    Second,
    /// `√Q`
    Root,
}

impl TimeKernel {
    fn index(self) -> usize {
        self as usize
    }

    fn eval(self, t: f64, q: f64) -> f64 {
        match self {
            TimeKernel::Zeroth => q,
            TimeKernel::First => t * q,
            TimeKernel::Second => t * t * q,
            TimeKernel::Root => q.max(0.0).sqrt(),
        }
    }
}

/// Memoized time moments; ignored by equality.
#[derive(Debug, Clone, Default)]
struct MomentCache([OnceLock<Extended>; 4]);

impl PartialEq for MomentCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl SurvivalAmplitude {
    /// Samples `χ(t)` of `p` on `n` points over `[0, t_max]`.
    pub fn from_distribution(p: &EnergyDistribution, t_max: f64, n: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::domain(format!("t_max must be positive, got {t_max}")));
        }
        if n < 16 {
            return Err(Error::GridTooShort(format!("{n} time points, need at least 16")));
        }
        let grid = Grid::linspace(0.0, t_max, n)?;
        let values = grid.to_vec().par_iter().map(|&t| p.amplitude(t)).collect();
        Ok(SurvivalAmplitude {
            grid,
            values,
            hbar: p.hbar,
            source: Some(p.clone()),
            moments: MomentCache::default(),
        })
    }

    /// Default grid: `40` natural time units, `2^14` points.
    pub fn for_distribution(p: &EnergyDistribution) -> Result<Self> {
        Self::from_distribution(p, DEFAULT_SPAN * p.time_scale(), DEFAULT_POINTS)
    }

    /// Samples of an amplitude that has no known energy distribution.
    pub fn from_samples(grid: Grid, values: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if grid.start != 0.0 {
            return Err(Error::domain("time grid must start at t = 0"));
        }
        if values.len() != grid.len {
            return Err(Error::domain(format!(
                "{} amplitudes for a grid of {} points",
                values.len(),
                grid.len
            )));
        }
        if (values[0] - 1.0).norm() > 1e-8 {
            return Err(Error::InvalidDistribution(format!("χ(0) = {} is not 1", values[0])));
        }
        if let Some(v) = values.iter().find(|v| !(v.norm() <= 1.0 + 1e-8)) {
            return Err(Error::InvalidDistribution(format!("|χ| = {} exceeds 1", v.norm())));
        }
        Ok(SurvivalAmplitude {
            grid,
            values,
            hbar,
            source: None,
            moments: MomentCache::default(),
        })
    }

    /// Real amplitude `√Q` from nondecay probabilities.
    pub fn from_probability(grid: Grid, q: &[f64], hbar: f64) -> Result<Self> {
        let values = q.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)).collect();
        Self::from_samples(grid, values, hbar)
    }

    pub fn source(&self) -> Option<&EnergyDistribution> {
        self.source.as_ref()
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.grid.points()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `χ(t)`, exact if the source distribution is known, otherwise linearly
    /// interpolated. `None` beyond the grid for sampled data.
    pub fn eval(&self, t: f64) -> Option<Complex64> {
        if t < 0.0 {
            return self.eval(-t).map(|c| c.conj());
        }
        if let Some(p) = &self.source {
            return Some(p.amplitude(t));
        }
        let u = t / self.grid.step;
        if u > (self.grid.len - 1) as f64 {
            return None;
        }
        let i = (u.floor() as usize).min(self.grid.len - 2);
        let f = u - i as f64;
        Some(self.values[i] * (1.0 - f) + self.values[i + 1] * f)
    }

    /// `Q(t) = |χ(t)|²`.
    pub fn probability(&self, t: f64) -> Option<f64> {
        match &self.source {
            Some(p) => Some(p.survival_probability(t)),
            None => self.eval(t).map(|c| c.norm_sqr()),
        }
    }

    pub fn time_scale(&self) -> f64 {
        match &self.source {
            Some(p) => p.time_scale(),
            None => self.grid.end() / DEFAULT_SPAN,
        }
    }

    /// `∫_0^∞ g(t, Q(t)) dt` for one of the standard kernels, computed once.
    pub fn moment(&self, kernel: TimeKernel) -> Result<Extended> {
        let slot = &self.moments.0[kernel.index()];
        if let Some(v) = slot.get() {
            return Ok(*v);
        }
        let v = self.time_integral(|t, q| kernel.eval(t, q))?;
        Ok(*slot.get_or_init(|| v))
    }

    /// Computes every standard moment concurrently. Failures are left for
    /// [`moment`](Self::moment) to report.
    pub fn prefetch_moments(&self) {
        [TimeKernel::Zeroth, TimeKernel::First, TimeKernel::Second, TimeKernel::Root]
            .par_iter()
            .for_each(|&k| {
                let _ = self.moment(k);
            });
    }

    /// `∫_0^∞ g(t, Q(t)) dt` for non-negative `g`.
    ///
    /// With a known source the integral runs over the whole half line with
    /// tail extrapolation and may come out infinite. Sampled amplitudes are
    /// integrated over their grid only.
    pub fn time_integral<G: Fn(f64, f64) -> f64>(&self, g: G) -> Result<Extended> {
        match &self.source {
            Some(p) => integrate_decaying(
                |t| g(t, p.survival_probability(t)),
                0.0,
                p.time_scale(),
                &QuadratureSpec::with_tol(1e-11),
            ),
            None => {
                let w = simpson_weights(self.grid.len, self.grid.step);
                let s = self
                    .times()
                    .zip(&self.values)
                    .zip(&w)
                    .map(|((t, c), w)| w * g(t, c.norm_sqr()))
                    .sum();
                Ok(Extended::Finite(s))
            }
        }
    }
}

/// Samples `χ(t)` of `p` on `n` points over `[0, t_max]`.
pub fn survival_amplitude(p: &EnergyDistribution, t_max: f64, n: usize) -> Result<SurvivalAmplitude> {
    SurvivalAmplitude::from_distribution(p, t_max, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lorentzian_gives_exponential() {
        let p = EnergyDistribution::lorentzian(0.0, 2.0).unwrap();
        let a = SurvivalAmplitude::for_distribution(&p).unwrap();
        for (t, q) in a.times().zip(a.probabilities()).step_by(997) {
            assert_relative_eq!(q, (-2.0 * t).exp(), epsilon = 1e-14);
        }
        let tau = a.time_integral(|_, q| q).unwrap().finite().unwrap();
        assert_relative_eq!(tau * 2.0, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn invariants_hold() {
        let p = EnergyDistribution::truncated_parabola(1.0).unwrap();
        let a = SurvivalAmplitude::from_distribution(&p, 20.0, 64).unwrap();
        assert_relative_eq!(a.values[0].re, 1.0, epsilon = 1e-12);
        assert!(a.values.iter().all(|c| c.norm() <= 1.0 + 1e-12));
        assert_eq!(a.eval(-1.0).unwrap(), a.eval(1.0).unwrap().conj());
    }

    #[test]
    fn sampled_amplitude_interpolates() {
        let grid = Grid::linspace(0.0, 1.0, 3).unwrap();
        let a = SurvivalAmplitude::from_probability(grid, &[1.0, 0.25, 0.0], 1.0).unwrap();
        assert_relative_eq!(a.eval(0.25).unwrap().re, 0.75, epsilon = 1e-15);
        assert!(a.eval(2.0).is_none());
    }

    #[test]
    fn rejects_bad_samples() {
        let grid = Grid::linspace(0.0, 1.0, 3).unwrap();
        assert!(SurvivalAmplitude::from_probability(grid, &[0.9, 0.5, 0.1], 1.0).is_err());
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.0)];
        assert!(SurvivalAmplitude::from_samples(grid, v, 1.0).is_err());
        let p = EnergyDistribution::gaussian(0.0, 1.0).unwrap();
        assert!(SurvivalAmplitude::from_distribution(&p, 1.0, 8).is_err());
    }

    #[test]
    fn divergent_integral_is_infinite() {
        let p = EnergyDistribution::bhattacharyya(1.0).unwrap();
        let a = SurvivalAmplitude::for_distribution(&p).unwrap();
        assert_eq!(a.time_integral(|_, q| q).unwrap(), Extended::Infinite);
    }
}
