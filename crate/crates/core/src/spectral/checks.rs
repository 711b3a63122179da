//! Pointwise constraints every survival probability must obey.

use super::amplitude::SurvivalAmplitude;
use super::distribution::EnergyDistribution;
use crate::error::{Error, Result};
use crate::report::{BoundReport, PointwiseReport, Relation};

/// `Q(t) ≤ ½[1 + √Q(2t)]` at every grid time whose double is on the grid.
pub fn luo_check(q: &SurvivalAmplitude) -> Result<PointwiseReport> {
    let n = q.grid.len;
    if n < 3 {
        return Err(Error::GridTooShort("Luo check needs t and 2t on the grid".into()));
    }
    let probs = q.probabilities();
    let points = (0..=(n - 1) / 2).map(|i| {
        let t = q.grid.at(i);
        (t, probs[i], 0.5 * (1.0 + probs[2 * i].sqrt()))
    });
    let report = PointwiseReport::collect("Luo", Relation::Le, "Luo 2005", 1e-12, points);
    report.ok_or_else(|| Error::GridTooShort("no testable times".into()))
}

/// Number of leading grid points used by [`short_time_check`].
pub const SHORT_TIME_POINTS: usize = 10;

/// Checks that `Q(t) = 1 - (tΔE/ħ)² + O(t⁴)` near the origin.
///
/// The reported left side is `max |Q - 1 + x²| / x²` over the first ten
/// nonzero grid times, `x = tΔE/ħ`. For a centred distribution the quartic
/// coefficient of `Q` is `1/4 + κ/12` with kurtosis `κ = ⟨δE⁴⟩/ΔE⁴`, so the
/// right side is that coefficient times `x_max²` with a 10% allowance.
pub fn short_time_check(p: &EnergyDistribution, q: &SurvivalAmplitude) -> Result<BoundReport> {
    let delta_e = p.delta_e().finite().ok_or(Error::InfiniteVariance)?;
    if delta_e == 0.0 {
        return Err(Error::ZeroDispersion);
    }
    if q.grid.len <= SHORT_TIME_POINTS {
        return Err(Error::GridTooShort("short-time check needs 11 grid points".into()));
    }
    let probs = q.probabilities();
    let mut worst: f64 = 0.0;
    let mut x_max: f64 = 0.0;
    for (i, &qi) in probs.iter().enumerate().skip(1).take(SHORT_TIME_POINTS) {
        let x = q.grid.at(i) * delta_e / p.hbar;
        worst = worst.max((qi - 1.0 + x * x).abs() / (x * x));
        x_max = x_max.max(x);
    }
    let kurtosis = match p.central_moment(4) {
        Ok(m4) => m4 / delta_e.powi(4),
        Err(_) => f64::INFINITY,
    };
    let allowance = 1.1 * (0.25 + kurtosis / 12.0) * x_max * x_max + 1e-9;
    Ok(BoundReport::new(
        "Short-time",
        worst,
        Relation::Le,
        allowance,
        "short-time Taylor expansion of Q(t)",
    )
    .with_note(format!("x_max = {x_max:.3e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;

    #[test]
    fn luo_holds_for_exponential_and_gaussian() {
        for p in [
            EnergyDistribution::lorentzian(0.0, 1.0).unwrap(),
            EnergyDistribution::gaussian(0.0, 1.0).unwrap(),
        ] {
            let a = SurvivalAmplitude::for_distribution(&p).unwrap();
            let r = luo_check(&a).unwrap();
            assert!(r.holds(), "{}", r.worst);
        }
    }

    #[test]
    fn luo_forbids_instantaneous_decay() {
        let grid = Grid::linspace(0.0, 4.0, 401).unwrap();
        let q: Vec<f64> = grid.points().map(|t| if t < 1.0 { 1.0 } else { 0.0 }).collect();
        let a = SurvivalAmplitude::from_probability(grid, &q, 1.0).unwrap();
        let r = luo_check(&a).unwrap();
        let (lo, hi) = r.violation_window().unwrap();
        assert!(lo >= 0.5 - 1e-12 && hi < 1.0);
    }

    #[test]
    fn short_time_expansion() {
        for p in [
            EnergyDistribution::gaussian(0.0, 1.0).unwrap(),
            EnergyDistribution::truncated_parabola(1.0).unwrap(),
            EnergyDistribution::stepwise(2.0).unwrap(),
            EnergyDistribution::bhattacharyya(1.0).unwrap(),
        ] {
            let a = SurvivalAmplitude::for_distribution(&p).unwrap();
            let r = short_time_check(&p, &a).unwrap();
            assert!(r.satisfied, "{r}");
        }
        let l = EnergyDistribution::lorentzian(0.0, 1.0).unwrap();
        let a = SurvivalAmplitude::for_distribution(&l).unwrap();
        assert!(matches!(short_time_check(&l, &a), Err(Error::InfiniteVariance)));
    }
}
