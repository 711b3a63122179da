//! Quantum speed limits: how fast a state can become orthogonal to itself
//! or lose a given fraction of its initial overlap.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::decay::level_time;
use crate::error::{Error, Result};
use crate::numerics::{find_root, minimize_golden, RootBracket};
use crate::report::{BoundReport, PointwiseReport, Relation};
use crate::spectral::{EnergyDistribution, Grid, SurvivalAmplitude};

/// `|χ|` below this fraction of its maximum counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-6;

/// Points per helper-kernel check on `[0, 4π]`.
pub const KERNEL_POINTS: usize = 20_001;

const KERNEL_TOLERANCE: f64 = 1e-12;
const ENVELOPE_TOLERANCE: f64 = 1e-12;

/// First time at which the evolved state is orthogonal to the initial one.
///
/// Local minima of `|χ|` on the grid are refined by golden-section search;
/// the first whose refined value is below the zero threshold is returned.
/// A modulus that merely decays towards zero never qualifies.
pub fn orthogonality_time(q: &SurvivalAmplitude) -> Result<f64> {
    let moduli: Vec<f64> = q.values.iter().map(|c| c.norm()).collect();
    let max = moduli.iter().copied().fold(0.0, f64::max);
    let threshold = ZERO_THRESHOLD * max;
    let n = moduli.len();
    let step = q.grid.step;
    let modulus = |t: f64| q.eval(t).map_or(f64::INFINITY, |c| c.norm());
    for i in 1..n - 1 {
        let (prev, here, next) = (moduli[i - 1], moduli[i], moduli[i + 1]);
        if !(here <= prev && here < next) {
            continue;
        }
        let (lo, hi) = (q.grid.at(i - 1), q.grid.at(i + 1));
        let (t, v) = minimize_golden(modulus, lo, hi, 1e-14 * hi.max(step));
        let (t, v) = if here < v { (q.grid.at(i), here) } else { (t, v) };
        if v < threshold {
            return Ok(t);
        }
    }
    Err(Error::NotReached)
}

fn not_applicable(e: Error) -> Error {
    match e {
        Error::NotReached => Error::NotApplicable("no orthogonal state is reached on the grid".into()),
        e => e,
    }
}

/// Amplitude of `p` moved so that its lowest energy is zero, and the shift.
fn ground_amplitude(p: &EnergyDistribution) -> Result<(EnergyDistribution, SurvivalAmplitude, f64)> {
    let (shifted, shift) = p.ground_shifted()?;
    let q = SurvivalAmplitude::for_distribution(&shifted)?;
    Ok((shifted, q, shift))
}

/// Margolus–Levitin: `⟨E⟩ T⊥ ≥ πħ/2` with the spectrum shifted to start at zero.
pub fn margolus_levitin_bound(p: &EnergyDistribution) -> Result<BoundReport> {
    let (shifted, q, shift) = ground_amplitude(p)?;
    let t_perp = orthogonality_time(&q).map_err(not_applicable)?;
    let mean = shifted.mean();
    Ok(BoundReport::new("ML", mean * t_perp, Relation::Ge, FRAC_PI_2 * p.hbar, "Margolus & Levitin 1998")
        .with_note(format!("T_perp = {t_perp:.12e}, spectrum shifted by {shift:.6e}")))
}

/// Mandelstam–Tamm at orthogonality: `ΔE T⊥ ≥ πħ/2`.
pub fn mt_orthogonality_bound(q: &SurvivalAmplitude, delta_e: f64) -> Result<BoundReport> {
    if !delta_e.is_finite() {
        return Err(Error::NotApplicable("energy dispersion is infinite".into()));
    }
    let t_perp = orthogonality_time(q).map_err(not_applicable)?;
    Ok(BoundReport::new(
        "MT-orthogonal",
        delta_e * t_perp,
        Relation::Ge,
        FRAC_PI_2 * q.hbar,
        "Mandelstam & Tamm 1945; Anandan & Aharonov 1990",
    )
    .with_note(format!("T_perp = {t_perp:.12e}")))
}

/// Largest admissible Luo–Zhang exponent for overlap level `alpha`.
pub fn luo_zhang_max_exponent(alpha: f64) -> f64 {
    if alpha == 0.0 {
        f64::INFINITY
    } else {
        FRAC_PI_2 * (1.0 / alpha - 1.0).sqrt()
    }
}

fn check_luo_zhang_args(alpha: f64, exponent: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!("overlap level {alpha} outside [0, 1]")));
    }
    let max = luo_zhang_max_exponent(alpha);
    if !(exponent > 0.0 && exponent <= max * (1.0 + 1e-12)) {
        return Err(Error::POutOfRange { p: exponent, max });
    }
    Ok(())
}

/// `T_α = inf{t : Q(t) = α}`; `α = 0` is the orthogonality time.
pub fn overlap_time(q: &SurvivalAmplitude, alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        orthogonality_time(q).map_err(|_| Error::LevelNotReached { level: 0.0 })
    } else {
        level_time(q, alpha)
    }
}

/// `π ħ [(1 - √(α(1 + 4p²/π²))) / (2⟨E^p⟩)]^{1/p}`.
pub fn luo_zhang_rhs(alpha: f64, exponent: f64, moment: f64, hbar: f64) -> f64 {
    let root = (alpha * (1.0 + 4.0 * exponent * exponent / (PI * PI))).sqrt();
    let base = ((1.0 - root) / (2.0 * moment)).max(0.0);
    PI * hbar * base.powf(1.0 / exponent)
}

/// Luo–Zhang: `T_α ≥ πħ [(1 - √(α(1 + 4p²/π²)))/(2⟨E^p⟩)]^{1/p}`.
pub fn luo_zhang_bound(p: &EnergyDistribution, alpha: f64, exponent: f64) -> Result<BoundReport> {
    check_luo_zhang_args(alpha, exponent)?;
    let (shifted, q, shift) = ground_amplitude(p)?;
    let moment = shifted
        .abs_moment(exponent)?
        .finite()
        .ok_or_else(|| Error::Divergent(format!("<E^{exponent}>")))?;
    let t_alpha = overlap_time(&q, alpha)?;
    let rhs = luo_zhang_rhs(alpha, exponent, moment, p.hbar);
    Ok(BoundReport::new(
        format!("LuoZhang({alpha},{exponent})"),
        t_alpha,
        Relation::Ge,
        rhs,
        "Luo & Zhang 2005",
    )
    .with_note(format!("<E^p> = {moment:.12e}, spectrum shifted by {shift:.6e}")))
}

/// The `p = 1` Luo–Zhang right side obtained from the Margolus–Levitin
/// kernel: the time at which `1 - 2⟨E⟩t/(πħ)` falls to `√(α(1 + 4/π²))`,
/// the largest value `Re χ - (2/π) Im χ` can take when `|χ|² = α`.
pub fn luo_zhang_via_margolus_levitin(p: &EnergyDistribution, alpha: f64) -> Result<f64> {
    check_luo_zhang_args(alpha, 1.0)?;
    let (shifted, _) = p.ground_shifted()?;
    let mean = shifted.expectation(|e| e)?;
    let ceiling = (alpha * (1.0 + 4.0 / (PI * PI))).sqrt();
    if ceiling >= 1.0 {
        return Ok(0.0);
    }
    let envelope = |t: f64| 1.0 - 2.0 * mean * t / (PI * p.hbar) - ceiling;
    let hi = PI * p.hbar / mean;
    find_root(envelope, RootBracket::with_tol(0.0, hi, 1e-15 * hi)?)
}

/// `cos x ≥ 1 - (2/π)(x + sin x)` on `[0, 4π]`.
pub fn margolus_levitin_kernel_check(points: usize) -> Option<PointwiseReport> {
    let grid = Grid::linspace(0.0, 4.0 * PI, points).ok()?;
    PointwiseReport::collect(
        "ML-kernel",
        Relation::Ge,
        "Margolus & Levitin 1998",
        KERNEL_TOLERANCE,
        grid.points().map(|x| (x, x.cos(), 1.0 - 2.0 / PI * (x + x.sin()))),
    )
}

/// `cos x + (2p/π) sin x ≥ 1 - 2(x/π)^p` on `[0, 4π]`.
pub fn luo_zhang_kernel_check(exponent: f64, points: usize) -> Option<PointwiseReport> {
    let grid = Grid::linspace(0.0, 4.0 * PI, points).ok()?;
    PointwiseReport::collect(
        &format!("LuoZhang-kernel({exponent})"),
        Relation::Ge,
        "Luo & Zhang 2005",
        KERNEL_TOLERANCE,
        grid.points().map(|x| {
            let lhs = x.cos() + 2.0 * exponent / PI * x.sin();
            (x, lhs, 1.0 - 2.0 * (x / PI).powf(exponent))
        }),
    )
}

/// Pfeifer envelope for a constant Hamiltonian, `h_t = ΔE t/ħ`:
/// `sin(δ0 - h_t) ≤ |⟨φ|ψ_t⟩| ≤ sin(δ0 + h_t)`, each side clipped to `[0, π/2]`.
///
/// `overlap(t)` is `|⟨φ|ψ_t⟩|` and `delta0 = arcsin |⟨φ|ψ_0⟩|`. Returns the
/// lower and upper branches.
pub fn pfeifer_envelope<F: Fn(f64) -> f64>(
    times: &Grid,
    overlap: F,
    delta_e: f64,
    delta0: f64,
    hbar: f64,
) -> Result<[PointwiseReport; 2]> {
    if !delta_e.is_finite() {
        return Err(Error::NotApplicable("energy dispersion is infinite".into()));
    }
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&delta0) {
        return Err(Error::domain(format!("overlap angle {delta0} outside [0, π/2]")));
    }
    let samples: Vec<(f64, f64, f64)> = times
        .points()
        .map(|t| (t, overlap(t), delta_e * t / hbar))
        .collect();
    let provenance = "Pfeifer 1993";
    let lower = PointwiseReport::collect(
        "Pfeifer-lower",
        Relation::Ge,
        provenance,
        ENVELOPE_TOLERANCE,
        samples.iter().map(|&(t, o, h)| (t, o, (delta0 - h).max(0.0).sin())),
    );
    let upper = PointwiseReport::collect(
        "Pfeifer-upper",
        Relation::Le,
        provenance,
        ENVELOPE_TOLERANCE,
        samples.iter().map(|&(t, o, h)| (t, o, (delta0 + h).min(FRAC_PI_2).sin())),
    );
    match (lower, upper) {
        (Some(l), Some(u)) => Ok([l, u]),
        _ => Err(Error::GridTooShort("empty time grid".into())),
    }
}

/// Pfeifer envelope with `φ = ψ0`, where the lower branch is the
/// Mandelstam–Tamm cosine bound `|χ(t)| ≥ cos(ΔE t/ħ)`.
pub fn pfeifer_self_overlap(q: &SurvivalAmplitude, delta_e: f64) -> Result<[PointwiseReport; 2]> {
    let values = &q.values;
    let step = q.grid.step;
    pfeifer_envelope(
        &q.grid,
        |t| values[((t / step).round() as usize).min(values.len() - 1)].norm(),
        delta_e,
        FRAC_PI_2,
        q.hbar,
    )
}

/// Yurtsever chain at the orthogonality time, `n = 1..=n_max`:
/// `m_{2n} T^{2n}/((2n)! ħ^{2n}) ≥ Σ_{k<n} (-1)^{n-k+1} m_{2k} T^{2k}/((2k)! ħ^{2k})`
/// with central moments `m_j`. The first link reads `T ΔE ≥ √2 ħ`.
pub fn yurtsever_chain(p: &EnergyDistribution, n_max: u32) -> Result<Vec<BoundReport>> {
    let q = SurvivalAmplitude::for_distribution(p)?;
    let t_perp = orthogonality_time(&q).map_err(not_applicable)?;
    let x = t_perp / p.hbar;
    // terms[k] = m_{2k} x^{2k} / (2k)!
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    let mut factorial = 1.0;
    for k in 0..=n_max {
        if k > 0 {
            factorial *= (2 * k - 1) as f64 * (2 * k) as f64;
        }
        let m = p.central_moment(2 * k)?;
        terms.push(m * x.powi(2 * k as i32) / factorial);
    }
    Ok((1..=n_max)
        .map(|n| {
            let rhs: f64 = (0..n)
                .map(|k| if (n - k) % 2 == 1 { terms[k as usize] } else { -terms[k as usize] })
                .sum();
            let lhs = terms[n as usize];
            BoundReport::with_tolerance(
                format!("Yurtsever({n})"),
                lhs,
                Relation::Ge,
                rhs,
                "Yurtsever 2010",
                1e-9 * lhs.abs().max(rhs.abs()).max(1.0),
            )
            .with_note(format!("T_perp = {t_perp:.12e}"))
        })
        .collect())
}
