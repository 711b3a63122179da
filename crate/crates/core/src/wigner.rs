//! Gaussian states of the harmonic oscillator in Wigner phase space.
//!
//! The stationarity time `T0` is defined by `T0^{-2} = Tr(dρ/dt)^2`. For a
//! Gaussian Wigner function it has a closed form in the covariance
//! determinant `D = σq σp - σqp²` and the energy parameter `B`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::report::{BoundReport, Relation};

/// Relative slack allowed below the Robertson–Schrödinger limit `D = ħ²/4`.
pub const DETERMINANT_TOLERANCE: f64 = 1e-10;

/// Default resolution of the phase-space oracle (intervals per axis).
pub const ORACLE_POINTS: usize = 512;

/// Half-width of the oracle box in marginal standard deviations.
pub const ORACLE_BOX: f64 = 6.0;

const STATIONARITY_PROVENANCE: &str = "Gaussian Wigner-state stationarity bound with Robertson-Schrodinger purity";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct StateFields {
    q_mean: f64,
    p_mean: f64,
    sigma_q: f64,
    sigma_p: f64,
    sigma_qp: f64,
    mass: f64,
    omega: f64,
    hbar: f64,
}

/// Gaussian Wigner function with means `(q_mean, p_mean)` and covariances
/// `sigma_q = <Δq²>`, `sigma_p = <Δp²>`, `sigma_qp`, for the Hamiltonian
/// `p²/2m + mω²q²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFields", into = "StateFields")]
pub struct GaussianWignerState {
    q_mean: f64,
    p_mean: f64,
    sigma_q: f64,
    sigma_p: f64,
    sigma_qp: f64,
    mass: f64,
    omega: f64,
    hbar: f64,
}

impl TryFrom<StateFields> for GaussianWignerState {
    type Error = Error;

    fn try_from(f: StateFields) -> Result<Self> {
        GaussianWignerState::new(f.q_mean, f.p_mean, f.sigma_q, f.sigma_p, f.sigma_qp, f.mass, f.omega, f.hbar)
    }
}

impl From<GaussianWignerState> for StateFields {
    fn from(s: GaussianWignerState) -> Self {
        StateFields {
            q_mean: s.q_mean,
            p_mean: s.p_mean,
            sigma_q: s.sigma_q,
            sigma_p: s.sigma_p,
            sigma_qp: s.sigma_qp,
            mass: s.mass,
            omega: s.omega,
            hbar: s.hbar,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidState(msg)
}

impl GaussianWignerState {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        q_mean: f64,
        p_mean: f64,
        sigma_q: f64,
        sigma_p: f64,
        sigma_qp: f64,
        mass: f64,
        omega: f64,
        hbar: f64,
    ) -> Result<Self> {
        for (name, x) in [("q_mean", q_mean), ("p_mean", p_mean), ("sigma_qp", sigma_qp)] {
            if !x.is_finite() {
                return Err(invalid(format!("{name} must be finite, got {x}")));
            }
        }
        for (name, x) in [("sigma_q", sigma_q), ("sigma_p", sigma_p), ("mass", mass), ("hbar", hbar)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {x}")));
            }
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(invalid(format!("omega must be non-negative, got {omega}")));
        }
        let d = sigma_q * sigma_p - sigma_qp * sigma_qp;
        let limit = 0.25 * hbar * hbar;
        if d < limit * (1.0 - DETERMINANT_TOLERANCE) {
            return Err(invalid(format!(
                "covariance determinant {d:e} below hbar^2/4 = {limit:e}"
            )));
        }
        Ok(GaussianWignerState { q_mean, p_mean, sigma_q, sigma_p, sigma_qp, mass, omega, hbar })
    }

    /// Coherent state of the oscillator centred at `(q_mean, p_mean)`.
    pub fn coherent(q_mean: f64, p_mean: f64, mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        Self::thermal_displaced(0.0, q_mean, p_mean, mass, omega, hbar)
    }

    /// Resting thermal state with mean occupation `nbar`.
    pub fn thermal(nbar: f64, mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        Self::thermal_displaced(nbar, 0.0, 0.0, mass, omega, hbar)
    }

    fn thermal_displaced(nbar: f64, q_mean: f64, p_mean: f64, mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(invalid(format!("nbar must be non-negative, got {nbar}")));
        }
        if !(omega > 0.0) {
            return Err(invalid("oscillator states need omega > 0".into()));
        }
        let width = 0.5 * hbar * (2.0 * nbar + 1.0);
        Self::new(q_mean, p_mean, width / (mass * omega), width * mass * omega, 0.0, mass, omega, hbar)
    }

    /// Thermal state squeezed by `s`: `σq -> σq/s`, `σp -> σp s`.
    pub fn squeezed_thermal(nbar: f64, s: f64, mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(invalid(format!("squeeze factor must be positive, got {s}")));
        }
        let t = Self::thermal(nbar, mass, omega, hbar)?;
        Self::new(0.0, 0.0, t.sigma_q / s, t.sigma_p * s, 0.0, mass, omega, hbar)
    }

    /// Free Gaussian packet (`ω = 0`).
    pub fn free_packet(
        q_mean: f64,
        p_mean: f64,
        sigma_q: f64,
        sigma_p: f64,
        sigma_qp: f64,
        mass: f64,
        hbar: f64,
    ) -> Result<Self> {
        Self::new(q_mean, p_mean, sigma_q, sigma_p, sigma_qp, mass, 0.0, hbar)
    }

    /// Pure squeezed state: squeezing `r` along the axis rotated by `angle`
    /// in the phase plane scaled by `length_scale`.
    #[allow(clippy::too_many_arguments)]
    pub fn pure(
        q_mean: f64,
        p_mean: f64,
        r: f64,
        angle: f64,
        length_scale: f64,
        mass: f64,
        omega: f64,
        hbar: f64,
    ) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let (a, b) = ((-2.0 * r).exp(), (2.0 * r).exp());
        // Rotated diag(a, b) in units where q ~ length_scale, p ~ hbar/length_scale.
        let xx = a * c * c + b * s * s;
        let yy = a * s * s + b * c * c;
        let xy = (a - b) * s * c;
        let half = 0.5 * hbar;
        Self::new(
            q_mean,
            p_mean,
            half * xx * length_scale * length_scale,
            half * yy / (length_scale * length_scale),
            half * xy,
            mass,
            omega,
            hbar,
        )
    }

    pub fn q_mean(&self) -> f64 {
        self.q_mean
    }
    pub fn p_mean(&self) -> f64 {
        self.p_mean
    }
    pub fn sigma_q(&self) -> f64 {
        self.sigma_q
    }
    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }
    pub fn sigma_qp(&self) -> f64 {
        self.sigma_qp
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn determinant(&self) -> f64 {
        self.sigma_q * self.sigma_p - self.sigma_qp * self.sigma_qp
    }

    /// `μ = ħ/(2√D)`, capped at 1.
    pub fn purity(&self) -> f64 {
        (self.hbar / (2.0 * self.determinant().sqrt())).min(1.0)
    }

    pub fn b_parameter(&self) -> f64 {
        let (m, w) = (self.mass, self.omega);
        let (q, p) = (self.q_mean, self.p_mean);
        let w2 = w * w;
        m * m * w2 * w2 * (self.sigma_q * self.sigma_q + 2.0 * self.sigma_q * q * q)
            + (self.sigma_p * self.sigma_p + 2.0 * self.sigma_p * p * p) / (m * m)
            + 2.0 * w2 * (self.sigma_qp * self.sigma_qp + 2.0 * self.sigma_qp * q * p)
    }

    /// `ΔE² = B/2 - (ħω)²/4`.
    pub fn energy_dispersion(&self) -> Result<f64> {
        let half_b = 0.5 * self.b_parameter();
        let zero_point = 0.25 * (self.hbar * self.omega).powi(2);
        let var = half_b - zero_point;
        if var < -1e-12 * half_b.max(zero_point) {
            return Err(Error::NegativeVariance(var));
        }
        Ok(var.max(0.0).sqrt())
    }

    /// `B - 2Dω²`, proportional to `T0^{-2}`.
    fn motion_parameter(&self) -> f64 {
        let b = self.b_parameter();
        let rest = 2.0 * self.determinant() * self.omega * self.omega;
        let x = b - rest;
        if x <= 1e-12 * b.max(rest) {
            0.0
        } else {
            x
        }
    }

    /// `T0^{-2} = ħ(B - 2Dω²)/(8 D^{3/2})`; infinite for stationary states.
    pub fn stationarity_time(&self) -> Extended {
        let x = self.motion_parameter();
        if x == 0.0 {
            return Extended::Infinite;
        }
        let d = self.determinant();
        Extended::from_f64((8.0 * d * d.sqrt() / (self.hbar * x)).sqrt())
    }

    /// `2(ΔE T0/ħ)²`, or `None` when both factors degenerate (energy eigenstate).
    pub fn stationarity_product(&self) -> Result<Option<Extended>> {
        let de = self.energy_dispersion()?;
        Ok(match self.stationarity_time() {
            Extended::Infinite if de == 0.0 => None,
            Extended::Infinite => Some(Extended::Infinite),
            Extended::Finite(t0) => Some(Extended::Finite(2.0 * (de * t0 / self.hbar).powi(2))),
        })
    }

    /// `μ^{-3} (1 + ω²(2D - ħ²/2)/(B - 2Dω²))`, the structural form of the product.
    pub fn stationarity_product_structured(&self) -> Extended {
        let mu = self.purity();
        let x = self.motion_parameter();
        let excess = (2.0 * self.determinant() - 0.5 * self.hbar * self.hbar).max(0.0);
        let w2 = self.omega * self.omega;
        if x == 0.0 {
            return if excess * w2 > 0.0 { Extended::Infinite } else { Extended::Finite(mu.powi(-3)) };
        }
        Extended::Finite(mu.powi(-3) * (1.0 + w2 * excess / x))
    }

    /// `ΔE T0 >= ħ (2μ³)^{-1/2}`.
    pub fn stationarity_bound_check(&self) -> Result<BoundReport> {
        let de = self.energy_dispersion()?;
        let mu = self.purity();
        let rhs = self.hbar / (2.0 * mu.powi(3)).sqrt();
        let (lhs, note) = match self.stationarity_time() {
            Extended::Finite(t0) => {
                let product = 2.0 * (de * t0 / self.hbar).powi(2);
                (de * t0, format!("2(dE T0/hbar)^2 = {product:.12}, mu^-3 = {:.12}", mu.powi(-3)))
            }
            Extended::Infinite if de > 0.0 => (f64::INFINITY, "stationary state, T0 = inf".to_string()),
            Extended::Infinite => {
                return Err(Error::NotApplicable("energy eigenstate: dE = 0 and T0 = inf".into()))
            }
        };
        Ok(BoundReport::with_tolerance(
            "Gaussian-T0",
            lhs,
            Relation::Ge,
            rhs,
            STATIONARITY_PROVENANCE,
            1e-9 * rhs,
        )
        .with_note(note))
    }

    /// Wigner function normalized so that `∫W dq dp/(2πħ) = 1`.
    pub fn wigner(&self, q: f64, p: f64) -> f64 {
        let d = self.determinant();
        let (x, y) = (q - self.q_mean, p - self.p_mean);
        let quad = self.sigma_p * x * x + self.sigma_q * y * y - 2.0 * self.sigma_qp * x * y;
        self.hbar / d.sqrt() * (-quad / (2.0 * d)).exp()
    }

    /// `T0` from `T0^{-2} = ∫(∂W/∂t)² dq dp/(2πħ)` on the default oracle grid.
    pub fn wigner_t0_oracle(&self) -> Result<Extended> {
        self.wigner_t0_oracle_with(ORACLE_POINTS)
    }

    /// Trapezoidal phase-space quadrature with `n` intervals per axis over a
    /// box of `ORACLE_BOX` marginal standard deviations.
    pub fn wigner_t0_oracle_with(&self, n: usize) -> Result<Extended> {
        if n < 16 {
            return Err(Error::domain("oracle grid needs at least 16 intervals"));
        }
        let d = self.determinant();
        let (hq, hp) = (ORACLE_BOX * self.sigma_q.sqrt(), ORACLE_BOX * self.sigma_p.sqrt());
        let (dq, dp) = (2.0 * hq / n as f64, 2.0 * hp / n as f64);
        let (m, w2) = (self.mass, self.omega * self.omega);
        let mut total = 0.0;
        let mut scale = 0.0;
        for i in 0..=n {
            let q = self.q_mean - hq + i as f64 * dq;
            let x = q - self.q_mean;
            let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
            let (mut row, mut row_scale) = (0.0, 0.0);
            for j in 0..=n {
                let p = self.p_mean - hp + j as f64 * dp;
                let y = p - self.p_mean;
                let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
                let w = self.wigner(q, p);
                let dw_dq = -w * (self.sigma_p * x - self.sigma_qp * y) / d;
                let dw_dp = -w * (self.sigma_q * y - self.sigma_qp * x) / d;
                let a = m * w2 * q * dw_dp;
                let b = p / m * dw_dq;
                row += wj * (a - b).powi(2);
                row_scale += wj * (a * a + b * b);
            }
            total += wi * row;
            scale += wi * row_scale;
        }
        let norm = dq * dp / (2.0 * PI * self.hbar);
        let (inv_sq, scale) = (total * norm, scale * norm);
        if !inv_sq.is_finite() {
            return Err(Error::NonConvergence { estimate: inv_sq, error: f64::NAN, subdivisions: n });
        }
        if inv_sq <= 1e-24 * scale || inv_sq == 0.0 {
            return Ok(Extended::Infinite);
        }
        Ok(Extended::Finite(inv_sq.powf(-0.5)))
    }
}

/// Pure-state times `T0 = ħ/(√2 ΔE)` and `T1 = ħ/ΔE`.
pub fn pure_state_times(delta_e: f64, hbar: f64) -> Result<(f64, f64)> {
    if !(delta_e > 0.0) {
        return Err(Error::ZeroDispersion);
    }
    Ok((hbar / (SQRT_2 * delta_e), hbar / delta_e))
}

/// Initial-instant data of a Fock state `|M>` relaxing into a zero-temperature bath,
/// `dp_n/dt = 2γ[(n+1)p_{n+1} - n p_n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockRelaxation {
    /// `(Σ (dp_n/dt)²)^{-1/2}` at `t = 0`.
    pub t0: f64,
    pub delta_e: f64,
    pub product: f64,
}

/// Population rates at `t = 0` for `p_M = 1`.
pub fn fock_population_rates(m: u32, gamma: f64) -> Vec<f64> {
    let mut p = vec![0.0; m as usize + 2];
    p[m as usize] = 1.0;
    (0..=m as usize)
        .map(|n| 2.0 * gamma * ((n + 1) as f64 * p[n + 1] - n as f64 * p[n]))
        .collect()
}

pub fn fock_relaxation(m: u32, gamma: f64) -> Result<FockRelaxation> {
    if m == 0 {
        return Err(Error::domain("Fock ground state is stationary (T0 = inf)"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("relaxation rate must be positive, got {gamma}")));
    }
    let inv_sq: f64 = fock_population_rates(m, gamma).iter().map(|r| r * r).sum();
    let t0 = inv_sq.powf(-0.5);
    Ok(FockRelaxation { t0, delta_e: 0.0, product: 0.0 * t0 })
}
