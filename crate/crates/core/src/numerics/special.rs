//! Parabolic cylinder function `D_ν(z)` for `-1 < ν < 0`.
//!
//! Uses the representation
//! `D_ν(z) = e^{-z²/4} / Γ(-ν) ∫_0^∞ exp(-z t - t²/2) t^{-ν-1} dt`.
//! With `κ = -ν` the substitution `t = s^{1/κ}` turns `t^{κ-1} dt` into
//! `ds / κ`, which removes the endpoint singularity.

use statrs::function::gamma::gamma;

use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{Error, Result};

/// Tolerance tight enough for second differences with `h = 1e-3`.
pub fn parabolic_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        ..QuadratureSpec::default()
    }
}

fn check_order(nu: f64) -> Result<()> {
    if !(nu > -1.0 && nu < 0.0) {
        return Err(Error::domain(format!(
            "parabolic cylinder order {nu} outside (-1, 0)"
        )));
    }
    Ok(())
}

/// `(log prefactor, kernel(t))` so that the integrand is `prefactor * kernel(t) t^{κ-1}`.
/// For negative `z` the Gaussian is completed around `t = -z` to avoid overflow.
fn split(z: f64) -> (f64, impl Fn(f64) -> f64) {
    let neg = z < 0.0;
    let log_pref = if neg { z * z / 4.0 } else { -z * z / 4.0 };
    let kernel = move |t: f64| {
        if neg {
            (-(t + z) * (t + z) / 2.0).exp()
        } else {
            (-z * t - t * t / 2.0).exp()
        }
    };
    (log_pref, kernel)
}

/// Beyond this point the kernel is below `e^{-60}` of its peak.
fn cutoff(z: f64) -> f64 {
    if z >= 0.0 {
        -z + (z * z + 120.0).sqrt()
    } else {
        -z + 120f64.sqrt()
    }
}

fn transformed<G: Fn(f64) -> f64>(g: G, kappa: f64, t_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    let s_max = t_max.powf(kappa);
    let v = integrate(|s| g(s.powf(1.0 / kappa)), 0.0, s_max, spec)?;
    Ok(v / kappa)
}

pub fn parabolic_cylinder_d(nu: f64, z: f64) -> Result<f64> {
    parabolic_cylinder_d_with(nu, z, &parabolic_spec())
}

pub fn parabolic_cylinder_d_with(nu: f64, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_order(nu)?;
    if !z.is_finite() {
        return Err(Error::domain("parabolic cylinder argument must be finite"));
    }
    let kappa = -nu;
    let (log_pref, kernel) = split(z);
    let integral = transformed(kernel, kappa, cutoff(z), spec)?;
    Ok(log_pref.exp() * integral / gamma(kappa))
}

/// `dD_ν/dz`, differentiating under the integral sign.
pub fn parabolic_cylinder_d_prime(nu: f64, z: f64) -> Result<f64> {
    check_order(nu)?;
    if !z.is_finite() {
        return Err(Error::domain("parabolic cylinder argument must be finite"));
    }
    let kappa = -nu;
    let (log_pref, kernel) = split(z);
    let g = |t: f64| (-z / 2.0 - t) * kernel(t);
    let integral = transformed(g, kappa, cutoff(z), &parabolic_spec())?;
    Ok(log_pref.exp() * integral / gamma(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn value_at_origin() {
        // 2^{ν/2} √π / Γ((1-ν)/2) at ν = -1/2, checked against an mpmath oracle.
        let d = parabolic_cylinder_d(-0.5, 0.0).unwrap();
        assert_relative_eq!(d, 1.216_280_214_257_52, max_relative = 1e-10);
        let closed = 2f64.powf(-0.25) * std::f64::consts::PI.sqrt() / gamma(0.75);
        assert_relative_eq!(d, closed, max_relative = 1e-10);
    }

    #[test]
    fn large_argument_asymptote() {
        let d = parabolic_cylinder_d(-0.2, 10.0).unwrap();
        let ratio = d / (10f64.powf(-0.2) * (-25f64).exp());
        assert_relative_eq!(ratio, 0.998_820_39, max_relative = 1e-6);
    }

    #[test]
    fn weber_equation_residual() {
        let nu = -0.205;
        let h = 1e-3;
        for &z in &[-2.0, -1.0, -0.3, 0.0, 0.5, 1.5, 3.0] {
            let d = |x| parabolic_cylinder_d(nu, x).unwrap();
            let d0 = d(z);
            let second = (d(z + h) - 2.0 * d0 + d(z - h)) / (h * h);
            let residual = second + (nu + 0.5 - z * z / 4.0) * d0;
            assert!(residual.abs() < 1e-4 * d0.abs().max(1e-3), "z={z} residual={residual}");
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let nu = -0.3;
        for &z in &[-1.5, 0.0, 1.0] {
            let h = 1e-5;
            let fd = (parabolic_cylinder_d(nu, z + h).unwrap() - parabolic_cylinder_d(nu, z - h).unwrap())
                / (2.0 * h);
            assert_relative_eq!(parabolic_cylinder_d_prime(nu, z).unwrap(), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn resolution_doubling_agrees() {
        let coarse = parabolic_cylinder_d_with(-0.4, 0.7, &QuadratureSpec::with_tol(1e-10)).unwrap();
        let fine = parabolic_cylinder_d_with(-0.4, 0.7, &QuadratureSpec::with_tol(1e-12)).unwrap();
        assert_relative_eq!(coarse, fine, max_relative = 1e-9);
    }

    #[test]
    fn order_out_of_range() {
        assert!(matches!(parabolic_cylinder_d(0.5, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parabolic_cylinder_d(-1.0, 0.0), Err(Error::Domain(_))));
    }
}
