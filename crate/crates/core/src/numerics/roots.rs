//! Bracketing root finder (Brent) and golden-section minimization.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        Self::with_tol(lo, hi, 1e-10)
    }

    pub fn with_tol(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
        }
        if !(tol > 0.0) {
            return Err(Error::domain("bracket tolerance must be positive"));
        }
        Ok(RootBracket { lo, hi, tol })
    }
}

const MAX_ITER: usize = 200;

/// Brent's method: bisection safeguarded inverse quadratic interpolation.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: RootBracket) -> Result<f64> {
    let RootBracket { lo, hi, tol } = bracket;
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b.clamp(lo, hi));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::IterationLimit(format!(
        "root search on [{lo}, {hi}] did not converge"
    )))
}

/// Golden-section search for a minimum of a unimodal function on `[lo, hi]`.
/// Returns `(x_min, f(x_min))`.
pub fn minimize_golden<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn sqrt_two() {
        let x = find_root(|x| x * x - 2.0, RootBracket::new(1.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(x, 2f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn half_pi() {
        let x = find_root(f64::cos, RootBracket::new(1.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(x, std::f64::consts::FRAC_PI_2, epsilon = 1e-10);
    }

    #[test]
    fn missing_sign_change() {
        let r = find_root(|x| x * x + 1.0, RootBracket::new(-1.0, 1.0).unwrap());
        assert!(matches!(r, Err(Error::NoSignChange { .. })));
        assert!(RootBracket::new(1.0, 1.0).is_err());
    }

    #[test]
    fn golden_parabola() {
        let (x, fx) = minimize_golden(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-9);
        assert_relative_eq!(x, 0.3, epsilon = 1e-7);
        assert_relative_eq!(fx, 1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn root_stays_in_bracket(shift in -0.99f64..0.99, k in 1u32..5) {
            let f = |x: f64| (x - shift).powi(2 * k as i32 - 1);
            let x = find_root(f, RootBracket::new(-1.0, 1.0).unwrap()).unwrap();
            prop_assert!((-1.0..=1.0).contains(&x));
            prop_assert!((x - shift).abs() < 1e-3);
        }
    }
}
