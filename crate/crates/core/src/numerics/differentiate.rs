//! Fourth-order finite differences on uniform samples.

use std::ops::{Add, Mul, Sub};

/// Values that can be combined linearly with real weights.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>> Linear for T {}

fn combine<T: Linear>(values: &[T], weights: &[f64], scale: f64) -> T {
    let mut acc = values[0] * weights[0];
    for (v, w) in values.iter().zip(weights).skip(1) {
        acc = acc + *v * *w;
    }
    acc * scale
}

/// First derivative: central five-point stencil inside, one-sided stencils
/// at the two ends. Needs at least 5 samples.
pub fn derivative<T: Linear>(values: &[T], step: f64) -> Vec<T> {
    let n = values.len();
    assert!(n >= 5, "derivative needs at least 5 samples");
    let s = 1.0 / (12.0 * step);
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                combine(&values[i - 2..=i + 2], &[1.0, -8.0, 0.0, 8.0, -1.0], s)
            } else if i < 2 {
                combine(&values[i..i + 5], &[-25.0, 48.0, -36.0, 16.0, -3.0], s)
            } else {
                combine(&values[i - 4..=i], &[3.0, -16.0, 36.0, -48.0, 25.0], s)
            }
        })
        .collect()
}

/// Second derivative with the same layout. Needs at least 6 samples.
pub fn second_derivative<T: Linear>(values: &[T], step: f64) -> Vec<T> {
    let n = values.len();
    assert!(n >= 6, "second derivative needs at least 6 samples");
    let s = 1.0 / (12.0 * step * step);
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                combine(&values[i - 2..=i + 2], &[-1.0, 16.0, -30.0, 16.0, -1.0], s)
            } else if i < 2 {
                combine(&values[i..i + 6], &[45.0, -154.0, 214.0, -156.0, 61.0, -10.0], s)
            } else {
                combine(&values[i - 5..=i], &[-10.0, 61.0, -156.0, 214.0, -154.0, 45.0], s)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn polynomial_derivatives_are_exact() {
        let h = 0.1;
        let xs: Vec<f64> = (0..12).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4) - 2.0 * x.powi(3) + x).collect();
        let d = derivative(&f, h);
        let dd = second_derivative(&f, h);
        for (i, x) in xs.iter().enumerate() {
            assert!((d[i] - (4.0 * x.powi(3) - 6.0 * x * x + 1.0)).abs() < 1e-10);
            assert!((dd[i] - (12.0 * x * x - 12.0 * x)).abs() < 1e-8);
        }
    }

    #[test]
    fn complex_samples() {
        let h = 1e-2;
        let f: Vec<Complex64> = (0..200).map(|i| Complex64::from_polar(1.0, i as f64 * h)).collect();
        let d = derivative(&f, h);
        for (i, v) in d.iter().enumerate() {
            let exact = Complex64::new(0.0, 1.0) * f[i];
            assert!((v - exact).norm() < 1e-7);
        }
    }
}
