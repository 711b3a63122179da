use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `start + i * step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::domain(format!("invalid grid start {start} step {step}")));
        }
        if len < 2 {
            return Err(Error::GridTooShort(format!("grid needs at least 2 points, got {len}")));
        }
        Ok(Grid { start, step, len })
    }

    /// `len` points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len < 2 || !(hi > lo) {
            return Err(Error::domain(format!("invalid range [{lo}, {hi}] with {len} points")));
        }
        Grid::new(lo, (hi - lo) / (len - 1) as f64, len)
    }

    /// Recovers the grid from explicit abscissae, rejecting non-uniform spacing.
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::GridTooShort(format!("{} samples", xs.len())));
        }
        let n = xs.len();
        let step = (xs[n - 1] - xs[0]) / (n - 1) as f64;
        if !(step > 0.0) {
            return Err(Error::NonUniformGrid);
        }
        let scale = xs[0].abs().max(xs[n - 1].abs()).max(step);
        for (i, &x) in xs.iter().enumerate() {
            let expect = xs[0] + i as f64 * step;
            if (x - expect).abs() > 1e-9 * scale {
                return Err(Error::NonUniformGrid);
            }
        }
        Grid::new(xs[0], step, n)
    }

    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.at(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.points().collect()
    }

    /// Index of the grid point nearest to `x`, if `x` lies on the grid range.
    pub fn nearest(&self, x: f64) -> Option<usize> {
        let r = ((x - self.start) / self.step).round();
        if r < 0.0 || r > (self.len - 1) as f64 {
            None
        } else {
            Some(r as usize)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_detection() {
        let g = Grid::from_samples(&[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(g.len, 4);
        assert_eq!(g.end(), 1.5);
        assert!(matches!(Grid::from_samples(&[0.0, 0.5, 1.2]), Err(Error::NonUniformGrid)));
        assert!(matches!(Grid::from_samples(&[1.0, 0.0]), Err(Error::NonUniformGrid)));
    }

    #[test]
    fn nearest_index() {
        let g = Grid::linspace(0.0, 1.0, 11).unwrap();
        assert_eq!(g.nearest(0.31), Some(3));
        assert_eq!(g.nearest(1.2), None);
    }
}
