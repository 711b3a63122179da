//! Globally adaptive Simpson quadrature.
//!
//! Panels are kept in a max-heap keyed by their Richardson error estimate and
//! the worst panel is bisected until the summed error meets
//! `max(abs_tol, rel_tol * |I|)`. Semi-infinite ranges are mapped onto
//! `[0, 1)` with `t = a + s * u / (1 - u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::extended::Extended;

/// Variable change used for a semi-infinite upper limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailMap {
    /// `t = a + scale * u / (1 - u)`, `u` in `[0, 1)`.
    Rational { scale: f64 },
}

impl Default for TailMap {
    fn default() -> Self {
        TailMap::Rational { scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_map: TailMap,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 1 << 20,
            tail_map: TailMap::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_subdivisions,
            tail_map: TailMap::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same absolute and relative tolerance.
    pub fn with_tol(tol: f64) -> Self {
        QuadratureSpec {
            abs_tol: tol,
            rel_tol: tol,
            ..QuadratureSpec::default()
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.tail_map = TailMap::Rational { scale };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::domain("max_subdivisions must be at least 8"));
        }
        let TailMap::Rational { scale } = self.tail_map;
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain("tail map scale must be positive"));
        }
        Ok(())
    }
}

const INITIAL_PANELS: usize = 8;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    flm: f64,
    frm: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

struct Integrand<'f, F> {
    f: &'f F,
    lo: f64,
    hi: f64,
    bad: Option<f64>,
}

impl<F: Fn(f64) -> f64> Integrand<'_, F> {
    /// Non-finite values at the two outer endpoints are read as zero so that
    /// integrable endpoint singularities and mapped infinities are tolerated.
    fn eval(&mut self, x: f64) -> f64 {
        let v = (self.f)(x);
        if v.is_finite() {
            v
        } else if x == self.lo || x == self.hi {
            0.0
        } else {
            self.bad.get_or_insert(x);
            0.0
        }
    }

    fn panel(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Panel {
        let m = 0.5 * (a + b);
        let flm = self.eval(0.5 * (a + m));
        let frm = self.eval(0.5 * (m + b));
        let h = b - a;
        let whole = h / 6.0 * (fa + 4.0 * fm + fb);
        let halves = h / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb);
        let delta = halves - whole;
        let mut err = delta.abs() / 15.0;
        // Panels at the floating-point resolution limit cannot be refined.
        if h <= 64.0 * f64::EPSILON * m.abs().max(f64::MIN_POSITIVE) {
            err = 0.0;
        }
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            flm,
            frm,
            value: halves + delta / 15.0,
            err,
        }
    }
}

fn simpson_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut g = Integrand {
        f,
        lo: a,
        hi: b,
        bad: None,
    };
    let mut heap = BinaryHeap::with_capacity(64);
    let n = INITIAL_PANELS;
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = g.eval(a);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..n {
        let x1 = if i + 1 == n { b } else { a + (i + 1) as f64 * h };
        let f1 = g.eval(x1);
        let fm = g.eval(0.5 * (x0 + x1));
        let p = g.panel(x0, x1, f0, fm, f1);
        total += p.value;
        total_err += p.err;
        heap.push(p);
        x0 = x1;
        f0 = f1;
    }
    let mut panels = n;
    loop {
        if let Some(x) = g.bad {
            return Err(Error::NonFinite(x));
        }
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            // Re-sum to shed drift from the incremental bookkeeping.
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.err).sum();
            let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
            if total_err <= tol {
                return Ok(total);
            }
        }
        if panels >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: heap.iter().map(|p| p.value).sum(),
                error: total_err,
                subdivisions: panels,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.err == 0.0 {
            // Everything left is unrefinable.
            heap.push(worst);
            return Ok(heap.iter().map(|p| p.value).sum());
        }
        let m = 0.5 * (worst.a + worst.b);
        let left = g.panel(worst.a, m, worst.fa, worst.flm, worst.fm);
        let right = g.panel(m, worst.b, worst.fm, worst.frm, worst.fb);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
}

/// Integrates `f` over `[a, b]`; `b` may be `f64::INFINITY`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !a.is_finite() || b.is_nan() || a >= b {
        return Err(Error::domain(format!("invalid integration range [{a}, {b}]")));
    }
    if b.is_finite() {
        return simpson_finite(&f, a, b, spec);
    }
    if b < 0.0 {
        return Err(Error::domain("upper limit cannot be -infinity"));
    }
    let TailMap::Rational { scale } = spec.tail_map;
    let mapped = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - u;
        let t = a + scale * u / w;
        let v = f(t);
        if v == 0.0 {
            0.0
        } else {
            v * scale / (w * w)
        }
    };
    simpson_finite(&mapped, 0.0, 1.0, spec)
}

/// Integrates over the whole real line, splitting at `center`.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, center: f64, spec: &QuadratureSpec) -> Result<f64> {
    let right = integrate(&f, center, f64::INFINITY, spec)?;
    let left = integrate(|x| f(2.0 * center - x), center, f64::INFINITY, spec)?;
    Ok(left + right)
}

/// Number of dyadic segments beyond the base window in [`integrate_decaying`].
const TAIL_DOUBLINGS: usize = 7;
/// Ratio of consecutive dyadic contributions above which the tail is taken as divergent.
const DIVERGENCE_RATIO: f64 = 0.9;

/// `∫_a^∞ f` for a non-negative integrand that may decay only algebraically
/// and oscillate.
///
/// The range `[a, a + 40 s]` is integrated directly, followed by dyadic
/// segments `[a + 40 s 2^k, a + 40 s 2^(k+1)]`. The segment contributions of
/// an algebraic tail shrink geometrically, so the remainder is extrapolated
/// with Aitken's Δ² on the last three. Contributions that fail to shrink
/// mark the integral as divergent.
pub fn integrate_decaying<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Extended> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::domain("time scale must be positive"));
    }
    let chunk = 2.0 * scale;
    let base = 40.0 * scale;
    // Chunk-wise integration keeps panels local to each oscillation window.
    let chunked = |lo: f64, hi: f64, abs_tol: f64| -> Result<f64> {
        let n = ((hi - lo) / chunk).ceil().max(1.0) as usize;
        let w = (hi - lo) / n as f64;
        let sub = QuadratureSpec {
            abs_tol: abs_tol / n as f64,
            ..*spec
        };
        let mut s = 0.0;
        for i in 0..n {
            let x0 = lo + i as f64 * w;
            let x1 = if i + 1 == n { hi } else { x0 + w };
            s += integrate(&f, x0, x1, &sub)?;
        }
        Ok(s)
    };
    let head = chunked(a, a + base, spec.abs_tol)?;
    let tol = spec.abs_tol.max(spec.rel_tol * head.abs());
    let mut total = head;
    let mut segments = Vec::with_capacity(TAIL_DOUBLINGS);
    let mut lo = a + base;
    let mut width = base;
    for _ in 0..TAIL_DOUBLINGS {
        let seg = chunked(lo, lo + width, tol * 0.1)?;
        total += seg;
        segments.push(seg);
        lo += width;
        width *= 2.0;
    }
    let k = segments.len();
    let (d0, d1, d2) = (segments[k - 3], segments[k - 2], segments[k - 1]);
    if d2.abs() <= tol * 1e-3 {
        return Ok(Extended::Finite(total));
    }
    if d1 == 0.0 || d0 == 0.0 {
        return Ok(Extended::Finite(total));
    }
    let r = d2 / d1;
    let r_prev = d1 / d0;
    if !(r > 0.0) || r >= DIVERGENCE_RATIO || r_prev >= DIVERGENCE_RATIO {
        return Ok(Extended::Infinite);
    }
    Ok(Extended::Finite(total + d2 * r / (1.0 - r)))
}

/// Composite Simpson weights for a uniform grid with an odd number of points
/// (trapezoid correction on the last interval otherwise).
pub fn simpson_weights(n: usize, step: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n == 0 {
        return w;
    }
    if n == 1 {
        return w;
    }
    if n == 2 {
        w[0] = 0.5 * step;
        w[1] = 0.5 * step;
        return w;
    }
    let m = if n % 2 == 1 { n } else { n - 1 };
    for (i, wi) in w.iter_mut().enumerate().take(m) {
        *wi = if i == 0 || i == m - 1 {
            step / 3.0
        } else if i % 2 == 1 {
            4.0 * step / 3.0
        } else {
            2.0 * step / 3.0
        };
    }
    if m < n {
        w[n - 2] += 0.5 * step;
        w[n - 1] += 0.5 * step;
    }
    w
}

/// Trapezoid weights for a uniform grid.
pub fn trapezoid_weights(n: usize, step: f64) -> Vec<f64> {
    let mut w = vec![step; n];
    if n > 0 {
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
    }
    if n == 1 {
        w[0] = 0.0;
    }
    w
}
