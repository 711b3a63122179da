#![allow(dead_code)]

use etur_core::GaussianWignerState;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pure squeezed, displaced, rotated state of a random oscillator.
pub fn random_pure_state(rng: &mut ChaCha8Rng) -> GaussianWignerState {
    GaussianWignerState::pure(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.0..std::f64::consts::PI),
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.2..2.0),
        1.0,
    )
    .unwrap()
}

/// Mixed state: a pure covariance inflated by `1/μ` with `μ` in `(0.2, 1)`.
/// `free` selects `ω = 0`.
pub fn random_mixed_state(rng: &mut ChaCha8Rng, free: bool) -> GaussianWignerState {
    let pure = random_pure_state(rng);
    let inflate = 1.0 / rng.gen_range(0.2..1.0);
    let omega = if free { 0.0 } else { pure.omega() };
    GaussianWignerState::new(
        pure.q_mean(),
        pure.p_mean(),
        pure.sigma_q() * inflate,
        pure.sigma_p() * inflate,
        pure.sigma_qp() * inflate,
        pure.mass(),
        omega,
        1.0,
    )
    .unwrap()
}

pub fn product(s: &GaussianWignerState) -> f64 {
    s.stationarity_product().unwrap().unwrap().to_f64()
}
