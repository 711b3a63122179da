mod common;

use approx::assert_relative_eq;
use common::{product, random_mixed_state, random_pure_state, rng};
use etur_core::wigner::GaussianWignerState;
use etur_core::Extended;
use proptest::prelude::*;

#[test]
fn pure_states_have_unit_product() {
    let mut r = rng(7);
    for _ in 0..50 {
        let s = random_pure_state(&mut r);
        assert_relative_eq!(s.purity(), 1.0, epsilon = 1e-12);
        assert!((product(&s) - 1.0).abs() < 1e-10, "{s:?}");
    }
}

#[test]
fn oracle_agrees_on_random_states() {
    let mut r = rng(11);
    for i in 0..20 {
        let s = if i % 2 == 0 { random_mixed_state(&mut r, false) } else { random_pure_state(&mut r) };
        let closed = s.stationarity_time().to_f64();
        let oracle = s.wigner_t0_oracle().unwrap().to_f64();
        assert_relative_eq!(oracle, closed, max_relative = 1e-5);
    }
}

#[test]
fn squeezing_at_fixed_determinant_approaches_purity_limit() {
    let mut last = f64::INFINITY;
    for s in [1.0, 10.0, 100.0, 1000.0] {
        let st = GaussianWignerState::squeezed_thermal(1.0, s, 1.0, 1.0, 1.0).unwrap();
        let ratio = product(&st) * st.purity().powi(3);
        assert!(ratio >= 1.0 - 1e-12 && ratio <= last);
        last = ratio;
    }
    // At s = 1 the resting thermal state is stationary: T0 = inf.
    assert!(last - 1.0 < 1e-3, "{last}");
    let rest = GaussianWignerState::squeezed_thermal(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(rest.stationarity_time(), Extended::Infinite);
}

fn scaled(s: &GaussianWignerState, lambda: f64) -> GaussianWignerState {
    let r = lambda.sqrt();
    GaussianWignerState::new(
        s.q_mean() * r,
        s.p_mean() * r,
        s.sigma_q() * lambda,
        s.sigma_p() * lambda,
        s.sigma_qp() * lambda,
        s.mass(),
        s.omega(),
        s.hbar() * lambda,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_bound_holds(seed in any::<u64>(), free in any::<bool>()) {
        let s = random_mixed_state(&mut rng(seed), free);
        if let Ok(Some(Extended::Finite(p))) = s.stationarity_product() {
            let floor = s.purity().powi(-3);
            prop_assert!(p >= floor * (1.0 - 1e-9), "{p} < {floor}");
            if free {
                prop_assert!((p - floor).abs() <= 1e-9 * floor);
            }
        }
        prop_assert!(s.stationarity_bound_check().map_or(true, |r| r.satisfied));
    }

    #[test]
    fn hbar_scaling_leaves_products_invariant(seed in any::<u64>(), lambda in 0.1f64..10.0) {
        let s = random_mixed_state(&mut rng(seed), false);
        let t = scaled(&s, lambda);
        prop_assert!((s.purity() - t.purity()).abs() < 1e-12);
        prop_assert!((product(&s) - product(&t)).abs() < 1e-9 * product(&s));
    }

    #[test]
    fn robertson_schrodinger_enforced(sq in 0.01f64..2.0, sp in 0.01f64..2.0, c in -1.0f64..1.0) {
        let sqp = c * (sq * sp).sqrt();
        let d = sq * sp - sqp * sqp;
        let r = GaussianWignerState::new(0.0, 0.0, sq, sp, sqp, 1.0, 1.0, 1.0);
        prop_assert_eq!(r.is_ok(), d >= 0.25 * (1.0 - 1e-10));
    }
}
