mod common;

use std::f64::consts::PI;

use etur_core::decay::{mandelstam_tamm_check, modified_times, DecayTimes, ROUTE_AGREEMENT};
use etur_core::extremal::{omega_functional, ExtremalSolution};
use etur_core::spectral::{equivalent_width_fn, luo_check};
use etur_core::{EnergyDistribution, Grid, SurvivalAmplitude};
use rand::Rng;

fn catalog() -> Vec<EnergyDistribution> {
    vec![
        EnergyDistribution::lorentzian(0.0, 1.0).unwrap(),
        EnergyDistribution::gaussian(0.0, 1.0).unwrap(),
        EnergyDistribution::truncated_parabola(1.0).unwrap(),
        EnergyDistribution::stepwise(1.0).unwrap(),
        EnergyDistribution::bhattacharyya(1.0).unwrap(),
        EnergyDistribution::two_point(0.0, 2.0, 0.5).unwrap(),
        EnergyDistribution::two_point(-1.0, 3.0, 0.2).unwrap(),
    ]
}

#[test]
fn luo_inequality_for_every_catalog_law() {
    for p in catalog() {
        let q = SurvivalAmplitude::for_distribution(&p).unwrap();
        let r = luo_check(&q).unwrap();
        assert!(r.holds(), "{p:?}: {}", r.worst);
    }
}

#[test]
fn cosine_bound_for_finite_dispersion() {
    for p in catalog() {
        let Some(d) = p.delta_e().finite() else { continue };
        let q = SurvivalAmplitude::for_distribution(&p).unwrap();
        let mt = mandelstam_tamm_check(&q, d).unwrap();
        assert!(mt.cosine.holds(), "{p:?}");
        assert!(mt.rate.holds(), "{p:?}");
    }
}

#[test]
fn modified_time_consistency() {
    for p in catalog() {
        let q = SurvivalAmplitude::for_distribution(&p).unwrap();
        if let Ok(m) = modified_times(&p, &q) {
            let (lhs, rhs) = m.consistency;
            assert!((lhs - rhs).abs() <= ROUTE_AGREEMENT * rhs.abs().max(1.0), "{p:?}");
        }
        let table = DecayTimes::compute(&p, &q).unwrap();
        if let Some((lhs, rhs)) = table.consistency(p.hbar) {
            assert!((lhs - rhs).abs() <= ROUTE_AGREEMENT * rhs.abs().max(1.0), "{p:?}");
        }
    }
}

#[test]
fn equivalent_widths_of_fourier_pairs() {
    let mut rng = common::rng(13);
    for _ in 0..5 {
        // Even Gaussian mixtures and their transforms ∫ f e^{-ikx} dx.
        let terms: Vec<(f64, f64)> = (0..3).map(|_| (rng.gen_range(0.1..1.0), rng.gen_range(0.3..3.0))).collect();
        let f = |x: f64| terms.iter().map(|(a, s)| a * (-x * x / (2.0 * s * s)).exp()).sum::<f64>();
        let ft = |k: f64| {
            terms
                .iter()
                .map(|(a, s)| a * s * (2.0 * PI).sqrt() * (-s * s * k * k / 2.0).exp())
                .sum::<f64>()
        };
        let product = equivalent_width_fn(f, 1.0).unwrap() * equivalent_width_fn(ft, 1.0).unwrap();
        assert!((product - 2.0 * PI).abs() < 1e-6, "{product}");
    }
}

#[test]
fn truncated_parabola_minimizes_fleming_product() {
    let floor = 3.0 * PI / (5.0 * 5f64.sqrt());
    let mut rng = common::rng(3);
    let edge = 5f64.sqrt();
    let grid = Grid::linspace(-edge, edge, 801).unwrap();
    for _ in 0..20 {
        let eps: f64 = rng.gen_range(-0.2..0.2);
        let k: f64 = rng.gen_range(1.0..4.0);
        let phase: f64 = rng.gen_range(0.0..PI);
        let values: Vec<f64> = grid
            .points()
            .map(|e| ((1.0 - e * e / 5.0) * (1.0 + eps * (k * e + phase).sin())).max(0.0))
            .collect();
        let p = EnergyDistribution::sampled(grid, values, 1.0).unwrap();
        let d = p.delta_e().finite().unwrap();
        let tau0 = PI * p.square_integral().to_f64();
        assert!(tau0 * d >= floor - 1e-9, "{}", tau0 * d);
    }
}

#[test]
fn extremal_spectrum_is_a_local_minimum() {
    let sol = ExtremalSolution::new(1.0).unwrap();
    let base = omega_functional(&sol.half, &sol.values).unwrap();
    let mut rng = common::rng(5);
    for _ in 0..10 {
        let eps: f64 = rng.gen_range(-0.05..0.05);
        let width: f64 = rng.gen_range(0.5..2.0);
        let centre: f64 = rng.gen_range(0.0..2.0);
        // Even, smooth, flat at the origin.
        let bump = |w: f64| {
            let g = |x: f64| (-(x - centre).powi(2) / (width * width)).exp();
            w * w * (g(w) + g(-w))
        };
        let values: Vec<f64> = sol.half.points().zip(&sol.values).map(|(w, f)| f + eps * bump(w)).collect();
        let perturbed = omega_functional(&sol.half, &values).unwrap();
        assert!(perturbed >= base - 1e-10, "{perturbed} < {base}");
    }
}
